//! Integer linear recurrences `U_{n+k} = a_1 U_{n+k−1} + … + a_k U_n`,
//! indexed from `n = 1`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interval::{self, Interval, Placement};
use crate::poly::IntPoly;

/// Default cap on the size of a single term, in bits.
pub const DEFAULT_BIT_BUDGET: u64 = 10_000_000;

/// Above this index `term` switches to companion-matrix powering.
const MATRIX_THRESHOLD: u64 = 4096;

/// A recurrence of order `k` with its first `k` terms `U_1..U_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    coeffs: Vec<BigInt>,
    initial: Vec<BigInt>,
    pub label: String,
}

impl RecurrenceSpec {
    pub fn new(coeffs: Vec<BigInt>, initial: Vec<BigInt>, label: impl Into<String>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec("order must be at least 1".into()));
        }
        if coeffs.len() != initial.len() {
            return Err(Error::InvalidSpec(format!(
                "{} coefficients but {} initial terms",
                coeffs.len(),
                initial.len()
            )));
        }
        if coeffs.last().is_some_and(|a| a.is_zero()) {
            return Err(Error::InvalidSpec("a_k must be nonzero".into()));
        }
        Ok(RecurrenceSpec {
            coeffs,
            initial,
            label: label.into(),
        })
    }

    pub fn from_i64(coeffs: &[i64], initial: &[i64], label: &str) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            initial.iter().map(|&c| BigInt::from(c)).collect(),
            label,
        )
    }

    /// `F_1 = F_2 = 1`.
    pub fn fibonacci() -> Self {
        Self::from_i64(&[1, 1], &[1, 1], "fibonacci").expect("valid")
    }

    /// `U_n = n² + 1`, characteristic polynomial `(X − 1)³`.
    pub fn n_squared_plus_one() -> Self {
        Self::from_i64(&[3, -3, 1], &[2, 5, 10], "n^2+1").expect("valid")
    }

    /// `U_n = 2^n − a`, characteristic polynomial `X² − 3X + 2`.
    pub fn two_pow_minus(a: &BigInt, label: &str) -> Self {
        Self::new(
            vec![BigInt::from(3), BigInt::from(-2)],
            vec![BigInt::from(2) - a, BigInt::from(4) - a],
            label,
        )
        .expect("valid")
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    fn next_term(&self, window: &[BigInt]) -> BigInt {
        // window holds U_{n}, …, U_{n+k−1}; a_1 multiplies the newest term
        let k = self.order();
        let mut acc = BigInt::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc += a * &window[k - 1 - i];
            }
        }
        acc
    }
}

/// `Ψ(X) = X^k − a_1 X^{k−1} − … − a_k`, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    pub coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn as_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Recover `(a_1, …, a_k)` from a monic polynomial.
    pub fn recurrence_coeffs(&self) -> Vec<BigInt> {
        let k = self.degree();
        (1..=k).map(|i| -&self.coeffs[k - i]).collect()
    }

    pub fn from_poly(p: &IntPoly) -> Result<Self> {
        if p.is_constant() || p.leading() != BigInt::from(1) {
            return Err(Error::Precondition("characteristic polynomial must be monic of degree ≥ 1".into()));
        }
        if p.coeff(0).is_zero() {
            return Err(Error::Precondition("characteristic polynomial has a zero root".into()));
        }
        Ok(CharPoly {
            coeffs: p.coeffs().to_vec(),
        })
    }
}

pub fn char_poly(spec: &RecurrenceSpec) -> CharPoly {
    let k = spec.order();
    let mut coeffs = vec![BigInt::zero(); k + 1];
    coeffs[k] = BigInt::from(1);
    for (i, a) in spec.coeffs.iter().enumerate() {
        coeffs[k - 1 - i] = -a;
    }
    CharPoly { coeffs }
}

/// Exact term with a certified approximation of `ln |U_n|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TermValue {
    pub n: u64,
    pub value: BigInt,
    /// Approximation of `ln |U_n|`, absent when `U_n = 0`.
    pub log_abs: Option<f64>,
    /// Bound on `|log_abs − ln |U_n||`.
    pub log_abs_err: f64,
}

impl TermValue {
    pub fn from_value(n: u64, value: BigInt) -> Self {
        if value.is_zero() {
            return TermValue {
                n,
                value,
                log_abs: None,
                log_abs_err: 0.0,
            };
        }
        let iv = interval::ln_biguint(value.magnitude(), 64);
        let lo = interval::to_f64(&iv.lo);
        let hi = interval::to_f64(&iv.hi);
        let mid = 0.5 * (lo + hi);
        // half-width plus the rounding of the three conversions
        let err = 0.5 * (hi - lo) + 4.0 * f64::EPSILON * libm::fabs(mid).max(1.0);
        TermValue {
            n,
            value,
            log_abs: Some(mid),
            log_abs_err: err,
        }
    }
}

fn check_budget(n: u64, v: &BigInt, budget: u64) -> Result<()> {
    if v.bits() > budget {
        Err(Error::BitBudgetExceeded { n, budget })
    } else {
        Ok(())
    }
}

/// `U_1, …, U_n_max` by direct iteration.
pub fn terms_up_to(spec: &RecurrenceSpec, n_max: u64, bit_budget: u64) -> Result<Vec<BigInt>> {
    let k = spec.order();
    let mut out: Vec<BigInt> = Vec::with_capacity(n_max as usize);
    for (i, u) in spec.initial.iter().enumerate() {
        if i as u64 >= n_max {
            break;
        }
        check_budget(i as u64 + 1, u, bit_budget)?;
        out.push(u.clone());
    }
    while (out.len() as u64) < n_max {
        let len = out.len();
        let next = spec.next_term(&out[len - k..]);
        check_budget(len as u64 + 1, &next, bit_budget)?;
        out.push(next);
    }
    Ok(out)
}

pub fn term_iterative(spec: &RecurrenceSpec, n: u64, bit_budget: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Precondition("indices start at 1".into()));
    }
    let k = spec.order();
    if n <= k as u64 {
        let v = spec.initial[n as usize - 1].clone();
        check_budget(n, &v, bit_budget)?;
        return Ok(v);
    }
    let mut window: Vec<BigInt> = spec.initial.clone();
    for idx in (k as u64 + 1)..=n {
        let next = spec.next_term(&window);
        check_budget(idx, &next, bit_budget)?;
        window.remove(0);
        window.push(next);
    }
    Ok(window.pop().expect("order ≥ 1"))
}

type Matrix = Vec<Vec<BigInt>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

/// `U_n` from the `(n−1)`-th power of the companion matrix.
pub fn term_matrix(spec: &RecurrenceSpec, n: u64, bit_budget: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Precondition("indices start at 1".into()));
    }
    let k = spec.order();
    if n <= k as u64 {
        let v = spec.initial[n as usize - 1].clone();
        check_budget(n, &v, bit_budget)?;
        return Ok(v);
    }
    // state (U_{m+k−1}, …, U_m); C maps the state at m to the state at m+1
    let mut companion = vec![vec![BigInt::zero(); k]; k];
    for (j, a) in spec.coeffs.iter().enumerate() {
        companion[0][j] = a.clone();
    }
    for i in 1..k {
        companion[i][i - 1] = BigInt::from(1);
    }
    let mut result: Matrix = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut base = companion;
    let mut e = n - 1;
    // entry growth tracks the terms; allow slack for the matrix form
    let slack = bit_budget.saturating_add(64 * k as u64);
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
            if result.iter().flatten().any(|v| v.bits() > slack) {
                return Err(Error::BitBudgetExceeded { n, budget: bit_budget });
            }
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
            if base.iter().flatten().any(|v| v.bits() > slack) {
                return Err(Error::BitBudgetExceeded { n, budget: bit_budget });
            }
        }
    }
    // initial state at m = 1
    let state: Vec<&BigInt> = spec.initial.iter().rev().collect();
    let mut v = BigInt::zero();
    for (j, s) in state.iter().enumerate() {
        v += &result[k - 1][j] * *s;
    }
    check_budget(n, &v, bit_budget)?;
    Ok(v)
}

/// Exact `U_n`.
pub fn term(spec: &RecurrenceSpec, n: u64, bit_budget: u64) -> Result<TermValue> {
    let v = if n > MATRIX_THRESHOLD {
        term_matrix(spec, n, bit_budget)?
    } else {
        term_iterative(spec, n, bit_budget)?
    };
    Ok(TermValue::from_value(n, v))
}

/// Indices `n ≤ n_max` with `U_n = 0`.
pub fn zero_census(spec: &RecurrenceSpec, n_max: u64, bit_budget: u64) -> Result<Vec<u64>> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let terms = terms_up_to(spec, n_max, bit_budget)?;
    Ok(terms
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i as u64 + 1)
        .collect())
}

/// Outcome of comparing `ln |U_n|` with a threshold interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogComparison {
    Below,
    Above,
    Undecided,
}

/// Precision schedule used when comparing logarithms.
pub const LOG_PRECISION_START: u32 = 64;
pub const LOG_PRECISION_MAX: u32 = 4096;

/// Compare `ln |value|` with `threshold`, raising the precision of the
/// logarithm until the two intervals separate or the cap is reached.
pub fn compare_log_abs(value: &BigUint, threshold: &Interval) -> LogComparison {
    let mut bits = LOG_PRECISION_START;
    loop {
        let iv = interval::ln_biguint(value, bits);
        match iv.compare(threshold) {
            Placement::Below => return LogComparison::Below,
            Placement::Above => return LogComparison::Above,
            Placement::Overlap => {}
        }
        // no amount of precision separates a point inside the threshold
        if threshold.lo <= iv.lo && iv.hi <= threshold.hi || bits >= LOG_PRECISION_MAX {
            return LogComparison::Undecided;
        }
        bits = (bits * 2).min(LOG_PRECISION_MAX);
    }
}

pub fn term_log_compare(
    spec: &RecurrenceSpec,
    n: u64,
    threshold_log: &Interval,
    bit_budget: u64,
) -> Result<LogComparison> {
    let t = term(spec, n, bit_budget)?;
    if t.value.is_zero() {
        return Err(Error::ZeroTerm(n));
    }
    Ok(compare_log_abs(t.value.magnitude(), threshold_log))
}

/// Convenience constructor for threshold intervals from `f64` endpoints.
pub fn interval_from_f64(lo: f64, hi: f64) -> Interval {
    let lo = BigRational::from_float(lo).expect("finite");
    let hi = BigRational::from_float(hi).expect("finite");
    Interval::new(lo, hi)
}
