//! Dense univariate polynomials with big-integer coefficients.
//!
//! Coefficients are stored in ascending order of degree and kept trimmed, so
//! the zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    /// `X^d − 1`.
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut c = vec![BigInt::zero(); d + 1];
        c[0] = BigInt::from(-1);
        c[d] = BigInt::one();
        IntPoly(c)
    }

    /// `(X − r)^k`.
    pub fn linear_power(r: i64, k: usize) -> Self {
        let lin = IntPoly::from_i64(&[-r, 1]);
        (0..k).fold(IntPoly::one(), |acc, _| acc.mul(&lin))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    /// `p(−X)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// Sign of `p(x)` at a rational point, computed without fractions.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        // d^deg · p(n/d) = Σ c_i n^i d^(deg−i)
        let n = x.numer();
        let d = x.denom();
        let deg = self.degree();
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        let mut terms = Vec::with_capacity(self.0.len());
        for _ in 0..=deg {
            terms.push(dpow.clone());
            dpow *= d;
        }
        let mut npow = BigInt::one();
        for (i, c) in self.0.iter().enumerate() {
            acc += c * &npow * &terms[deg - i];
            npow *= n;
        }
        sign_of(&acc)
    }

    pub fn content(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.0.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-division by zero polynomial");
        let mut r = self.clone();
        let db = b.degree();
        let lb = b.leading();
        if r.is_zero() || r.degree() < db {
            return r;
        }
        let mut steps = r.degree() - db + 1;
        while !r.is_zero() && r.degree() >= db {
            let lr = r.leading();
            let shift = r.degree() - db;
            let mut next: Vec<BigInt> = r.0.iter().map(|c| c * &lb).collect();
            for (i, c) in b.0.iter().enumerate() {
                next[i + shift] -= &lr * c;
            }
            r = Self::new(next);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lb, steps));
        }
        r
    }

    /// Exact quotient over the integers, or `None` when `b` does not divide
    /// `self` in `Z[X]`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < b.degree() {
            return None;
        }
        let mut r: Vec<BigInt> = self.0.clone();
        let db = b.degree();
        let lb = b.leading();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for shift in (0..q.len()).rev() {
            let top = r[shift + db].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in b.0.iter().enumerate() {
                r[i + shift] -= &qc * c;
            }
            q[shift] = qc;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, m: &Self) -> Self {
        assert!(m.leading().is_one(), "modulus must be monic");
        let dm = m.degree();
        let mut r = self.0.clone();
        while r.len() > dm {
            let top = r.pop().unwrap_or_default();
            if top.is_zero() {
                continue;
            }
            let shift = r.len() - dm;
            for (i, c) in m.0.iter().take(dm).enumerate() {
                r[i + shift] -= &top * c;
            }
        }
        Self::new(r)
    }

    /// Greatest common divisor in `Z[X]`, primitive with positive leading
    /// coefficient (times the gcd of contents).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive().scale(&c)
    }

    /// Yun's square-free decomposition of a primitive polynomial: factors
    /// `f_i` with `self = c · Π f_i^i`, each square-free and pairwise coprime.
    /// Constant factors are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let f = self.primitive();
        let mut out = Vec::new();
        if f.is_constant() {
            return out;
        }
        let df = f.derivative();
        let a0 = f.gcd(&df).primitive();
        let mut b = f.div_exact(&a0).expect("gcd divides f").primitive();
        let mut c = df.div_exact(&a0).expect("gcd divides f'");
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d).primitive();
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides b").primitive();
            c = d.div_exact(&a).expect("gcd divides d");
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors (primitive, positive lead).
    pub fn square_free_part(&self) -> Self {
        let f = self.primitive();
        if f.is_constant() {
            return f;
        }
        let g = f.gcd(&f.derivative()).primitive();
        f.div_exact(&g).expect("gcd divides f").primitive()
    }
}

pub fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of `f` and `g` with the given formal degrees.
fn sylvester(f: &[BigInt], df: usize, g: &[BigInt], dg: usize) -> Vec<Vec<BigInt>> {
    let n = df + dg;
    let mut rows = Vec::with_capacity(n);
    for i in 0..dg {
        let mut row = vec![BigInt::zero(); n];
        for j in 0..=df {
            // descending coefficient order within the row
            row[i + j] = f.get(df - j).cloned().unwrap_or_default();
        }
        rows.push(row);
    }
    for i in 0..df {
        let mut row = vec![BigInt::zero(); n];
        for j in 0..=dg {
            row[i + j] = g.get(dg - j).cloned().unwrap_or_default();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two integer polynomials.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    bareiss_det(sylvester(f.coeffs(), f.degree(), g.coeffs(), g.degree()))
}

/// Interpolating polynomial through `(i, values[i])`, `i = 0..n`, which must
/// have integer coefficients.
fn interpolate_integer(values: &[BigInt]) -> IntPoly {
    let n = values.len();
    // Newton divided differences on the nodes 0, 1, ..., n−1
    let mut dd: Vec<BigRational> = values
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigInt::from(level);
        }
    }
    // expand Σ dd[i] Π_{j<i} (X − j)
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    let mut basis: Vec<BigRational> = vec![BigRational::one()];
    for (i, coef) in dd.iter().enumerate() {
        for (k, b) in basis.iter().enumerate() {
            acc[k] += coef * b;
        }
        // basis *= (X − i)
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (k, b) in basis.iter().enumerate() {
            next[k + 1] += b;
            next[k] -= b * BigInt::from(i);
        }
        basis = next;
    }
    IntPoly::new(
        acc.into_iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolated resultant is not integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// `Res_y(f(y), g_x(y))` as a polynomial in `x`, where the coefficients of
/// `g_x` are `coeff_fn(j, x)` for `j = 0..=deg f` and the `x`-degree of the
/// result is at most `x_degree`.
fn bivariate_resultant(
    f: &IntPoly,
    x_degree: usize,
    coeff_fn: impl Fn(usize, &BigInt) -> BigInt,
) -> IntPoly {
    let d = f.degree();
    let values: Vec<BigInt> = (0..=x_degree)
        .map(|x0| {
            let x0 = BigInt::from(x0);
            let g: Vec<BigInt> = (0..=d).map(|j| coeff_fn(j, &x0)).collect();
            bareiss_det(sylvester(f.coeffs(), d, &g, d))
        })
        .collect();
    interpolate_integer(&values)
}

/// `Res_y(f(y), f(x·y))`: its roots are the ratios `α_i/α_j` of roots of `f`.
pub fn ratio_resultant(f: &IntPoly) -> IntPoly {
    let d = f.degree();
    bivariate_resultant(f, d * d, |j, x| f.coeff(j) * num_traits::pow(x.clone(), j))
}

/// `Res_y(f(y), y^d f(x/y))`: its roots are the products `α_i α_j`.
pub fn product_resultant(f: &IntPoly) -> IntPoly {
    let d = f.degree();
    // y^d f(x/y) = Σ_j c_j x^j y^(d−j): coefficient of y^m is c_{d−m} x^(d−m)
    bivariate_resultant(f, d * d, |m, x| {
        f.coeff(d - m) * num_traits::pow(x.clone(), d - m)
    })
}

/// Cyclotomic polynomial `Φ_m`, via `Π_{d|m} (X^d − 1)^{μ(m/d)}`.
pub fn cyclotomic(m: u64) -> IntPoly {
    assert!(m >= 1);
    let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    let mut num = IntPoly::one();
    let mut den = Vec::new();
    for &d in &divisors {
        match mobius(m / d) {
            1 => num = num.mul(&IntPoly::x_pow_minus_one(d as usize)),
            -1 => den.push(d),
            _ => {}
        }
    }
    for d in den {
        num = num
            .div_exact(&IntPoly::x_pow_minus_one(d as usize))
            .expect("cyclotomic product is exact");
    }
    num
}

pub fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Sturm sequence of a square-free polynomial, with positive scalings only.
pub fn sturm_sequence(p: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        let b = &seq[n - 1];
        if b.is_constant() {
            break;
        }
        let a = &seq[n - 2];
        let delta = a.degree() - b.degree() + 1;
        let mut r = a.pseudo_rem(b);
        // prem multiplies by lc(b)^delta; undo a negative multiplier's sign
        if b.leading().is_negative() && delta % 2 == 1 {
            r = r.neg();
        }
        if r.is_zero() {
            break;
        }
        let c = r.content();
        let r = IntPoly::new(r.coeffs().iter().map(|x| -(x / &c)).collect());
        seq.push(r);
    }
    seq
}

fn sign_variations(seq: &[IntPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of a square-free `p` in `(a, b]`.
pub fn count_real_roots(seq: &[IntPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_variations(seq, a) - sign_variations(seq, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[-1, -1, 1]).to_string(), "X^2 - X - 1");
        assert_eq!(p(&[-2, 1]).to_string(), "X - 2");
    }

    #[test]
    fn expand_cube() {
        assert_eq!(IntPoly::linear_power(1, 3), p(&[-1, 3, -3, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // (X−1)^3 (X+2)
        let f = IntPoly::linear_power(1, 3).mul(&p(&[2, 1]));
        let sf = f.square_free_decomposition();
        assert_eq!(sf, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 3)]);
        assert_eq!(f.square_free_part(), p(&[-1, 1]).mul(&p(&[2, 1])));
    }

    #[test]
    fn resultant_matches_root_products() {
        // Res(X^2 − 2, X − 3) = (3^2 − 2) up to sign convention: f(3) = 7
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 1])).abs(), BigInt::from(7));
        // common root → 0
        assert!(resultant(&p(&[-1, 0, 1]), &p(&[-1, 1])).is_zero());
    }

    #[test]
    fn ratio_resultant_of_x2_plus_1() {
        // roots ±i, ratios {1, 1, −1, −1}: (x − 1)^2 (x + 1)^2 up to scaling
        let r = ratio_resultant(&p(&[1, 0, 1]));
        let expect = IntPoly::linear_power(1, 2).mul(&IntPoly::linear_power(-1, 2));
        assert_eq!(r.primitive(), expect);
    }

    #[test]
    fn product_resultant_of_x2_minus_x_plus_2() {
        // roots α, ᾱ with αᾱ = 2, α + ᾱ = 1: products α², ᾱ², 2, 2
        let r = product_resultant(&p(&[2, -1, 1])).primitive();
        assert_eq!(r.degree(), 4);
        assert!(r.eval(&BigInt::from(2)).is_zero());
        // α² + ᾱ² = 1 − 4 = −3, α²ᾱ² = 4 → x^2 + 3x + 4
        let rest = r.div_exact(&IntPoly::linear_power(2, 2)).unwrap();
        assert_eq!(rest.primitive(), p(&[4, 3, 1]));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(105).degree(), 48);
        assert_eq!(cyclotomic(105).coeff(7), BigInt::from(-2));
    }

    #[test]
    fn sturm_counts() {
        // (X−1)(X−2)(X+3)
        let f = p(&[-1, 1]).mul(&p(&[-2, 1])).mul(&p(&[3, 1]));
        let seq = sturm_sequence(&f);
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(count_real_roots(&seq, &q(-10), &q(10)), 3);
        assert_eq!(count_real_roots(&seq, &q(0), &q(1)), 1);
        assert_eq!(count_real_roots(&seq, &q(1), &q(2)), 1);
        assert_eq!(count_real_roots(&seq, &q(-2), &q(0)), 0);
        // X^2 + 1 has none
        let seq = sturm_sequence(&p(&[1, 0, 1]));
        assert_eq!(count_real_roots(&seq, &q(-10), &q(10)), 0);
    }

    #[test]
    fn bareiss_small() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(2)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)],
        ];
        assert_eq!(bareiss_det(m), BigInt::from(6));
        let m = vec![vec![BigInt::from(0), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(0)]];
        assert_eq!(bareiss_det(m), BigInt::from(-1));
    }
}
