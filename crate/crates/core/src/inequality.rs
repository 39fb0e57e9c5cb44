//! Per-index classification of `φ(|U_n|) ≥ |U_{φ(n)}|` and
//! `σ(|U_n|) ≤ |U_{σ(n)}|`, the exceptional-set census, and the census of
//! unusually small terms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::degeneracy;
use crate::error::{Error, Result};
use crate::factor::{self, Certainty, FactorResult, Factorizer, PhiSigmaBounds};
use crate::interval::{self, Interval};
use crate::recurrence::{self, char_poly, LogComparison, RecurrenceSpec};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Phi,
    Sigma,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Phi => "PHI",
            Kind::Sigma => "SIGMA",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
    SkippedZero,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::Undecided => "UNDECIDED",
            Verdict::SkippedZero => "SKIPPED_ZERO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub n: u64,
    pub kind: Kind,
    pub verdict: Verdict,
    /// Certified enclosure of `φ(|U_n|)` or `σ(|U_n|)`.
    pub lhs_low: BigRational,
    pub lhs_high: BigRational,
    /// `|U_{φ(n)}|` or `|U_{σ(n)}|`.
    pub rhs: BigUint,
    pub probable_used: bool,
    pub notes: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Demote verdicts resting on probable primes to UNDECIDED.
    pub strict: bool,
    pub bit_budget: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            strict: false,
            bit_budget: recurrence::DEFAULT_BIT_BUDGET,
        }
    }
}

/// The index the right-hand side is read at: `φ(n)` or `σ(n)`.
pub fn rhs_index(n: u64, kind: Kind) -> u64 {
    match kind {
        Kind::Phi => arith::phi(n),
        Kind::Sigma => arith::sigma(n) as u64,
    }
}

fn decide(kind: Kind, b: &PhiSigmaBounds, rhs: &BigRational) -> Option<Verdict> {
    match kind {
        Kind::Phi if &b.phi_low >= rhs => Some(Verdict::Holds),
        Kind::Phi if &b.phi_high < rhs => Some(Verdict::Fails),
        Kind::Sigma if &b.sigma_high <= rhs => Some(Verdict::Holds),
        Kind::Sigma if &b.sigma_low > rhs => Some(Verdict::Fails),
        _ => None,
    }
}

fn probable_notes(f: &FactorResult) -> String {
    let prp: Vec<String> = f
        .known_factors
        .iter()
        .filter(|pp| pp.certainty == Certainty::Probable)
        .map(|pp| format!("{}", pp.p))
        .collect();
    if prp.is_empty() {
        String::new()
    } else {
        format!("probable primes: {}", prp.join(" "))
    }
}

/// Classify one index from the exact values `U_n` and the right-hand term.
///
/// Trial division is tried first; the full factorization runs only when the
/// cheap intervals do not separate.
pub fn classify_values(
    n: u64,
    kind: Kind,
    u_n: &BigInt,
    u_rhs: &BigInt,
    fz: &Factorizer,
    strict: bool,
) -> TrialOutcome {
    let rhs = u_rhs.magnitude().clone();
    if u_n.is_zero() {
        return TrialOutcome {
            n,
            kind,
            verdict: Verdict::SkippedZero,
            lhs_low: BigRational::zero(),
            lhs_high: BigRational::zero(),
            rhs,
            probable_used: false,
            notes: String::from("U_n = 0"),
        };
    }
    let m = u_n.magnitude();
    let target = BigRational::from_integer(BigInt::from(rhs.clone()));
    let mut f = fz.trial(m);
    let mut bounds = factor::phi_sigma_bounds(&f);
    let mut verdict = decide(kind, &bounds, &target);
    if verdict.is_none() && !f.is_complete() {
        f = fz.factor(m);
        bounds = factor::phi_sigma_bounds(&f);
        verdict = decide(kind, &bounds, &target);
    }
    let probable_used = f.uses_probable();
    let mut notes = probable_notes(&f);
    let verdict = match verdict {
        Some(_) if strict && probable_used => {
            notes.push_str("; demoted by strict mode");
            Verdict::Undecided
        }
        Some(v) => v,
        None => Verdict::Undecided,
    };
    let (lhs_low, lhs_high) = match kind {
        Kind::Phi => (bounds.phi_low, bounds.phi_high),
        Kind::Sigma => (bounds.sigma_low, bounds.sigma_high),
    };
    TrialOutcome {
        n,
        kind,
        verdict,
        lhs_low,
        lhs_high,
        rhs,
        probable_used,
        notes,
    }
}

fn classify(
    spec: &RecurrenceSpec,
    n: u64,
    kind: Kind,
    fz: &Factorizer,
    opts: &ClassifyOptions,
) -> Result<TrialOutcome> {
    if n == 0 {
        return Err(Error::Precondition("indices start at 1".into()));
    }
    let u_n = recurrence::term(spec, n, opts.bit_budget)?.value;
    let u_rhs = recurrence::term(spec, rhs_index(n, kind), opts.bit_budget)?.value;
    Ok(classify_values(n, kind, &u_n, &u_rhs, fz, opts.strict))
}

pub fn classify_phi(
    spec: &RecurrenceSpec,
    n: u64,
    fz: &Factorizer,
    opts: &ClassifyOptions,
) -> Result<TrialOutcome> {
    classify(spec, n, Kind::Phi, fz, opts)
}

pub fn classify_sigma(
    spec: &RecurrenceSpec,
    n: u64,
    fz: &Factorizer,
    opts: &ClassifyOptions,
) -> Result<TrialOutcome> {
    classify(spec, n, Kind::Sigma, fz, opts)
}

/// Reject specs outside the scope of the inequalities: degenerate ones and
/// those with `Ψ = (X ∓ 1)^k`.
pub fn check_admissible(spec: &RecurrenceSpec) -> Result<()> {
    let report = degeneracy::degeneracy_check(&char_poly(spec))?;
    if report.polynomial_type {
        return Err(Error::Precondition(format!(
            "{}: characteristic polynomial is (X -/+ 1)^k",
            spec.label
        )));
    }
    if !report.nondegenerate {
        return Err(Error::Precondition(format!("{}: sequence is degenerate", spec.label)));
    }
    Ok(())
}

/// `U_1, …, U_n_max`, truncated before the first term over the bit budget.
pub fn term_table(spec: &RecurrenceSpec, n_max: u64, bit_budget: u64) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::new();
    let k = spec.order();
    for u in spec.initial().iter().take(n_max as usize) {
        if u.bits() > bit_budget {
            return out;
        }
        out.push(u.clone());
    }
    while (out.len() as u64) < n_max {
        let len = out.len();
        let next: BigInt = spec
            .coeffs()
            .iter()
            .zip(out[len - k..].iter().rev())
            .map(|(a, u)| a * u)
            .sum();
        if next.bits() > bit_budget {
            break;
        }
        out.push(next);
    }
    out
}

/// One census task: `n` with everything needed to classify it.
#[derive(Debug, Clone)]
pub struct CensusTask {
    pub n: u64,
    pub u_n: BigInt,
    pub u_rhs: BigInt,
}

/// Tasks for `1 ≤ n ≤ x`, plus the indices whose terms exceed the budget.
pub fn census_tasks(
    spec: &RecurrenceSpec,
    x: u64,
    kind: Kind,
    bit_budget: u64,
) -> (Vec<CensusTask>, Vec<(u64, Error)>) {
    let need = (1..=x).map(|n| rhs_index(n, kind).max(n)).max().unwrap_or(1);
    let table = term_table(spec, need, bit_budget);
    let mut tasks = Vec::new();
    let mut errored = Vec::new();
    for n in 1..=x {
        let r = rhs_index(n, kind);
        let missing = [n, r].into_iter().find(|&i| i as usize > table.len());
        match missing {
            Some(i) => errored.push((
                n,
                Error::BitBudgetExceeded {
                    n: i,
                    budget: bit_budget,
                },
            )),
            None => tasks.push(CensusTask {
                n,
                u_n: table[n as usize - 1].clone(),
                u_rhs: table[r as usize - 1].clone(),
            }),
        }
    }
    (tasks, errored)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub x: u64,
    pub kind: Kind,
    pub holds: u64,
    pub fails: u64,
    pub undecided: u64,
    pub skipped_zero: u64,
    pub probable_used: u64,
    pub exceptional_indices: Vec<u64>,
    pub errored: Vec<(u64, String)>,
    /// `fails / (x / ln x)`.
    pub ratio: f64,
    pub outcomes: Vec<TrialOutcome>,
}

/// Aggregate outcomes (in any order) into a report sorted by index.
pub fn summarize(
    x: u64,
    kind: Kind,
    mut outcomes: Vec<TrialOutcome>,
    errored: Vec<(u64, Error)>,
) -> CensusReport {
    outcomes.sort_by_key(|o| o.n);
    let count = |v: Verdict| outcomes.iter().filter(|o| o.verdict == v).count() as u64;
    let fails = count(Verdict::Fails);
    let exceptional_indices = outcomes
        .iter()
        .filter(|o| o.verdict == Verdict::Fails)
        .map(|o| o.n)
        .collect();
    let mut errored: Vec<(u64, String)> =
        errored.into_iter().map(|(n, e)| (n, format!("{e}"))).collect();
    errored.sort_by_key(|e| e.0);
    CensusReport {
        x,
        kind,
        holds: count(Verdict::Holds),
        fails,
        undecided: count(Verdict::Undecided),
        skipped_zero: count(Verdict::SkippedZero),
        probable_used: outcomes.iter().filter(|o| o.probable_used).count() as u64,
        exceptional_indices,
        errored,
        ratio: fails as f64 / (x as f64 / libm::log(x as f64)),
        outcomes,
    }
}

/// Classify every `1 ≤ n ≤ x`, sequentially.
pub fn census(
    spec: &RecurrenceSpec,
    x: u64,
    kind: Kind,
    fz: &Factorizer,
    opts: &ClassifyOptions,
) -> Result<CensusReport> {
    if x < 10 {
        return Err(Error::Precondition(format!("census needs x >= 10, got {x}")));
    }
    let (tasks, errored) = census_tasks(spec, x, kind, opts.bit_budget);
    let outcomes = tasks
        .iter()
        .map(|t| classify_values(t.n, kind, &t.u_n, &t.u_rhs, fz, opts.strict))
        .collect();
    Ok(summarize(x, kind, outcomes, errored))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallValueReport {
    pub x: u64,
    pub c: BigRational,
    /// Certified enclosure of `δ = x^(−c)`.
    pub delta: Interval,
    pub indices: Vec<u64>,
    pub undecided: Vec<u64>,
    pub zeros: Vec<u64>,
}

impl SmallValueReport {
    pub fn delta_f64(&self) -> f64 {
        interval::to_f64(&self.delta.mid())
    }
}

/// Working precision of the small-value thresholds.
pub const SMALL_VALUE_BITS: u32 = 256;

/// `δ = x^(−c)` and `ln |α_1|` as certified intervals.
pub fn small_value_parameters(
    spec: &RecurrenceSpec,
    x: u64,
    c: &BigRational,
    bits: u32,
) -> Result<(Interval, Interval)> {
    let zero = BigRational::zero();
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    if c <= &zero || c >= &third {
        return Err(Error::Precondition(format!("c = {c} must lie in (0, 1/3)")));
    }
    if x < 1 {
        return Err(Error::Precondition("x must be at least 1".into()));
    }
    let rd = roots::roots(&char_poly(spec), bits)?;
    if rd.distinct_count < 2 {
        return Err(Error::Precondition(format!(
            "{}: needs at least two distinct characteristic roots",
            spec.label
        )));
    }
    let lnx = interval::ln_biguint(&BigUint::from(x), bits + 8);
    let delta = interval::exp_interval(&lnx.scale(&-c), bits + 8);
    let mut ln_alpha = interval::ln_interval(&rd.dominant_modulus, bits + 8);
    // the roots multiply to ±a_k, a nonzero integer, so |α_1| ≥ 1
    if ln_alpha.lo < zero {
        ln_alpha.lo = zero;
    }
    Ok((delta, ln_alpha))
}

/// Indices `n ≤ x` with `|U_n| ≤ |α_1|^{n(1−δ)}`.
pub fn small_value_census(
    spec: &RecurrenceSpec,
    x: u64,
    c: &BigRational,
    bit_budget: u64,
) -> Result<SmallValueReport> {
    let (delta, ln_alpha) = small_value_parameters(spec, x, c, SMALL_VALUE_BITS)?;
    let one = Interval::point(BigRational::one());
    let per_index = one.sub(&delta).mul(&ln_alpha);
    let table = recurrence::terms_up_to(spec, x, bit_budget)?;
    let mut indices = Vec::new();
    let mut undecided = Vec::new();
    let mut zeros = Vec::new();
    for (i, u) in table.iter().enumerate() {
        let n = i as u64 + 1;
        if u.is_zero() {
            zeros.push(n);
            continue;
        }
        let threshold = per_index.scale(&BigRational::from_integer(n.into()));
        let cmp = if u.abs().is_one() {
            // ln 1 = 0 exactly
            if threshold.lo >= BigRational::zero() {
                LogComparison::Below
            } else if threshold.hi < BigRational::zero() {
                LogComparison::Above
            } else {
                LogComparison::Undecided
            }
        } else {
            recurrence::compare_log_abs(u.magnitude(), &threshold)
        };
        match cmp {
            LogComparison::Below => indices.push(n),
            LogComparison::Above => {}
            LogComparison::Undecided => undecided.push(n),
        }
    }
    Ok(SmallValueReport {
        x,
        c: c.clone(),
        delta,
        indices,
        undecided,
        zeros,
    })
}
