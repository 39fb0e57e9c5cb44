//! Segmented sieves for φ, σ, Ω, τ and the smallest prime factor, with the
//! counting experiments built on them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::factor::{self, Factorizer};
use crate::interval::{self, Interval};

pub const DEFAULT_MAX: u64 = 1 << 40;
pub const DEFAULT_SEGMENT: u64 = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Largest admissible exclusive upper end.
    pub max: u64,
    pub segment: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            max: DEFAULT_MAX,
            segment: DEFAULT_SEGMENT,
        }
    }
}

/// Values of the arithmetic functions at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithValues {
    pub phi: u64,
    pub sigma: u64,
    pub big_omega: u8,
    pub tau: u32,
    pub spf: u64,
}

impl ArithValues {
    /// Direct evaluation by trial division; slow, used as a reference.
    pub fn of(n: u64) -> Self {
        let f = arith::factor_trial_u64(n);
        ArithValues {
            phi: arith::phi_of(&f),
            sigma: arith::sigma_of(&f) as u64,
            big_omega: arith::big_omega_of(&f) as u8,
            tau: arith::tau_of(&f) as u32,
            spf: f.first().map_or(1, |&(p, _)| p),
        }
    }
}

/// Arithmetic functions over the half-open range `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveTable {
    pub lo: u64,
    pub hi: u64,
    pub phi: Vec<u64>,
    pub sigma: Vec<u64>,
    pub big_omega: Vec<u8>,
    pub tau: Vec<u32>,
    pub spf: Vec<u64>,
}

impl SieveTable {
    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn get(&self, n: u64) -> Option<ArithValues> {
        if n < self.lo || n >= self.hi {
            return None;
        }
        let i = (n - self.lo) as usize;
        Some(ArithValues {
            phi: self.phi[i],
            sigma: self.sigma[i],
            big_omega: self.big_omega[i],
            tau: self.tau[i],
            spf: self.spf[i],
        })
    }

    /// `(n, values)` in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, ArithValues)> + '_ {
        (self.lo..self.hi).map(move |n| (n, self.get(n).expect("in range")))
    }

    fn append(&mut self, other: SieveTable) {
        debug_assert_eq!(self.hi, other.lo);
        self.hi = other.hi;
        self.phi.extend(other.phi);
        self.sigma.extend(other.sigma);
        self.big_omega.extend(other.big_omega);
        self.tau.extend(other.tau);
        self.spf.extend(other.spf);
    }
}

fn check_range(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<()> {
    if lo < 1 || lo >= hi {
        return Err(Error::Precondition(format!(
            "sieve range [{lo}, {hi}) must satisfy 1 <= lo < hi"
        )));
    }
    if hi > cfg.max {
        return Err(Error::RangeTooLarge { hi, max: cfg.max });
    }
    Ok(())
}

/// Primes needed to sieve any segment below `hi`.
pub fn base_primes(hi: u64) -> Vec<u64> {
    arith::primes_up_to(arith::isqrt(hi.saturating_sub(1)))
}

/// Split `[lo, hi)` into consecutive segments of at most `segment` entries.
pub fn segment_bounds(lo: u64, hi: u64, segment: u64) -> Vec<(u64, u64)> {
    let segment = segment.max(1);
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = hi.min(a.saturating_add(segment));
        out.push((a, b));
        a = b;
    }
    out
}

/// Sieve one segment. `primes` must contain every prime up to `√(hi − 1)`.
pub fn sieve_segment(lo: u64, hi: u64, primes: &[u64]) -> SieveTable {
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut phi = vec![1u64; len];
    let mut sigma = vec![1u64; len];
    let mut big_omega = vec![0u8; len];
    let mut tau = vec![1u32; len];
    let mut spf = vec![0u64; len];
    for &p in primes {
        if p.saturating_mul(p) >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut n = first;
        while n < hi {
            let i = (n - lo) as usize;
            let mut r = rem[i] / p;
            let mut e = 1u32;
            let mut pk = p;
            let mut sum = 1 + p;
            while r % p == 0 {
                r /= p;
                e += 1;
                pk *= p;
                sum += pk;
            }
            rem[i] = r;
            phi[i] *= pk / p * (p - 1);
            sigma[i] *= sum;
            tau[i] *= e + 1;
            big_omega[i] += e as u8;
            if spf[i] == 0 {
                spf[i] = p;
            }
            n += p;
        }
    }
    for i in 0..len {
        let r = rem[i];
        if r > 1 {
            phi[i] *= r - 1;
            sigma[i] *= r + 1;
            tau[i] *= 2;
            big_omega[i] += 1;
            if spf[i] == 0 {
                spf[i] = r;
            }
        } else if spf[i] == 0 {
            spf[i] = 1;
        }
    }
    SieveTable {
        lo,
        hi,
        phi,
        sigma,
        big_omega,
        tau,
        spf,
    }
}

pub fn sieve_range(lo: u64, hi: u64) -> Result<SieveTable> {
    sieve_range_with(lo, hi, &SieveConfig::default())
}

pub fn sieve_range_with(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<SieveTable> {
    check_range(lo, hi, cfg)?;
    let primes = base_primes(hi);
    let mut out: Option<SieveTable> = None;
    for (a, b) in segment_bounds(lo, hi, cfg.segment) {
        let t = sieve_segment(a, b, &primes);
        match out.as_mut() {
            None => out = Some(t),
            Some(acc) => acc.append(t),
        }
    }
    Ok(out.expect("nonempty range"))
}

/// Visit `[lo, hi)` one segment at a time without keeping the whole table.
pub fn for_each_segment<F: FnMut(&SieveTable)>(
    lo: u64,
    hi: u64,
    cfg: &SieveConfig,
    mut visit: F,
) -> Result<()> {
    check_range(lo, hi, cfg)?;
    let primes = base_primes(hi);
    for (a, b) in segment_bounds(lo, hi, cfg.segment) {
        visit(&sieve_segment(a, b, &primes));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailCountReport {
    pub x: u64,
    pub threshold_description: String,
    pub count: u64,
    /// Reference growth curve at `x`.
    pub comparison: f64,
    pub undecided: u64,
}

/// `Φ(x, y)`: the number of `n ≤ x` whose smallest prime factor exceeds `y`.
pub fn count_rough(x: u64, y: u64) -> Result<TailCountReport> {
    count_rough_with(x, y, &SieveConfig::default())
}

pub fn count_rough_with(x: u64, y: u64, cfg: &SieveConfig) -> Result<TailCountReport> {
    if y < 1 || x < y {
        return Err(Error::Precondition(format!("need x >= y >= 1, got x={x}, y={y}")));
    }
    if x >= cfg.max {
        return Err(Error::RangeTooLarge { hi: x + 1, max: cfg.max });
    }
    let primes = arith::primes_up_to(y);
    let mut count = 0u64;
    for (a, b) in segment_bounds(2, x + 1, cfg.segment) {
        count += rough_in_segment(a, b, &primes);
    }
    Ok(rough_report(x, y, count))
}

pub fn rough_report(x: u64, y: u64, count: u64) -> TailCountReport {
    TailCountReport {
        x,
        threshold_description: format!("spf(n) > {y}"),
        count,
        // x / log y, capped at x since log y < 1 makes the bound vacuous
        comparison: if y < 3 { x as f64 } else { x as f64 / libm::log(y as f64) },
        undecided: 0,
    }
}

/// Numbers in `[a, b)` with no prime factor in `primes`.
pub fn rough_in_segment(a: u64, b: u64, primes: &[u64]) -> u64 {
    let mut hit = vec![false; (b - a) as usize];
    for &p in primes {
        if p >= b {
            break;
        }
        let mut n = a.div_ceil(p) * p;
        while n < b {
            hit[(n - a) as usize] = true;
            n += p;
        }
    }
    hit.iter()
        .enumerate()
        .filter(|&(i, &h)| !h && a + i as u64 >= 2)
        .count() as u64
}

/// Smallest integer `k` with `k ≥ 10·ln ln x`.
pub fn high_omega_min(x: u64) -> u8 {
    let mut bits = 64;
    loop {
        let lnx = interval::ln_biguint(&BigUint::from(x), bits);
        let t = interval::ln_interval(&lnx, bits).scale(&BigRational::from_integer(10.into()));
        let (a, b) = (t.lo.ceil(), t.hi.ceil());
        if a == b {
            return a.to_integer().to_u8().unwrap_or(u8::MAX);
        }
        bits *= 2;
    }
}

/// Smallest integer `k` with `k > exp(√ln x)`.
pub fn tau_sigma_min(x: u64) -> u64 {
    let mut bits = 64;
    loop {
        let lnx = interval::ln_biguint(&BigUint::from(x), bits);
        let root = Interval::new(
            interval::sqrt_bound(&lnx.lo, bits, false),
            interval::sqrt_bound(&lnx.hi, bits, true),
        );
        let t = interval::exp_interval(&root, bits);
        let (a, b) = (t.lo.floor(), t.hi.floor());
        if a == b {
            return a.to_integer().to_u64().expect("small threshold") + 1;
        }
        bits *= 2;
    }
}

fn check_x(x: u64, cfg: &SieveConfig) -> Result<()> {
    if x < 10 {
        return Err(Error::Precondition(format!("need x >= 10, got {x}")));
    }
    if x >= cfg.max {
        return Err(Error::RangeTooLarge { hi: x + 1, max: cfg.max });
    }
    Ok(())
}

pub fn high_omega_in(t: &SieveTable, min_omega: u8) -> u64 {
    t.big_omega.iter().filter(|&&w| w >= min_omega).count() as u64
}

/// Count of `n ≤ x` with `Ω(n) ≥ 10·ln ln x`.
pub fn count_high_omega(x: u64) -> Result<TailCountReport> {
    count_high_omega_with(x, &SieveConfig::default())
}

pub fn count_high_omega_with(x: u64, cfg: &SieveConfig) -> Result<TailCountReport> {
    check_x(x, cfg)?;
    let k = high_omega_min(x);
    let mut count = 0;
    for_each_segment(1, x + 1, cfg, |t| count += high_omega_in(t, k))?;
    Ok(high_omega_report(x, k, count))
}

pub fn high_omega_report(x: u64, k: u8, count: u64) -> TailCountReport {
    let l = libm::log(x as f64);
    TailCountReport {
        x,
        threshold_description: format!("Omega(n) >= {k}"),
        count,
        comparison: x as f64 / (l * l),
        undecided: 0,
    }
}

/// `(count, undecided)` of `n` in the table with `τ(σ(n)) ≥ min_tau`.
pub fn tau_sigma_in(t: &SieveTable, min_tau: u64, fz: &Factorizer) -> (u64, u64) {
    let mut count = 0;
    let mut undecided = 0;
    for &s in &t.sigma {
        // τ(m) ≤ 2√m bounds out most values without factoring
        if (2 * arith::isqrt(s) + 1) < min_tau {
            continue;
        }
        let f = fz.factor(&BigUint::from(s));
        match factor::tau_from_factors(&f) {
            Some(tau) => {
                if tau >= BigUint::from(min_tau) {
                    count += 1;
                }
            }
            None => undecided += 1,
        }
    }
    (count, undecided)
}

/// Count of `n ≤ x` with `τ(σ(n)) > exp(√ln x)`.
pub fn count_tau_sigma_large(x: u64, fz: &Factorizer) -> Result<TailCountReport> {
    count_tau_sigma_large_with(x, fz, &SieveConfig::default())
}

pub fn count_tau_sigma_large_with(
    x: u64,
    fz: &Factorizer,
    cfg: &SieveConfig,
) -> Result<TailCountReport> {
    check_x(x, cfg)?;
    let k = tau_sigma_min(x);
    let (mut count, mut undecided) = (0, 0);
    for_each_segment(1, x + 1, cfg, |t| {
        let (c, u) = tau_sigma_in(t, k, fz);
        count += c;
        undecided += u;
    })?;
    Ok(tau_sigma_report(x, k, count, undecided))
}

pub fn tau_sigma_report(x: u64, k: u64, count: u64, undecided: u64) -> TailCountReport {
    let l = libm::log(x as f64);
    TailCountReport {
        x,
        threshold_description: format!("tau(sigma(n)) >= {k}"),
        count,
        comparison: x as f64 / (l * l),
        undecided,
    }
}

pub fn phi_ratio_at_most_in(t: &SieveTable, alpha: &BigRational) -> u64 {
    let num = alpha.numer();
    let den = alpha.denom();
    t.phi
        .iter()
        .zip(t.lo..t.hi)
        .filter(|&(&p, n)| BigInt::from(p) * den <= num * BigInt::from(n))
        .count() as u64
}

/// Empirical `(1/x)·#{n ≤ x : φ(n)/n ≤ α}`.
pub fn schoenberg_cdf(x: u64, alpha: &BigRational) -> Result<BigRational> {
    schoenberg_cdf_with(x, alpha, &SieveConfig::default())
}

pub fn schoenberg_cdf_with(x: u64, alpha: &BigRational, cfg: &SieveConfig) -> Result<BigRational> {
    if x < 2 {
        return Err(Error::Precondition(format!("need x >= 2, got {x}")));
    }
    if alpha < &BigRational::zero() || alpha > &BigRational::from_integer(1.into()) {
        return Err(Error::Precondition(format!("alpha {alpha} outside [0, 1]")));
    }
    let mut count = 0u64;
    for_each_segment(1, x + 1, cfg, |t| count += phi_ratio_at_most_in(t, alpha))?;
    Ok(BigRational::new(count.into(), x.into()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalScan {
    pub min_phi_ratio: f64,
    pub min_phi_at: u64,
    pub max_sigma_ratio: f64,
    pub max_sigma_at: u64,
}

impl ExtremalScan {
    fn merge(self, other: ExtremalScan) -> ExtremalScan {
        let (min_phi_ratio, min_phi_at) = if other.min_phi_ratio < self.min_phi_ratio {
            (other.min_phi_ratio, other.min_phi_at)
        } else {
            (self.min_phi_ratio, self.min_phi_at)
        };
        let (max_sigma_ratio, max_sigma_at) = if other.max_sigma_ratio > self.max_sigma_ratio {
            (other.max_sigma_ratio, other.max_sigma_at)
        } else {
            (self.max_sigma_ratio, self.max_sigma_at)
        };
        ExtremalScan {
            min_phi_ratio,
            min_phi_at,
            max_sigma_ratio,
            max_sigma_at,
        }
    }
}

/// Extremes of `φ(n)·ln ln n / n` and `σ(n)/(n·ln ln n)` over the table,
/// restricted to `n ≥ 3`. Ties keep the smallest `n`.
pub fn extremal_in(t: &SieveTable) -> Option<ExtremalScan> {
    let mut best: Option<ExtremalScan> = None;
    for (n, v) in t.iter().filter(|&(n, _)| n >= 3) {
        let ll = libm::log(libm::log(n as f64));
        let here = ExtremalScan {
            min_phi_ratio: v.phi as f64 * ll / n as f64,
            min_phi_at: n,
            max_sigma_ratio: v.sigma as f64 / (n as f64 * ll),
            max_sigma_at: n,
        };
        best = Some(match best {
            None => here,
            Some(b) => b.merge(here),
        });
    }
    best
}

pub fn extremal_scan(x: u64) -> Result<ExtremalScan> {
    if x < 3 {
        return Err(Error::Precondition(format!("need x >= 3, got {x}")));
    }
    let mut best: Option<ExtremalScan> = None;
    for_each_segment(1, x + 1, &SieveConfig::default(), |t| {
        if let Some(s) = extremal_in(t) {
            best = Some(match best {
                None => s,
                Some(b) => b.merge(s),
            });
        }
    })?;
    Ok(best.expect("x >= 3"))
}

/// Merge per-segment extremal scans in segment order.
pub fn merge_extremal(scans: impl IntoIterator<Item = ExtremalScan>) -> Option<ExtremalScan> {
    scans.into_iter().reduce(ExtremalScan::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::FactorBudget;

    #[test]
    fn small_table_values() {
        let t = sieve_range(1, 13).unwrap();
        assert_eq!(
            t.get(12).unwrap(),
            ArithValues { phi: 4, sigma: 28, big_omega: 3, tau: 6, spf: 2 }
        );
        let t = sieve_range(1, 2).unwrap();
        assert_eq!(
            t.get(1).unwrap(),
            ArithValues { phi: 1, sigma: 1, big_omega: 0, tau: 1, spf: 1 }
        );
        let t = sieve_range(97, 98).unwrap();
        assert_eq!(
            t.get(97).unwrap(),
            ArithValues { phi: 96, sigma: 98, big_omega: 1, tau: 2, spf: 97 }
        );
    }

    #[test]
    fn matches_trial_division() {
        let t = sieve_range(1, 5000).unwrap();
        for (n, v) in t.iter() {
            assert_eq!(v, ArithValues::of(n), "n = {n}");
        }
        let lo = 1_000_000_000_000u64;
        let t = sieve_range(lo, lo + 2000).unwrap();
        for (n, v) in t.iter() {
            assert_eq!(v, ArithValues::of(n), "n = {n}");
        }
    }

    #[test]
    fn segmentation_is_invisible() {
        let whole = sieve_range_with(1, 3000, &SieveConfig { segment: 1 << 20, ..Default::default() }).unwrap();
        let split = sieve_range_with(1, 3000, &SieveConfig { segment: 37, ..Default::default() }).unwrap();
        assert_eq!(whole, split);
    }

    #[test]
    fn range_errors() {
        assert!(matches!(sieve_range(0, 5), Err(Error::Precondition(_))));
        assert!(matches!(sieve_range(5, 5), Err(Error::Precondition(_))));
        let cfg = SieveConfig { max: 100, ..Default::default() };
        assert!(matches!(sieve_range_with(1, 101, &cfg), Err(Error::RangeTooLarge { .. })));
    }

    #[test]
    fn rough_counts() {
        assert_eq!(count_rough(100, 10).unwrap().count, 21);
        assert_eq!(count_rough(10, 2).unwrap().count, 4);
        assert_eq!(count_rough(10, 10).unwrap().count, 0);
    }

    #[test]
    fn thresholds() {
        // 10·ln ln 10 ≈ 8.34; 10·ln ln 10^6 ≈ 26.26
        assert_eq!(high_omega_min(10), 9);
        assert_eq!(high_omega_min(1_000_000), 27);
        // exp(√ln 100) ≈ 8.51, exp(√ln 10) ≈ 4.56
        assert_eq!(tau_sigma_min(100), 9);
        assert_eq!(tau_sigma_min(10), 5);
    }

    #[test]
    fn high_omega_small() {
        assert_eq!(count_high_omega(10).unwrap().count, 0);
        assert_eq!(count_high_omega(1_000_000).unwrap().count, 0);
    }

    #[test]
    fn tau_sigma_examples() {
        let fz = Factorizer::new(FactorBudget::default());
        assert_eq!(count_tau_sigma_large(10, &fz).unwrap().count, 2);
        let r = count_tau_sigma_large(100, &fz).unwrap();
        let brute = (1..=100u64)
            .filter(|&n| arith::tau_of(&arith::factor_trial_u64(arith::sigma(n) as u64)) >= 9)
            .count() as u64;
        assert_eq!(r.count, brute);
        assert_eq!(r.undecided, 0);
        assert_eq!(arith::sigma(96), 252);
    }

    #[test]
    fn schoenberg_examples() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(schoenberg_cdf(10, &half).unwrap(), BigRational::new(5.into(), 10.into()));
        let one = BigRational::from_integer(1.into());
        assert_eq!(schoenberg_cdf(1000, &one).unwrap(), one);
    }

    #[test]
    fn extremal_small() {
        let s = extremal_scan(3).unwrap();
        assert_eq!((s.min_phi_at, s.max_sigma_at), (3, 3));
        let s = extremal_scan(30).unwrap();
        // ln ln 3 ≈ 0.094 makes n = 3 extreme on both sides
        assert_eq!(s.min_phi_at, 3);
        assert_eq!(s.max_sigma_at, 3);
    }
}
