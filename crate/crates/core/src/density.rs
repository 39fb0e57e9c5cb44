//! The `n² + 1` counterexample family and the tail-count dashboard.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith;
use crate::error::{Error, Result};
use crate::factor::Factorizer;
use crate::sieve::{self, SieveConfig, TailCountReport};

/// `φ(n² + 1)` for `1 ≤ n ≤ x`, indexed by `n − 1`.
///
/// Odd primes dividing `n² + 1` are `1 mod 4`; for each such `p ≤ x` the two
/// square roots of `−1` mod `p` give the residue classes to sieve. What is
/// left above `x` is a single prime, since two factors above `x` would
/// exceed `x² + 1`.
pub fn phi_of_n_squared_plus_one(x: u64) -> Vec<u64> {
    let len = x as usize;
    let mut rem: Vec<u64> = (1..=x).map(|n| n * n + 1).collect();
    let mut phi = vec![1u64; len];
    // n odd: n² + 1 ≡ 2 (mod 8)
    for i in (0..len).step_by(2) {
        rem[i] /= 2;
    }
    for p in arith::primes_up_to(x) {
        if p % 4 != 1 {
            continue;
        }
        let r = sqrt_minus_one(p);
        for start in [r, p - r] {
            let mut n = start;
            while n <= x {
                let i = (n - 1) as usize;
                let mut pk = 1;
                while rem[i] % p == 0 {
                    rem[i] /= p;
                    pk *= p;
                }
                phi[i] *= pk / p * (p - 1);
                n += p;
            }
        }
    }
    for i in 0..len {
        if rem[i] > 1 {
            phi[i] *= rem[i] - 1;
        }
    }
    phi
}

/// A square root of `−1` modulo a prime `p ≡ 1 (mod 4)`.
fn sqrt_minus_one(p: u64) -> u64 {
    let c = (2..p)
        .find(|&c| arith::pow_mod(c, (p - 1) / 2, p) == p - 1)
        .expect("nonresidue exists");
    arith::pow_mod(c, (p - 1) / 4, p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyExperimentReport {
    pub x: u64,
    /// `n ≤ x` with `φ(n)² + 1 > φ(n² + 1)`.
    pub failures: u64,
    pub failures_odd: u64,
    pub failures_even: u64,
    /// `n ≤ x` with `φ(n)/n > 1/√2`.
    pub tail_count: u64,
    /// Odd `n` with `φ(n)/n > 1/√2` that did not fail.
    pub implication_violations: Vec<u64>,
    /// Even `n` with `φ(n)/n > 1/2`.
    pub even_violations: Vec<u64>,
    pub failure_indices: Vec<u64>,
}

impl PolyExperimentReport {
    pub fn failure_density(&self) -> BigRational {
        BigRational::new(self.failures.into(), self.x.into())
    }

    pub fn tail_density(&self) -> BigRational {
        BigRational::new(self.tail_count.into(), self.x.into())
    }
}

pub const POLY_EXPERIMENT_MAX: u64 = 1_000_000;

pub fn poly_experiment(x: u64) -> Result<PolyExperimentReport> {
    if x < 10 {
        return Err(Error::Precondition(format_x(x)));
    }
    if x > POLY_EXPERIMENT_MAX {
        return Err(Error::RangeTooLarge {
            hi: x,
            max: POLY_EXPERIMENT_MAX,
        });
    }
    let table = sieve::sieve_range(1, x + 1)?;
    let phi_u = phi_of_n_squared_plus_one(x);
    let mut report = PolyExperimentReport {
        x,
        failures: 0,
        failures_odd: 0,
        failures_even: 0,
        tail_count: 0,
        implication_violations: Vec::new(),
        even_violations: Vec::new(),
        failure_indices: Vec::new(),
    };
    for n in 1..=x {
        let i = (n - 1) as usize;
        let phi_n = table.phi[i] as u128;
        let fails = phi_n * phi_n + 1 > phi_u[i] as u128;
        let tail = 2 * phi_n * phi_n > (n as u128) * (n as u128);
        let odd = n % 2 == 1;
        if fails {
            report.failures += 1;
            report.failure_indices.push(n);
            if odd {
                report.failures_odd += 1;
            } else {
                report.failures_even += 1;
            }
        }
        if tail {
            report.tail_count += 1;
        }
        if odd && tail && !fails {
            report.implication_violations.push(n);
        }
        if !odd && 2 * phi_n > n as u128 {
            report.even_violations.push(n);
        }
    }
    Ok(report)
}

fn format_x(x: u64) -> alloc::string::String {
    alloc::format!("need x >= 10, got {x}")
}

/// `y = ⌊x^(num/den)⌋`, the rough-number threshold of the dashboard.
pub fn root_floor(x: u64, num: u32, den: u32) -> u64 {
    let target = BigUint::from(x).pow(num);
    // largest y with y^den ≤ x^num
    let (mut lo, mut hi) = (1u64, x.max(1));
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if BigUint::from(mid).pow(den) <= target {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DashboardConfig {
    /// Exponent of `y = x^(num/den)` for the rough-number count.
    pub y_num: u32,
    pub y_den: u32,
}

impl Default for DashboardConfig {
    fn default() -> Self {
        DashboardConfig { y_num: 1, y_den: 10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DashboardRow {
    pub x: u64,
    pub y: u64,
    pub rough: TailCountReport,
    pub high_omega: TailCountReport,
    pub tau_sigma: TailCountReport,
}

/// Reference curve for `Φ(x, x^e)`: `x / ln(x^e)`.
pub fn rough_reference(x: u64, cfg: &DashboardConfig) -> f64 {
    let e = cfg.y_num as f64 / cfg.y_den as f64;
    x as f64 / (e * libm::log(x as f64))
}

pub fn tail_dashboard(
    xs: &[u64],
    cfg: &DashboardConfig,
    fz: &Factorizer,
) -> Result<Vec<DashboardRow>> {
    let sc = SieveConfig::default();
    xs.iter()
        .map(|&x| {
            if x < 10 {
                return Err(Error::Precondition(format_x(x)));
            }
            let y = root_floor(x, cfg.y_num, cfg.y_den);
            let mut rough = sieve::count_rough_with(x, y, &sc)?;
            rough.comparison = rough_reference(x, cfg);
            Ok(DashboardRow {
                x,
                y,
                rough,
                high_omega: sieve::count_high_omega_with(x, &sc)?,
                tau_sigma: sieve::count_tau_sigma_large_with(x, fz, &sc)?,
            })
        })
        .collect()
}

/// Fraction of integers in `[1, x]` with `φ(n)/n` above `1/√2`.
pub fn sqrt_half_tail(x: u64) -> Result<BigRational> {
    let t = sieve::sieve_range(1, x + 1)?;
    let count = t
        .iter()
        .filter(|(n, v)| 2 * (v.phi as u128).pow(2) > (*n as u128).pow(2))
        .count();
    Ok(BigRational::new(count.into(), x.into()))
}

/// Failure density as a float, for display.
pub fn density_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}
