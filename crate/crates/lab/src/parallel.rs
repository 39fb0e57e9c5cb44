//! Data-parallel drivers. Work is split into independent units (indices or
//! sieve segments) and merged in a fixed order, so results do not depend on
//! the number of worker threads.

use rayon::prelude::*;

use lrs_core::density::{self, DashboardConfig, DashboardRow};
use lrs_core::factor::Factorizer;
use lrs_core::inequality::{self, CensusReport, ClassifyOptions, Kind};
use lrs_core::recurrence::RecurrenceSpec;
use lrs_core::sieve::{self, ExtremalScan, SieveConfig, SieveTable, TailCountReport};
use lrs_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{LabError, LabResult};

/// Run `f` on a pool of `threads` workers (0 means one per core).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> LabResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| LabError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

pub fn census(
    spec: &RecurrenceSpec,
    x: u64,
    kind: Kind,
    fz: &Factorizer,
    opts: &ClassifyOptions,
    threads: usize,
) -> LabResult<CensusReport> {
    if x < 10 {
        return Err(Error::Precondition(format!("census needs x >= 10, got {x}")).into());
    }
    let (tasks, errored) = inequality::census_tasks(spec, x, kind, opts.bit_budget);
    let outcomes = with_threads(threads, || {
        tasks
            .par_iter()
            .map(|t| inequality::classify_values(t.n, kind, &t.u_n, &t.u_rhs, fz, opts.strict))
            .collect::<Vec<_>>()
    })?;
    Ok(inequality::summarize(x, kind, outcomes, errored))
}

/// Map every segment of `[lo, hi)` in parallel; results come back in
/// segment order.
pub fn map_segments<T: Send>(
    lo: u64,
    hi: u64,
    cfg: &SieveConfig,
    threads: usize,
    f: impl Fn(&SieveTable) -> T + Sync + Send,
) -> LabResult<Vec<T>> {
    if lo < 1 || lo >= hi {
        return Err(Error::Precondition(format!("sieve range [{lo}, {hi}) must satisfy 1 <= lo < hi")).into());
    }
    if hi > cfg.max {
        return Err(Error::RangeTooLarge { hi, max: cfg.max }.into());
    }
    let primes = sieve::base_primes(hi);
    let bounds = sieve::segment_bounds(lo, hi, cfg.segment);
    with_threads(threads, || {
        bounds
            .par_iter()
            .map(|&(a, b)| f(&sieve::sieve_segment(a, b, &primes)))
            .collect()
    })
}

pub fn sieve_range(lo: u64, hi: u64, cfg: &SieveConfig, threads: usize) -> LabResult<SieveTable> {
    let parts = map_segments(lo, hi, cfg, threads, |t| t.clone())?;
    let mut it = parts.into_iter();
    let mut out = it.next().expect("nonempty range");
    for t in it {
        out.hi = t.hi;
        out.phi.extend(t.phi);
        out.sigma.extend(t.sigma);
        out.big_omega.extend(t.big_omega);
        out.tau.extend(t.tau);
        out.spf.extend(t.spf);
    }
    Ok(out)
}

pub fn count_rough(x: u64, y: u64, cfg: &SieveConfig, threads: usize) -> LabResult<TailCountReport> {
    if y < 1 || x < y {
        return Err(Error::Precondition(format!("need x >= y >= 1, got x={x}, y={y}")).into());
    }
    if x >= cfg.max {
        return Err(Error::RangeTooLarge { hi: x + 1, max: cfg.max }.into());
    }
    let primes = lrs_core::arith::primes_up_to(y);
    let bounds = sieve::segment_bounds(2, x + 1, cfg.segment);
    let count = with_threads(threads, || {
        bounds
            .par_iter()
            .map(|&(a, b)| sieve::rough_in_segment(a, b, &primes))
            .sum::<u64>()
    })?;
    Ok(sieve::rough_report(x, y, count))
}

fn check_x(x: u64) -> LabResult<()> {
    if x < 10 {
        return Err(Error::Precondition(format!("need x >= 10, got {x}")).into());
    }
    Ok(())
}

pub fn count_high_omega(x: u64, cfg: &SieveConfig, threads: usize) -> LabResult<TailCountReport> {
    check_x(x)?;
    let k = sieve::high_omega_min(x);
    let counts = map_segments(1, x + 1, cfg, threads, |t| sieve::high_omega_in(t, k))?;
    Ok(sieve::high_omega_report(x, k, counts.iter().sum()))
}

pub fn count_tau_sigma_large(
    x: u64,
    fz: &Factorizer,
    cfg: &SieveConfig,
    threads: usize,
) -> LabResult<TailCountReport> {
    check_x(x)?;
    let k = sieve::tau_sigma_min(x);
    let parts = map_segments(1, x + 1, cfg, threads, |t| sieve::tau_sigma_in(t, k, fz))?;
    let count = parts.iter().map(|p| p.0).sum();
    let undecided = parts.iter().map(|p| p.1).sum();
    Ok(sieve::tau_sigma_report(x, k, count, undecided))
}

pub fn schoenberg_cdf(
    x: u64,
    alpha: &BigRational,
    cfg: &SieveConfig,
    threads: usize,
) -> LabResult<BigRational> {
    if x < 2 {
        return Err(Error::Precondition(format!("need x >= 2, got {x}")).into());
    }
    let zero = BigRational::from_integer(BigInt::from(0));
    let one = BigRational::from_integer(BigInt::from(1));
    if alpha < &zero || alpha > &one {
        return Err(Error::Precondition(format!("alpha {alpha} outside [0, 1]")).into());
    }
    let parts = map_segments(1, x + 1, cfg, threads, |t| sieve::phi_ratio_at_most_in(t, alpha))?;
    Ok(BigRational::new(parts.iter().sum::<u64>().into(), x.into()))
}

pub fn extremal_scan(x: u64, cfg: &SieveConfig, threads: usize) -> LabResult<ExtremalScan> {
    if x < 3 {
        return Err(Error::Precondition(format!("need x >= 3, got {x}")).into());
    }
    let parts = map_segments(1, x + 1, cfg, threads, sieve::extremal_in)?;
    Ok(sieve::merge_extremal(parts.into_iter().flatten()).expect("x >= 3"))
}

pub fn dashboard(
    xs: &[u64],
    dc: &DashboardConfig,
    fz: &Factorizer,
    cfg: &SieveConfig,
    threads: usize,
) -> LabResult<Vec<DashboardRow>> {
    xs.iter()
        .map(|&x| {
            check_x(x)?;
            let y = density::root_floor(x, dc.y_num, dc.y_den);
            let mut rough = count_rough(x, y, cfg, threads)?;
            rough.comparison = density::rough_reference(x, dc);
            Ok(DashboardRow {
                x,
                y,
                rough,
                high_omega: count_high_omega(x, cfg, threads)?,
                tau_sigma: count_tau_sigma_large(x, fz, cfg, threads)?,
            })
        })
        .collect()
}
