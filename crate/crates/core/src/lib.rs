//! Exact arithmetic for integer linear recurrences and the totient /
//! sum-of-divisors inequalities `φ(|U_n|) ≥ |U_{φ(n)}|` and
//! `σ(|U_n|) ≤ |U_{σ(n)}|`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs: thread pools, files and the command line live in
//! the `lrs-lab` companion crate.
//!
//! Layout:
//!
//! * [`recurrence`], [`roots`], [`degeneracy`]: terms, characteristic
//!   polynomial, certified root moduli and the exact nondegeneracy test.
//! * [`sieve`]: segmented sieve for φ, σ, Ω, τ and the smallest prime factor,
//!   plus the counting experiments built on it.
//! * [`factor`]: budgeted factorization and certified φ/σ intervals.
//! * [`inequality`]: per-index verdicts, censuses and the small-value census.
//! * [`forge`]: the `2^n − a` counterexample family with certificates.
//! * [`density`]: the `n² + 1` experiment and the tail-count dashboard.

#![cfg_attr(all(not(feature = "std"), not(test)), no_std)]

extern crate alloc;

pub mod arith;
pub mod degeneracy;
pub mod density;
pub mod error;
pub mod factor;
pub mod forge;
pub mod inequality;
pub mod interval;
pub mod poly;
pub mod recurrence;
pub mod roots;
pub mod sieve;

pub use error::{Error, Result};
