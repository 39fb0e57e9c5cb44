//! Counterexamples `U_n = 2^n − a` to `φ(|U_n|) ≥ |U_{φ(n)}|`.
//!
//! With odd primes `q_1 < … < q_k` whose reciprocals sum past 1, take
//! `a ≡ 2 (mod q_i)` and a prime `p ≡ 1 (mod lcm(q_i − 1))`. Fermat gives
//! `q_i | 2^p − a`, so `φ(2^p − a) ≤ (2^p − a)·Π(1 − 1/q_i)`, which falls
//! below `2^{p−1} − a` once `p` is large enough.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgeConfig {
    pub qs: Vec<u64>,
    /// Largest prime `p` the search may examine.
    pub search_limit: u64,
    /// `a = 2 + (1 + offset)·Π q_i`; zero gives the minimal lift.
    pub offset: u64,
}

impl ForgeConfig {
    pub fn new(qs: Vec<u64>) -> Self {
        ForgeConfig {
            qs,
            search_limit: 100_000_000,
            offset: 0,
        }
    }
}

pub fn validate_qs(qs: &[u64]) -> Result<()> {
    if qs.is_empty() {
        return Err(Error::Precondition("qs must not be empty".into()));
    }
    for w in qs.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Precondition(format!(
                "qs must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    for &q in qs {
        if q % 2 == 0 || !arith::is_prime_u64(q) {
            return Err(Error::Precondition(format!("{q} is not an odd prime")));
        }
    }
    Ok(())
}

/// `Σ 1/q_i` exactly, and whether it exceeds 1.
pub fn harmonic_check(qs: &[u64]) -> Result<(BigRational, bool)> {
    validate_qs(qs)?;
    let sum: BigRational = qs
        .iter()
        .map(|&q| BigRational::new(1.into(), q.into()))
        .sum();
    let exceeds = sum > BigRational::one();
    Ok((sum, exceeds))
}

fn product(qs: &[u64]) -> BigUint {
    qs.iter().map(|&q| BigUint::from(q)).product()
}

/// Smallest `a > 2` with `a ≡ 2 (mod q_i)` for every `i`.
pub fn build_a(qs: &[u64]) -> BigUint {
    build_a_with_offset(qs, 0)
}

pub fn build_a_with_offset(qs: &[u64], offset: u64) -> BigUint {
    product(qs) * (offset + 1) + 2u32
}

/// `lcm(q_1 − 1, …, q_k − 1)`.
pub fn modulus(qs: &[u64]) -> u64 {
    qs.iter().fold(1, |l, &q| arith::lcm(l, q - 1))
}

/// Smallest prime `p ≥ start` with `p ≡ 1 (mod L)`, examining `p ≤ limit`.
pub fn find_prime_p(qs: &[u64], start: u64, limit: u64) -> Result<u64> {
    validate_qs(qs)?;
    if start < 2 {
        return Err(Error::Precondition("start must be at least 2".into()));
    }
    let l = modulus(qs);
    // first candidate 1 + kL ≥ start
    let k = (start - 1).div_ceil(l);
    let mut p = 1 + k * l;
    while p <= limit {
        if arith::is_prime_u64(p) {
            return Ok(p);
        }
        p = p.checked_add(l).ok_or(Error::SearchLimit(limit))?;
    }
    Err(Error::SearchLimit(limit))
}

/// One checked fact of a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub qs: Vec<u64>,
    pub a: BigUint,
    pub modulus: u64,
    pub p: u64,
    pub facts: Vec<Fact>,
}

impl Certificate {
    pub fn accepted(&self) -> bool {
        self.facts.iter().all(|f| f.holds)
    }

    pub fn first_failure(&self) -> Option<&Fact> {
        self.facts.iter().find(|f| !f.holds)
    }
}

/// Check the three facts for `(qs, a, p)`. The certificate lists every fact,
/// failing ones included; it is accepted only when all of them hold.
pub fn certify(qs: &[u64], a: &BigUint, p: u64) -> Result<Certificate> {
    validate_qs(qs)?;
    if !arith::is_prime_u64(p) {
        return Err(Error::Precondition(format!("p = {p} is not prime")));
    }
    let two_p = BigUint::one() << p as usize;
    if &two_p <= a {
        return Err(Error::Precondition(format!("2^{p} does not exceed a")));
    }
    let l = modulus(qs);
    let m = &two_p - a;
    let mut facts = Vec::new();
    facts.push(Fact {
        name: String::from("p = 1 mod L"),
        holds: p % l == 1,
        detail: format!("p mod {l} = {}", p % l),
    });
    for &q in qs {
        let r = (arith::pow_mod(2, p, q) + q - (a % q).to_u64().expect("below q")) % q;
        facts.push(Fact {
            name: format!("{q} divides 2^p - a"),
            holds: r == 0,
            detail: format!("(2^p - a) mod {q} = {r}"),
        });
    }
    // (2^p − a)·Π(q − 1) < (2^{p−1} − a)·Π q
    let half = &two_p >> 1usize;
    let rhs_term = if &half > a { half - a } else { BigUint::zero() };
    let lhs = &m * qs.iter().map(|&q| BigUint::from(q - 1)).product::<BigUint>();
    let rhs = &rhs_term * product(qs);
    let below = !rhs_term.is_zero() && lhs < rhs;
    facts.push(Fact {
        name: String::from("(2^p - a) * prod(1 - 1/q) < 2^(p-1) - a"),
        holds: below,
        detail: format!(
            "lhs has {} bits, rhs has {} bits, difference {}",
            lhs.bits(),
            rhs.bits(),
            if below { "positive" } else { "not positive" }
        ),
    });
    let all = facts.iter().all(|f| f.holds);
    facts.push(Fact {
        name: String::from("phi(2^p - a) < 2^phi(p) - a"),
        holds: all,
        detail: String::from(if all {
            "phi(m) <= m * prod(1 - 1/q) over the divisors q, and phi(p) = p - 1"
        } else {
            "not concluded"
        }),
    });
    Ok(Certificate {
        qs: qs.to_vec(),
        a: a.clone(),
        modulus: l,
        p,
        facts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForgeOutcome {
    Certified(Certificate),
    Rejected { reason: String, last: Option<Certificate> },
}

/// Search the progression `p ≡ 1 (mod L)` upward until a certificate is
/// accepted or the limit is passed.
pub fn forge(cfg: &ForgeConfig) -> Result<ForgeOutcome> {
    let (sum, exceeds) = harmonic_check(&cfg.qs)?;
    if !exceeds {
        return Ok(ForgeOutcome::Rejected {
            reason: format!("harmonic sum {sum} is not greater than 1"),
            last: None,
        });
    }
    let a = build_a_with_offset(&cfg.qs, cfg.offset);
    // 2^p must exceed a
    let mut start = a.bits().max(2);
    let mut last = None;
    loop {
        let p = match find_prime_p(&cfg.qs, start, cfg.search_limit) {
            Ok(p) => p,
            Err(Error::SearchLimit(_)) => {
                return Ok(ForgeOutcome::Rejected {
                    reason: format!("no admissible prime p <= {} passed", cfg.search_limit),
                    last,
                })
            }
            Err(e) => return Err(e),
        };
        let cert = certify(&cfg.qs, &a, p)?;
        if cert.accepted() {
            return Ok(ForgeOutcome::Certified(cert));
        }
        last = Some(cert);
        start = p + 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const NINE: [u64; 9] = [3, 5, 7, 11, 13, 17, 19, 23, 29];

    #[test]
    fn harmonic_examples() {
        let (s, ok) = harmonic_check(&NINE).unwrap();
        assert!(ok);
        assert!((crate::interval::to_f64(&s) - 1.0335).abs() < 1e-3);
        let (s, ok) = harmonic_check(&[3, 5]).unwrap();
        assert_eq!(s, BigRational::new(8.into(), 15.into()));
        assert!(!ok);
        assert!(!harmonic_check(&[3]).unwrap().1);
        assert!(harmonic_check(&[3, 9]).is_err());
        assert!(harmonic_check(&[2, 3]).is_err());
        assert!(harmonic_check(&[5, 3]).is_err());
    }

    #[test]
    fn a_and_modulus() {
        assert_eq!(build_a(&[3, 5]), BigUint::from(17u32));
        assert_eq!(build_a(&[3]), BigUint::from(5u32));
        assert_eq!(build_a(&NINE), BigUint::from(3_234_846_617u64));
        assert_eq!(modulus(&[3, 5]), 4);
        assert_eq!(modulus(&NINE), 55440);
    }

    #[test]
    fn prime_search() {
        assert_eq!(find_prime_p(&[3, 5], 3, 1000).unwrap(), 5);
        assert_eq!(find_prime_p(&[3], 3, 1000).unwrap(), 3);
        let p = find_prime_p(&NINE, 2, u64::MAX).unwrap();
        assert_eq!(p % 55440, 1);
        assert!(matches!(find_prime_p(&NINE, 2, 100), Err(Error::SearchLimit(100))));
    }

    #[test]
    fn small_set_rejects_at_fact_two() {
        let a = build_a(&[3, 5]);
        let c = certify(&[3, 5], &a, 5).unwrap();
        assert!(!c.accepted());
        assert!(c.first_failure().unwrap().name.starts_with("(2^p - a)"));
    }

    #[test]
    fn tampered_a_rejects_at_divisibility() {
        let p = find_prime_p(&NINE, 2, u64::MAX).unwrap();
        let a = build_a(&NINE) + 1u32;
        let c = certify(&NINE, &a, p).unwrap();
        assert_eq!(c.first_failure().unwrap().name, "3 divides 2^p - a");
    }

    #[test]
    fn forge_rejects_small_harmonic_sum() {
        match forge(&ForgeConfig::new(vec![3, 5])).unwrap() {
            ForgeOutcome::Rejected { reason, .. } => assert!(reason.contains("8/15")),
            other => panic!("unexpected {other:?}"),
        }
    }

}
