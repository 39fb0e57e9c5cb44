//! Forge certificates on disk and a checker that shares no code with the
//! forge: it re-derives every fact from `(qs, a, L, p)` with modular
//! exponentiation and big-integer comparisons.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use lrs_core::forge::Certificate;

use crate::error::{LabError, LabResult};

pub const FORMAT: &str = "lrs-forge-certificate/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactDoc {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub format: String,
    pub claim: String,
    pub qs: Vec<u64>,
    pub a: String,
    pub modulus: u64,
    pub p: u64,
    pub accepted: bool,
    #[serde(rename = "fact")]
    pub facts: Vec<FactDoc>,
}

impl CertificateDoc {
    pub fn from_certificate(c: &Certificate) -> Self {
        CertificateDoc {
            format: FORMAT.into(),
            claim: "phi(2^p - a) < 2^(p-1) - a = 2^phi(p) - a".into(),
            qs: c.qs.clone(),
            a: c.a.to_string(),
            modulus: c.modulus,
            p: c.p,
            accepted: c.accepted(),
            facts: c
                .facts
                .iter()
                .map(|f| FactDoc {
                    name: f.name.clone(),
                    holds: f.holds,
                    detail: f.detail.clone(),
                })
                .collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("certificate serializes")
    }

    pub fn parse(text: &str) -> LabResult<Self> {
        toml::from_str(text).map_err(|e| LabError::Parse(format!("certificate: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub checks: Vec<(String, bool)>,
}

impl Verification {
    pub fn accepted(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.1).map(|c| c.0.as_str())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    // these bases decide primality for every 64-bit input
    let bases = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in bases {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let n_big = BigUint::from(n);
    let m = &n_big - 1u32;
    let s = m.trailing_zeros().unwrap_or(0);
    let d = &m >> s as usize;
    'bases: for b in bases {
        let mut x = BigUint::from(b).modpow(&d, &n_big);
        if x.is_one() || x == m {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % &n_big;
            if x == m {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Re-check a certificate from scratch.
pub fn verify(doc: &CertificateDoc) -> Verification {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut add = |name: String, ok: bool| checks.push((name, ok));
    add(format!("format is {FORMAT}"), doc.format == FORMAT);
    let qs = &doc.qs;
    add("qs nonempty".into(), !qs.is_empty());
    add(
        "qs strictly increasing".into(),
        qs.windows(2).all(|w| w[0] < w[1]),
    );
    add(
        "qs are odd primes".into(),
        qs.iter().all(|&q| q % 2 == 1 && is_prime(q)),
    );
    let a: Option<BigUint> = doc.a.parse().ok();
    add("a parses".into(), a.is_some());
    let Some(a) = a else {
        return Verification { checks };
    };
    for &q in qs {
        add(format!("a = 2 mod {q}"), q > 2 && (&a % q) == BigUint::from(2u32));
    }
    let l = qs.iter().fold(1u64, |l, &q| l.lcm(&(q.saturating_sub(1)).max(1)));
    add(format!("L = lcm(q - 1) = {l}"), l == doc.modulus);
    let p = doc.p;
    add(format!("p = {p} is prime"), is_prime(p));
    add("p = 1 mod L".into(), l > 0 && p % l == 1);
    let two_p = BigUint::one() << p as usize;
    add("2^p > a".into(), two_p > a);
    if two_p <= a {
        return Verification { checks };
    }
    let two = BigUint::from(2u32);
    let p_big = BigUint::from(p);
    for &q in qs {
        let q_big = BigUint::from(q);
        let lhs = two.modpow(&p_big, &q_big);
        add(format!("{q} | 2^p - a"), lhs == &a % &q_big);
    }
    let m = &two_p - &a;
    let half = &two_p >> 1usize;
    let target = if half > a { half - &a } else { BigUint::zero() };
    let prod_q: BigUint = qs.iter().map(|&q| BigUint::from(q)).product();
    let prod_q1: BigUint = qs.iter().map(|&q| BigUint::from(q - 1)).product();
    add(
        "(2^p - a) * prod(q - 1) < (2^(p-1) - a) * prod(q)".into(),
        !target.is_zero() && m * prod_q1 < target * prod_q,
    );
    add("document claims acceptance".into(), doc.accepted);
    add(
        "every recorded fact holds".into(),
        doc.facts.iter().all(|f| f.holds),
    );
    Verification { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_agrees() {
        for n in 0..2000u64 {
            assert_eq!(is_prime(n), lrs_core::arith::is_prime_u64(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
    }
}
