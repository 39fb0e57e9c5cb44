//! Budgeted factorization and certified intervals for φ(m) and σ(m).
//!
//! A [`FactorResult`] always satisfies `m = C · Π p^e`, with every prime up
//! to the trial bound `B` removed. The cofactor `C` is either 1, known to be
//! composite, or (after the trial stage only) not yet examined. In every
//! case each prime factor of `C` exceeds `B`, so `C` has at most
//! `t = ⌈log C / log B⌉` of them, and that is enough to bracket φ and σ:
//!
//! ```text
//! φ(m) ≤ m · Π_known (1 − 1/p)           φ(m) ≥ that · (1 − 1/B)^t
//! σ(m) ≥ Π_known σ(p^e) · C               σ(m) ≤ that · (B/(B − 1))^t
//! ```

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::arith;

/// Limits for one factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Every prime `≤ trial_bound` is removed by trial division.
    pub trial_bound: u64,
    /// Miller–Rabin rounds for inputs above 64 bits.
    pub mr_rounds: u32,
    /// Pollard–Brent iterations allowed per composite.
    pub rho_iterations: u64,
    /// Cofactors longer than this are left unexamined after trial division.
    pub max_cofactor_bits: u64,
    pub seed: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            mr_rounds: 25,
            rho_iterations: 10_000_000,
            max_cofactor_bits: 4096,
            seed: 0x5eed,
        }
    }
}

impl FactorBudget {
    pub fn tiny() -> Self {
        FactorBudget {
            trial_bound: 100,
            mr_rounds: 8,
            rho_iterations: 0,
            max_cofactor_bits: 4096,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Certainty {
    Proven,
    Probable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    pub p: BigUint,
    pub e: u32,
    pub certainty: Certainty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CofactorStatus {
    One,
    Composite,
    /// Trial division only; the cofactor may still be prime.
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorResult {
    pub m: BigUint,
    pub known_factors: Vec<PrimePower>,
    pub cofactor: BigUint,
    pub status: CofactorStatus,
    pub trial_bound: u64,
}

impl FactorResult {
    /// `C · Π p^e`.
    pub fn reconstruct(&self) -> BigUint {
        self.known_factors
            .iter()
            .fold(self.cofactor.clone(), |acc, f| acc * f.p.pow(f.e))
    }

    pub fn uses_probable(&self) -> bool {
        self.known_factors
            .iter()
            .any(|f| f.certainty == Certainty::Probable)
    }

    pub fn is_complete(&self) -> bool {
        self.status == CofactorStatus::One
    }

    /// One-line text record, e.g. `m=55;factors=5^1:P,11^1:P;cofactor=1;status=ONE;B=1000000`.
    pub fn to_record(&self) -> String {
        let mut s = format!("m={};factors=", self.m);
        for (i, f) in self.known_factors.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let tag = match f.certainty {
                Certainty::Proven => "P",
                Certainty::Probable => "PRP",
            };
            let _ = write!(s, "{}^{}:{}", f.p, f.e, tag);
        }
        let status = match self.status {
            CofactorStatus::One => "ONE",
            CofactorStatus::Composite => "COMPOSITE",
            CofactorStatus::Unverified => "UNVERIFIED",
        };
        let _ = write!(
            s,
            ";cofactor={};status={};B={}",
            self.cofactor, status, self.trial_bound
        );
        s
    }
}

/// Certified enclosures of φ(m) and σ(m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSigmaBounds {
    pub phi_low: BigRational,
    pub phi_high: BigRational,
    pub sigma_low: BigRational,
    pub sigma_high: BigRational,
    /// Complete factorization with every prime proven.
    pub exact: bool,
}

fn ratio(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn phi_sigma_bounds(f: &FactorResult) -> PhiSigmaBounds {
    let mut phi_num = f.m.clone();
    let mut phi_den = BigUint::one();
    let mut sigma_known = BigUint::one();
    for pp in &f.known_factors {
        phi_num *= &pp.p - 1u32;
        phi_den *= &pp.p;
        sigma_known *= (pp.p.pow(pp.e + 1) - 1u32) / (&pp.p - 1u32);
    }
    let phi_high = ratio(phi_num, phi_den);
    let c = &f.cofactor;
    if c.is_one() {
        let sigma = ratio(sigma_known, BigUint::one());
        return PhiSigmaBounds {
            phi_low: phi_high.clone(),
            phi_high,
            sigma_low: sigma.clone(),
            sigma_high: sigma,
            exact: !f.uses_probable(),
        };
    }
    let b = BigUint::from(f.trial_bound.max(2));
    // smallest t with B^t ≥ C
    let mut t = 0u32;
    let mut pw = BigUint::one();
    while &pw < c {
        pw *= &b;
        t += 1;
    }
    let shrink = ratio((&b - 1u32).pow(t), b.pow(t));
    let grow = ratio(b.pow(t), (&b - 1u32).pow(t));
    let one = BigRational::one();
    let mut phi_low = &phi_high * &shrink;
    if phi_low < one {
        phi_low = one;
    }
    let sigma_low = ratio(sigma_known * c, BigUint::one());
    let sigma_high = &sigma_low * grow;
    PhiSigmaBounds {
        phi_low,
        phi_high,
        sigma_low,
        sigma_high,
        exact: false,
    }
}

/// τ(m) when the factorization is exact.
pub fn tau_from_factors(f: &FactorResult) -> Option<BigUint> {
    if !f.is_complete() || f.uses_probable() {
        return None;
    }
    Some(
        f.known_factors
            .iter()
            .map(|pp| BigUint::from(pp.e + 1))
            .product(),
    )
}

fn mix(seed: u64, n: &BigUint) -> u64 {
    let low = n.iter_u64_digits().next().unwrap_or(0);
    let mut z = seed ^ low.rotate_left(17) ^ n.bits().wrapping_mul(0x9e37_79b9_7f4a_7c15);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn random_below(rng: &mut ChaCha8Rng, n: &BigUint) -> BigUint {
    let words = (n.bits() / 32 + 2) as usize;
    let digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
    BigUint::new(digits) % n
}

/// Miller–Rabin with base 2 followed by `rounds − 1` random bases.
pub fn is_probable_prime(n: &BigUint, rounds: u32, seed: u64) -> bool {
    if let Some(small) = n.to_u64() {
        return arith::is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, n));
    let three = BigUint::from(3u32);
    for round in 0..rounds.max(1) {
        let a = if round == 0 {
            BigUint::from(2u32)
        } else {
            random_below(&mut rng, &(n - &three)) + 2u32
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        let mut witness = true;
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                witness = false;
                break;
            }
        }
        if witness {
            return false;
        }
    }
    true
}

/// Pollard–Brent on a word-sized odd composite.
fn rho_u64(n: u64, cap: u64, rng: &mut ChaCha8Rng) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut spent = 0u64;
    while spent < cap {
        let c = rng.next_u64() % (n - 1) + 1;
        let f = |x: u64| ((arith::mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let mut y = rng.next_u64() % n;
        let (mut x, mut ys) = (y, y);
        let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
        let m = 128u64;
        while g == 1 && spent < cap {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = arith::mul_mod(q, x.abs_diff(y), n);
                }
                g = arith::gcd(q, n);
                k += m;
            }
            spent += 2 * r;
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = arith::gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n && g != 1 {
            return Some(g);
        }
    }
    None
}

/// Pollard–Brent on a big odd composite.
fn rho_big(n: &BigUint, cap: u64, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut spent = 0u64;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while spent < cap {
        let c = random_below(rng, &(n - 1u32)) + 1u32;
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = random_below(rng, n);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        let m = 128u64;
        while g.is_one() && spent < cap {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (&q * diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            spent += 2 * r;
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n && !g.is_one() {
            return Some(g);
        }
    }
    None
}

/// Factorization engine with a prepared table of trial-division primes.
#[derive(Debug, Clone)]
pub struct Factorizer {
    budget: FactorBudget,
    primes: Vec<u64>,
}

impl Factorizer {
    pub fn new(budget: FactorBudget) -> Self {
        let bound = budget.trial_bound.max(2);
        Factorizer {
            budget: FactorBudget {
                trial_bound: bound,
                ..budget
            },
            primes: arith::primes_up_to(bound),
        }
    }

    pub fn budget(&self) -> &FactorBudget {
        &self.budget
    }

    /// Trial division by every prime up to the bound. A cofactor above 64
    /// bits is left [`CofactorStatus::Unverified`].
    pub fn trial(&self, m: &BigUint) -> FactorResult {
        assert!(!m.is_zero(), "factor of zero");
        let mut found: Vec<(u64, u32)> = Vec::new();
        let mut rem = m.clone();
        let mut idx = 0;
        let primes = &self.primes;
        let mut resolved_small = None;
        while idx < primes.len() {
            if let Some(small) = rem.to_u64() {
                resolved_small = Some(self.trial_u64(small, idx, &mut found));
                break;
            }
            // batch primes whose product fits in a word
            let mut prod = 1u64;
            let mut end = idx;
            while end < primes.len() {
                match prod.checked_mul(primes[end]) {
                    Some(v) => {
                        prod = v;
                        end += 1;
                    }
                    None => break,
                }
            }
            let r = (&rem % prod).to_u64().unwrap_or(0);
            for &p in &primes[idx..end] {
                if r % p == 0 {
                    let mut e = 0;
                    loop {
                        let (q, rr) = rem.div_rem(&BigUint::from(p));
                        if !rr.is_zero() {
                            break;
                        }
                        rem = q;
                        e += 1;
                    }
                    found.push((p, e));
                }
            }
            idx = end;
        }
        let known_factors = found
            .into_iter()
            .map(|(p, e)| PrimePower {
                p: BigUint::from(p),
                e,
                certainty: Certainty::Proven,
            })
            .collect::<Vec<_>>();
        let mut result = FactorResult {
            m: m.clone(),
            known_factors,
            cofactor: rem.clone(),
            status: CofactorStatus::Unverified,
            trial_bound: self.budget.trial_bound,
        };
        match resolved_small {
            Some(SmallTail::One) => {
                result.cofactor = BigUint::one();
                result.status = CofactorStatus::One;
            }
            Some(SmallTail::Prime(q)) => {
                result.known_factors.push(PrimePower {
                    p: BigUint::from(q),
                    e: 1,
                    certainty: Certainty::Proven,
                });
                result.cofactor = BigUint::one();
                result.status = CofactorStatus::One;
            }
            Some(SmallTail::Composite(c)) => {
                result.cofactor = BigUint::from(c);
                result.status = CofactorStatus::Composite;
            }
            None => {
                if let Some(small) = rem.to_u64() {
                    // the prime list was exhausted while the remainder was big
                    match self.classify_small(small) {
                        SmallTail::One => {
                            result.cofactor = BigUint::one();
                            result.status = CofactorStatus::One;
                        }
                        SmallTail::Prime(q) => {
                            result.known_factors.push(PrimePower {
                                p: BigUint::from(q),
                                e: 1,
                                certainty: Certainty::Proven,
                            });
                            result.cofactor = BigUint::one();
                            result.status = CofactorStatus::One;
                        }
                        SmallTail::Composite(c) => {
                            result.cofactor = BigUint::from(c);
                            result.status = CofactorStatus::Composite;
                        }
                    }
                }
            }
        }
        result
    }

    fn classify_small(&self, n: u64) -> SmallTail {
        if n == 1 {
            SmallTail::One
        } else if arith::is_prime_u64(n) {
            SmallTail::Prime(n)
        } else {
            SmallTail::Composite(n)
        }
    }

    fn trial_u64(&self, mut n: u64, start: usize, found: &mut Vec<(u64, u32)>) -> SmallTail {
        for &p in &self.primes[start..] {
            if p.saturating_mul(p) > n {
                break;
            }
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                found.push((p, e));
            }
        }
        self.classify_small(n)
    }

    /// Trial division, then primality testing and Pollard–Brent on what is
    /// left, within the budget.
    pub fn factor(&self, m: &BigUint) -> FactorResult {
        let mut res = self.trial(m);
        if res.status == CofactorStatus::One {
            return res;
        }
        let b = self.budget.trial_bound as u128;
        let b_squared = BigUint::from(b * b);
        let mut queue = vec![res.cofactor.clone()];
        let mut primes: Vec<(BigUint, Certainty)> = Vec::new();
        let mut stuck: Vec<BigUint> = Vec::new();
        let mut unexamined = false;
        while let Some(x) = queue.pop() {
            if x.is_one() {
                continue;
            }
            if x.bits() > self.budget.max_cofactor_bits {
                unexamined = true;
                stuck.push(x);
                continue;
            }
            // all prime factors exceed B, so anything below B² is prime
            if x < b_squared {
                primes.push((x, Certainty::Proven));
                continue;
            }
            if let Some(small) = x.to_u64() {
                if arith::is_prime_u64(small) {
                    primes.push((x, Certainty::Proven));
                    continue;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(mix(self.budget.seed, &x));
                match rho_u64(small, self.budget.rho_iterations, &mut rng) {
                    Some(d) => {
                        queue.push(BigUint::from(d));
                        queue.push(BigUint::from(small / d));
                    }
                    None => stuck.push(x),
                }
                continue;
            }
            if is_probable_prime(&x, self.budget.mr_rounds, self.budget.seed) {
                primes.push((x, Certainty::Probable));
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(mix(self.budget.seed, &x));
            match rho_big(&x, self.budget.rho_iterations, &mut rng) {
                Some(d) => {
                    let other = &x / &d;
                    queue.push(d);
                    queue.push(other);
                }
                None => stuck.push(x),
            }
        }
        // strip already-found primes out of unsplit composites
        let mut cofactor = BigUint::one();
        for mut c in stuck {
            for (p, _) in &primes {
                while (&c % p).is_zero() {
                    c /= p;
                }
            }
            cofactor *= c;
        }
        primes.sort();
        for (p, cert) in primes {
            match res.known_factors.iter_mut().find(|f| f.p == p) {
                Some(f) => f.e += 1,
                None => res.known_factors.push(PrimePower {
                    p,
                    e: 1,
                    certainty: cert,
                }),
            }
        }
        // multiplicities were collected one prime at a time
        for f in res.known_factors.iter_mut() {
            if f.p > BigUint::from(self.budget.trial_bound) {
                let mut e = 0;
                let mut t = m.clone();
                while (&t % &f.p).is_zero() {
                    t /= &f.p;
                    e += 1;
                }
                f.e = e;
            }
        }
        res.known_factors.sort_by(|a, b| a.p.cmp(&b.p));
        // recompute the cofactor exactly from the known part
        let known: BigUint = res
            .known_factors
            .iter()
            .map(|f| f.p.pow(f.e))
            .product();
        let c = m / known;
        debug_assert!(cofactor.is_one() || c == cofactor);
        res.status = if c.is_one() {
            CofactorStatus::One
        } else if unexamined {
            CofactorStatus::Unverified
        } else {
            CofactorStatus::Composite
        };
        res.cofactor = c;
        res
    }
}

enum SmallTail {
    One,
    Prime(u64),
    Composite(u64),
}

/// One-off factorization; build a [`Factorizer`] to amortize the prime table.
pub fn factor(m: &BigUint, budget: FactorBudget) -> FactorResult {
    Factorizer::new(budget).factor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn q(n: u64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn factor_55() {
        let f = factor(&big(55), FactorBudget::default());
        assert_eq!(f.known_factors.len(), 2);
        assert_eq!(f.known_factors[0].p, big(5));
        assert_eq!(f.known_factors[1].p, big(11));
        assert!(f.cofactor.is_one());
        let b = phi_sigma_bounds(&f);
        assert!(b.exact);
        assert_eq!(b.phi_low, q(40));
        assert_eq!(b.phi_high, q(40));
        assert_eq!(b.sigma_low, q(72));
        assert_eq!(b.sigma_high, q(72));
    }

    #[test]
    fn factor_one() {
        let f = factor(&big(1), FactorBudget::default());
        assert!(f.known_factors.is_empty());
        assert_eq!(f.status, CofactorStatus::One);
        assert_eq!(tau_from_factors(&f), Some(big(1)));
        let b = phi_sigma_bounds(&f);
        assert_eq!(b.phi_low, q(1));
        assert_eq!(b.sigma_high, q(1));
    }

    #[test]
    fn prime_input() {
        let p = 1_000_000_007u64;
        let b = phi_sigma_bounds(&factor(&big(p), FactorBudget::default()));
        assert!(b.exact);
        assert_eq!(b.phi_low, q(p - 1));
        assert_eq!(b.sigma_low, q(p + 1));
    }

    #[test]
    fn tau_of_twelve_and_partial() {
        assert_eq!(tau_from_factors(&factor(&big(12), FactorBudget::default())), Some(big(6)));
        let budget = FactorBudget::tiny();
        let f = factor(&big(101 * 103 * 3), budget);
        assert_eq!(f.status, CofactorStatus::Composite);
        assert_eq!(tau_from_factors(&f), None);
    }

    #[test]
    fn partial_interval_example() {
        // B = 100; a composite cofactor above B has C > B², so t = 3
        let budget = FactorBudget::tiny();
        let m = 3u64 * 101 * 97;
        let f = factor(&big(m), budget);
        // 97 ≤ B is removed by trial division, leaving the prime 101
        assert!(f.cofactor.is_one());
        let m = 3u64 * 101 * 103;
        let f = factor(&big(m), budget);
        assert_eq!(f.cofactor, big(101 * 103));
        let b = phi_sigma_bounds(&f);
        let two_thirds = BigRational::new(2.into(), 3.into());
        let shrink = BigRational::new((99u32 * 99 * 99).into(), 1_000_000u32.into());
        assert_eq!(b.phi_high, q(m) * &two_thirds);
        assert_eq!(b.phi_low, q(m) * two_thirds * shrink);
    }

    #[test]
    fn rho_splits_semiprimes() {
        let budget = FactorBudget {
            trial_bound: 1000,
            ..FactorBudget::default()
        };
        let p = 1_000_003u64;
        let r = 998_244_353u64;
        let f = factor(&big(p * r), budget);
        assert!(f.is_complete());
        assert_eq!(f.reconstruct(), big(p * r));
        // > 64 bits
        let m = BigUint::from(4_294_967_311u64) * BigUint::from(4_294_967_357u64) * 7u32;
        let f = factor(&m, budget);
        assert!(f.is_complete(), "{}", f.to_record());
        assert_eq!(f.known_factors.len(), 3);
        assert_eq!(f.reconstruct(), m);
    }

    #[test]
    fn repeated_large_prime() {
        let budget = FactorBudget {
            trial_bound: 1000,
            ..FactorBudget::default()
        };
        let p = BigUint::from(4_294_967_311u64);
        let m = &p * &p * &p * 2u32;
        let f = factor(&m, budget);
        assert!(f.is_complete());
        assert_eq!(f.known_factors.last().unwrap().e, 3);
        assert_eq!(f.reconstruct(), m);
    }

    #[test]
    fn mersenne_101_partial() {
        let m = (BigUint::one() << 101usize) - 1u32;
        let trial = Factorizer::new(FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 0,
            ..FactorBudget::default()
        })
        .factor(&m);
        // 2^101 − 1 = 7432339208719 · 341117531003194129; neither ≤ 10^6
        assert!(trial.known_factors.is_empty());
        assert_eq!(trial.status, CofactorStatus::Composite);
        let full = factor(&m, FactorBudget::default());
        assert!(full.is_complete());
        assert_eq!(full.known_factors[0].p, BigUint::from(7_432_339_208_719u64));
    }

    #[test]
    fn record_format() {
        let f = factor(&big(55), FactorBudget::default());
        assert_eq!(f.to_record(), "m=55;factors=5^1:P,11^1:P;cofactor=1;status=ONE;B=1000000");
    }
}
