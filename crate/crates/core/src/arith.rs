//! Machine-word number theory: modular arithmetic, deterministic primality
//! for `u64`, small prime tables and the arithmetic functions of a single
//! word-sized integer.

use alloc::vec;
use alloc::vec::Vec;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = libm::sqrt(n as f64) as u64;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Bases that make Miller–Rabin deterministic below 2^64.
pub const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn strong_probable_prime(n: u64, d: u64, s: u32, a: u64) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    MR_BASES_U64
        .iter()
        .all(|&a| strong_probable_prime(n, d, s, a))
}

/// All primes `≤ limit`, by a plain sieve of Eratosthenes over odd numbers.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    // index i represents 2i + 1
    let half = limit / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2u64];
    primes.extend(
        (1..half)
            .filter(|&i| !composite[i] && 2 * i + 1 <= limit)
            .map(|i| (2 * i + 1) as u64),
    );
    primes
}

/// Factorization of a `u64` by trial division, for small inputs and oracles.
pub fn factor_trial_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// φ(n) from a factorization.
pub fn phi_of(factors: &[(u64, u32)]) -> u64 {
    factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// σ(n) from a factorization.
pub fn sigma_of(factors: &[(u64, u32)]) -> u128 {
    factors
        .iter()
        .map(|&(p, e)| {
            let p = p as u128;
            (p.pow(e + 1) - 1) / (p - 1)
        })
        .product()
}

/// τ(n) from a factorization.
pub fn tau_of(factors: &[(u64, u32)]) -> u64 {
    factors.iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Ω(n) from a factorization.
pub fn big_omega_of(factors: &[(u64, u32)]) -> u32 {
    factors.iter().map(|&(_, e)| e).sum()
}

/// φ(n) by trial division.
pub fn phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    phi_of(&factor_trial_u64(n))
}

/// σ(n) by trial division.
pub fn sigma(n: u64) -> u128 {
    if n == 0 {
        return 0;
    }
    sigma_of(&factor_trial_u64(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_pseudoprimes() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, primes_up_to(99));
        // strong pseudoprimes to several small bases
        for n in [2047u64, 3215031751, 3825123056546413051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn arithmetic_functions_of_twelve() {
        let f = factor_trial_u64(12);
        assert_eq!(f, vec![(2, 2), (3, 1)]);
        assert_eq!(phi_of(&f), 4);
        assert_eq!(sigma_of(&f), 28);
        assert_eq!(tau_of(&f), 6);
        assert_eq!(big_omega_of(&f), 3);
        assert_eq!(phi(1), 1);
        assert_eq!(sigma(1), 1);
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 2, 3, 4, 15, 16, 17, u64::MAX, (1 << 52) + 1] {
            let r = isqrt(n);
            assert!(r as u128 * r as u128 <= n as u128);
            assert!((r as u128 + 1) * (r as u128 + 1) > n as u128);
        }
    }
}
