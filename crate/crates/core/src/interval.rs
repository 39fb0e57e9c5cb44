//! Closed intervals with exact rational endpoints, and certified enclosures
//! of `ln`, `exp` and `sqrt`.
//!
//! Transcendental functions are evaluated in binary fixed point with
//! directed rounding: the lower endpoint is computed with every truncation
//! rounding down and the upper endpoint with every truncation rounding up,
//! plus an explicit bound on the truncated series tail. The returned
//! intervals therefore always contain the true value.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `[lo, hi]` with rational endpoints, `lo ≤ hi`.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

/// Where a value sits relative to an interval, decided with certainty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Below,
    Above,
    Overlap,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(q: BigRational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::point(BigRational::from_integer(n.into()))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Placement of `self` relative to `other`: `Below` means every point of
    /// `self` is strictly below every point of `other`.
    pub fn compare(&self, other: &Interval) -> Placement {
        if self.hi < other.lo {
            Placement::Below
        } else if self.lo > other.hi {
            Placement::Above
        } else {
            Placement::Overlap
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn scale(&self, k: &BigRational) -> Interval {
        if k.is_negative() {
            Interval {
                lo: &self.hi * k,
                hi: &self.lo * k,
            }
        } else {
            Interval {
                lo: &self.lo * k,
                hi: &self.hi * k,
            }
        }
    }

    /// Widen outward to endpoints that are multiples of `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Interval {
        Interval {
            lo: round_dyadic(&self.lo, bits, false),
            hi: round_dyadic(&self.hi, bits, true),
        }
    }
}

/// Nearest multiple of `2^-bits` below (or above, with `up`) `q`.
pub fn round_dyadic(q: &BigRational, bits: u32, up: bool) -> BigRational {
    let scaled = q.numer() << bits as usize;
    let (fl, rem) = scaled.div_mod_floor(q.denom());
    let n = if up && !rem.is_zero() { fl + 1 } else { fl };
    BigRational::new(n, BigInt::one() << bits as usize)
}

/// Approximate value of a rational, for display and heuristics only.
pub fn to_f64(q: &BigRational) -> f64 {
    let n = q.numer();
    let d = q.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // keep 60 significant bits from each side
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let nf = big_to_f64(&(n >> ns as usize));
    let df = big_to_f64(&(d >> ds as usize));
    nf / df * libm::exp2((ns - ds) as f64)
}

fn big_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut acc = 0.0f64;
    for &d in digits.iter().rev() {
        acc = acc * 18446744073709551616.0 + d as f64;
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

fn pow2(bits: u64) -> BigInt {
    BigInt::one() << bits as usize
}

fn div_dir(a: &BigInt, b: &BigInt, up: bool) -> BigInt {
    if up {
        a.div_ceil(b)
    } else {
        a.div_floor(b)
    }
}

fn shr_dir(a: &BigInt, bits: u64, up: bool) -> BigInt {
    div_dir(a, &pow2(bits), up)
}

/// Directed bound on `2^w · ln(y)` for `y = y_fixed / 2^w ∈ [1, 2]`.
///
/// Uses `ln y = 2 Σ z^{2j+1}/(2j+1)` with `z = (y−1)/(y+1) ≤ 1/3`.
fn ln_fixed(y_fixed: &BigInt, w: u64, up: bool) -> BigInt {
    let one = pow2(w);
    let num = (y_fixed - &one) << w as usize;
    let den = y_fixed + &one;
    let z = div_dir(&num, &den, up);
    if z.is_zero() {
        return BigInt::zero();
    }
    let z2 = shr_dir(&(&z * &z), w, up);
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    loop {
        let term = div_dir(&power, &BigInt::from(2 * j + 1), up);
        if up && power <= BigInt::one() {
            // remaining tail ≤ power · 1/(1 − z²) ≤ power · 9/8
            sum += BigInt::from(2) * &power;
            break;
        }
        if !up && term.is_zero() {
            break;
        }
        sum += term;
        power = shr_dir(&(&power * &z2), w, up);
        j += 1;
    }
    sum * 2
}

/// Certified enclosure of `ln 2` with absolute error below `2^-bits`.
pub fn ln2(bits: u32) -> Interval {
    let w = bits as u64 + 8;
    let two = pow2(w + 1);
    let lo = ln_fixed(&two, w, false);
    let hi = ln_fixed(&two, w, true);
    fixed_interval(lo, hi, w).round_out(bits + 2)
}

fn fixed_interval(lo: BigInt, hi: BigInt, w: u64) -> Interval {
    let den = pow2(w);
    Interval::new(
        BigRational::new(lo, den.clone()),
        BigRational::new(hi, den),
    )
}

/// Certified enclosure of `ln n` for `n ≥ 1`, absolute width about `2^-bits`.
pub fn ln_biguint(n: &BigUint, bits: u32) -> Interval {
    assert!(!n.is_zero(), "ln of zero");
    let e = n.bits() - 1;
    let guard = 16 + 64 - e.leading_zeros() as u64;
    let w = bits as u64 + guard;
    let n = BigInt::from(n.clone());
    // y = n / 2^e in [1, 2), as a w-bit fixed-point number
    let (y_lo, exact) = if w >= e {
        (n << (w - e) as usize, true)
    } else {
        let shift = e - w;
        let y = &n >> shift as usize;
        let exact = (&y << shift as usize) == n;
        (y, exact)
    };
    let y_hi = if exact { y_lo.clone() } else { &y_lo + 1 };
    let ln_y_lo = ln_fixed(&y_lo, w, false);
    let ln_y_hi = ln_fixed(&y_hi, w, true);
    let two = pow2(w + 1);
    let l2_lo = ln_fixed(&two, w, false);
    let l2_hi = ln_fixed(&two, w, true);
    let e = BigInt::from(e);
    let lo = &e * l2_lo + ln_y_lo;
    let hi = &e * l2_hi + ln_y_hi;
    fixed_interval(lo, hi, w).round_out(bits + 2)
}

/// Certified enclosure of `ln q` for rational `q > 0`.
pub fn ln_rational(q: &BigRational, bits: u32) -> Interval {
    assert!(q.is_positive(), "ln of non-positive rational");
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    ln_biguint(num, bits + 1).sub(&ln_biguint(den, bits + 1))
}

/// Certified enclosure of `ln` over a positive interval.
pub fn ln_interval(x: &Interval, bits: u32) -> Interval {
    let lo = ln_rational(&x.lo, bits).lo;
    let hi = ln_rational(&x.hi, bits).hi;
    Interval::new(lo, hi)
}

/// Directed bound on `exp(q)` for rational `q ≥ 0`, as a `w`-bit fixed-point
/// number.
fn exp_fixed(q: &BigRational, w: u64, up: bool) -> BigInt {
    // halve until the argument is at most 1/2
    let mut r = 0u64;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut reduced = q.clone();
    while reduced > half {
        reduced /= BigInt::from(2);
        r += 1;
    }
    let wg = w + r + 16;
    let v = div_dir(&(reduced.numer() << wg as usize), reduced.denom(), up);
    let one = pow2(wg);
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut j = 1u64;
    loop {
        term = div_dir(&(&term * &v), &(pow2(wg) * BigInt::from(j)), up);
        if up && term <= BigInt::one() {
            // ratio of consecutive terms ≤ 1/2 from here on
            sum += BigInt::from(2) * &term + 1;
            break;
        }
        if !up && term.is_zero() {
            break;
        }
        sum += &term;
        j += 1;
    }
    for _ in 0..r {
        sum = shr_dir(&(&sum * &sum), wg, up);
    }
    shr_dir(&sum, wg - w, up)
}

/// Certified enclosure of `exp` over an interval.
pub fn exp_interval(x: &Interval, bits: u32) -> Interval {
    let w = bits as u64 + 8;
    let lo = exp_point(&x.lo, w, false);
    let hi = exp_point(&x.hi, w, true);
    Interval::new(lo, hi).round_out(bits + 2)
}

fn exp_point(q: &BigRational, w: u64, up: bool) -> BigRational {
    if !q.is_negative() {
        BigRational::new(exp_fixed(q, w, up), pow2(w))
    } else {
        // exp(q) = 1 / exp(-q); a lower bound on exp(q) needs an upper bound
        // on exp(-q) and vice versa.
        let inv = exp_fixed(&-q, w, !up);
        let inv = if inv.is_zero() { BigInt::one() } else { inv };
        BigRational::new(pow2(w), inv)
    }
}

/// Directed rational bound on `sqrt(q)` for `q ≥ 0`, within `2^-bits`.
pub fn sqrt_bound(q: &BigRational, bits: u32, up: bool) -> BigRational {
    assert!(!q.is_negative(), "sqrt of negative rational");
    let scale = 2 * bits as usize;
    let scaled = div_dir(&(q.numer() << scale), q.denom(), up);
    let mut root = scaled.sqrt();
    if up && &root * &root < scaled {
        root += 1;
    }
    BigRational::new(root, pow2(bits as u64))
}

/// Compare two rationals; small helper used by callers that sort by value.
pub fn cmp_rational(a: &BigRational, b: &BigRational) -> Ordering {
    a.cmp(b)
}
