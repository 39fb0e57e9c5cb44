//! Certified root data of a characteristic polynomial.
//!
//! Multiplicities come from an exact square-free decomposition. The roots of
//! each square-free factor are approximated numerically (Aberth iteration in
//! `f64`, then Weierstrass–Durand–Kerner steps in big fixed point) and then
//! certified: with `W_i = f(z_i) / (lc · Π_{j≠i}(z_i − z_j))` every disk
//! `|z − z_i| ≤ d·|W_i|` that is disjoint from the others contains exactly
//! one root. The disk test is evaluated in exact rational arithmetic.
//!
//! Equal moduli are decided exactly: conjugate disks hold conjugate roots,
//! and otherwise two overlapping squared-modulus intervals that contain a
//! single real root of `Res_y(f(y), y^d f(x/y))` must hold the same value.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{self, Interval};
use crate::poly::{self, IntPoly};
use crate::recurrence::CharPoly;

/// Hard cap on the working precision used during isolation.
pub const MAX_PRECISION_BITS: u32 = 4096;

/// One distinct root `α_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootInfo {
    /// Certified enclosure of `|α_i|`.
    pub modulus: Interval,
    pub is_real: bool,
    pub multiplicity: usize,
    /// Disk `|α_i − (re + i·im)| ≤ radius` certified to contain the root.
    pub center_re: BigRational,
    pub center_im: BigRational,
    pub radius: BigRational,
}

impl RootInfo {
    pub fn approx(&self) -> (f64, f64) {
        (interval::to_f64(&self.center_re), interval::to_f64(&self.center_im))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootData {
    pub distinct_count: usize,
    /// Sorted by decreasing modulus; the dominant roots come first.
    pub roots: Vec<RootInfo>,
    /// Enclosure of `|α_1| = max_i |α_i|`.
    pub dominant_modulus: Interval,
    /// Number of roots sharing the dominant modulus.
    pub dominant_count: usize,
    pub precision_bits: u32,
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

/// Aberth–Ehrlich iteration in `f64` for starting values.
fn aberth_f64(f: &IntPoly) -> Vec<C64> {
    let d = f.degree();
    let c: Vec<f64> = f.coeffs().iter().map(|x| interval::to_f64(&BigRational::from_integer(x.clone()))).collect();
    let dc: Vec<f64> = (1..=d).map(|i| c[i] * i as f64).collect();
    let eval = |coeffs: &[f64], z: C64| {
        coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &a| acc.mul(z).add(C64::new(a, 0.0)))
    };
    let r0 = libm::pow(libm::fabs(c[0] / c[d]), 1.0 / d as f64).max(1e-3);
    let mut z: Vec<C64> = (0..d)
        .map(|i| {
            let t = 2.0 * core::f64::consts::PI * i as f64 / d as f64 + 0.4;
            C64::new(r0 * libm::cos(t), r0 * libm::sin(t))
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let p = eval(&c, z[i]);
            let dp = eval(&dc, z[i]);
            if p.abs() == 0.0 {
                continue;
            }
            let ratio = p.div(dp);
            let mut s = C64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s = s.add(C64::new(1.0, 0.0).div(z[i].sub(z[j])));
                }
            }
            let denom = C64::new(1.0, 0.0).sub(ratio.mul(s));
            let step = ratio.div(denom);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] = z[i].sub(step);
                max_step = max_step.max(step.abs() / z[i].abs().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Complex number in fixed point: `(re + i·im) / 2^prec`.
#[derive(Clone, Debug, PartialEq)]
struct Fixed {
    re: BigInt,
    im: BigInt,
}

impl Fixed {
    fn from_f64(z: C64, prec: u32) -> Fixed {
        let conv = |x: f64| {
            let q = BigRational::from_float(if x.is_finite() { x } else { 0.0 }).unwrap_or_default();
            (q.numer() << prec as usize).div_floor(q.denom())
        };
        Fixed {
            re: conv(z.re),
            im: conv(z.im),
        }
    }

    fn rescale(&self, from: u32, to: u32) -> Fixed {
        if to >= from {
            let s = (to - from) as usize;
            Fixed {
                re: &self.re << s,
                im: &self.im << s,
            }
        } else {
            let s = (from - to) as usize;
            Fixed {
                re: &self.re >> s,
                im: &self.im >> s,
            }
        }
    }

    fn sub(&self, o: &Fixed) -> Fixed {
        Fixed {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Fixed, prec: u32) -> Fixed {
        let p = prec as usize;
        Fixed {
            re: (&self.re * &o.re - &self.im * &o.im) >> p,
            im: (&self.re * &o.im + &self.im * &o.re) >> p,
        }
    }

    fn div(&self, o: &Fixed, prec: u32) -> Option<Fixed> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let p = prec as usize;
        let re = ((&self.re * &o.re + &self.im * &o.im) << p) / &den;
        let im = ((&self.im * &o.re - &self.re * &o.im) << p) / &den;
        Some(Fixed { re, im })
    }

    fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn re_q(&self, prec: u32) -> BigRational {
        BigRational::new(self.re.clone(), BigInt::one() << prec as usize)
    }

    fn im_q(&self, prec: u32) -> BigRational {
        BigRational::new(self.im.clone(), BigInt::one() << prec as usize)
    }
}

fn eval_fixed(f: &IntPoly, z: &Fixed, prec: u32) -> Fixed {
    let mut acc = Fixed {
        re: BigInt::zero(),
        im: BigInt::zero(),
    };
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z, prec);
        acc.re += c << prec as usize;
    }
    acc
}

/// One round of Weierstrass corrections; returns the largest step (scaled).
fn durand_kerner_step(f: &IntPoly, z: &mut [Fixed], prec: u32) -> BigInt {
    let lc = f.leading();
    let n = z.len();
    let mut max_step = BigInt::zero();
    for i in 0..n {
        let mut den = Fixed {
            re: lc.clone() << prec as usize,
            im: BigInt::zero(),
        };
        for j in 0..n {
            if j != i {
                den = den.mul(&z[i].sub(&z[j]), prec);
            }
        }
        let num = eval_fixed(f, &z[i], prec);
        if let Some(step) = num.div(&den, prec) {
            let size = step.re.abs().max(step.im.abs());
            if size > max_step {
                max_step = size;
            }
            z[i] = z[i].sub(&step);
        }
    }
    max_step
}

/// Gaussian integer used for exact evaluation.
#[derive(Clone)]
struct Gauss {
    re: BigInt,
    im: BigInt,
}

impl Gauss {
    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }
}

#[derive(Clone, Debug)]
struct Certified {
    center: Fixed,
    radius: BigRational,
    is_real: bool,
    modulus: Interval,
}

/// Exact inclusion disks around fixed-point approximations; `None` when the
/// disks are not pairwise disjoint or realness is ambiguous.
fn certify(f: &IntPoly, z: &[Fixed], prec: u32) -> Option<Vec<Certified>> {
    let d = f.degree();
    let lc = f.leading();
    let scale = |k: usize| BigInt::one() << (prec as usize * k);
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let zi = Gauss {
            re: z[i].re.clone(),
            im: z[i].im.clone(),
        };
        // 2^(prec·d) · f(z_i)
        let mut acc = Gauss {
            re: f.coeffs()[d].clone(),
            im: BigInt::zero(),
        };
        for k in (0..d).rev() {
            acc = acc.mul(&zi);
            acc.re += &f.coeffs()[k] * scale(d - k);
        }
        // 2^(prec·(d−1)) · Π (z_i − z_j)
        let mut prod = Gauss {
            re: BigInt::one(),
            im: BigInt::zero(),
        };
        for j in 0..d {
            if j != i {
                let diff = Gauss {
                    re: &z[i].re - &z[j].re,
                    im: &z[i].im - &z[j].im,
                };
                prod = prod.mul(&diff);
            }
        }
        let pn = prod.norm_sq();
        if pn.is_zero() {
            return None;
        }
        // |W_i|^2 = |acc|^2 / (lc^2 |prod|^2 2^(2 prec))
        let w2 = BigRational::new(acc.norm_sq(), &lc * &lc * pn * scale(2));
        let r2 = w2 * BigInt::from(d * d);
        radii.push(interval::sqrt_bound(&r2, prec + 8, true));
    }
    for i in 0..d {
        for j in i + 1..d {
            let dist2 = BigRational::new(z[i].sub(&z[j]).norm_sq(), scale(2));
            let rsum = &radii[i] + &radii[j];
            if dist2 <= &rsum * &rsum {
                return None;
            }
        }
    }
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let im = z[i].im_q(prec);
        let is_real = if im.is_zero() {
            true
        } else if im.abs() > radii[i] {
            false
        } else {
            return None;
        };
        let norm2 = BigRational::new(z[i].norm_sq(), scale(2));
        let (abs_lo, abs_hi) = if is_real {
            let a = z[i].re_q(prec).abs();
            (a.clone(), a)
        } else {
            (
                interval::sqrt_bound(&norm2, prec + 8, false),
                interval::sqrt_bound(&norm2, prec + 8, true),
            )
        };
        // positive width even when the disk has collapsed to a point
        let pad = BigRational::new(BigInt::one(), BigInt::one() << (prec as usize + 4));
        let lo = &abs_lo - &radii[i] - &pad;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        let hi = &abs_hi + &radii[i] + &pad;
        out.push(Certified {
            center: z[i].clone(),
            radius: radii[i].clone(),
            is_real,
            modulus: Interval::new(lo, hi),
        });
    }
    Some(out)
}

/// Snap nearly-real approximations onto the real axis and pair the rest as
/// exact conjugates.
fn symmetrize(z: &mut [Fixed], prec: u32) {
    let n = z.len();
    let mut used = vec![false; n];
    let one = BigInt::one() << prec as usize;
    let half = prec as usize / 2;
    for i in 0..n {
        // |im| < 2^(-prec/2) · (1 + |re|)
        if (z[i].im.abs() << half) < &one + z[i].re.abs() {
            z[i].im = BigInt::zero();
            used[i] = true;
        }
    }
    for i in 0..n {
        if used[i] || !z[i].im.is_positive() {
            continue;
        }
        let conj = Fixed {
            re: z[i].re.clone(),
            im: -z[i].im.clone(),
        };
        let best = (0..n)
            .filter(|&j| !used[j] && j != i && z[j].im.is_negative())
            .min_by_key(|&j| z[j].sub(&conj).norm_sq());
        if let Some(j) = best {
            z[j] = conj;
            used[i] = true;
            used[j] = true;
        }
    }
}

/// Certified roots of one square-free factor at the requested relative
/// precision.
fn isolate_factor(f: &IntPoly, precision_bits: u32, max_bits: u32) -> Result<(Vec<Certified>, u32)> {
    let d = f.degree();
    if d == 1 {
        // exact rational root
        let root = BigRational::new(-f.coeff(0), f.coeff(1));
        let prec = precision_bits + 8;
        let pad = BigRational::new(BigInt::one(), BigInt::one() << (prec as usize + 4));
        let a = root.abs();
        let lo = &a - &pad;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        let centre = interval::round_dyadic(&root, prec, false);
        let re = (centre.numer() << prec as usize) / centre.denom();
        let radius = (&root - &centre).abs();
        return Ok((
            vec![Certified {
                center: Fixed { re, im: BigInt::zero() },
                radius,
                is_real: true,
                modulus: Interval::new(lo, &a + &pad),
            }],
            prec,
        ));
    }
    let start = aberth_f64(f);
    let mut prec = (precision_bits + 32).max(64);
    let mut z: Vec<Fixed> = start.iter().map(|&s| Fixed::from_f64(s, prec)).collect();
    let mut last_prec = prec;
    loop {
        z = z.iter().map(|v| v.rescale(last_prec, prec)).collect();
        last_prec = prec;
        let target = BigInt::one() << 8usize;
        for _ in 0..(200 + 4 * prec as usize / 64) {
            let step = durand_kerner_step(f, &mut z, prec);
            if step < target {
                break;
            }
        }
        let mut trial = z.clone();
        symmetrize(&mut trial, prec);
        if let Some(cert) = certify(f, &trial, prec) {
            let tight = cert.iter().all(|c| relative_width_ok(&c.modulus, precision_bits));
            if tight {
                return Ok((cert, prec));
            }
        }
        if prec >= max_bits {
            return Err(Error::PrecisionExhausted { max_bits });
        }
        prec = (prec * 2).min(max_bits);
    }
}

fn relative_width_ok(iv: &Interval, bits: u32) -> bool {
    // width ≤ 2^-bits · midpoint
    let lhs = iv.width() * (BigInt::one() << bits as usize);
    lhs <= iv.mid()
}

pub fn roots(cp: &CharPoly, precision_bits: u32) -> Result<RootData> {
    let psi = cp.as_poly();
    if psi.coeff(0).is_zero() || psi.leading() != BigInt::one() {
        return Err(Error::Precondition("characteristic polynomial must be monic with nonzero constant term".into()));
    }
    let max_bits = MAX_PRECISION_BITS.max(2 * precision_bits + 64);
    let factors = psi.square_free_decomposition();
    let mut bits = precision_bits;
    loop {
        let mut all: Vec<(Certified, usize)> = Vec::new();
        let mut used_prec = 0;
        for (f, mult) in &factors {
            let (cert, p) = isolate_factor(f, bits, max_bits)?;
            used_prec = used_prec.max(p);
            all.extend(cert.into_iter().map(|c| (c, *mult)));
        }
        match dominant_group(&psi, &all, used_prec) {
            Some((order, group, dom)) => {
                let roots = order
                    .into_iter()
                    .map(|i| {
                        let (c, mult) = &all[i];
                        RootInfo {
                            modulus: c.modulus.clone(),
                            is_real: c.is_real,
                            multiplicity: *mult,
                            center_re: c.center.re_q(used_prec),
                            center_im: c.center.im_q(used_prec),
                            radius: c.radius.clone(),
                        }
                    })
                    .collect::<Vec<_>>();
                return Ok(RootData {
                    distinct_count: roots.len(),
                    roots,
                    dominant_modulus: dom,
                    dominant_count: group,
                    precision_bits,
                });
            }
            None => {
                if bits >= max_bits {
                    return Err(Error::PrecisionExhausted { max_bits });
                }
                bits = (bits * 2).min(max_bits);
            }
        }
    }
}

/// Order roots by decreasing modulus and identify the dominant group.
/// Returns `None` when moduli near the top cannot yet be separated.
fn dominant_group(
    psi: &IntPoly,
    all: &[(Certified, usize)],
    prec: u32,
) -> Option<(Vec<usize>, usize, Interval)> {
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by(|&a, &b| all[b].0.modulus.mid().cmp(&all[a].0.modulus.mid()));
    let top = order[0];
    let top_iv = &all[top].0.modulus;
    let mut group = vec![top];
    let mut product_poly: Option<(IntPoly, Vec<IntPoly>)> = None;
    for &j in &order[1..] {
        let iv = &all[j].0.modulus;
        if !iv.overlaps(top_iv) {
            continue;
        }
        if conjugate_pair(&all[top].0, &all[j].0) || equal_modulus_exact(psi, top_iv, iv, &mut product_poly, prec) {
            group.push(j);
        } else {
            return None;
        }
    }
    // group members first, then the rest in decreasing order
    let mut sorted: Vec<usize> = group.clone();
    sorted.extend(order.iter().copied().filter(|i| !group.contains(i)));
    let mut lo = top_iv.lo.clone();
    let mut hi = top_iv.hi.clone();
    for &g in &group {
        let iv = &all[g].0.modulus;
        if iv.lo > lo {
            lo = iv.lo.clone();
        }
        if iv.hi < hi {
            hi = iv.hi.clone();
        }
    }
    Some((sorted, group.len(), Interval::new(lo, hi)))
}

fn conjugate_pair(a: &Certified, b: &Certified) -> bool {
    !a.is_real && a.center.re == b.center.re && a.center.im == -b.center.im.clone()
}

/// Decide `|α| = |β|` for two roots whose modulus intervals overlap.
fn equal_modulus_exact(
    psi: &IntPoly,
    a: &Interval,
    b: &Interval,
    cache: &mut Option<(IntPoly, Vec<IntPoly>)>,
    prec: u32,
) -> bool {
    let (_, sturm) = cache.get_or_insert_with(|| {
        let sf = psi.square_free_part();
        let m = poly::product_resultant(&sf).square_free_part();
        let seq = poly::sturm_sequence(&m);
        (m, seq)
    });
    let lo = if a.lo < b.lo { &a.lo } else { &b.lo };
    let hi = if a.hi > b.hi { &a.hi } else { &b.hi };
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (2 * prec as usize + 8));
    let lo2 = lo * lo - eps;
    let hi2 = hi * hi;
    poly::count_real_roots(sturm, &lo2, &hi2) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{char_poly, RecurrenceSpec};

    fn cp(c: &[i64]) -> CharPoly {
        CharPoly::from_poly(&IntPoly::from_i64(c)).unwrap()
    }

    fn contains_f64(iv: &Interval, x: f64) -> bool {
        interval::to_f64(&iv.lo) <= x + 1e-12 && x - 1e-12 <= interval::to_f64(&iv.hi)
    }

    #[test]
    fn fibonacci_roots() {
        let rd = roots(&char_poly(&RecurrenceSpec::fibonacci()), 64).unwrap();
        assert_eq!(rd.distinct_count, 2);
        let golden = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!(contains_f64(&rd.dominant_modulus, golden));
        assert!(contains_f64(&rd.roots[1].modulus, golden - 1.0));
        assert!(rd.roots.iter().all(|r| r.is_real && r.multiplicity == 1));
        assert_eq!(rd.dominant_count, 1);
        // exact: φ² = φ + 1 bracketed by the interval endpoints
        let f = IntPoly::from_i64(&[-1, -1, 1]);
        assert!(f.sign_at(&rd.dominant_modulus.lo) * f.sign_at(&rd.dominant_modulus.hi) < 0);
    }

    #[test]
    fn triple_root_at_one() {
        let rd = roots(&cp(&[-1, 3, -3, 1]), 64).unwrap();
        assert_eq!(rd.distinct_count, 1);
        assert_eq!(rd.roots[0].multiplicity, 3);
        assert!(rd.dominant_modulus.contains(&BigRational::one()));
        assert!(rd.dominant_modulus.width().is_positive());
    }

    #[test]
    fn complex_pair_with_modulus_sqrt2() {
        let rd = roots(&cp(&[2, -1, 1]), 64).unwrap();
        assert_eq!(rd.distinct_count, 2);
        assert_eq!(rd.dominant_count, 2);
        for r in &rd.roots {
            assert!(!r.is_real);
            assert!(contains_f64(&r.modulus, core::f64::consts::SQRT_2));
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let iv = &rd.dominant_modulus;
        assert!(&iv.lo * &iv.lo <= two && two <= &iv.hi * &iv.hi);
    }

    #[test]
    fn opposite_real_roots_share_modulus() {
        // X^2 − 4: roots ±2, equal modulus decided exactly
        let rd = roots(&cp(&[-4, 0, 1]), 64).unwrap();
        assert_eq!(rd.dominant_count, 2);
        assert!(rd.dominant_modulus.contains(&BigRational::from_integer(BigInt::from(2))));
    }

    #[test]
    fn precision_is_met() {
        let rd = roots(&cp(&[-7, 5, 0, -3, 1]), 200).unwrap();
        for r in &rd.roots {
            assert!(relative_width_ok(&r.modulus, 200));
        }
        let total: usize = rd.roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn rejects_zero_constant_term() {
        let bad = CharPoly {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        };
        assert!(roots(&bad, 32).is_err());
    }
}
