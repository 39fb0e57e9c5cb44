//! Exact nondegeneracy test: is some ratio `α_i/α_j` of distinct
//! characteristic roots a root of unity?
//!
//! The ratios are the roots of `R(x) = Res_y(Ψ_sf(y), Ψ_sf(x·y))`. After the
//! factor `(x − 1)^s` coming from `i = j` is removed, the sequence is
//! degenerate exactly when a cyclotomic polynomial `Φ_m` divides what is
//! left. A ratio has degree at most `s²`, so only `m` with `φ(m) ≤ s²`
//! matter, and those satisfy `m ≤ 2·s⁴`.

use alloc::vec::Vec;

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::{self, IntPoly};
use crate::recurrence::CharPoly;
use crate::roots;

/// `α_i / α_j` is a primitive `order`-th root of unity; indices refer to
/// [`roots::RootData::roots`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub nondegenerate: bool,
    pub witnesses: Vec<Witness>,
    /// `Ψ = (X − 1)^k` or `Ψ = (X + 1)^k`.
    pub polynomial_type: bool,
    /// Orders `m` with `Φ_m` dividing the reduced ratio resultant.
    pub unity_orders: Vec<u64>,
}

/// Orders of roots of unity among the ratios of distinct roots of `sf`.
pub fn unity_ratio_orders(sf: &IntPoly) -> Vec<u64> {
    let s = sf.degree();
    if s <= 1 {
        return Vec::new();
    }
    let mut rest = poly::ratio_resultant(sf).primitive();
    let x_minus_one = IntPoly::from_i64(&[-1, 1]);
    for _ in 0..s {
        rest = rest
            .div_exact(&x_minus_one)
            .expect("i = j ratios contribute (x − 1)^s");
    }
    let max_degree = (s * s) as u64;
    let bound = 2 * (s as u64).pow(4);
    (1..=bound)
        .filter(|&m| arith::phi(m) <= max_degree.min(rest.degree() as u64))
        .filter(|&m| rest.rem_monic(&poly::cyclotomic(m)).is_zero())
        .collect()
}

fn is_polynomial_type(psi: &IntPoly) -> bool {
    let k = psi.degree();
    *psi == IntPoly::linear_power(1, k) || *psi == IntPoly::linear_power(-1, k)
}

/// Smallest `m ≥ 1` with `z^m ≈ 1`, searched over `candidates`.
fn numeric_order(re: f64, im: f64, candidates: &[u64]) -> Option<u64> {
    let r = libm::hypot(re, im);
    if libm::fabs(r - 1.0) > 1e-6 {
        return None;
    }
    let theta = libm::atan2(im, re);
    let turns = theta / (2.0 * core::f64::consts::PI);
    (1..=*candidates.iter().max()?).find(|&m| {
        let x = turns * m as f64;
        libm::fabs(x - libm::round(x)) < 1e-7
    })
    .filter(|m| candidates.contains(m))
}

pub fn degeneracy_check(cp: &CharPoly) -> Result<DegeneracyReport> {
    let psi = cp.as_poly();
    let polynomial_type = is_polynomial_type(&psi);
    let sf = psi.square_free_part();
    let orders = unity_ratio_orders(&sf);
    if orders.is_empty() {
        return Ok(DegeneracyReport {
            nondegenerate: true,
            witnesses: Vec::new(),
            polynomial_type,
            unity_orders: orders,
        });
    }
    for bits in [64u32, 256, 1024] {
        let rd = roots::roots(cp, bits)?;
        let approx: Vec<(f64, f64)> = rd.roots.iter().map(|r| r.approx()).collect();
        let mut witnesses = Vec::new();
        for i in 0..approx.len() {
            for j in i + 1..approx.len() {
                let (ar, ai) = approx[i];
                let (br, bi) = approx[j];
                let d = br * br + bi * bi;
                let qr = (ar * br + ai * bi) / d;
                let qi = (ai * br - ar * bi) / d;
                if let Some(order) = numeric_order(qr, qi, &orders) {
                    witnesses.push(Witness { i, j, order });
                }
            }
        }
        if !witnesses.is_empty() {
            return Ok(DegeneracyReport {
                nondegenerate: false,
                witnesses,
                polynomial_type,
                unity_orders: orders,
            });
        }
    }
    Err(Error::PrecisionExhausted { max_bits: 1024 })
}
