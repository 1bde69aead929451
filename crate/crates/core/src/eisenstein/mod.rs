//! Evaluation of the normalized Eisenstein series `E_k(τ)`.
//!
//! Two independent routes are provided:
//!
//! - [`eval_qexp`]: `1 + c_k Σ σ_{k-1}(n) qⁿ` with `c_k = -2k/B_k`, valid for
//!   `Im τ >= 0.5`.
//! - [`eval_lattice`]: the defining sum `½ Σ (cτ + d)^{-k}` over coprime pairs
//!   with `c² + d² <= radius²`.
//!
//! [`eval`] is the production evaluator. It reduces `τ` into the fundamental
//! domain and uses whichever route carries the smaller error bound there. For
//! large weights near the arc the q-expansion loses everything to
//! cancellation while the lattice sum converges after a handful of shells,
//! so both routes are genuinely needed.

mod bernoulli;
mod lattice;
mod qexp;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bernoulli::{bernoulli_exact, ln_abs_bernoulli, ln_divisor_sum, zeta};
pub use lattice::{eval_lattice, lattice_tail_bound, DEFAULT_RADIUS};
pub use qexp::{
    eval_qexp, eval_qexp_adaptive, qexp_coefficient_log_scale, qexp_coefficient_scale,
    MAX_TERMS,
};
pub(crate) use qexp::qexp_series;

/// An even weight `k >= 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Weight(u32);

impl Weight {
    pub fn new(k: u32) -> Result<Self> {
        if k < 4 || k % 2 != 0 {
            return Err(Error::InvalidWeight(k as i64));
        }
        Ok(Weight(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Weight {
    type Error = Error;
    fn try_from(k: u32) -> Result<Self> {
        Weight::new(k)
    }
}

impl From<Weight> for u32 {
    fn from(w: Weight) -> u32 {
        w.0
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A point `re + i·im` with `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::NotInUpperHalfPlane { re, im });
        }
        Ok(UpperHalfPoint { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// `e^{iθ}`; requires `0 < θ < π`.
    pub fn on_unit_circle(theta: f64) -> Result<Self> {
        Self::new(theta.cos(), theta.sin())
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// A series value together with the error bound that was actually used to
/// stop the summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub abs_error_bound: f64,
}

/// Bounds accepted from the q-expansion before the lattice route is tried.
const QEXP_ACCEPT_REL: f64 = 1e-13;
const LATTICE_TARGET: f64 = 1e-16;
const LATTICE_MAX_RADIUS: u32 = 2000;

/// Smallest radius whose lattice tail bound is below `target`, capped.
pub fn radius_for_tolerance(k: Weight, tau: UpperHalfPoint, target: f64) -> u32 {
    let mut r = 2;
    while r < LATTICE_MAX_RADIUS && lattice_tail_bound(k, tau, r) > target {
        r += if r < 64 { 1 } else { r / 8 };
    }
    r.min(LATTICE_MAX_RADIUS)
}

/// Production evaluator of `E_k(τ)` on the whole upper half plane.
pub fn eval(k: Weight, tau: UpperHalfPoint) -> Result<SeriesValue> {
    let (reduced, [_, _, c, d]) = crate::zeros::reduce_to_fundamental_domain(tau);
    let at_reduced = eval_in_domain(k, reduced)?;
    if c == 0 && d.abs() == 1 {
        return Ok(at_reduced);
    }
    // E_k(τ) = (cτ + d)^{-k} E_k(γτ)
    let j = Complex64::new(c as f64, 0.0) * tau.to_complex() + d as f64;
    let factor = j.inv().powi(k.get() as i32);
    Ok(SeriesValue {
        value: at_reduced.value * factor,
        abs_error_bound: at_reduced.abs_error_bound * factor.norm()
            + f64::EPSILON * (2.0 * k.get() as f64 + 8.0) * (at_reduced.value * factor).norm(),
    })
}

/// Evaluate at a point already in (the closure of) the fundamental domain.
fn eval_in_domain(k: Weight, tau: UpperHalfPoint) -> Result<SeriesValue> {
    let q = eval_qexp_adaptive(k, tau)?;
    if q.abs_error_bound <= QEXP_ACCEPT_REL * q.value.norm().max(1.0) {
        return Ok(q);
    }
    let radius = radius_for_tolerance(k, tau, LATTICE_TARGET);
    let lat = eval_lattice(k, tau, radius)?;
    if lat.abs_error_bound < q.abs_error_bound {
        Ok(lat)
    } else {
        Ok(q)
    }
}

/// `E_k(τ) - 1` and its error bound, evaluated without forming the constant
/// term when the q-expansion is accurate. Used for cusp-form differences.
pub(crate) fn eval_nonconstant(k: Weight, tau: UpperHalfPoint) -> Result<SeriesValue> {
    if tau.im() >= 0.5 {
        let s = qexp_series(k, tau, None)?;
        let bound = s.truncation + s.rounding;
        if bound <= QEXP_ACCEPT_REL * (1.0 + s.nonconstant.norm()) {
            return Ok(SeriesValue { value: s.nonconstant, abs_error_bound: bound });
        }
    }
    let v = eval(k, tau)?;
    Ok(SeriesValue { value: v.value - 1.0, abs_error_bound: v.abs_error_bound })
}
