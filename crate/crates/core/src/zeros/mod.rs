//! Zero isolation on the arc `θ ∈ (π/2, 2π/3)` and on the left boundary
//! `τ = -1/2 + iy`, plus reduction into the fundamental domain.
//!
//! Isolation is sign-change based and refinement is plain bisection: every
//! reported zero comes with a bracket on which the function provably (up to
//! evaluation error) changes sign.

mod domain;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arc::{ArcAngle, FormSpec, Sign, ARC_HI, ARC_LO};
use crate::eisenstein::{self, qexp_coefficient_scale, UpperHalfPoint, Weight};
use crate::error::{Error, Result};
use crate::grid::{expected_count, sample_points, SamplePoint};

pub use domain::{in_fundamental_domain, reduce_to_fundamental_domain};

/// Target bracket width after bisection.
pub const BRACKET_WIDTH: f64 = 1e-12;
/// Residual tolerance relative to the local function scale.
pub const RESIDUAL_TOL: f64 = 1e-7;
/// Density of the uniform fallback grid on the arc.
pub const FALLBACK_DENSITY: usize = 4096;
/// Density of the left-boundary scan.
pub const BOUNDARY_DENSITY: usize = 2048;
/// Zeros closer than this to an elliptic point are flagged, not classified.
pub const ENDPOINT_EXCLUSION: f64 = 1e-6;

const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplicityNote {
    Simple,
    EndpointForced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub theta_hat: f64,
    pub tau_hat: Complex64,
    pub residual: f64,
    pub bracket_width: f64,
    /// `max(1, |f|)` over the initial bracket ends; residuals are judged
    /// against this.
    pub local_scale: f64,
    pub multiplicity_note: MultiplicityNote,
}

impl ZeroRecord {
    pub fn within_invariants(&self, residual_tol: f64) -> bool {
        self.bracket_width <= BRACKET_WIDTH && self.residual <= residual_tol * self.local_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryZeroRecord {
    pub y_hat: f64,
    pub tau_hat: Complex64,
    pub residual: f64,
    pub bracket_width: f64,
    pub local_scale: f64,
}

/// Result of a refined bisection on one bracket.
#[derive(Debug, Clone, Copy)]
struct Refined {
    at: f64,
    residual: f64,
    width: f64,
    scale: f64,
    stalled: bool,
}

/// Bisect `f` on a sign-change bracket. `floor` is the evaluation noise level;
/// a bracket whose two initial end values are both below it carries no
/// reliable sign information and is reported as stalled.
fn bisect<F>(f: F, b: Bracket, floor: f64) -> Result<Refined>
where
    F: Fn(f64) -> Result<f64>,
{
    let scale = b.f_lo.abs().max(b.f_hi.abs()).max(1.0);
    if b.f_lo.abs() <= floor && b.f_hi.abs() <= floor {
        let at = 0.5 * (b.lo + b.hi);
        return Ok(Refined { at, residual: f(at)?.abs(), width: b.hi - b.lo, scale, stalled: true });
    }
    let (mut lo, mut hi, mut f_lo) = (b.lo, b.hi, b.f_lo);
    let mut exact = None;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= BRACKET_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            exact = Some(mid);
            break;
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    let (at, width) = match exact {
        Some(x) => (x, 0.0),
        None => (0.5 * (lo + hi), hi - lo),
    };
    let residual = if exact.is_some() { 0.0 } else { f(at)?.abs() };
    Ok(Refined { at, residual, width, scale, stalled: false })
}

/// Everything learnt from one arc scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub form: FormSpec,
    /// Interior zeros in `(π/2, 2π/3)`, sorted by angle.
    pub zeros: Vec<ZeroRecord>,
    /// Values at the sample points `θ_m`.
    pub samples: Vec<(SamplePoint, f64)>,
    pub used_fallback: bool,
    /// Brackets whose refinement could not resolve a sign.
    pub stalled: Vec<Bracket>,
    /// Zeros within [`ENDPOINT_EXCLUSION`] of `i` or `ρ`.
    pub flagged_near_endpoint: Vec<ZeroRecord>,
}

impl ScanOutcome {
    /// Whether `sign F(θ_m) = (-1)^m` at every sample point.
    pub fn alternation_holds(&self) -> bool {
        self.samples.iter().all(|(p, v)| *v * p.parity.sign() > 0.0)
    }
}

fn arc_real(form: &FormSpec, theta: f64) -> Result<f64> {
    Ok(form.eval(ArcAngle::new(theta)?)?.real_part)
}

/// Uniform interior grid `π/2 + jh`, `j = 1..=density`, `h = (π/6)/(density+1)`,
/// and the brackets between consecutive grid points where the sign changes.
pub fn grid_brackets(form: &FormSpec, density: usize) -> Result<Vec<Bracket>> {
    form.validate()?;
    let h = (ARC_HI - ARC_LO) / (density as f64 + 1.0);
    let thetas: Vec<f64> = (1..=density).map(|j| ARC_LO + j as f64 * h).collect();
    let vals = thetas.iter().map(|&t| arc_real(form, t)).collect::<Result<Vec<_>>>()?;
    Ok(sign_change_brackets(&thetas, &vals))
}

fn sign_change_brackets(xs: &[f64], vals: &[f64]) -> Vec<Bracket> {
    let mut out = Vec::new();
    for i in 1..xs.len() {
        let (a, b) = (vals[i - 1], vals[i]);
        if a != 0.0 && b != 0.0 && (a > 0.0) != (b > 0.0) {
            out.push(Bracket { lo: xs[i - 1], hi: xs[i], f_lo: a, f_hi: b });
        }
    }
    out
}

/// Sign scan at the sample points `θ_m` followed by bisection.
///
/// When the sample signs yield fewer than `expected_count - 1` brackets, a
/// uniform [`FALLBACK_DENSITY`]-point grid over the open arc is scanned
/// instead.
pub fn scan_and_refine(form: &FormSpec) -> Result<ScanOutcome> {
    form.validate()?;
    let pts = sample_points(form);
    let samples = pts
        .iter()
        .map(|p| Ok((*p, form.eval(p.theta)?.real_part)))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = samples.iter().map(|(p, _)| p.theta.get()).collect();
    let vs: Vec<f64> = samples.iter().map(|(_, v)| *v).collect();
    let mut brackets = sign_change_brackets(&xs, &vs);
    let needed = expected_count(form).saturating_sub(1);
    let used_fallback = brackets.len() < needed;
    if used_fallback {
        brackets = grid_brackets(form, FALLBACK_DENSITY)?;
    }

    let f = |t: f64| -> Result<f64> { arc_real(form, t) };
    let mut zeros = Vec::new();
    let mut stalled = Vec::new();
    let mut flagged = Vec::new();
    for b in brackets {
        let floor = noise_floor(form, b)?;
        let r = bisect(f, b, floor)?;
        if r.stalled {
            stalled.push(b);
            continue;
        }
        let near_end = (r.at - ARC_LO).abs() < ENDPOINT_EXCLUSION
            || (ARC_HI - r.at).abs() < ENDPOINT_EXCLUSION;
        let rec = ZeroRecord {
            theta_hat: r.at,
            tau_hat: Complex64::from_polar(1.0, r.at),
            residual: r.residual,
            bracket_width: r.width,
            local_scale: r.scale,
            multiplicity_note: if near_end {
                MultiplicityNote::EndpointForced
            } else {
                MultiplicityNote::Simple
            },
        };
        if near_end {
            flagged.push(rec);
        } else {
            zeros.push(rec);
        }
    }
    zeros.sort_by(|a, b| a.theta_hat.total_cmp(&b.theta_hat));
    Ok(ScanOutcome {
        form: *form,
        zeros,
        samples,
        used_fallback,
        stalled,
        flagged_near_endpoint: flagged,
    })
}

fn noise_floor(form: &FormSpec, b: Bracket) -> Result<f64> {
    let lo = form.eval(ArcAngle::new(b.lo)?)?.abs_error_bound;
    let hi = form.eval(ArcAngle::new(b.hi)?)?.abs_error_bound;
    Ok(10.0 * lo.max(hi))
}

/// The real restriction `y ↦ (E_k E_l - E_{k+l})(-1/2 + iy)`.
///
/// All q-coefficients are real and `q = -e^{-2πy}` is real on this line, so
/// the value is real; the imaginary part is checked, not assumed. The
/// constant terms are cancelled analytically: with `T = E - 1` the value is
/// `T_k + T_l + T_k T_l - T_{k+l}`.
pub fn left_boundary_value(k: Weight, l: Weight, y: f64) -> Result<(f64, f64)> {
    let tau = UpperHalfPoint::new(-0.5, y)?;
    let kl = Weight::new(k.get() + l.get())?;
    let tk = eisenstein::eval_nonconstant(k, tau)?;
    let tl = eisenstein::eval_nonconstant(l, tau)?;
    let tkl = eisenstein::eval_nonconstant(kl, tau)?;
    let v = tk.value + tl.value + tk.value * tl.value - tkl.value;
    let scale = 1.0 + tk.value.norm() + tl.value.norm() + tkl.value.norm()
        + tk.value.norm() * tl.value.norm();
    if v.im.abs() > 1e-10 * scale {
        return Err(Error::NotReal { imag: v.im, scale });
    }
    let err = tk.abs_error_bound * (1.0 + tl.value.norm())
        + tl.abs_error_bound * (1.0 + tk.value.norm())
        + tkl.abs_error_bound;
    Ok((v.re, err))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryScan {
    pub k: u32,
    pub l: u32,
    pub y_max: f64,
    pub zeros: Vec<BoundaryZeroRecord>,
    pub stalled: Vec<Bracket>,
    pub flagged_near_rho: Vec<BoundaryZeroRecord>,
    pub warnings: Vec<String>,
}

pub const DEFAULT_Y_MAX: f64 = 4.0;

/// Zeros of the cusp form `E_k E_l - E_{k+l}` on `{-1/2 + iy : √3/2 < y <= y_max}`.
pub fn locate_left_boundary(k: Weight, l: Weight, y_max: f64) -> Result<BoundaryScan> {
    locate_left_boundary_form(
        &FormSpec::ProductSum { k: k.get(), l: l.get(), sign: Sign::Minus },
        y_max,
    )
}

/// As [`locate_left_boundary`], taking the form explicitly; anything other
/// than a minus-sign product with `k > l >= 14` is rejected.
pub fn locate_left_boundary_form(form: &FormSpec, y_max: f64) -> Result<BoundaryScan> {
    form.validate()?;
    let FormSpec::ProductSum { k, l, sign: Sign::Minus } = *form else {
        return Err(Error::InvalidForm(format!(
            "left-boundary search applies to E_k E_l - E_(k+l) only, got {form}"
        )));
    };
    if l < 14 {
        return Err(Error::Hypothesis(format!("left-boundary search needs l >= 14, got {l}")));
    }
    if !(y_max >= 2.0) {
        return Err(Error::InvalidArgument(format!("y_max = {y_max} must be at least 2")));
    }
    let (wk, wl) = (Weight::new(k)?, Weight::new(l)?);
    let y0 = 3f64.sqrt() / 2.0;
    let h = (y_max - y0) / BOUNDARY_DENSITY as f64;
    let ys: Vec<f64> = (1..=BOUNDARY_DENSITY).map(|j| y0 + j as f64 * h).collect();
    let evals = ys
        .iter()
        .map(|&y| left_boundary_value(wk, wl, y))
        .collect::<Result<Vec<_>>>()?;
    let vals: Vec<f64> = evals.iter().map(|e| e.0).collect();

    let mut warnings = Vec::new();
    // E_k E_l - E_{k+l} = a_1 q + O(q²) with a_1 = c_k + c_l - c_{k+l}
    let a1 = qexp_coefficient_scale(wk) + qexp_coefficient_scale(wl)
        - qexp_coefficient_scale(Weight::new(k + l)?);
    let q_end = -(-2.0 * std::f64::consts::PI * y_max).exp();
    let predicted = a1 * q_end;
    let last = *vals.last().expect("non-empty grid");
    if (last > 0.0) != (predicted > 0.0) || ((last - predicted) / predicted).abs() > 0.5 {
        warnings.push(format!(
            "y_max = {y_max} may be too small: value {last:e} has not settled on the \
             leading term a_1 q = {predicted:e}"
        ));
    }

    let f = |y: f64| -> Result<f64> { Ok(left_boundary_value(wk, wl, y)?.0) };
    let mut zeros = Vec::new();
    let mut stalled = Vec::new();
    let mut flagged = Vec::new();
    for b in sign_change_brackets(&ys, &vals) {
        let floor = 10.0 * left_boundary_value(wk, wl, b.lo)?.1.max(left_boundary_value(wk, wl, b.hi)?.1);
        let r = bisect(f, b, floor)?;
        if r.stalled {
            stalled.push(b);
            continue;
        }
        let rec = BoundaryZeroRecord {
            y_hat: r.at,
            tau_hat: Complex64::new(-0.5, r.at),
            residual: r.residual,
            bracket_width: r.width,
            local_scale: r.scale,
        };
        if r.at - y0 < ENDPOINT_EXCLUSION {
            flagged.push(rec);
        } else {
            zeros.push(rec);
        }
    }
    Ok(BoundaryScan { k, l, y_max, zeros, stalled, flagged_near_rho: flagged, warnings })
}
