use num_complex::Complex64;
use std::f64::consts::PI;

use super::bernoulli::{ln_abs_bernoulli, ln_divisor_sum, zeta_upper};
use super::{SeriesValue, UpperHalfPoint, Weight};
use crate::error::{Error, Result};

/// Cap on the number of q-expansion terms in adaptive mode.
pub const MAX_TERMS: usize = 200;

const REL_TARGET: f64 = 1e-14;

/// `(ln |c_k|, sign c_k)` where `c_k = -2k / B_k` is the multiplier of
/// `σ_{k-1}(n)` in the q-expansion.
pub fn qexp_coefficient_log_scale(k: Weight) -> (f64, f64) {
    let (ln_b, sign_b) = ln_abs_bernoulli(k.get());
    ((2.0 * k.get() as f64).ln() - ln_b, -sign_b)
}

/// `c_k = -2k / B_k`. Underflows to zero once `k` is beyond roughly 300; use
/// [`qexp_coefficient_log_scale`] there.
pub fn qexp_coefficient_scale(k: Weight) -> f64 {
    let (ln_c, sign) = qexp_coefficient_log_scale(k);
    sign * ln_c.exp()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct QSeries {
    /// `Σ_{n=1}^{N} c_k σ_{k-1}(n) qⁿ`
    pub nonconstant: Complex64,
    pub truncation: f64,
    /// Estimated floating-point error of the partial sum.
    pub rounding: f64,
    /// Number of non-constant terms summed.
    #[cfg_attr(not(test), allow(dead_code))]
    pub terms: usize,
}

struct Majorant {
    ln_front: f64,
    km1: f64,
    ln_q: f64,
}

impl Majorant {
    // u_n = |c_k| ζ(k-1) n^{k-1} |q|^n  >=  |c_k σ_{k-1}(n) qⁿ|
    fn ln_term(&self, n: usize) -> f64 {
        self.ln_front + self.km1 * (n as f64).ln() + n as f64 * self.ln_q
    }

    fn ratio(&self, n: usize) -> f64 {
        ((n as f64 + 1.0) / n as f64).powf(self.km1) * self.ln_q.exp()
    }

    /// Bound on `Σ_{n > N} u_n`. Terms still growing are summed explicitly
    /// until the consecutive ratio drops below one.
    fn tail_after(&self, n_terms: usize) -> f64 {
        let mut j = n_terms + 1;
        let mut acc = 0.0;
        loop {
            let r = self.ratio(j);
            let u = self.ln_term(j).exp();
            if r < 1.0 {
                return acc + u / (1.0 - r);
            }
            acc += u;
            j += 1;
        }
    }
}

pub(crate) fn qexp_series(k: Weight, tau: UpperHalfPoint, n_terms: Option<usize>) -> Result<QSeries> {
    if tau.im() < 0.5 {
        return Err(Error::QExpansionOutOfRange(tau.im()));
    }
    if n_terms == Some(0) {
        return Err(Error::InvalidArgument("n_terms must be at least 1".into()));
    }
    let (ln_c, sign_c) = qexp_coefficient_log_scale(k);
    let km1 = k.get() - 1;
    let ln_q = -2.0 * PI * tau.im();
    let majorant = Majorant {
        ln_front: ln_c + zeta_upper(km1 as f64).ln(),
        km1: km1 as f64,
        ln_q,
    };
    let x = tau.re();
    let limit = n_terms.unwrap_or(MAX_TERMS);

    let mut sum = Complex64::new(0.0, 0.0);
    let mut rounding = 0.0;
    let mut n = 0;
    let mut truncation;
    loop {
        n += 1;
        let ln_mag = ln_c + ln_divisor_sum(n as u64, km1) + n as f64 * ln_q;
        let mag = ln_mag.exp();
        // phase 2π·frac(n·x) keeps the argument small
        let phase = 2.0 * PI * (n as f64 * x).rem_euclid(1.0);
        sum += Complex64::from_polar(sign_c * mag, phase);
        // exp() amplifies the error of ln_mag; the phase carries n·x's error
        rounding += f64::EPSILON * mag * (ln_mag.abs() + 2.0 * PI * n as f64 * (x.abs() + 1.0) + 8.0);
        truncation = majorant.tail_after(n);
        if n >= limit {
            break;
        }
        if n_terms.is_none() {
            let partial = (Complex64::new(1.0, 0.0) + sum).norm();
            if truncation < REL_TARGET * partial || truncation < rounding {
                break;
            }
        }
    }
    rounding += f64::EPSILON * n as f64 * (1.0 + sum.norm());
    Ok(QSeries { nonconstant: sum, truncation, rounding, terms: n })
}

/// Truncated q-expansion with exactly `n_terms` non-constant terms.
///
/// `abs_error_bound` is the geometric-majorant tail bound plus an estimate of
/// the accumulated rounding error, which dominates for large weights.
pub fn eval_qexp(k: Weight, tau: UpperHalfPoint, n_terms: usize) -> Result<SeriesValue> {
    let s = qexp_series(k, tau, Some(n_terms))?;
    Ok(SeriesValue {
        value: Complex64::new(1.0, 0.0) + s.nonconstant,
        abs_error_bound: s.truncation + s.rounding,
    })
}

/// Truncated q-expansion stopping at the first `N` whose tail majorant falls
/// below `1e-14` of the partial sum (or below the rounding floor), capped at
/// [`MAX_TERMS`].
pub fn eval_qexp_adaptive(k: Weight, tau: UpperHalfPoint) -> Result<SeriesValue> {
    let s = qexp_series(k, tau, None)?;
    Ok(SeriesValue {
        value: Complex64::new(1.0, 0.0) + s.nonconstant,
        abs_error_bound: s.truncation + s.rounding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: u32) -> Weight {
        Weight::new(k).unwrap()
    }

    #[test]
    fn coefficient_scale_matches_classical_values() {
        assert!((qexp_coefficient_scale(w(4)) - 240.0).abs() < 1e-11);
        assert!((qexp_coefficient_scale(w(6)) + 504.0).abs() < 1e-11);
        assert!((qexp_coefficient_scale(w(12)) - 65520.0 / 691.0).abs() < 1e-12);
        assert!((qexp_coefficient_scale(w(8)) - 480.0).abs() < 1e-11);
    }

    #[test]
    fn coefficient_sign_alternates() {
        for k in (4..=120).step_by(2) {
            let (_, s) = qexp_coefficient_log_scale(w(k));
            let expected = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(s, expected, "k={k}");
        }
    }

    #[test]
    fn cusp_limit_is_one() {
        let tau = UpperHalfPoint::new(0.3, 50.0).unwrap();
        let v = eval_qexp(w(4), tau, 5).unwrap();
        assert!((v.value - 1.0).norm() < 1e-30);
    }

    #[test]
    fn forced_zero_at_rho() {
        let rho = UpperHalfPoint::new(-0.5, 3f64.sqrt() / 2.0).unwrap();
        let v = eval_qexp(w(4), rho, 30).unwrap();
        assert!(v.value.norm() < 1e-10, "{}", v.value);
    }

    #[test]
    fn known_first_coefficients() {
        // E_4 = 1 + 240q + 2160q² + ...; at a point with tiny q the first
        // two terms dominate
        let tau = UpperHalfPoint::new(0.0, 3.0).unwrap();
        let q = (-2.0 * PI * 3.0f64).exp();
        let s = qexp_series(w(4), tau, Some(40)).unwrap();
        assert_eq!(s.terms, 40);
        let approx = 240.0 * q + 2160.0 * q * q + 6720.0 * q.powi(3);
        assert!((s.nonconstant.re - approx).abs() < 1e-14 * approx);
    }

    #[test]
    fn rejects_low_points_and_zero_terms() {
        let low = UpperHalfPoint::new(0.0, 0.4).unwrap();
        assert!(matches!(eval_qexp(w(4), low, 10), Err(Error::QExpansionOutOfRange(_))));
        let ok = UpperHalfPoint::new(0.0, 1.0).unwrap();
        assert!(eval_qexp(w(4), ok, 0).is_err());
    }

    #[test]
    fn adaptive_term_count_is_small_on_arc() {
        let tau = UpperHalfPoint::on_unit_circle(0.6 * PI).unwrap();
        let s = qexp_series(w(12), tau, None).unwrap();
        assert!(s.terms <= 20, "{}", s.terms);
        assert!(s.truncation + s.rounding < 1e-12);
    }

    #[test]
    fn bound_is_finite_for_large_weight() {
        let tau = UpperHalfPoint::new(-0.5, 0.9).unwrap();
        let v = eval_qexp(w(400), tau, 3).unwrap();
        assert!(v.abs_error_bound.is_finite());
    }
}
