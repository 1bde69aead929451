use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::PI;

use super::{SeriesValue, UpperHalfPoint, Weight};
use crate::error::{Error, Result};

pub const DEFAULT_RADIUS: u32 = 50;

/// Smallest eigenvalue of the quadratic form `|cτ + d|²` in `(c, d)`, so that
/// `|cτ + d|² >= λ (c² + d²)`.
fn min_eigenvalue(tau: UpperHalfPoint) -> f64 {
    let (x, y) = (tau.re(), tau.im());
    let a = x * x + y * y;
    let tr = a + 1.0;
    let disc = ((a - 1.0) * (a - 1.0) + 4.0 * x * x).sqrt();
    // λ_min = det / λ_max avoids cancellation when y is small
    let det = y * y;
    det / (0.5 * (tr + disc))
}

/// Bound on `½ Σ |cτ + d|^{-k}` over all pairs with `c² + d² > radius²`.
///
/// At most `π(1+√2)(2j+1)` lattice points lie in the shell `j < |v| <= j+1`,
/// each contributing at most `(λ j²)^{-k/2}`; the shell sum is closed with the
/// integral test.
pub fn lattice_tail_bound(k: Weight, tau: UpperHalfPoint, radius: u32) -> f64 {
    let k = k.get() as f64;
    let r = radius as f64;
    let lambda = min_eigenvalue(tau);
    let ln_shells = (3.0f64).ln() + (1.0 - k) * r.ln() + (1.0 + r / (k - 2.0)).ln();
    let ln_bound = (0.5 * PI * (1.0 + 2f64.sqrt())).ln() - 0.5 * k * lambda.ln() + ln_shells;
    ln_bound.exp()
}

/// Truncated coprime lattice sum `½ Σ_{gcd(c,d)=1, c²+d² <= radius²} (cτ+d)^{-k}`.
///
/// The pairs `(c, d)` and `(-c, -d)` contribute equally for even `k`, so only
/// `c > 0` (and the pair `(0, 1)`) is visited.
pub fn eval_lattice(k: Weight, tau: UpperHalfPoint, radius: u32) -> Result<SeriesValue> {
    if radius < 2 {
        return Err(Error::InvalidRadius(radius));
    }
    let kk = k.get() as i32;
    let z = tau.to_complex();
    let r = radius as i64;
    let r2 = r * r;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut abs_sum = 1.0;
    for c in 1..=r {
        let dmax = ((r2 - c * c) as f64).sqrt().floor() as i64;
        let cz = z * c as f64;
        let mut row = Complex64::new(0.0, 0.0);
        for d in -dmax..=dmax {
            if c.gcd(&d) != 1 {
                continue;
            }
            let t = (cz + d as f64).inv().powi(kk);
            abs_sum += t.norm();
            row += t;
        }
        sum += row;
    }
    // powi(k) turns the relative error of 1/(cτ+d) into k times as much
    let rounding = f64::EPSILON * abs_sum * (2.0 * kk as f64 + 2.0 * (kk as f64).log2() + 8.0);
    Ok(SeriesValue {
        value: sum,
        abs_error_bound: lattice_tail_bound(k, tau, radius) + rounding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: u32) -> Weight {
        Weight::new(k).unwrap()
    }

    #[test]
    fn eigenvalue_on_arc() {
        // |τ| = 1, Re τ = x gives λ = 1 - |x|
        let rho = UpperHalfPoint::new(-0.5, 3f64.sqrt() / 2.0).unwrap();
        assert!((min_eigenvalue(rho) - 0.5).abs() < 1e-15);
        let i = UpperHalfPoint::new(0.0, 1.0).unwrap();
        assert!((min_eigenvalue(i) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvalue_bounds_quadratic_form() {
        let tau = UpperHalfPoint::new(0.37, 0.61).unwrap();
        let lam = min_eigenvalue(tau);
        for c in -20i64..=20 {
            for d in -20i64..=20 {
                if c == 0 && d == 0 {
                    continue;
                }
                let q = (tau.to_complex() * c as f64 + d as f64).norm_sqr();
                assert!(q >= lam * (c * c + d * d) as f64 * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        let tau = UpperHalfPoint::on_unit_circle(0.58 * PI).unwrap();
        for k in [6u32, 12, 20] {
            let inner = eval_lattice(w(k), tau, 6).unwrap();
            let outer = eval_lattice(w(k), tau, 200).unwrap();
            let diff = (inner.value - outer.value).norm();
            assert!(diff <= lattice_tail_bound(w(k), tau, 6), "k={k}");
        }
    }

    #[test]
    fn forced_zeros() {
        let rho = UpperHalfPoint::new(-0.5, 3f64.sqrt() / 2.0).unwrap();
        let v = eval_lattice(w(4), rho, 40).unwrap();
        assert!(v.value.norm() < v.abs_error_bound + 1e-6);
        let i = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let v = eval_lattice(w(6), i, 40).unwrap();
        assert!(v.value.norm() < v.abs_error_bound + 1e-6);
    }

    #[test]
    fn rejects_small_radius() {
        let i = UpperHalfPoint::new(0.0, 1.0).unwrap();
        assert_eq!(eval_lattice(w(4), i, 1), Err(Error::InvalidRadius(1)));
    }
}
