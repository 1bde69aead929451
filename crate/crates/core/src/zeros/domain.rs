use crate::eisenstein::UpperHalfPoint;

/// Iteration cap for the reduction loop. Each inversion at least doubles
/// `Im τ` once `|Re τ| <= 1/2` and `|τ| < 1`, so the cap is never reached for
/// inputs with `Im τ > 2^{-60}`.
const MAX_STEPS: usize = 10_000;

/// Relative slack on `|τ|² = 1` when deciding whether the inversion is needed.
const UNIT_SLACK: f64 = 1e-14;

/// Reduce `τ` into the standard fundamental domain
/// `{|τ| > 1, 0 < Re τ < 1/2} ∪ {|τ| >= 1, -1/2 <= Re τ <= 0}`.
///
/// Returns the reduced point and `[a, b, c, d]` with `ad - bc = 1` such that
/// the reduced point is `(aτ + b)/(cτ + d)`.
pub fn reduce_to_fundamental_domain(tau: UpperHalfPoint) -> (UpperHalfPoint, [i64; 4]) {
    let (mut x, mut y) = (tau.re(), tau.im());
    let mut g = [1i64, 0, 0, 1];
    for _ in 0..MAX_STEPS {
        let shift = (x + 0.5).floor();
        if shift != 0.0 {
            x -= shift;
            let s = shift as i64;
            // T^{-s} · g
            g = [g[0] - s * g[2], g[1] - s * g[3], g[2], g[3]];
        }
        let r2 = x * x + y * y;
        let inside = r2 < 1.0 - UNIT_SLACK;
        let right_arc = (r2 - 1.0).abs() <= UNIT_SLACK && x > 0.0;
        if !(inside || right_arc) {
            break;
        }
        // S: τ ↦ -1/τ
        x = -x / r2;
        y /= r2;
        g = [-g[2], -g[3], g[0], g[1]];
    }
    let reduced = UpperHalfPoint::new(x, y).expect("reduction preserves the upper half plane");
    (reduced, g)
}

/// Membership in the closed-left/open-right fundamental domain, with the
/// same unit-circle slack the reduction uses.
pub fn in_fundamental_domain(tau: UpperHalfPoint) -> bool {
    let (x, y) = (tau.re(), tau.im());
    let r2 = x * x + y * y;
    if x < -0.5 || x >= 0.5 {
        return false;
    }
    if x > 0.0 {
        r2 > 1.0 + UNIT_SLACK
    } else {
        r2 >= 1.0 - UNIT_SLACK
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn apply(g: [i64; 4], tau: UpperHalfPoint) -> Complex64 {
        let z = tau.to_complex();
        (z * g[0] as f64 + g[1] as f64) / (z * g[2] as f64 + g[3] as f64)
    }

    #[test]
    fn translation_example() {
        let tau = UpperHalfPoint::new(5.0, 1.0).unwrap();
        let (r, g) = reduce_to_fundamental_domain(tau);
        assert_eq!((r.re(), r.im()), (0.0, 1.0));
        assert_eq!(g, [1, -5, 0, 1]);
    }

    #[test]
    fn small_imaginary_part() {
        let tau = UpperHalfPoint::new(0.0, 0.25).unwrap();
        let (r, g) = reduce_to_fundamental_domain(tau);
        assert!(r.im() >= 3f64.sqrt() / 2.0);
        assert_eq!(g[0] * g[3] - g[1] * g[2], 1);
        assert!((apply(g, tau) - r.to_complex()).norm() < 1e-12);
        assert!(in_fundamental_domain(r));
    }

    #[test]
    fn rho_plus_one() {
        let s = 3f64.sqrt() / 2.0;
        let tau = UpperHalfPoint::new(0.5, s).unwrap();
        let (r, _) = reduce_to_fundamental_domain(tau);
        assert_eq!(r.re(), -0.5);
        assert!((r.to_complex().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn right_arc_maps_to_left_arc() {
        let tau = UpperHalfPoint::on_unit_circle(1.2).unwrap();
        let (r, g) = reduce_to_fundamental_domain(tau);
        assert!(r.re() < 0.0);
        assert_eq!(g, [0, -1, 1, 0]);
    }

    proptest! {
        #[test]
        fn reduction_properties(x in -50.0f64..50.0, y in 1e-3f64..20.0) {
            let tau = UpperHalfPoint::new(x, y).unwrap();
            let (r, g) = reduce_to_fundamental_domain(tau);
            prop_assert_eq!(g[0] * g[3] - g[1] * g[2], 1);
            prop_assert!(in_fundamental_domain(r));
            let image = apply(g, tau);
            prop_assert!((image - r.to_complex()).norm() < 1e-8 * (1.0 + r.im()));
            let (rr, gg) = reduce_to_fundamental_domain(r);
            prop_assert_eq!(rr, r);
            prop_assert_eq!(gg, [1, 0, 0, 1]);
        }
    }
}
