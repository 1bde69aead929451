use num_complex::Complex64;
use proptest::prelude::*;

use eisenzeros::arc::{ArcAngle, ARC_HI, ARC_LO};
use eisenzeros::eisenstein::{eval, eval_lattice, eval_qexp_adaptive};
use eisenzeros::grid::{decompose_weight, expected_count};
use eisenzeros::verify::{oracle_radius, valence_budget, verify_oracle_equivalence, OracleRequest, Status};
use eisenzeros::{FormSpec, Sign, UpperHalfPoint, Weight};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn even(lo: u32, hi: u32) -> impl Strategy<Value = u32> {
    (lo / 2..=hi / 2).prop_map(|h| 2 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic_in_re(k in even(4, 60), re in -0.5f64..0.5, im in 0.6f64..3.0, shift in -3i32..=3) {
        let w = Weight::new(k).unwrap();
        let a = eval(w, UpperHalfPoint::new(re, im).unwrap()).unwrap();
        let b = eval(w, UpperHalfPoint::new(re + shift as f64, im).unwrap()).unwrap();
        prop_assert!(rel(a.value, b.value) < 1e-10);
    }

    #[test]
    fn conjugation_symmetry(k in even(4, 100), re in -0.5f64..0.5, im in 0.3f64..3.0) {
        let w = Weight::new(k).unwrap();
        let a = eval(w, UpperHalfPoint::new(re, im).unwrap()).unwrap();
        let b = eval(w, UpperHalfPoint::new(-re, im).unwrap()).unwrap();
        prop_assert!(rel(a.value, b.value.conj()) < 1e-10);
    }

    #[test]
    fn counting_identities(w in even(4, 400)) {
        let d = decompose_weight(w).unwrap();
        prop_assert_eq!(12 * d.n + d.s, w);
        let on_grid = (0..=w).filter(|&m| 4 * m >= w && 3 * m <= w).count();
        prop_assert_eq!(expected_count(&FormSpec::single(w).unwrap()), on_grid);
        let b = valence_budget(w, 0).unwrap();
        prop_assert!(b.identity_holds());
        prop_assert_eq!(12 * b.interior + 6 * b.nu_i_min + 4 * b.nu_rho_min, w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // lattice at -1/τ against τ^k times the q-expansion at τ
    #[test]
    fn modular_inversion(k in even(8, 24), re in -0.5f64..0.5, im in 0.9f64..1.6) {
        let w = Weight::new(k).unwrap();
        let tau = Complex64::new(re, im);
        let inv = UpperHalfPoint::from_complex(-tau.inv()).unwrap();
        let lat = eval_lattice(w, inv, oracle_radius(k)).unwrap();
        let q = eval_qexp_adaptive(w, UpperHalfPoint::new(re, im).unwrap()).unwrap();
        prop_assert!(rel(lat.value, q.value * tau.powi(k as i32)) < 1e-9);
    }

    #[test]
    fn oracle_agrees_for_any_seed(seed in any::<u64>()) {
        let req = OracleRequest { weights: vec![8, 12, 20], samples: 4, seed, tolerance: 1e-9 };
        prop_assert_eq!(verify_oracle_equivalence(&req).unwrap().status, Status::Pass);
    }
}

fn arc_grid(points: usize) -> impl Iterator<Item = ArcAngle> {
    let h = (ARC_HI - ARC_LO) / (points - 1) as f64;
    (0..points).map(move |j| ArcAngle::new(if j + 1 == points { ARC_HI } else { ARC_LO + j as f64 * h }).unwrap())
}

#[test]
fn real_on_the_arc() {
    let forms = [
        FormSpec::single(4).unwrap(),
        FormSpec::single(98).unwrap(),
        FormSpec::power_sum(2, 40).unwrap(),
        FormSpec::power_sum(3, 34).unwrap(),
        FormSpec::product_sum(30, 22, Sign::Plus).unwrap(),
        FormSpec::product_sum(30, 22, Sign::Minus).unwrap(),
    ];
    for form in forms {
        for t in arc_grid(1000) {
            let v = form.eval(t).unwrap();
            assert!(v.leak_ok(), "{form} at {}: leak {:e}", t.get(), v.imag_leak);
        }
    }
}
