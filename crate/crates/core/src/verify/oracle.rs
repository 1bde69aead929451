use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{VerificationReport, Witness};
use crate::eisenstein::{eval_lattice, eval_qexp_adaptive, UpperHalfPoint, Weight};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRequest {
    pub weights: Vec<u32>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for OracleRequest {
    fn default() -> Self {
        OracleRequest { weights: vec![4, 6, 8, 10, 12, 16, 24], samples: 20, seed: 1, tolerance: 1e-9 }
    }
}

/// Lattice radius for the cross-check. The coprime sum converges like
/// `R^{2-k}`, so weight 4 needs a much larger disk than the rest.
pub fn oracle_radius(k: u32) -> u32 {
    match k {
        4 => 1000,
        6 => 200,
        _ => 100,
    }
}

/// Points with `Re τ ∈ [-1/2, 1/2]`, `Im τ ∈ [0.8, 2]`, reproducible from
/// the seed.
pub fn oracle_points(samples: usize, seed: u64) -> Vec<UpperHalfPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let re = rng.gen_range(-0.5..=0.5);
            let im = rng.gen_range(0.8..=2.0);
            UpperHalfPoint::new(re, im).expect("positive imaginary part")
        })
        .collect()
}

/// Relative disagreement between the q-expansion and the lattice sum.
pub fn verify_oracle_equivalence(req: &OracleRequest) -> Result<VerificationReport> {
    if req.samples == 0 || req.weights.is_empty() {
        return Err(Error::InvalidArgument("oracle check needs weights and samples".into()));
    }
    let pts = oracle_points(req.samples, req.seed);
    let witnesses: Vec<Witness> = req
        .weights
        .par_iter()
        .map(|&k| {
            let w = Weight::new(k)?;
            let radius = oracle_radius(k);
            let mut worst = (0.0f64, 0usize);
            for (i, &tau) in pts.iter().enumerate() {
                let q = eval_qexp_adaptive(w, tau)?.value;
                let lat = eval_lattice(w, tau, radius)?.value;
                let rel = (q - lat).norm() / q.norm();
                if rel > worst.0 || i == 0 {
                    worst = (rel, i);
                }
            }
            let tau = pts[worst.1];
            Ok(Witness::at_most("max relative |qexp - lattice|", worst.0, req.tolerance)
                .param("k", k)
                .param("radius", radius)
                .param("sample", worst.1 as u64)
                .param("tau_re", tau.re())
                .param("tau_im", tau.im()))
        })
        .collect::<Result<_>>()?;
    let ks: Vec<String> = req.weights.iter().map(|k| k.to_string()).collect();
    Ok(VerificationReport::from_witnesses(
        "oracle.qexp_vs_lattice",
        format!("k={{{}}} samples={} seed={}", ks.join(","), req.samples, req.seed),
        witnesses,
        "lattice radius 1000 (k = 4), 200 (k = 6), 100 otherwise",
    ))
}
