//! `E_kⁿ + E_{nk}` for `n >= 4`, where the sample-point argument is not
//! expected to close. Everything here is evidence, never a verdict.

use rayon::prelude::*;

use super::{valence_budget, EvenRange, Status, VerificationReport, Witness};
use crate::arc::{remainder_bound_power, FormSpec};
use crate::error::{Error, Result};
use crate::grid::sample_points;
use crate::zeros::scan_and_refine;
use crate::MAX_WEIGHT;

#[derive(Debug, Clone, PartialEq)]
pub struct ExploreRequest {
    pub n: u32,
    pub k: EvenRange,
}

fn explore_one(n: u32, k: u32) -> Result<Vec<Witness>> {
    let form = FormSpec::power_sum_exploratory(n, k)?;
    let bound = remainder_bound_power(n, k);
    let mut out = Vec::new();
    for p in sample_points(&form) {
        let margin = p.parity.sign() * form.main_term(p.theta);
        if margin <= bound {
            out.push(
                Witness::at_least("remainder bound reaches main-term margin", margin, bound)
                    .advisory()
                    .param("kind", "proof_failure")
                    .param("n", n)
                    .param("k", k)
                    .param("m", p.m)
                    .param("theta", p.theta.get()),
            );
        }
    }

    let scan = scan_and_refine(&form)?;
    let budget = valence_budget(form.weight(), 0)?;
    let found = scan.zeros.len() as u32;
    let mut w = Witness::equals("interior arc zeros vs valence budget", found as f64, budget.interior as f64)
        .advisory()
        .param("n", n)
        .param("k", k)
        .param("weight", budget.weight)
        .param("budget_interior", budget.interior)
        .param("nu_i", budget.nu_i_min)
        .param("nu_rho", budget.nu_rho_min)
        .param("arc_zeros", found)
        .param("used_fallback", scan.used_fallback);
    if found < budget.interior {
        w = w
            .param("kind", "off_arc_candidate")
            .param("deficit", budget.interior - found)
            .param(
                "budget",
                format!(
                    "{} = 12*{} + 6*{} + 4*{}; arc holds {found}, {} unaccounted",
                    budget.weight,
                    budget.interior,
                    budget.nu_i_min,
                    budget.nu_rho_min,
                    budget.interior - found
                ),
            );
    } else {
        w = w.param("kind", "count");
    }
    out.push(w);
    Ok(out)
}

/// Where the bound-versus-margin argument breaks for `n ∈ 4..=6`, and whether
/// the arc still carries the full zero budget. The report status is `warn`
/// whenever any evidence of either kind turns up, `pass` otherwise; it is
/// never `fail`.
pub fn explore_higher_n(req: &ExploreRequest) -> Result<VerificationReport> {
    if !(4..=6).contains(&req.n) {
        return Err(Error::InvalidArgument(format!("n = {} must lie in 4..=6", req.n)));
    }
    if req.n * req.k.last() > MAX_WEIGHT {
        return Err(Error::WeightTooLarge(req.n * req.k.last()));
    }
    let ks: Vec<u32> = req.k.values().collect();
    let per_k: Vec<Vec<Witness>> =
        ks.par_iter().map(|&k| explore_one(req.n, k)).collect::<Result<_>>()?;
    let witnesses: Vec<Witness> = per_k.into_iter().flatten().collect();
    let failures = witnesses
        .iter()
        .filter(|w| w.parameters.get("kind").and_then(|v| v.as_str()) == Some("proof_failure"))
        .count();
    let candidates = witnesses
        .iter()
        .filter(|w| w.parameters.get("kind").and_then(|v| v.as_str()) == Some("off_arc_candidate"))
        .count();
    let mut r = VerificationReport::from_witnesses(
        format!("explore.n{}", req.n),
        format!("n={} k={}", req.n, req.k),
        witnesses,
        format!(
            "evidence only: {failures} proof-failure witnesses, {candidates} off-arc candidates"
        ),
    );
    debug_assert_ne!(r.status, Status::Fail);
    r.status = r.status.min(Status::Warn);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_has_proof_failures() {
        let r = explore_higher_n(&ExploreRequest { n: 4, k: "10:30".parse().unwrap() }).unwrap();
        assert_eq!(r.status, Status::Warn);
        assert!(r
            .witnesses
            .iter()
            .any(|w| w.parameters["kind"] == "proof_failure" && !w.holds));
        // one count witness per k
        let counts = r.witnesses.iter().filter(|w| w.label.starts_with("interior")).count();
        assert_eq!(counts, 11);
    }

    #[test]
    fn small_n_rejected() {
        assert!(explore_higher_n(&ExploreRequest { n: 2, k: "12:12".parse().unwrap() }).is_err());
        assert!(explore_higher_n(&ExploreRequest { n: 7, k: "12:12".parse().unwrap() }).is_err());
    }
}
