//! Zero accounting for the cusp form `E_k E_l - E_{k+l}`.
//!
//! Its constant term cancels, so `ν_∞ = 1`, and its remaining zeros are not
//! confined to the arc: some sit on the left boundary `Re τ = -1/2`.

use super::{valence_budget, ValenceBudget, VerificationReport, Witness};
use crate::arc::{FormSpec, Sign};
use crate::error::Result;
use crate::zeros::{locate_left_boundary_form, scan_and_refine, BoundaryScan, ScanOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct MinusOutcome {
    pub arc: ScanOutcome,
    pub boundary: BoundaryScan,
    pub budget: ValenceBudget,
    pub report: VerificationReport,
}

/// Arc zeros plus left-boundary zeros must exhaust the interior budget of
/// weight `k + l` once `ν_∞ = 1` and the forced elliptic orders are taken
/// out.
pub fn verify_minus_accounting(k: u32, l: u32, y_max: f64, residual_tol: f64) -> Result<MinusOutcome> {
    let form = FormSpec::product_sum(k, l, Sign::Minus)?;
    let boundary = locate_left_boundary_form(&form, y_max)?;
    let arc = scan_and_refine(&form)?;
    let budget = valence_budget(k + l, 1)?;

    let (na, nb) = (arc.zeros.len() as u32, boundary.zeros.len() as u32);
    let tag = |w: Witness| w.param("k", k).param("l", l).param("weight", k + l);
    let lhs = 12 * budget.nu_inf + 6 * budget.nu_i_min + 4 * budget.nu_rho_min + 12 * (na + nb);
    let worst_res = arc
        .zeros
        .iter()
        .map(|z| z.residual / z.local_scale)
        .chain(boundary.zeros.iter().map(|z| z.residual / z.local_scale))
        .fold(0.0, f64::max);
    let witnesses = vec![
        tag(Witness::equals("arc + left-boundary zeros", (na + nb) as f64, budget.interior as f64))
            .param("arc_zeros", na)
            .param("boundary_zeros", nb)
            .param("nu_inf", budget.nu_inf)
            .param("nu_i", budget.nu_i_min)
            .param("nu_rho", budget.nu_rho_min),
        tag(Witness::equals("12 * valence total", lhs as f64, (k + l) as f64)),
        tag(Witness::at_most("max residual / local scale", worst_res, residual_tol)),
        tag(Witness::equals(
            "unresolved brackets",
            (arc.stalled.len() + boundary.stalled.len()) as f64,
            0.0,
        )),
        tag(Witness::equals("boundary scan warnings", boundary.warnings.len() as f64, 0.0))
            .advisory(),
    ];
    let report = VerificationReport::from_witnesses(
        "minus.valence_accounting",
        format!("k={k} l={l} y_max={y_max}"),
        witnesses,
        boundary.warnings.join("; "),
    );
    Ok(MinusOutcome { arc, boundary, budget, report })
}
