use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{valence_budget, EvenRange, ValenceBudget, VerificationReport, Witness};
use crate::arc::{FormSpec, Sign};
use crate::error::{Error, Result};
use crate::zeros::{grid_brackets, scan_and_refine, ScanOutcome, BRACKET_WIDTH, FALLBACK_DENSITY, RESIDUAL_TOL};
use crate::MAX_WEIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `E_k`, even `k >= 4`.
    Rsd,
    /// `E_k² + E_{2k}`, even `k >= 10`.
    Power2,
    /// `E_k³ + E_{3k}`, even `k >= 16`.
    Power3,
    /// `E_k E_l + E_{k+l}`, even `k > l >= 10`.
    ProductPlus,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Rsd => "rsd",
            Family::Power2 => "power2",
            Family::Power3 => "power3",
            Family::ProductPlus => "product-plus",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "rsd" | "single" => Ok(Family::Rsd),
            "power2" => Ok(Family::Power2),
            "power3" => Ok(Family::Power3),
            "product-plus" => Ok(Family::ProductPlus),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremRequest {
    pub family: Family,
    pub k: EvenRange,
    /// Required for [`Family::ProductPlus`], ignored otherwise.
    pub l: Option<EvenRange>,
    pub residual_tol: f64,
    /// Density of the independent uniform sign scan; 0 skips it.
    pub grid_check: usize,
}

impl TheoremRequest {
    pub fn new(family: Family, k: EvenRange) -> Self {
        TheoremRequest { family, k, l: None, residual_tol: RESIDUAL_TOL, grid_check: FALLBACK_DENSITY }
    }
}

/// Per-form result, kept so callers can emit the located zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleOutcome {
    pub scan: ScanOutcome,
    pub budget: ValenceBudget,
    /// Sign changes seen by the uniform scan, if it ran.
    pub grid_sign_changes: Option<usize>,
    pub witnesses: Vec<Witness>,
}

impl TupleOutcome {
    pub fn passed(&self) -> bool {
        self.witnesses.iter().all(|w| w.holds)
    }
}

fn forms(req: &TheoremRequest) -> Result<Vec<FormSpec>> {
    let hyp = |msg: String| Err(Error::Hypothesis(msg));
    let kmin = req.k.first();
    let out: Vec<FormSpec> = match req.family {
        Family::Rsd => {
            if kmin < 4 {
                return hyp(format!("E_k needs k >= 4, range starts at {kmin}"));
            }
            req.k.values().map(FormSpec::single).collect::<Result<_>>()?
        }
        Family::Power2 | Family::Power3 => {
            let (n, min) = if req.family == Family::Power2 { (2, 10) } else { (3, 16) };
            if kmin < min {
                return hyp(format!("n = {n} needs k >= {min}, range starts at {kmin}"));
            }
            if n * req.k.last() > MAX_WEIGHT {
                return Err(Error::WeightTooLarge(n * req.k.last()));
            }
            req.k.values().map(|k| FormSpec::power_sum(n, k)).collect::<Result<_>>()?
        }
        Family::ProductPlus => {
            let l = req
                .l
                .ok_or_else(|| Error::InvalidArgument("product-plus needs an l range".into()))?;
            if l.first() < 10 {
                return hyp(format!("product forms need l >= 10, range starts at {}", l.first()));
            }
            let mut v = Vec::new();
            for k in req.k.values() {
                for l in l.values().filter(|&l| l < k) {
                    if k + l > MAX_WEIGHT {
                        return Err(Error::WeightTooLarge(k + l));
                    }
                    v.push(FormSpec::product_sum(k, l, Sign::Plus)?);
                }
            }
            if v.is_empty() {
                return hyp(format!("no pair with k > l in k = {}, l = {l}", req.k));
            }
            v
        }
    };
    if req.family == Family::Rsd && req.k.last() > MAX_WEIGHT {
        return Err(Error::WeightTooLarge(req.k.last()));
    }
    Ok(out)
}

fn params(w: Witness, form: &FormSpec) -> Witness {
    let w = w.param("form", form.to_string()).param("weight", form.weight());
    match *form {
        FormSpec::Single { k } => w.param("k", k),
        FormSpec::PowerSum { n, k } => w.param("n", n).param("k", k),
        FormSpec::ProductSum { k, l, .. } => w.param("k", k).param("l", l),
    }
}

/// Scan one form and judge every counting claim for it.
pub fn check_form(form: &FormSpec, residual_tol: f64, grid_check: usize) -> Result<TupleOutcome> {
    let nu_inf = u32::from(form.constant_term() == 0);
    let budget = valence_budget(form.weight(), nu_inf)?;
    let scan = scan_and_refine(form)?;
    let mut ws = Vec::new();

    let good = scan.samples.iter().filter(|(p, v)| v * p.parity.sign() > 0.0).count();
    ws.push(Witness::equals("samples with sign (-1)^m", good as f64, scan.samples.len() as f64));
    ws.push(Witness::equals("interior arc zeros", scan.zeros.len() as f64, budget.interior as f64));

    let worst_res = scan
        .zeros
        .iter()
        .map(|z| z.residual / z.local_scale)
        .fold(0.0, f64::max);
    ws.push(Witness::at_most("max residual / local scale", worst_res, residual_tol));
    let worst_width = scan.zeros.iter().map(|z| z.bracket_width).fold(0.0, f64::max);
    ws.push(Witness::at_most("max final bracket width", worst_width, BRACKET_WIDTH));
    ws.push(Witness::equals("unresolved brackets", scan.stalled.len() as f64, 0.0));

    let grid_sign_changes = if grid_check > 0 {
        let n = grid_brackets(form, grid_check)?.len();
        ws.push(
            Witness::equals("sign changes on uniform grid", n as f64, scan.zeros.len() as f64)
                .param("grid_points", grid_check as u64),
        );
        Some(n)
    } else {
        None
    };
    let witnesses = ws.into_iter().map(|w| params(w, form)).collect();
    Ok(TupleOutcome { scan, budget, grid_sign_changes, witnesses })
}

/// Locate the arc zeros of every form in the family range and confirm the
/// counting argument: alternation at all sample points, interior count equal
/// to the valence budget, residuals within tolerance, and no extra sign
/// change on an independent uniform grid.
pub fn verify_theorem(req: &TheoremRequest) -> Result<(VerificationReport, Vec<TupleOutcome>)> {
    let fs = forms(req)?;
    let outcomes: Vec<TupleOutcome> = fs
        .par_iter()
        .map(|f| check_form(f, req.residual_tol, req.grid_check))
        .collect::<Result<_>>()?;
    let range = match (req.family, req.l) {
        (Family::ProductPlus, Some(l)) => format!("k={} l={l}", req.k),
        _ => format!("k={}", req.k),
    };
    let witnesses = outcomes.iter().flat_map(|o| o.witnesses.iter().cloned()).collect();
    let notes = format!(
        "{} forms; a form passes only if every sample alternates and every count matches",
        outcomes.len()
    );
    let report = VerificationReport::from_witnesses(
        format!("theorem.{}", req.family.name()),
        range,
        witnesses,
        notes,
    );
    Ok((report, outcomes))
}

#[cfg(test)]
mod tests {
    use super::super::Status;
    use super::*;

    #[test]
    fn small_families_pass() {
        let mut req = TheoremRequest::new(Family::Rsd, "4:40".parse().unwrap());
        req.grid_check = 512;
        let (r, out) = verify_theorem(&req).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(out.len(), 19);
        let mut req = TheoremRequest::new(Family::ProductPlus, "12:20".parse().unwrap());
        req.l = Some("10:18".parse().unwrap());
        req.grid_check = 512;
        let (r, out) = verify_theorem(&req).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(out.len(), 15);
    }

    #[test]
    fn hypotheses_rejected() {
        let r = verify_theorem(&TheoremRequest::new(Family::Power2, "8:20".parse().unwrap()));
        assert!(matches!(r, Err(Error::Hypothesis(_))));
        let r = verify_theorem(&TheoremRequest::new(Family::Power3, "14:20".parse().unwrap()));
        assert!(matches!(r, Err(Error::Hypothesis(_))));
        let mut req = TheoremRequest::new(Family::ProductPlus, "12:20".parse().unwrap());
        req.l = Some("8:8".parse().unwrap());
        assert!(matches!(verify_theorem(&req), Err(Error::Hypothesis(_))));
        let r = verify_theorem(&TheoremRequest::new(Family::Power2, "10:202".parse().unwrap()));
        assert!(matches!(r, Err(Error::WeightTooLarge(_))));
    }

    #[test]
    fn tampered_count_fails_with_witness() {
        let mut o = check_form(&FormSpec::single(24).unwrap(), RESIDUAL_TOL, 0).unwrap();
        assert!(o.passed());
        o.scan.zeros.pop();
        let w = Witness::equals("interior arc zeros", o.scan.zeros.len() as f64, o.budget.interior as f64);
        let r = VerificationReport::from_witnesses("t", "", vec![w], "");
        assert_eq!(r.status, Status::Fail);
        assert!(r.failing().next().is_some());
    }
}
