//! Run reports (JSON and CSV) and plot-data emission.
//!
//! Angles are in radians and `τ` is written as an `(re, im)` pair. Every CSV
//! float carries 17 significant digits so that it parses back to the same
//! binary64 value.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::Path;

use crate::arc::{ArcAngle, FormSpec, Sign, ARC_HI, ARC_LO};
use crate::error::{Error, Result};
use crate::grid::sample_points;
use crate::verify::{Relation, Status, VerificationReport};
use crate::zeros::{scan_and_refine, BoundaryZeroRecord, ZeroRecord};

pub const SCHEMA_VERSION: u32 = 1;
/// Smallest accepted grid for plot data and uniform scans.
pub const MIN_DENSITY: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Arc,
    LeftBoundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub form_kind: String,
    pub n: Option<u32>,
    pub k: u32,
    pub l: Option<u32>,
    pub sign: Option<String>,
    /// `arg τ`
    pub theta: f64,
    pub tau_re: f64,
    pub tau_im: f64,
    pub residual: f64,
    pub bracket_width: f64,
    pub location: Location,
}

impl ZeroRow {
    fn base(form: &FormSpec) -> (String, Option<u32>, u32, Option<u32>, Option<String>) {
        let kind = form.kind_name().to_string();
        match *form {
            FormSpec::Single { k } => (kind, None, k, None, None),
            FormSpec::PowerSum { n, k } => (kind, Some(n), k, None, None),
            FormSpec::ProductSum { k, l, sign } => {
                let s = match sign {
                    Sign::Plus => "plus",
                    Sign::Minus => "minus",
                };
                (kind, None, k, Some(l), Some(s.to_string()))
            }
        }
    }

    pub fn arc(form: &FormSpec, z: &ZeroRecord) -> Self {
        let (form_kind, n, k, l, sign) = Self::base(form);
        ZeroRow {
            form_kind,
            n,
            k,
            l,
            sign,
            theta: z.theta_hat,
            tau_re: z.tau_hat.re,
            tau_im: z.tau_hat.im,
            residual: z.residual,
            bracket_width: z.bracket_width,
            location: Location::Arc,
        }
    }

    pub fn boundary(form: &FormSpec, z: &BoundaryZeroRecord) -> Self {
        let (form_kind, n, k, l, sign) = Self::base(form);
        ZeroRow {
            form_kind,
            n,
            k,
            l,
            sign,
            theta: z.tau_hat.arg(),
            tau_re: z.tau_hat.re,
            tau_im: z.tau_hat.im,
            residual: z.residual,
            bracket_width: z.bracket_width,
            location: Location::LeftBoundary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub checks: Vec<VerificationReport>,
    pub zeros: Vec<ZeroRow>,
}

impl RunReport {
    pub fn new(
        command: impl Into<String>,
        params: BTreeMap<String, Value>,
        checks: Vec<VerificationReport>,
        zeros: Vec<ZeroRow>,
    ) -> Self {
        let status = checks.iter().fold(Status::Pass, |s, c| s.worst(c.status));
        RunReport { schema_version: SCHEMA_VERSION, command: command.into(), params, status, checks, zeros }
    }

    /// 0 unless some check failed.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.status == Status::Fail)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: RunReport = serde_json::from_str(s)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!("unsupported schema_version {}", r.schema_version)));
        }
        Ok(r)
    }

    /// Columns `form_kind, n, k, l, sign, theta_hat, tau_re, tau_im,
    /// residual, bracket_width`; empty cells for fields a form lacks.
    pub fn zeros_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "form_kind", "n", "k", "l", "sign", "theta_hat", "tau_re", "tau_im", "residual",
            "bracket_width",
        ])?;
        for z in &self.zeros {
            let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                z.form_kind.clone(),
                opt(z.n),
                z.k.to_string(),
                opt(z.l),
                z.sign.clone().unwrap_or_default(),
                fmt_f64(z.theta),
                fmt_f64(z.tau_re),
                fmt_f64(z.tau_im),
                fmt_f64(z.residual),
                fmt_f64(z.bracket_width),
            ])?;
        }
        finish(w)
    }

    /// One row per witness; parameters as a JSON object in the last column.
    pub fn witnesses_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "check_id", "check_status", "label", "observed", "required", "relation", "holds",
            "advisory", "parameters",
        ])?;
        for c in &self.checks {
            for wi in &c.witnesses {
                w.write_record([
                    c.check_id.clone(),
                    status_name(c.status).to_string(),
                    wi.label.clone(),
                    fmt_f64(wi.observed),
                    fmt_f64(wi.required),
                    relation_name(wi.relation),
                    wi.holds.to_string(),
                    wi.advisory.to_string(),
                    serde_json::to_string(&wi.parameters)?,
                ])?;
            }
        }
        finish(w)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

/// 17 significant digits, enough to round-trip any binary64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Warn => "warn",
        Status::Fail => "fail",
    }
}

fn relation_name(r: Relation) -> String {
    match r {
        Relation::AtMost => "at_most".into(),
        Relation::AtLeast => "at_least".into(),
        Relation::Equals => "equals".into(),
        Relation::Within { tolerance } => format!("within {}", fmt_f64(tolerance)),
        Relation::Info => "info".into(),
    }
}

/// Plot data for `form` as three CSV blocks separated by blank lines: the
/// uniform grid (`theta, f_value, main_term, envelope_minus, envelope_plus`,
/// the envelope being main term ± remainder bound), the sample points, and
/// the located arc zeros.
pub fn plot_data_csv(form: &FormSpec, density: usize) -> Result<String> {
    if density < MIN_DENSITY {
        return Err(Error::InvalidArgument(format!(
            "plot density {density} is below the minimum {MIN_DENSITY}"
        )));
    }
    form.validate()?;
    let bound = form.remainder_bound();
    let h = (ARC_HI - ARC_LO) / (density - 1) as f64;

    let mut grid = csv::Writer::from_writer(Vec::new());
    grid.write_record(["theta", "f_value", "main_term", "envelope_minus", "envelope_plus"])?;
    for j in 0..density {
        let t = ArcAngle::new(if j + 1 == density { ARC_HI } else { ARC_LO + j as f64 * h })?;
        let f = form.eval(t)?.real_part;
        let m = form.main_term(t);
        grid.write_record([t.get(), f, m, m - bound, m + bound].map(fmt_f64))?;
    }

    let mut samples = csv::Writer::from_writer(Vec::new());
    samples.write_record(["m", "theta", "f_value", "parity_sign"])?;
    for p in sample_points(form) {
        let f = form.eval(p.theta)?.real_part;
        samples.write_record([
            p.m.to_string(),
            fmt_f64(p.theta.get()),
            fmt_f64(f),
            format!("{}", p.parity.sign() as i32),
        ])?;
    }

    let scan = scan_and_refine(form)?;
    let mut zeros = csv::Writer::from_writer(Vec::new());
    zeros.write_record(["theta_hat", "tau_re", "tau_im", "residual", "bracket_width"])?;
    for z in &scan.zeros {
        zeros.write_record(
            [z.theta_hat, z.tau_hat.re, z.tau_hat.im, z.residual, z.bracket_width].map(fmt_f64),
        )?;
    }
    Ok([finish(grid)?, finish(samples)?, finish(zeros)?].join("\n"))
}

/// [`plot_data_csv`] written to `path`.
pub fn emit_plot_data(form: &FormSpec, density: usize, path: &Path) -> Result<()> {
    let data = plot_data_csv(form, density)?;
    std::fs::write(path, data)?;
    Ok(())
}

/// Split plot data back into its blocks, each a list of rows of fields.
pub fn parse_blocks(data: &str) -> Result<Vec<Vec<Vec<String>>>> {
    data.split("\n\n")
        .map(|block| {
            let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(block.as_bytes());
            r.records()
                .map(|rec| Ok(rec?.iter().map(str::to_string).collect()))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Witness;

    fn sample_report() -> RunReport {
        let w = Witness::within("c", 0.1 + 0.2, 0.3, 1e-15)
            .param("k", 12)
            .param("theta", std::f64::consts::PI / 3.0);
        let check = VerificationReport::from_witnesses("x", "k=12", vec![w], "n");
        let form = FormSpec::single(12).unwrap();
        let scan = scan_and_refine(&form).unwrap();
        let zeros = scan.zeros.iter().map(|z| ZeroRow::arc(&form, z)).collect();
        let mut params = BTreeMap::new();
        params.insert("k".to_string(), Value::from(12));
        RunReport::new("locate", params, vec![check], zeros)
    }

    #[test]
    fn json_round_trip() {
        let r = sample_report();
        let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json().unwrap(), r.to_json().unwrap());
        let bad = r.to_json().unwrap().replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(RunReport::from_json(&bad).is_err());
    }

    #[test]
    fn csv_floats_are_lossless() {
        let r = sample_report();
        let csv = r.zeros_csv().unwrap();
        let mut rd = csv::Reader::from_reader(csv.as_bytes());
        let row = rd.records().next().unwrap().unwrap();
        assert_eq!(&row[0], "single");
        assert_eq!(&row[1], "");
        let theta: f64 = row[5].parse().unwrap();
        assert_eq!(theta, r.zeros[0].theta);
        for x in [0.1, 1.0 / 3.0, 2.0943951023931957, 5e-324, 1.7976931348623157e308] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert!(r.witnesses_csv().unwrap().lines().count() == 2);
    }

    #[test]
    fn plot_data_blocks() {
        let form = FormSpec::single(12).unwrap();
        let blocks = parse_blocks(&plot_data_csv(&form, 300).unwrap()).unwrap();
        assert_eq!(blocks.len(), 3);
        assert_eq!(blocks[0].len(), 300);
        assert_eq!(blocks[2].len(), 1);
        assert!(plot_data_csv(&form, 100).is_err());
    }
}
