//! Executable checks of the bounds and counting arguments.
//!
//! Every check produces a [`VerificationReport`]: a status plus structured
//! [`Witness`] records (what was measured, against which bound, at which
//! parameters). A failing report always carries at least one failing
//! witness.

mod bounds;
mod explore;
mod minus;
mod oracle;
mod theorem;
mod valence;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub use bounds::{
    analytic_m_power2, analytic_m_power3, analytic_p_product, analytic_q_product,
    verify_prop_bounds, BoundProp, BoundsRequest, PrintedConstant, PRINTED_CONSTANTS,
    PRINTED_TOL, P_CASE_TWO_SLACK,
};
pub use explore::{explore_higher_n, ExploreRequest};
pub use minus::{verify_minus_accounting, MinusOutcome};
pub use oracle::{oracle_points, oracle_radius, verify_oracle_equivalence, OracleRequest};
pub use theorem::{check_form, verify_theorem, Family, TheoremRequest, TupleOutcome};
pub use valence::{valence_budget, ValenceBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl Status {
    pub fn worst(self, other: Status) -> Status {
        self.max(other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Equals,
    Within { tolerance: f64 },
    /// Recorded for information; never fails.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub parameters: BTreeMap<String, Value>,
    pub observed: f64,
    pub required: f64,
    pub relation: Relation,
    pub holds: bool,
    /// A failing advisory witness downgrades the report to `warn` rather
    /// than `fail`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub advisory: bool,
}

impl Witness {
    pub fn new(label: impl Into<String>, observed: f64, required: f64, relation: Relation) -> Self {
        let holds = match relation {
            Relation::AtMost => observed <= required,
            Relation::AtLeast => observed >= required,
            Relation::Equals => observed == required,
            Relation::Within { tolerance } => (observed - required).abs() <= tolerance,
            Relation::Info => true,
        };
        Witness {
            label: label.into(),
            parameters: BTreeMap::new(),
            observed,
            required,
            relation,
            holds,
            advisory: false,
        }
    }

    pub fn at_most(label: impl Into<String>, observed: f64, required: f64) -> Self {
        Self::new(label, observed, required, Relation::AtMost)
    }

    pub fn at_least(label: impl Into<String>, observed: f64, required: f64) -> Self {
        Self::new(label, observed, required, Relation::AtLeast)
    }

    pub fn equals(label: impl Into<String>, observed: f64, required: f64) -> Self {
        Self::new(label, observed, required, Relation::Equals)
    }

    pub fn within(label: impl Into<String>, observed: f64, required: f64, tolerance: f64) -> Self {
        Self::new(label, observed, required, Relation::Within { tolerance })
    }

    pub fn info(label: impl Into<String>, observed: f64, required: f64) -> Self {
        Self::new(label, observed, required, Relation::Info)
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn advisory(mut self) -> Self {
        self.advisory = true;
        self
    }

    fn status(&self) -> Status {
        match (self.holds, self.advisory) {
            (true, _) => Status::Pass,
            (false, true) => Status::Warn,
            (false, false) => Status::Fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub parameter_range: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub notes: String,
}

impl VerificationReport {
    /// Status is derived from the witnesses: any failing non-advisory witness
    /// fails the report.
    pub fn from_witnesses(
        check_id: impl Into<String>,
        parameter_range: impl Into<String>,
        witnesses: Vec<Witness>,
        notes: impl Into<String>,
    ) -> Self {
        let status = witnesses.iter().fold(Status::Pass, |s, w| s.worst(w.status()));
        VerificationReport {
            check_id: check_id.into(),
            parameter_range: parameter_range.into(),
            status,
            witnesses,
            notes: notes.into(),
        }
    }

    pub fn failing(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| !w.holds)
    }
}

/// Inclusive range of even integers, written `min:max` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenRange {
    pub min: u32,
    pub max: u32,
}

impl EvenRange {
    pub fn new(min: u32, max: u32) -> Result<Self> {
        if min > max {
            return Err(Error::InvalidArgument(format!("empty range {min}:{max}")));
        }
        let r = EvenRange { min, max };
        if r.values().next().is_none() {
            return Err(Error::InvalidArgument(format!("range {min}:{max} holds no even value")));
        }
        Ok(r)
    }

    pub fn single(v: u32) -> Result<Self> {
        Self::new(v, v)
    }

    pub fn values(&self) -> impl Iterator<Item = u32> + Clone {
        let start = self.min + self.min % 2;
        (start..=self.max).step_by(2)
    }

    pub fn first(&self) -> u32 {
        self.min + self.min % 2
    }

    pub fn last(&self) -> u32 {
        self.max - self.max % 2
    }
}

impl std::str::FromStr for EvenRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("bad range bound {t:?}")))
        };
        match s.split_once(':') {
            Some((a, b)) => EvenRange::new(parse(a)?, parse(b)?),
            None => EvenRange::single(parse(s)?),
        }
    }
}

impl std::fmt::Display for EvenRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: EvenRange = "10:15".parse().unwrap();
        assert_eq!(r.values().collect::<Vec<_>>(), vec![10, 12, 14]);
        assert_eq!(r.last(), 14);
        let r: EvenRange = "11:16".parse().unwrap();
        assert_eq!(r.first(), 12);
        assert!("12:10".parse::<EvenRange>().is_err());
        assert!("11:11".parse::<EvenRange>().is_err());
        assert!("x:4".parse::<EvenRange>().is_err());
        assert_eq!("24".parse::<EvenRange>().unwrap(), EvenRange { min: 24, max: 24 });
    }

    #[test]
    fn report_status_from_witnesses() {
        let ok = Witness::at_most("a", 1.0, 2.0);
        let bad = Witness::at_least("b", 1.0, 2.0);
        let soft = Witness::within("c", 1.0, 2.0, 0.1).advisory();
        let r = VerificationReport::from_witnesses("x", "", vec![ok.clone()], "");
        assert_eq!(r.status, Status::Pass);
        let r = VerificationReport::from_witnesses("x", "", vec![ok.clone(), soft], "");
        assert_eq!(r.status, Status::Warn);
        let r = VerificationReport::from_witnesses("x", "", vec![ok, bad], "");
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.failing().count(), 1);
    }
}
