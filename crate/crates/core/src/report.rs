//! Machine-readable reports.
//!
//! Every report carries the same top-level keys; the ones a command does not compute
//! are `null`. Extra command-specific data goes under `details`.

use serde::Serialize;
use serde_json::Value;

use crate::breaks::{different_degree, D4Breaks, DegreeProfile, SequenceType};
use crate::d4::GroupTag;
use crate::deform::Ledger;
use crate::planner::PlanStep;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub field: Option<String>,
    pub group: Option<GroupTag>,
    pub profile: Option<DegreeProfile>,
    pub breaks_lower: Option<Vec<i64>>,
    pub breaks_upper: Option<Vec<i64>>,
    #[serde(rename = "type")]
    pub seq_type: Option<SequenceType>,
    pub delta: Option<i64>,
    pub ledger: Option<Ledger>,
    pub plan_steps: Option<Vec<PlanStep>>,
    pub details: Value,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            details: Value::Null,
            ..Default::default()
        }
    }

    /// Fills profile, breaks, type and different from closed-form data.
    pub fn with_breaks(mut self, profile: DegreeProfile, b: &D4Breaks) -> Self {
        self.profile = Some(profile);
        self.breaks_lower = Some(b.lower.values.clone());
        self.breaks_upper = Some(b.upper.values.clone());
        self.seq_type = Some(b.seq_type);
        self.delta = Some(different_degree(&b.lower));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
