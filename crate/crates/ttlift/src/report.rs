//! Residual report: one entry per identity, fixed order.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub id: String,
    pub group: String,
    pub status: Status,
    /// Informational entries are reported but do not affect the overall
    /// status (hypotheses of conditional statements, conventions).
    pub informational: bool,
    pub max_residual: f64,
    /// Total degree up to which the residual was compared.
    pub degree_window: Option<u32>,
    /// Lowest and highest frame level used by the sampled arguments.
    pub level_band: [usize; 2],
    pub samples: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualReport {
    pub entries: Vec<Entry>,
}

impl ResidualReport {
    pub fn overall_pass(&self) -> bool {
        self.entries.iter().all(|e| e.informational || e.status != Status::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Plain-text table.
    pub fn table(&self) -> String {
        let w = self.entries.iter().map(|e| e.id.len()).max().unwrap_or(2).max(2);
        let mut s = format!("{:<w$}  {:<7}  {:>12}  {:>6}  {:>7}  {:>7}\n", "id", "status", "max_residual", "window", "levels", "samples");
        for e in &self.entries {
            let st = match e.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skipped => "skipped",
            };
            let st = if e.informational { format!("{st}*") } else { st.to_string() };
            let win = e.degree_window.map_or("-".to_string(), |d| d.to_string());
            s.push_str(&format!(
                "{:<w$}  {:<7}  {:>12.3e}  {:>6}  {:>7}  {:>7}\n",
                e.id,
                st,
                e.max_residual,
                win,
                format!("{}..{}", e.level_band[0], e.level_band[1]),
                e.samples
            ));
        }
        s.push_str("(* informational, not counted in the overall status)\n");
        s.push_str(if self.overall_pass() { "overall: pass\n" } else { "overall: fail\n" });
        s
    }
}

/// What `verify` writes: the report plus enough context to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub config: crate::config::ModelConfig,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    pub entries: Vec<Entry>,
    pub overall: Status,
}

impl ReportFile {
    pub fn new(config: crate::config::ModelConfig, tolerance: f64, checks: Option<Vec<String>>, report: ResidualReport) -> ReportFile {
        let overall = if report.overall_pass() { Status::Pass } else { Status::Fail };
        ReportFile {
            schema_version: SCHEMA_VERSION,
            tool: "ttlift".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            tolerance,
            checks,
            entries: report.entries,
            overall,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
