use std::fmt::Write as _;

use hatcert::lemmas::{LemmaReport, Status};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub status: Status,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Aggregate {
    /// Skipped rows do not fail the run.
    pub fn of(rows: &[LemmaReport]) -> Aggregate {
        let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
        let failed = count(Status::Fail);
        Aggregate {
            status: if failed == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
            passed: count(Status::Pass),
            failed,
            skipped: count(Status::Skipped),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub schema: u32,
    pub wall_time_ms: u64,
    pub config: Value,
    pub rows: Vec<LemmaReport>,
    pub aggregate: Aggregate,
}

impl RunReport {
    pub fn new(config: Value, rows: Vec<LemmaReport>, wall_time_ms: u64) -> RunReport {
        let aggregate = Aggregate::of(&rows);
        RunReport {
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA_VERSION,
            wall_time_ms,
            config,
            rows,
            aggregate,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<4} {:<22} {:<8} {:<19} DETAIL",
            "M", "LEMMA", "STATUS", "METHOD"
        );
        for row in &self.rows {
            let detail = match (&row.witness, row.data.get("skip_reason")) {
                (Some(w), _) => w.clone(),
                (None, Some(Value::String(reason))) => reason.clone(),
                _ => summary(row),
            };
            let _ = writeln!(
                out,
                "{:<4} {:<22} {:<8} {:<19} {}",
                row.m,
                row.lemma_id,
                row.status.as_str(),
                row.method.as_deref().unwrap_or("-"),
                detail
            );
        }
        let a = self.aggregate;
        let _ = writeln!(
            out,
            "aggregate: {} ({} passed, {} failed, {} skipped)",
            a.status.as_str(),
            a.passed,
            a.failed,
            a.skipped
        );
        out
    }
}

/// The first few short data fields, for the text table.
fn summary(row: &LemmaReport) -> String {
    row.data
        .iter()
        .filter(|(_, v)| match v {
            Value::Number(_) | Value::Bool(_) => true,
            Value::String(s) => s.len() <= 16,
            _ => false,
        })
        .take(4)
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}
