use robin_core::explorer::SweepTable;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Value,
}

impl OutputRecord {
    pub fn new(command: &'static str, inputs: Value, results: Value, diagnostics: Value) -> Self {
        OutputRecord { schema_version: SCHEMA_VERSION, command, inputs, results, diagnostics }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("output record serialises");
        s.push('\n');
        s
    }
}

/// One-line error payload.
pub fn error_line(command: &str, kind: &str, message: &str) -> String {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": { "kind": kind, "message": message },
    });
    format!("{v}\n")
}

/// 17 significant digits in exponent form; empty for missing values.
fn csv_number(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

pub const CSV_HEADER: &str = "alpha,lambda_ball,lambda_partner,difference";

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::with_capacity(80 * (table.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_number(Some(row.alpha)),
            csv_number(row.lambda_ball),
            csv_number(row.lambda_partner),
            csv_number(row.difference)
        );
    }
    out
}
