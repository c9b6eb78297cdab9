//! Report rows and check outcomes, with CSV and JSONL emission.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One measurement. Column order below is the CSV contract.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub p: u64,
    /// One or more family descriptors joined by ';' (instance sets in
    /// argument order); trinomial rows carry a trinom: descriptor.
    pub family: String,
    /// Cardinalities of the instance sets, ';'-joined, same order.
    pub sizes: String,
    pub quantity: String,
    /// Exact integer (decimal) or complex modulus (shortest round-trip
    /// float), as text so precision survives any reader.
    pub value: String,
    pub reference_expr: String,
    pub reference_value: f64,
    pub ratio: f64,
    pub range_ok: bool,
    pub seed: u64,
    pub elapsed_ms: f64,
}

pub fn write_csv(rows: &[ReportRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    // Header-only output for an empty row list still needs the header.
    if rows.is_empty() {
        w.write_record([
            "p",
            "family",
            "sizes",
            "quantity",
            "value",
            "reference_expr",
            "reference_value",
            "ratio",
            "range_ok",
            "seed",
            "elapsed_ms",
        ])?;
    }
    w.flush().map_err(crate::error::HarnessError::from)?;
    Ok(())
}

pub fn write_jsonl(rows: &[ReportRow], path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    for row in rows {
        serde_json::to_writer(&mut f, row)?;
        f.write_all(b"\n")?;
    }
    Ok(())
}

pub fn row_from_json_line(line: &str) -> Result<ReportRow> {
    Ok(serde_json::from_str(line)?)
}

/// Aggregate result of one exact check across all its instances.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub instances: u64,
    pub failures: u64,
    /// For inequalities: the largest observed lhs/rhs (1.0 touches the
    /// bound). For identities: the largest absolute difference (0 when all
    /// instances agree).
    pub worst_slack: f64,
    /// Minimal reproducers, one per failing instance: "p=.. family=.. seed=..".
    pub reproducers: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} instances={:<5} failures={:<3} worst_slack={:.6} {}",
            self.name,
            self.instances,
            self.failures,
            self.worst_slack,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for r in &self.reproducers {
            write!(f, "\n    reproducer: {r}")?;
        }
        Ok(())
    }
}
