// SPDX-License-Identifier: Apache-2.0

//! Campaign reports: the per-fault CSV, the summary JSON and report diffing.

use serde::{Deserialize, Serialize};

use crate::emu::{CampaignResult, ClassCounts, CostBreakdown};
use crate::error::{Error, Result};
use crate::grading::FaultClass;
use crate::netlist::Circuit;

/// Column order of the per-fault CSV.
pub const FAULT_CSV_HEADER: [&str; 6] =
    ["fault_id", "flop_id", "cycle", "class", "at_cycle", "edges"];

/// One row of the per-fault CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultRow {
    pub fault_id: usize,
    pub flop_id: String,
    pub cycle: usize,
    pub class: FaultClass,
    pub at_cycle: usize,
    pub edges: u64,
}

/// Rows for `result`, naming flops after their ids in `c`.
pub fn fault_rows(result: &CampaignResult, c: &Circuit) -> Result<Vec<FaultRow>> {
    if result.faults.len() != result.verdicts.len()
        || result.verdicts.len() != result.ledger.per_fault_edges.len()
    {
        return Err(Error::Report(
            "campaign result is internally inconsistent".into(),
        ));
    }
    result
        .faults
        .iter()
        .zip(&result.verdicts)
        .zip(&result.ledger.per_fault_edges)
        .enumerate()
        .map(|(id, ((f, v), &edges))| {
            let flop = c.flops.get(f.flop).ok_or(Error::FlopIndex {
                index: f.flop,
                count: c.num_flops(),
            })?;
            Ok(FaultRow {
                fault_id: id,
                flop_id: flop.id.clone(),
                cycle: f.cycle,
                class: v.class,
                at_cycle: v.at_cycle,
                edges,
            })
        })
        .collect()
}

pub fn write_fault_csv(rows: &[FaultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Report(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record(FAULT_CSV_HEADER)
            .map_err(|e| Error::Report(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

pub fn parse_fault_csv(text: &str) -> Result<Vec<FaultRow>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::Report(e.to_string()))?;
    if header.iter().ne(FAULT_CSV_HEADER) {
        return Err(Error::Report(format!(
            "expected header {}, found {}",
            FAULT_CSV_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.deserialize::<FaultRow>().enumerate() {
        let row = rec.map_err(|e| Error::Report(format!("row {}: {e}", i + 1)))?;
        if row.fault_id != i {
            return Err(Error::Report(format!(
                "row {}: fault_id {} out of sequence",
                i + 1,
                row.fault_id
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Class percentages with one decimal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Percentages {
    pub failure: f64,
    pub latent: f64,
    pub silent: f64,
}

/// The summary JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummaryReport {
    pub technique: String,
    pub faults: usize,
    pub counts: ClassCounts,
    pub percentages: Percentages,
    pub total_edges: u64,
    pub shared_control_edges: u64,
    pub breakdown: CostBreakdown,
    /// False for the oracle, whose ledger counts simulated cycles.
    pub comparable: bool,
    pub f_clk: u64,
    pub total_seconds: Option<f64>,
    pub us_per_fault: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl SummaryReport {
    /// Times are omitted when the ledger is not in clock edges.
    pub fn new(result: &CampaignResult, f_clk: u64, timestamp: Option<u64>) -> Result<Self> {
        let s = &result.summary;
        let pct = |c| f64::from(s.percent_tenths(c)) / 10.0;
        let (total_seconds, us_per_fault) = if result.ledger.comparable {
            let t = result.estimate_time(f_clk)?;
            (
                Some(t.total_seconds),
                t.avg_seconds_per_fault.map(|x| x * 1e6),
            )
        } else {
            (None, None)
        };
        Ok(SummaryReport {
            technique: result.engine.as_str().to_owned(),
            faults: result.verdicts.len(),
            counts: s.counts,
            percentages: Percentages {
                failure: pct(FaultClass::Failure),
                latent: pct(FaultClass::Latent),
                silent: pct(FaultClass::Silent),
            },
            total_edges: result.ledger.total_edges,
            shared_control_edges: result.ledger.shared_control_edges,
            breakdown: result.ledger.breakdown,
            comparable: result.ledger.comparable,
            f_clk,
            total_seconds,
            us_per_fault,
            timestamp,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))
    }
}

/// One class disagreement between two reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDiff {
    pub fault_id: usize,
    pub flop_id: String,
    pub cycle: usize,
    pub left: FaultClass,
    pub right: FaultClass,
}

impl std::fmt::Display for ClassDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "fault {} ({} @ cycle {}): {} vs {}",
            self.fault_id, self.flop_id, self.cycle, self.left, self.right
        )
    }
}

/// All class disagreements, in fault order.
///
/// Errors when the two reports do not cover the same fault list.
pub fn compare_reports(a: &[FaultRow], b: &[FaultRow]) -> Result<Vec<ClassDiff>> {
    if a.len() != b.len() {
        return Err(Error::Report(format!(
            "fault counts differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let mut diffs = Vec::new();
    for (x, y) in a.iter().zip(b) {
        if (x.fault_id, &x.flop_id, x.cycle) != (y.fault_id, &y.flop_id, y.cycle) {
            return Err(Error::Report(format!(
                "fault lists differ at fault {}: {}@{} vs {}@{}",
                x.fault_id, x.flop_id, x.cycle, y.flop_id, y.cycle
            )));
        }
        if x.class != y.class {
            diffs.push(ClassDiff {
                fault_id: x.fault_id,
                flop_id: x.flop_id.clone(),
                cycle: x.cycle,
                left: x.class,
                right: y.class,
            });
        }
    }
    Ok(diffs)
}
