// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Clock-edge prices for controller actions.
///
/// Defaults charge one edge per control action and a full chain length per
/// scan operation. An emulated cycle costs one edge, or two under time
/// multiplexing where the golden and faulty phases share the logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostModel {
    pub reset_edges: u64,
    pub mask_shift_edges_per_fault: u64,
    /// `None` means one edge per flop in the chain.
    pub scan_edges: Option<u64>,
    /// Overrides the per-engine default (1 single-run, 2 time-multiplexed).
    pub edges_per_emulated_cycle: Option<u64>,
    pub inject_edges: u64,
    pub verdict_write_edges: u64,
    pub checkpoint_advance_edges: u64,
    pub f_clk: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            reset_edges: 1,
            mask_shift_edges_per_fault: 1,
            scan_edges: None,
            edges_per_emulated_cycle: None,
            inject_edges: 1,
            verdict_write_edges: 1,
            checkpoint_advance_edges: 1,
            f_clk: 25_000_000,
        }
    }
}

pub const KNOBS: [&str; 8] = [
    "reset_edges",
    "mask_shift_edges_per_fault",
    "scan_edges",
    "edges_per_emulated_cycle",
    "inject_edges",
    "verdict_write_edges",
    "checkpoint_advance_edges",
    "f_clk",
];

impl CostModel {
    pub fn validate(&self) -> Result<()> {
        if self.f_clk == 0 {
            return Err(Error::CostModel("f_clk must be positive".into()));
        }
        Ok(())
    }

    pub fn scan_edges(&self, flops: usize) -> u64 {
        self.scan_edges.unwrap_or(flops as u64)
    }

    pub fn cycle_edges(&self, default: u64) -> u64 {
        self.edges_per_emulated_cycle.unwrap_or(default)
    }

    /// Sets one knob by its field name.
    pub fn set(&mut self, knob: &str, value: u64) -> Result<()> {
        match knob {
            "reset_edges" => self.reset_edges = value,
            "mask_shift_edges_per_fault" => self.mask_shift_edges_per_fault = value,
            "scan_edges" => self.scan_edges = Some(value),
            "edges_per_emulated_cycle" => self.edges_per_emulated_cycle = Some(value),
            "inject_edges" => self.inject_edges = value,
            "verdict_write_edges" => self.verdict_write_edges = value,
            "checkpoint_advance_edges" => self.checkpoint_advance_edges = value,
            "f_clk" => self.f_clk = value,
            other => {
                return Err(Error::CostModel(format!(
                    "unknown knob {other:?}; expected one of {}",
                    KNOBS.join(", ")
                )))
            }
        }
        self.validate()
    }
}

/// Edges spent on one fault, by category.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultCost {
    pub run: u64,
    pub scan: u64,
    pub control: u64,
}

impl FaultCost {
    pub fn total(&self) -> u64 {
        self.run + self.scan + self.control
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub run: u64,
    pub scan: u64,
    pub control: u64,
}

impl CostBreakdown {
    pub fn total(&self) -> u64 {
        self.run + self.scan + self.control
    }
}

/// Clock-edge accounting for one campaign. Aggregated in fault-list order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostLedger {
    pub total_edges: u64,
    pub per_fault_edges: Vec<u64>,
    /// Edges not attributable to one fault (global reset, checkpoint advance).
    pub shared_control_edges: u64,
    pub breakdown: CostBreakdown,
    /// False for the reference classifier, whose counts are simulated cycles.
    pub comparable: bool,
}

impl CostLedger {
    pub fn build(costs: &[FaultCost], shared_control: u64, comparable: bool) -> Self {
        let mut breakdown = CostBreakdown {
            control: shared_control,
            ..Default::default()
        };
        let per_fault_edges = costs
            .iter()
            .map(|c| {
                breakdown.run += c.run;
                breakdown.scan += c.scan;
                breakdown.control += c.control;
                c.total()
            })
            .collect();
        CostLedger {
            total_edges: breakdown.total(),
            per_fault_edges,
            shared_control_edges: shared_control,
            breakdown,
            comparable,
        }
    }

    pub fn fault_count(&self) -> usize {
        self.per_fault_edges.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeEstimate {
    pub total_seconds: f64,
    /// Absent when the campaign had no faults.
    pub avg_seconds_per_fault: Option<f64>,
}

/// Converts an edge count into wall-clock time at `f_clk` Hz.
pub fn estimate_time(total_edges: u64, faults: usize, f_clk: u64) -> Result<TimeEstimate> {
    if f_clk == 0 {
        return Err(Error::CostModel("f_clk must be positive".into()));
    }
    let total_seconds = total_edges as f64 / f_clk as f64;
    Ok(TimeEstimate {
        total_seconds,
        avg_seconds_per_fault: (faults > 0).then(|| total_seconds / faults as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_mux_row_arithmetic() {
        let t = estimate_time(498_750, 34_400, 25_000_000).unwrap();
        assert!((t.total_seconds * 1e3 - 19.95).abs() < 1e-9);
        let us = t.avg_seconds_per_fault.unwrap() * 1e6;
        assert_eq!((us * 100.0).round() / 100.0, 0.58);
    }

    #[test]
    fn zero_cases() {
        let t = estimate_time(0, 0, 25_000_000).unwrap();
        assert_eq!(t.total_seconds, 0.0);
        assert_eq!(t.avg_seconds_per_fault, None);
        assert!(estimate_time(10, 1, 0).is_err());
    }

    #[test]
    fn ledger_conserves_edges() {
        let costs = [
            FaultCost {
                run: 3,
                scan: 1,
                control: 2,
            },
            FaultCost {
                run: 1,
                scan: 0,
                control: 3,
            },
        ];
        let l = CostLedger::build(&costs, 5, true);
        assert_eq!(l.per_fault_edges, [6, 4]);
        assert_eq!(l.total_edges, 15);
        assert_eq!(l.breakdown.total(), l.total_edges);
        assert_eq!(l.breakdown.control, 10);
    }

    #[test]
    fn knob_overrides() {
        let mut cm = CostModel::default();
        cm.set("scan_edges", 7).unwrap();
        assert_eq!(cm.scan_edges(100), 7);
        assert!(cm.set("warp_drive", 1).is_err());
        assert!(cm.set("f_clk", 0).is_err());
    }
}
