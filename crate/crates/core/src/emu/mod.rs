// SPDX-License-Identifier: Apache-2.0

//! Campaign engines for the three autonomous-emulation techniques.
//!
//! Each engine grades the full fault list with the controller semantics of
//! its technique and prices every controller action in clock edges.

mod cost;
mod engines;

pub use cost::{
    estimate_time, CostBreakdown, CostLedger, CostModel, FaultCost, TimeEstimate, KNOBS,
};
pub use engines::{run_engine, run_mask_scan, run_state_scan, run_time_mux, Exec};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grading::{self, Fault, FaultClass, Verdict};
use crate::netlist::{levelize, Circuit, Levelized};
use crate::sim::{golden_run, GoldenTrace, Testbench};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Oracle,
    MaskScan,
    StateScan,
    TimeMux,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Oracle,
        Engine::MaskScan,
        Engine::StateScan,
        Engine::TimeMux,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Oracle => "oracle",
            Engine::MaskScan => "mask-scan",
            Engine::StateScan => "state-scan",
            Engine::TimeMux => "time-mux",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Engine::ALL.into_iter().find(|e| e.as_str() == s)
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub failure: usize,
    pub latent: usize,
    pub silent: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.failure + self.latent + self.silent
    }

    pub fn get(&self, class: FaultClass) -> usize {
        match class {
            FaultClass::Failure => self.failure,
            FaultClass::Latent => self.latent,
            FaultClass::Silent => self.silent,
        }
    }
}

/// Per-class counts with percentages in tenths, rounded half up.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub counts: ClassCounts,
    tenths: [u32; 3],
}

impl Summary {
    pub fn from_verdicts(verdicts: &[Verdict]) -> Self {
        let mut counts = ClassCounts::default();
        for v in verdicts {
            match v.class {
                FaultClass::Failure => counts.failure += 1,
                FaultClass::Latent => counts.latent += 1,
                FaultClass::Silent => counts.silent += 1,
            }
        }
        let total = counts.total() as u64;
        let tenth = |n: usize| -> u32 {
            if total == 0 {
                0
            } else {
                ((2000 * n as u64 + total) / (2 * total)) as u32
            }
        };
        Summary {
            tenths: [
                tenth(counts.failure),
                tenth(counts.latent),
                tenth(counts.silent),
            ],
            counts,
        }
    }

    /// Percentage with one decimal.
    pub fn percent(&self, class: FaultClass) -> f64 {
        let t = match class {
            FaultClass::Failure => self.tenths[0],
            FaultClass::Latent => self.tenths[1],
            FaultClass::Silent => self.tenths[2],
        };
        f64::from(t) / 10.0
    }

    pub fn percent_tenths(&self, class: FaultClass) -> u32 {
        match class {
            FaultClass::Failure => self.tenths[0],
            FaultClass::Latent => self.tenths[1],
            FaultClass::Silent => self.tenths[2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignResult {
    pub engine: Engine,
    pub faults: Vec<Fault>,
    pub verdicts: Vec<Verdict>,
    pub ledger: CostLedger,
    pub summary: Summary,
}

impl CampaignResult {
    pub(crate) fn assemble(
        engine: Engine,
        faults: Vec<Fault>,
        verdicts: Vec<Verdict>,
        costs: Vec<FaultCost>,
        shared_control: u64,
        comparable: bool,
    ) -> Self {
        debug_assert_eq!(faults.len(), verdicts.len());
        let summary = Summary::from_verdicts(&verdicts);
        CampaignResult {
            engine,
            faults,
            verdicts,
            ledger: CostLedger::build(&costs, shared_control, comparable),
            summary,
        }
    }

    pub fn classes(&self) -> Vec<FaultClass> {
        self.verdicts.iter().map(|v| v.class).collect()
    }

    pub fn estimate_time(&self, f_clk: u64) -> Result<TimeEstimate> {
        estimate_time(self.ledger.total_edges, self.faults.len(), f_clk)
    }
}

/// A circuit, its testbench and golden run, ready for any engine.
#[derive(Debug, Clone)]
pub struct Campaign {
    lev: Levelized,
    tb: Testbench,
    trace: GoldenTrace,
}

impl Campaign {
    pub fn new(c: &Circuit, tb: Testbench) -> Result<Self> {
        let lev = levelize(c)?;
        let trace = golden_run(&lev, &tb)?;
        Ok(Campaign { lev, tb, trace })
    }

    pub fn levelized(&self) -> &Levelized {
        &self.lev
    }

    pub fn testbench(&self) -> &Testbench {
        &self.tb
    }

    pub fn trace(&self) -> &GoldenTrace {
        &self.trace
    }

    pub fn faults(&self) -> Vec<Fault> {
        grading::fault_list(self.lev.num_flops(), self.tb.len())
    }

    pub fn run(&self, engine: Engine, cm: &CostModel, exec: Exec) -> Result<CampaignResult> {
        run_engine(engine, &self.lev, &self.tb, &self.trace, cm, exec)
    }
}
