// SPDX-License-Identifier: Apache-2.0

//! Structural fault-injection instruments.
//!
//! Each transform replaces every flop of a circuit with the instrument of one
//! technique and exposes the controller's handles as extra primary ports
//! prefixed `__ctl_`. The result is an ordinary [`Circuit`] that the rest of
//! the toolkit can validate, simulate and serialize.

mod controller;
mod model;
mod transform;

pub use controller::{
    controller_program, simulate_instrumented, structural_verdict, ControllerProgram,
    InstrumentedTrace, Probe, Schedule, ScheduleStep,
};
pub use model::{
    memory_footprint, model_instrumented_ff, overhead_report, Footprint, FootprintParams,
    OverheadReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlist::{validate, Circuit};

/// Prefix reserved for controller ports.
pub const CTL_PREFIX: &str = "__ctl_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Technique {
    MaskScan,
    StateScan,
    TimeMux,
}

impl Technique {
    pub const ALL: [Technique; 3] = [
        Technique::MaskScan,
        Technique::StateScan,
        Technique::TimeMux,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Technique::MaskScan => "mask-scan",
            Technique::StateScan => "state-scan",
            Technique::TimeMux => "time-mux",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Technique::ALL.into_iter().find(|t| t.as_str() == s)
    }

    /// Instrument flops per original flop.
    pub fn copies_per_flop(self) -> usize {
        match self {
            Technique::MaskScan | Technique::StateScan => 2,
            Technique::TimeMux => 4,
        }
    }
}

impl std::fmt::Display for Technique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The flops that replace one original flop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopCopies {
    pub original: String,
    pub copies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstrumentedDesign {
    pub technique: Technique,
    pub circuit: Circuit,
    /// Leading entries of `circuit.inputs` / `circuit.outputs` that belong to
    /// the original circuit; control ports follow.
    pub functional_inputs: usize,
    pub functional_outputs: usize,
    pub control_inputs: Vec<String>,
    pub control_outputs: Vec<String>,
    pub flop_map: Vec<FlopCopies>,
    /// Golden-output latches (time-mux only); not part of the per-flop
    /// instrument.
    pub output_latches: Vec<String>,
    pub added_gates: usize,
}

impl InstrumentedDesign {
    /// Flops belonging to per-flop instruments.
    pub fn instrument_ff(&self) -> usize {
        self.flop_map.iter().map(|m| m.copies.len()).sum()
    }

    pub fn control_input_index(&self, name: &str) -> Option<usize> {
        self.control_inputs.iter().position(|n| n == name)
    }

    pub fn control_output_index(&self, name: &str) -> Option<usize> {
        self.control_outputs.iter().position(|n| n == name)
    }
}

/// Replaces every flop of `c` with the instrument of `t`.
pub fn instrument(c: &Circuit, t: Technique) -> Result<InstrumentedDesign> {
    let violations = validate(c);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let design = match t {
        Technique::MaskScan => transform::mask_scan(c),
        Technique::StateScan => transform::state_scan(c),
        Technique::TimeMux => transform::time_mux(c),
    };
    // Name clashes with the reserved prefixes surface here.
    let violations = validate(&design.circuit);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    Ok(design)
}
