// SPDX-License-Identifier: Apache-2.0

//! Exhaustive single bit-flip fault lists and the reference classifier.
//!
//! A fault flips one flop at the start of one cycle. It is a FAILURE when a
//! primary output differs from the golden run at or after the injection
//! cycle. Otherwise it is SILENT if the faulty state re-converges to the
//! golden state, and LATENT if it never does.

mod fixture;

pub use fixture::{gen_random_fixture, shift_register, FixtureParams, Taps};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::emu::{CampaignResult, Engine, FaultCost};
use crate::error::{Error, Result};
use crate::netlist::Levelized;
use crate::sim::{GoldenTrace, Stepper, Testbench};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fault {
    pub flop: usize,
    pub cycle: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FaultClass {
    Failure,
    Latent,
    Silent,
}

impl FaultClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FaultClass::Failure => "FAILURE",
            FaultClass::Latent => "LATENT",
            FaultClass::Silent => "SILENT",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "FAILURE" => Some(FaultClass::Failure),
            "LATENT" => Some(FaultClass::Latent),
            "SILENT" => Some(FaultClass::Silent),
            _ => None,
        }
    }
}

impl std::fmt::Display for FaultClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification of one fault.
///
/// `at_cycle` is the first mismatch cycle for FAILURE, the first
/// re-convergence cycle for SILENT and `N-1` for LATENT. Engines that only
/// compare final states report SILENT at `N-1` with `final_compare` set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdict {
    pub class: FaultClass,
    pub at_cycle: usize,
    #[serde(default)]
    pub final_compare: bool,
}

impl Verdict {
    pub fn new(class: FaultClass, at_cycle: usize) -> Self {
        Verdict {
            class,
            at_cycle,
            final_compare: false,
        }
    }
}

/// Every (flop, cycle) pair, cycle-major then flop ascending.
pub fn fault_list(num_flops: usize, num_cycles: usize) -> Vec<Fault> {
    (0..num_cycles)
        .flat_map(|cycle| (0..num_flops).map(move |flop| Fault { flop, cycle }))
        .collect()
}

pub(crate) fn check_fault(f: Fault, flops: usize, cycles: usize) -> Result<()> {
    if f.flop >= flops || f.cycle >= cycles {
        return Err(Error::FaultRange {
            flop: f.flop,
            cycle: f.cycle,
            flops,
            cycles,
        });
    }
    Ok(())
}

/// Reference classifier: re-simulates the faulty circuit from the injection
/// cycle to the end of the testbench, records the whole faulty trajectory,
/// and only then applies the class definitions.
pub fn classify_oracle(
    lev: &Levelized,
    trace: &GoldenTrace,
    tb: &Testbench,
    f: Fault,
) -> Result<Verdict> {
    let n = tb.len();
    check_fault(f, lev.num_flops(), n)?;
    if trace.cycles() != n {
        return Err(Error::Width {
            what: "golden trace",
            expected: n,
            found: trace.cycles(),
        });
    }
    let (states, outputs) = faulty_trajectory(lev, trace, tb, f);

    let mismatch = (f.cycle..n).find(|&k| outputs[k - f.cycle] != trace.outputs[k]);
    if let Some(k) = mismatch {
        return Ok(Verdict::new(FaultClass::Failure, k));
    }
    let converged = (f.cycle + 1..n).find(|&m| states[m - f.cycle][..] == trace.states[m][..]);
    Ok(match converged {
        Some(m) => Verdict::new(FaultClass::Silent, m),
        None => Verdict::new(FaultClass::Latent, n - 1),
    })
}

/// Faulty states and outputs for cycles `f.cycle..N`.
fn faulty_trajectory(
    lev: &Levelized,
    trace: &GoldenTrace,
    tb: &Testbench,
    f: Fault,
) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let n = tb.len();
    let mut stepper = Stepper::new(lev);
    let mut state = trace.states[f.cycle].to_vec();
    state[f.flop] = !state[f.flop];
    let mut states = Vec::with_capacity(n - f.cycle);
    let mut outputs = Vec::with_capacity(n - f.cycle);
    for k in f.cycle..n {
        stepper.settle(tb.vector(k), &state);
        let mut y = Vec::new();
        stepper.outputs_into(&mut y);
        outputs.push(y);
        states.push(state.clone());
        if k + 1 < n {
            stepper.clock(&mut state);
        }
    }
    (states, outputs)
}

/// Grades the whole fault list with the reference classifier.
///
/// The ledger counts simulated cycles, which are not clock edges and must
/// not be compared with the emulation engines.
pub fn campaign_oracle(
    lev: &Levelized,
    tb: &Testbench,
    trace: &GoldenTrace,
) -> Result<CampaignResult> {
    let n = tb.len();
    let faults = fault_list(lev.num_flops(), n);
    let verdicts = faults
        .par_iter()
        .map(|&f| classify_oracle(lev, trace, tb, f))
        .collect::<Result<Vec<_>>>()?;
    let costs = faults
        .iter()
        .map(|f| FaultCost {
            run: (n - f.cycle) as u64,
            ..FaultCost::default()
        })
        .collect();
    Ok(CampaignResult::assemble(
        Engine::Oracle,
        faults,
        verdicts,
        costs,
        Default::default(),
        false,
    ))
}
