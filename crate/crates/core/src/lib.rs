// SPDX-License-Identifier: Apache-2.0

//! Exhaustive single-event-upset fault grading for synchronous gate-level
//! circuits.
//!
//! Every flop is flipped at every cycle of a testbench and each fault is
//! classified by one of four interchangeable engines: a full re-simulation
//! reference, plus one model per emulation controller (mask-scan,
//! state-scan, time-multiplexed). Engines report a
//! clock-edge ledger; [`instrument`] builds the corresponding instrumented
//! netlists and their area and RAM models.

pub mod emu;
pub mod error;
pub mod grading;
pub mod instrument;
pub mod netlist;
pub mod report;
pub mod sim;

pub use emu::{Campaign, CampaignResult, CostModel, Engine, Exec};
pub use error::{Error, Result};
pub use grading::{Fault, FaultClass, Verdict};
pub use netlist::{Circuit, Levelized};
pub use sim::{GoldenTrace, State, Testbench};
