// SPDX-License-Identifier: Apache-2.0

//! Cycle-accurate synchronous simulation.
//!
//! During cycle `k` the stimulus vector `k` is applied and the logic settles.
//! Outputs `Y_k` are sampled before the clock edge produces `S_{k+1}`.
//! No edge follows the last cycle, so `S_{N-1}` is the final state.

mod stimuli;

pub use stimuli::{parse_stimuli, write_stimuli};

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlist::{bit_rows, Levelized};

/// Flop values ordered as `Circuit::flops`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct State(Vec<bool>);

impl State {
    pub fn new(bits: Vec<bool>) -> Self {
        State(bits)
    }

    pub fn zeros(width: usize) -> Self {
        State(vec![false; width])
    }

    pub fn hamming_weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }
}

impl Deref for State {
    type Target = [bool];
    fn deref(&self) -> &[bool] {
        &self.0
    }
}

impl AsRef<[bool]> for State {
    fn as_ref(&self) -> &[bool] {
        &self.0
    }
}

impl From<Vec<bool>> for State {
    fn from(v: Vec<bool>) -> Self {
        State(v)
    }
}

/// Returns a copy of `s` with flop `i` inverted.
pub fn flip_bit(s: &State, i: usize) -> Result<State> {
    if i >= s.len() {
        return Err(Error::FlopIndex {
            index: i,
            count: s.len(),
        });
    }
    let mut bits = s.0.clone();
    bits[i] = !bits[i];
    Ok(State(bits))
}

/// Ordered stimulus vectors, one per emulated cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Testbench {
    vectors: Vec<Vec<bool>>,
}

impl Testbench {
    pub fn new(vectors: Vec<Vec<bool>>, width: usize) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Stimuli("testbench needs at least one vector".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != width) {
            return Err(Error::Width {
                what: "stimulus vector",
                expected: width,
                found: v.len(),
            });
        }
        Ok(Testbench { vectors })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<bool>] {
        &self.vectors
    }

    pub fn vector(&self, cycle: usize) -> &[bool] {
        &self.vectors[cycle]
    }

    pub fn width(&self) -> usize {
        self.vectors[0].len()
    }
}

/// Fault-free reference execution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTrace {
    #[serde(with = "state_rows")]
    pub states: Vec<State>,
    #[serde(with = "bit_rows")]
    pub outputs: Vec<Vec<bool>>,
}

impl GoldenTrace {
    pub fn cycles(&self) -> usize {
        self.states.len()
    }

    pub fn final_state(&self) -> &State {
        self.states.last().expect("trace has at least one cycle")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: GoldenTrace =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if t.states.len() != t.outputs.len() || t.states.is_empty() {
            return Err(Error::Schema(format!(
                "trace has {} states and {} output vectors",
                t.states.len(),
                t.outputs.len()
            )));
        }
        Ok(t)
    }
}

mod state_rows {
    use super::State;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[State], s: S) -> Result<S::Ok, S::Error> {
        crate::netlist::bit_rows::serialize(rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<State>, D::Error> {
        Ok(crate::netlist::bit_rows::deserialize(d)?
            .into_iter()
            .map(State)
            .collect())
    }
}

/// Reusable evaluation buffers around a levelized circuit.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    lev: &'a Levelized,
    nets: Vec<bool>,
}

impl<'a> Stepper<'a> {
    pub fn new(lev: &'a Levelized) -> Self {
        Stepper {
            lev,
            nets: vec![false; lev.num_nets()],
        }
    }

    pub fn circuit(&self) -> &'a Levelized {
        self.lev
    }

    /// Settles the logic for one cycle. Widths must already be checked.
    #[inline]
    pub fn settle(&mut self, inputs: &[bool], state: &[bool]) {
        self.lev.settle(&mut self.nets, inputs, state);
    }

    #[inline]
    pub fn outputs_match(&self, expected: &[bool]) -> bool {
        self.lev.outputs_equal(&self.nets, expected)
    }

    #[inline]
    pub fn outputs_into(&self, out: &mut Vec<bool>) {
        self.lev.read_outputs(&self.nets, out);
    }

    /// Clock edge: writes the captured D values into `state`.
    #[inline]
    pub fn clock(&self, state: &mut [bool]) {
        self.lev.read_next_state(&self.nets, state);
    }
}

/// One synchronous cycle: returns the sampled outputs and the next state.
pub fn step(lev: &Levelized, s: &State, inputs: &[bool]) -> Result<(Vec<bool>, State)> {
    let eval = lev.eval_comb(inputs, s)?;
    let mut stepper = Stepper::new(lev);
    stepper.nets = eval.nets;
    let mut next = State::zeros(lev.num_flops());
    stepper.clock(&mut next.0);
    Ok((eval.outputs, next))
}

fn check_testbench(lev: &Levelized, tb: &Testbench) -> Result<()> {
    if tb.width() != lev.num_inputs() {
        return Err(Error::Width {
            what: "stimulus vector",
            expected: lev.num_inputs(),
            found: tb.width(),
        });
    }
    Ok(())
}

/// Runs the fault-free circuit over the whole testbench.
pub fn golden_run(lev: &Levelized, tb: &Testbench) -> Result<GoldenTrace> {
    check_testbench(lev, tb)?;
    let n = tb.len();
    let mut stepper = Stepper::new(lev);
    let mut states = Vec::with_capacity(n);
    let mut outputs = Vec::with_capacity(n);
    let mut state = lev.init_state().to_vec();
    for (k, inp) in tb.vectors().iter().enumerate() {
        stepper.settle(inp, &state);
        let mut y = Vec::with_capacity(lev.num_outputs());
        stepper.outputs_into(&mut y);
        outputs.push(y);
        states.push(State(state.clone()));
        if k + 1 < n {
            stepper.clock(&mut state);
        }
    }
    Ok(GoldenTrace { states, outputs })
}
