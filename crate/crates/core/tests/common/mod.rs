// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures and helpers for the integration tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seugrade::grading::{gen_random_fixture, FixtureParams};
use seugrade::netlist::{parse_netlist, Circuit, Levelized};
use seugrade::sim::{parse_stimuli, step, State, Testbench};

/// FIX-A: two-flop serial shift register.
pub fn fix_a() -> (Circuit, Testbench) {
    load(
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/sr2.json"
        )),
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/sr2.csv"
        )),
    )
}

/// FIX-B: one flop gating an AND.
pub fn fix_b() -> (Circuit, Testbench) {
    load(
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/gated.json"
        )),
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/gated.csv"
        )),
    )
}

fn load(netlist: &str, stimuli: &str) -> (Circuit, Testbench) {
    let c = parse_netlist(netlist).unwrap();
    let tb = parse_stimuli(stimuli, &c).unwrap();
    (c, tb)
}

/// Parameters for the seeded small-fixture family: F in 1..=32, N in 2..=64.
pub fn small_params(seed: u64) -> FixtureParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f1c5);
    FixtureParams {
        flops: rng.gen_range(1..=32),
        gates: rng.gen_range(0..=64),
        inputs: rng.gen_range(1..=8),
        outputs: rng.gen_range(1..=8),
        cycles: rng.gen_range(2..=64),
    }
}

pub fn small_fixture(seed: u64) -> (Circuit, Testbench) {
    gen_random_fixture(seed, small_params(seed))
}

/// States entering cycles `from..N` and the outputs sampled in them,
/// starting from `start` at cycle `from`.
pub fn trajectory(
    lev: &Levelized,
    tb: &Testbench,
    start: &State,
    from: usize,
) -> (Vec<State>, Vec<Vec<bool>>) {
    let mut states = Vec::new();
    let mut outputs = Vec::new();
    let mut s = start.clone();
    for k in from..tb.len() {
        let (y, next) = step(lev, &s, tb.vector(k)).unwrap();
        states.push(s);
        outputs.push(y);
        s = next;
    }
    (states, outputs)
}
