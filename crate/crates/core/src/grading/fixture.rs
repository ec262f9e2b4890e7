// SPDX-License-Identifier: Apache-2.0

//! Seeded random circuits and testbenches for property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netlist::{Circuit, Flop, Gate, GateKind};
use crate::sim::Testbench;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureParams {
    pub flops: usize,
    pub gates: usize,
    pub inputs: usize,
    pub outputs: usize,
    pub cycles: usize,
}

const KINDS: [(GateKind, u32); 11] = [
    (GateKind::And, 12),
    (GateKind::Or, 12),
    (GateKind::Nand, 10),
    (GateKind::Nor, 10),
    (GateKind::Xor, 14),
    (GateKind::Xnor, 8),
    (GateKind::Not, 8),
    (GateKind::Buf, 4),
    (GateKind::Mux, 10),
    (GateKind::Const0, 1),
    (GateKind::Const1, 1),
];

fn pick_kind(rng: &mut ChaCha8Rng) -> GateKind {
    let total: u32 = KINDS.iter().map(|(_, w)| w).sum();
    let mut r = rng.gen_range(0..total);
    for (k, w) in KINDS {
        if r < w {
            return k;
        }
        r -= w;
    }
    unreachable!()
}

/// Picks a net, favouring the most recently created ones so the logic gets
/// some depth instead of being a single level over the inputs.
fn pick_net<'a>(rng: &mut ChaCha8Rng, pool: &'a [String]) -> &'a str {
    let len = pool.len();
    if len > 8 && rng.gen_bool(0.5) {
        &pool[len - 1 - rng.gen_range(0..8)]
    } else {
        &pool[rng.gen_range(0..len)]
    }
}

/// Generates a valid random circuit and testbench, deterministic in `seed`.
///
/// Needs `inputs >= 1`. When fewer distinct nets exist than requested
/// outputs, buffer gates are appended to drive the remainder.
pub fn gen_random_fixture(seed: u64, p: FixtureParams) -> (Circuit, Testbench) {
    assert!(p.inputs >= 1, "random fixtures need at least one input");
    assert!(p.cycles >= 1, "random fixtures need at least one cycle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let inputs: Vec<String> = (0..p.inputs).map(|k| format!("i{k}")).collect();
    let mut pool: Vec<String> = inputs.clone();
    pool.extend((0..p.flops).map(|k| format!("q{k}")));

    let mut gates = Vec::with_capacity(p.gates);
    for k in 0..p.gates {
        let kind = pick_kind(&mut rng);
        let arity = match kind {
            GateKind::Not | GateKind::Buf => 1,
            GateKind::Mux => 3,
            GateKind::Const0 | GateKind::Const1 => 0,
            _ => {
                if rng.gen_bool(0.2) {
                    3
                } else {
                    2
                }
            }
        };
        let ins = (0..arity)
            .map(|_| pick_net(&mut rng, &pool).to_string())
            .collect();
        let out = format!("n{k}");
        gates.push(Gate {
            id: format!("g{k}"),
            kind,
            ins,
            out: out.clone(),
        });
        pool.push(out);
    }

    let flops = (0..p.flops)
        .map(|k| Flop {
            id: format!("f{k}"),
            d: pick_net(&mut rng, &pool).to_string(),
            q: format!("q{k}"),
            init: rng.gen_bool(0.5),
        })
        .collect();

    // Outputs: gate outputs first, then flop outputs, then inputs.
    let mut candidates: Vec<String> = gates.iter().map(|g| g.out.clone()).collect();
    candidates.shuffle(&mut rng);
    let mut rest: Vec<String> = pool[..p.inputs + p.flops].to_vec();
    rest.shuffle(&mut rng);
    candidates.extend(rest);
    let mut outputs: Vec<String> = candidates.into_iter().take(p.outputs).collect();
    while outputs.len() < p.outputs {
        let k = gates.len();
        let src = pick_net(&mut rng, &pool).to_string();
        let out = format!("n{k}");
        gates.push(Gate {
            id: format!("g{k}"),
            kind: GateKind::Buf,
            ins: vec![src],
            out: out.clone(),
        });
        outputs.push(out);
    }

    let circuit = Circuit {
        name: format!("rand_s{seed}"),
        inputs,
        outputs,
        gates,
        flops,
    };
    let vectors = (0..p.cycles)
        .map(|_| (0..p.inputs).map(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let tb = Testbench::new(vectors, p.inputs).expect("generated widths agree");
    (circuit, tb)
}

/// Which shift-register stages drive primary outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Taps {
    /// Only the last stage is observable.
    Serial,
    /// Every stage drives its own output.
    Parallel,
}

/// A `flops`-stage shift register fed by input `d`, initialised to zero,
/// with a seeded random testbench of `cycles` vectors.
pub fn shift_register(flops: usize, cycles: usize, taps: Taps, seed: u64) -> (Circuit, Testbench) {
    assert!(flops >= 1 && cycles >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flop_list: Vec<Flop> = (0..flops)
        .map(|k| Flop {
            id: format!("s{k}"),
            d: if k == 0 {
                "d".into()
            } else {
                format!("t{}", k - 1)
            },
            q: format!("t{k}"),
            init: false,
        })
        .collect();
    let outputs = match taps {
        Taps::Serial => vec![format!("t{}", flops - 1)],
        Taps::Parallel => (0..flops).map(|k| format!("t{k}")).collect(),
    };
    let circuit = Circuit {
        name: format!("sr{flops}"),
        inputs: vec!["d".into()],
        outputs,
        gates: Vec::new(),
        flops: flop_list,
    };
    let vectors = (0..cycles).map(|_| vec![rng.gen_bool(0.5)]).collect();
    (circuit, Testbench::new(vectors, 1).expect("width 1"))
}
