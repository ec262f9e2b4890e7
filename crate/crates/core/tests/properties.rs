// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seugrade::emu::{run_engine, Campaign, CostModel, Engine, Exec};
use seugrade::grading::{
    classify_oracle, fault_list, gen_random_fixture, FaultClass, FixtureParams,
};
use seugrade::instrument::{
    instrument, memory_footprint, model_instrumented_ff, structural_verdict, FootprintParams,
    Technique,
};
use seugrade::netlist::{levelize, parse_netlist, to_json, Circuit};
use seugrade::sim::{flip_bit, golden_run, State, Testbench};

use common::{fix_a, fix_b, trajectory};

fn params() -> impl Strategy<Value = FixtureParams> {
    (
        0usize..=12,
        0usize..=40,
        1usize..=5,
        1usize..=5,
        1usize..=16,
    )
        .prop_map(|(flops, gates, inputs, outputs, cycles)| FixtureParams {
            flops,
            gates,
            inputs,
            outputs,
            cycles,
        })
}

fn fixture() -> impl Strategy<Value = (Circuit, Testbench)> {
    (any::<u64>(), params()).prop_map(|(seed, p)| gen_random_fixture(seed, p))
}

fn bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn netlist_json_round_trip((c, _) in fixture()) {
        let text = to_json(&c);
        let back = parse_netlist(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn evaluation_ignores_gate_order((c, _) in fixture(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = c.clone();
        shuffled.gates.shuffle(&mut rng);
        let a = levelize(&c).unwrap();
        let b = levelize(&shuffled).unwrap();
        for _ in 0..8 {
            let inputs = bits(&mut rng, c.num_inputs());
            let state = bits(&mut rng, c.num_flops());
            prop_assert_eq!(
                a.eval_comb(&inputs, &state).unwrap().outputs,
                b.eval_comb(&inputs, &state).unwrap().outputs
            );
        }
    }

    #[test]
    fn flip_changes_weight_by_one(state in prop::collection::vec(any::<bool>(), 1..64), idx in any::<prop::sample::Index>()) {
        let s = State::new(state);
        let i = idx.index(s.len());
        let f = flip_bit(&s, i).unwrap();
        prop_assert_eq!(s.hamming_weight().abs_diff(f.hamming_weight()), 1);
        prop_assert_eq!(flip_bit(&f, i).unwrap(), s);
    }

    #[test]
    fn grading_invariants((c, tb) in fixture()) {
        let lev = levelize(&c).unwrap();
        let trace = golden_run(&lev, &tb).unwrap();
        let n = tb.len();
        let faults = fault_list(c.num_flops(), n);
        prop_assert_eq!(faults.len(), c.num_flops() * n);
        let mut counts = [0usize; 3];
        for f in faults {
            let v = classify_oracle(&lev, &trace, &tb, f).unwrap();
            counts[v.class as usize] += 1;
            let start = flip_bit(&trace.states[f.cycle], f.flop).unwrap();
            let (states, outputs) = trajectory(&lev, &tb, &start, f.cycle);
            match v.class {
                FaultClass::Failure => prop_assert_ne!(&outputs[v.at_cycle - f.cycle], &trace.outputs[v.at_cycle]),
                FaultClass::Silent => {
                    prop_assert!(v.at_cycle > f.cycle);
                    for m in v.at_cycle..n {
                        prop_assert_eq!(&states[m - f.cycle], &trace.states[m]);
                    }
                }
                FaultClass::Latent => {
                    prop_assert_eq!(v.at_cycle, n - 1);
                    prop_assert_ne!(states.last().unwrap(), trace.final_state());
                }
            }
        }
        prop_assert_eq!(counts.iter().sum::<usize>(), c.num_flops() * n);
    }

    #[test]
    fn footprint_is_monotone(
        base in (0u64..300, 0u64..64, 0u64..64, 0u64..300, 1u64..=2),
        which in 0usize..5,
        bump in 1u64..50,
    ) {
        let (flops, inputs, outputs, cycles, verdict_width) = base;
        let p = FootprintParams { flops, inputs, outputs, cycles, verdict_width };
        let mut q = p;
        match which {
            0 => q.flops += bump,
            1 => q.inputs += bump,
            2 => q.outputs += bump,
            3 => q.cycles += bump,
            _ => q.verdict_width = 2,
        }
        for t in Technique::ALL {
            let a = memory_footprint(p, t).unwrap();
            let b = memory_footprint(q, t).unwrap();
            prop_assert!(b.fpga_ram_bits >= a.fpga_ram_bits);
            prop_assert!(b.board_ram_bits >= a.board_ram_bits);
        }
    }

    #[test]
    fn flop_model_is_exact((c, _) in fixture()) {
        for t in Technique::ALL {
            let d = instrument(&c, t).unwrap();
            prop_assert_eq!(d.instrument_ff(), model_instrumented_ff(c.num_flops(), t));
            prop_assert!(levelize(&d.circuit).is_ok());
        }
    }

    #[test]
    fn ledger_conservation((c, tb) in fixture()) {
        let campaign = Campaign::new(&c, tb).unwrap();
        for engine in Engine::ALL {
            let r = campaign.run(engine, &CostModel::default(), Exec::Sequential).unwrap();
            let l = &r.ledger;
            prop_assert_eq!(l.per_fault_edges.len(), r.verdicts.len());
            prop_assert_eq!(l.per_fault_edges.iter().sum::<u64>() + l.shared_control_edges, l.total_edges);
            prop_assert_eq!(l.breakdown.total(), l.total_edges);
            prop_assert!(l.breakdown.control >= l.shared_control_edges);
            prop_assert_eq!(r.summary.counts.total(), r.verdicts.len());
        }
    }

    #[test]
    fn engines_match_oracle((c, tb) in fixture()) {
        let campaign = Campaign::new(&c, tb).unwrap();
        let cm = CostModel::default();
        let oracle = campaign.run(Engine::Oracle, &cm, Exec::Sequential).unwrap();
        for engine in [Engine::MaskScan, Engine::StateScan, Engine::TimeMux] {
            let r = campaign.run(engine, &cm, Exec::Sequential).unwrap();
            prop_assert_eq!(r.classes(), oracle.classes());
            if engine != Engine::MaskScan {
                prop_assert_eq!(&r.verdicts, &oracle.verdicts);
            }
        }
    }

    #[test]
    fn scheduling_does_not_change_results((c, tb) in fixture()) {
        let lev = levelize(&c).unwrap();
        let trace = golden_run(&lev, &tb).unwrap();
        let cm = CostModel::default();
        for engine in Engine::ALL {
            let seq = run_engine(engine, &lev, &tb, &trace, &cm, Exec::Sequential).unwrap();
            let par = run_engine(engine, &lev, &tb, &trace, &cm, Exec::Parallel).unwrap();
            prop_assert_eq!(seq, par);
        }
    }
}

#[test]
fn thousand_circuits_levelize_in_dependency_order() {
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = FixtureParams {
            flops: rng.gen_range(0..=16),
            gates: rng.gen_range(0..=80),
            inputs: rng.gen_range(1..=6),
            outputs: rng.gen_range(1..=6),
            cycles: 1,
        };
        let (c, _) = gen_random_fixture(seed, p);
        let lev = levelize(&c).unwrap();
        assert_eq!(lev.order().len(), c.gates.len(), "seed {seed}");
        let mut ready: std::collections::HashSet<&str> =
            c.inputs.iter().map(String::as_str).collect();
        ready.extend(c.flops.iter().map(|f| f.q.as_str()));
        for &g in lev.order() {
            let gate = &c.gates[g];
            for i in &gate.ins {
                assert!(
                    ready.contains(i.as_str()),
                    "seed {seed}: {} reads {i} before it settles",
                    gate.id
                );
            }
            ready.insert(&gate.out);
        }
    }
}

#[test]
fn structural_mask_scan_matches_oracle() {
    let mut designs = vec![fix_a(), fix_b()];
    designs.extend((0..20).map(|s| {
        gen_random_fixture(
            1000 + s,
            FixtureParams {
                flops: 1 + (s as usize % 6),
                gates: 24,
                inputs: 3,
                outputs: 3,
                cycles: 3 + (s as usize % 8),
            },
        )
    }));
    for (c, tb) in designs {
        let lev = levelize(&c).unwrap();
        let trace = golden_run(&lev, &tb).unwrap();
        let d = instrument(&c, Technique::MaskScan).unwrap();
        for f in fault_list(c.num_flops(), tb.len()) {
            let want = classify_oracle(&lev, &trace, &tb, f).unwrap();
            let got = structural_verdict(&d, &tb, &trace, f).unwrap();
            assert_eq!(got.class, want.class, "{f:?}");
        }
    }
}

#[test]
fn structural_online_techniques_match_oracle() {
    for s in 0..10u64 {
        let (c, tb) = gen_random_fixture(
            2000 + s,
            FixtureParams {
                flops: 2 + (s as usize % 4),
                gates: 20,
                inputs: 2,
                outputs: 2,
                cycles: 4 + (s as usize % 5),
            },
        );
        let lev = levelize(&c).unwrap();
        let trace = golden_run(&lev, &tb).unwrap();
        for t in [Technique::StateScan, Technique::TimeMux] {
            let d = instrument(&c, t).unwrap();
            for f in fault_list(c.num_flops(), tb.len()) {
                let want = classify_oracle(&lev, &trace, &tb, f).unwrap();
                assert_eq!(
                    structural_verdict(&d, &tb, &trace, f).unwrap(),
                    want,
                    "{t} {f:?}"
                );
            }
        }
    }
}
