// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use super::{CampaignResult, CostModel, Engine, FaultCost};
use crate::error::{Error, Result};
use crate::grading::{campaign_oracle, fault_list, Fault, FaultClass, Verdict};
use crate::netlist::Levelized;
use crate::sim::{GoldenTrace, Stepper, Testbench};

/// How faults are scheduled. Results are identical either way.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

struct Ctx<'a> {
    lev: &'a Levelized,
    tb: &'a Testbench,
    trace: &'a GoldenTrace,
    cm: &'a CostModel,
}

fn check_inputs(
    lev: &Levelized,
    tb: &Testbench,
    trace: &GoldenTrace,
    cm: &CostModel,
) -> Result<()> {
    cm.validate()?;
    if tb.width() != lev.num_inputs() {
        return Err(Error::Width {
            what: "stimulus vector",
            expected: lev.num_inputs(),
            found: tb.width(),
        });
    }
    if trace.cycles() != tb.len() {
        return Err(Error::Width {
            what: "golden trace",
            expected: tb.len(),
            found: trace.cycles(),
        });
    }
    Ok(())
}

fn grade<F>(ctx: &Ctx<'_>, exec: Exec, per_fault: F) -> (Vec<Fault>, Vec<Verdict>, Vec<FaultCost>)
where
    F: Fn(&mut Stepper<'_>, Fault) -> (Verdict, FaultCost) + Sync,
{
    let faults = fault_list(ctx.lev.num_flops(), ctx.tb.len());
    let graded: Vec<(Verdict, FaultCost)> = match exec {
        Exec::Sequential => {
            let mut stepper = Stepper::new(ctx.lev);
            faults.iter().map(|&f| per_fault(&mut stepper, f)).collect()
        }
        Exec::Parallel => faults
            .par_iter()
            .map_init(
                || Stepper::new(ctx.lev),
                |stepper, &f| per_fault(stepper, f),
            )
            .collect(),
    };
    let (verdicts, costs) = graded.into_iter().unzip();
    (faults, verdicts, costs)
}

/// Loads the upset state `flip(S_j, i)`.
fn upset_state(trace: &GoldenTrace, f: Fault) -> Vec<bool> {
    let mut s = trace.states[f.cycle].to_vec();
    s[f.flop] = !s[f.flop];
    s
}

/// Outcome of running a faulty state forward with online comparison against
/// the golden states and outputs.
enum Online {
    Failure(usize),
    Silent(usize),
    Latent,
}

/// Online comparison shared by the state-scan shadow and the time-mux golden
/// copy: state equality is checked on entering each cycle after injection,
/// outputs once the cycle has settled.
fn run_online(stepper: &mut Stepper<'_>, tb: &Testbench, trace: &GoldenTrace, f: Fault) -> Online {
    let n = tb.len();
    let mut state = upset_state(trace, f);
    for k in f.cycle..n {
        if k > f.cycle && state[..] == trace.states[k][..] {
            return Online::Silent(k);
        }
        stepper.settle(tb.vector(k), &state);
        if !stepper.outputs_match(&trace.outputs[k]) {
            return Online::Failure(k);
        }
        if k + 1 < n {
            stepper.clock(&mut state);
        }
    }
    Online::Latent
}

/// Mask-scan: reset, shift the one-hot mask, replay the testbench from cycle
/// 0 with the flip applied at the fault's cycle, stop at the first output
/// mismatch; otherwise scan out the final state and compare it with the
/// golden final state.
pub fn run_mask_scan(
    lev: &Levelized,
    tb: &Testbench,
    trace: &GoldenTrace,
    cm: &CostModel,
) -> Result<CampaignResult> {
    run_engine(Engine::MaskScan, lev, tb, trace, cm, Exec::default())
}

fn mask_scan_fault(ctx: &Ctx<'_>, stepper: &mut Stepper<'_>, f: Fault) -> (Verdict, FaultCost) {
    let n = ctx.tb.len();
    let cm = ctx.cm;
    let per_cycle = cm.cycle_edges(1);
    let control = cm.reset_edges + cm.mask_shift_edges_per_fault + cm.verdict_write_edges;

    // The replayed prefix 0..j is fault-free, so evaluation starts from the
    // recorded golden S_j; the prefix is still paid for in edges.
    let mut state = upset_state(ctx.trace, f);
    for k in f.cycle..n {
        // Once the state has re-converged the rest of the replay is golden:
        // no mismatch can follow and the final state will compare equal.
        // Evaluation stops; the ledger still pays the full replay.
        if k > f.cycle && state[..] == ctx.trace.states[k][..] {
            state.copy_from_slice(ctx.trace.final_state());
            break;
        }
        stepper.settle(ctx.tb.vector(k), &state);
        if !stepper.outputs_match(&ctx.trace.outputs[k]) {
            let cost = FaultCost {
                run: per_cycle * (k as u64 + 1),
                scan: 0,
                control,
            };
            return (Verdict::new(FaultClass::Failure, k), cost);
        }
        if k + 1 < n {
            stepper.clock(&mut state);
        }
    }
    let class = if state[..] == ctx.trace.final_state()[..] {
        FaultClass::Silent
    } else {
        FaultClass::Latent
    };
    let verdict = Verdict {
        class,
        at_cycle: n - 1,
        final_compare: true,
    };
    let cost = FaultCost {
        run: per_cycle * n as u64,
        scan: cm.scan_edges(ctx.lev.num_flops()),
        control,
    };
    (verdict, cost)
}

/// State-scan: scan the precomputed faulty state into the chain, run only
/// the remaining cycles with the golden shadow comparing state and outputs
/// every cycle.
pub fn run_state_scan(
    lev: &Levelized,
    tb: &Testbench,
    trace: &GoldenTrace,
    cm: &CostModel,
) -> Result<CampaignResult> {
    run_engine(Engine::StateScan, lev, tb, trace, cm, Exec::default())
}

fn state_scan_fault(ctx: &Ctx<'_>, stepper: &mut Stepper<'_>, f: Fault) -> (Verdict, FaultCost) {
    let n = ctx.tb.len();
    let j = f.cycle;
    let (verdict, cycles) = match run_online(stepper, ctx.tb, ctx.trace, f) {
        Online::Failure(k) => (Verdict::new(FaultClass::Failure, k), k - j + 1),
        Online::Silent(m) => (Verdict::new(FaultClass::Silent, m), m - j + 1),
        Online::Latent => (Verdict::new(FaultClass::Latent, n - 1), n - j),
    };
    let cost = FaultCost {
        run: ctx.cm.cycle_edges(1) * cycles as u64,
        scan: ctx.cm.scan_edges(ctx.lev.num_flops()),
        control: ctx.cm.verdict_write_edges,
    };
    (verdict, cost)
}

/// Time-multiplexed: faults grouped by injection cycle; the checkpoint holds
/// golden `S_j` for the group, each fault restores it into both copies, flips
/// the masked bit and alternates golden and faulty phases until a mismatch,
/// re-convergence, or the end of the testbench.
pub fn run_time_mux(
    lev: &Levelized,
    tb: &Testbench,
    trace: &GoldenTrace,
    cm: &CostModel,
) -> Result<CampaignResult> {
    run_engine(Engine::TimeMux, lev, tb, trace, cm, Exec::default())
}

fn time_mux_fault(ctx: &Ctx<'_>, stepper: &mut Stepper<'_>, f: Fault) -> (Verdict, FaultCost) {
    let n = ctx.tb.len();
    let j = f.cycle;
    let per_cycle = ctx.cm.cycle_edges(2);
    // The last phase of a cycle is observed combinationally, before its edge.
    let partial = per_cycle.saturating_sub(1);
    let (verdict, run) = match run_online(stepper, ctx.tb, ctx.trace, f) {
        Online::Failure(k) => (
            Verdict::new(FaultClass::Failure, k),
            per_cycle * (k - j) as u64 + partial,
        ),
        Online::Silent(m) => (
            Verdict::new(FaultClass::Silent, m),
            per_cycle * (m - j) as u64,
        ),
        Online::Latent => (
            Verdict::new(FaultClass::Latent, n - 1),
            per_cycle * (n - 1 - j) as u64 + partial,
        ),
    };
    let cost = FaultCost {
        run,
        scan: 0,
        control: ctx.cm.mask_shift_edges_per_fault
            + ctx.cm.inject_edges
            + ctx.cm.verdict_write_edges,
    };
    (verdict, cost)
}

/// Runs one engine over the full fault list.
pub fn run_engine(
    engine: Engine,
    lev: &Levelized,
    tb: &Testbench,
    trace: &GoldenTrace,
    cm: &CostModel,
    exec: Exec,
) -> Result<CampaignResult> {
    check_inputs(lev, tb, trace, cm)?;
    let ctx = Ctx { lev, tb, trace, cm };
    let (faults, verdicts, costs) = match engine {
        Engine::Oracle => {
            let r = campaign_oracle(lev, tb, trace)?;
            return Ok(r);
        }
        Engine::MaskScan => grade(&ctx, exec, |s, f| mask_scan_fault(&ctx, s, f)),
        Engine::StateScan => grade(&ctx, exec, |s, f| state_scan_fault(&ctx, s, f)),
        Engine::TimeMux => grade(&ctx, exec, |s, f| time_mux_fault(&ctx, s, f)),
    };
    let shared = match engine {
        // The checkpoint powers up holding S_0; each later cycle group
        // advances it once.
        Engine::TimeMux if !faults.is_empty() => {
            cm.checkpoint_advance_edges * (tb.len() as u64 - 1)
        }
        _ => 0,
    };
    Ok(CampaignResult::assemble(
        engine, faults, verdicts, costs, shared, true,
    ))
}
