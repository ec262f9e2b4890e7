// SPDX-License-Identifier: Apache-2.0

//! Controller programs that drive an instrumented netlist through one fault,
//! and a plain simulator for running them.

use super::transform::{golden_bus, ports};
use super::{InstrumentedDesign, Technique};
use crate::error::{Error, Result};
use crate::grading::{check_fault, Fault, FaultClass, Verdict};
use crate::netlist::levelize;
use crate::sim::{GoldenTrace, Stepper, Testbench};

/// Port values for one clock cycle of the instrumented circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleStep {
    pub functional: Vec<bool>,
    /// Ordered as `InstrumentedDesign::control_inputs`.
    pub control: Vec<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    pub steps: Vec<ScheduleStep>,
}

/// What the controller samples, and when.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    /// Compare functional outputs with golden `Y_cycle`.
    Outputs { step: usize, cycle: usize },
    /// `__ctl_out_mismatch` high means FAILURE at `cycle`.
    Mismatch { step: usize, cycle: usize },
    /// `__ctl_state_eq` high means SILENT at `cycle`.
    Converged { step: usize, cycle: usize },
    /// `__ctl_scan_out` carries final-state bit `flop`.
    ScanOut { step: usize, flop: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllerProgram {
    pub schedule: Schedule,
    pub probes: Vec<Probe>,
}

/// Sampled outputs of every step, taken after the logic settles and before
/// the clock edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstrumentedTrace {
    pub functional: Vec<Vec<bool>>,
    pub control: Vec<Vec<bool>>,
}

/// Simulates the instrumented netlist from its initial state (the reset
/// state of every instrument flop) under `schedule`.
pub fn simulate_instrumented(
    d: &InstrumentedDesign,
    schedule: &Schedule,
) -> Result<InstrumentedTrace> {
    let lev = levelize(&d.circuit)?;
    let mut stepper = Stepper::new(&lev);
    let mut state = lev.init_state().to_vec();
    let mut inputs = Vec::with_capacity(d.circuit.inputs.len());
    let mut outs = Vec::new();
    let mut trace = InstrumentedTrace {
        functional: Vec::with_capacity(schedule.steps.len()),
        control: Vec::with_capacity(schedule.steps.len()),
    };
    for (k, s) in schedule.steps.iter().enumerate() {
        if s.functional.len() != d.functional_inputs || s.control.len() != d.control_inputs.len() {
            return Err(Error::Schedule(format!(
                "step {k} drives {}+{} ports, design has {}+{}",
                s.functional.len(),
                s.control.len(),
                d.functional_inputs,
                d.control_inputs.len()
            )));
        }
        inputs.clear();
        inputs.extend_from_slice(&s.functional);
        inputs.extend_from_slice(&s.control);
        stepper.settle(&inputs, &state);
        stepper.outputs_into(&mut outs);
        trace.functional.push(outs[..d.functional_outputs].to_vec());
        trace.control.push(outs[d.functional_outputs..].to_vec());
        stepper.clock(&mut state);
    }
    Ok(trace)
}

struct Emitter<'a> {
    d: &'a InstrumentedDesign,
    schedule: Schedule,
    probes: Vec<Probe>,
}

impl<'a> Emitter<'a> {
    fn new(d: &'a InstrumentedDesign) -> Self {
        Emitter {
            d,
            schedule: Schedule::default(),
            probes: Vec::new(),
        }
    }

    /// Appends a step with the named control inputs high and the rest low.
    fn step(&mut self, functional: &[bool], high: &[&str]) -> usize {
        let mut control = vec![false; self.d.control_inputs.len()];
        for name in high {
            let i = self
                .d
                .control_input_index(name)
                .expect("port exists for this technique");
            control[i] = true;
        }
        self.schedule.steps.push(ScheduleStep {
            functional: functional.to_vec(),
            control,
        });
        self.schedule.steps.len() - 1
    }

    fn set_bus(&mut self, step: usize, bits: &[bool]) {
        for (i, &b) in bits.iter().enumerate() {
            let at = self
                .d
                .control_input_index(&golden_bus(i))
                .expect("golden bus port");
            self.schedule.steps[step].control[at] = b;
        }
    }

    fn finish(self) -> ControllerProgram {
        ControllerProgram {
            schedule: self.schedule,
            probes: self.probes,
        }
    }
}

/// One-hot mask load: `flop + 1` shifts, with a 1 entering on the first.
fn load_mask(e: &mut Emitter<'_>, idle: &[bool], flop: usize) {
    for t in 0..=flop {
        if t == 0 {
            e.step(idle, &[ports::MASK_SHIFT, ports::MASK_IN]);
        } else {
            e.step(idle, &[ports::MASK_SHIFT]);
        }
    }
}

/// Builds the controller program that grades `fault` on the design.
pub fn controller_program(
    d: &InstrumentedDesign,
    tb: &Testbench,
    trace: &GoldenTrace,
    fault: Fault,
) -> Result<ControllerProgram> {
    let f = d.flop_map.len();
    let n = tb.len();
    check_fault(fault, f, n)?;
    if tb.width() != d.functional_inputs || trace.cycles() != n {
        return Err(Error::Schedule(
            "testbench or trace does not fit the design".into(),
        ));
    }
    let idle = vec![false; d.functional_inputs];
    let mut e = Emitter::new(d);
    let j = fault.cycle;

    match d.technique {
        Technique::MaskScan => {
            load_mask(&mut e, &idle, fault.flop);
            // Full replay from reset. The last cycle holds instead of
            // clocking so the chain keeps S_{N-1}.
            for k in 0..n {
                let mut high = Vec::new();
                if k + 1 < n {
                    high.push(ports::RUN);
                }
                if k == j {
                    high.push(ports::INJECT);
                }
                let step = e.step(tb.vector(k), &high);
                e.probes.push(Probe::Outputs { step, cycle: k });
            }
            for t in 0..f {
                let step = e.step(&idle, &[ports::SCAN_EN]);
                e.probes.push(Probe::ScanOut {
                    step,
                    flop: f - 1 - t,
                });
            }
        }
        Technique::StateScan => {
            let mut target = trace.states[j].to_vec();
            target[fault.flop] = !target[fault.flop];
            for t in 0..f {
                let high: &[&str] = if target[f - 1 - t] {
                    &[ports::SCAN_EN, ports::SCAN_IN]
                } else {
                    &[ports::SCAN_EN]
                };
                let step = e.step(&idle, high);
                e.set_bus(step, &trace.states[j]);
            }
            for k in j..n {
                let step = e.step(tb.vector(k), &[]);
                e.set_bus(step, &trace.states[(k + 1).min(n - 1)]);
                if k > j {
                    e.probes.push(Probe::Converged { step, cycle: k });
                }
                e.probes.push(Probe::Outputs { step, cycle: k });
            }
        }
        Technique::TimeMux => {
            load_mask(&mut e, &idle, fault.flop);
            // Walk the checkpoint from S_0 to S_j.
            for t in 0..j {
                e.step(tb.vector(t), &[ports::RUN]);
                e.step(&idle, &[ports::CKPT_SAVE]);
            }
            e.step(&idle, &[ports::RESTORE]);
            for k in j..n {
                let golden = e.step(tb.vector(k), &[ports::RUN]);
                if k > j {
                    e.probes.push(Probe::Converged {
                        step: golden,
                        cycle: k,
                    });
                }
                let high: &[&str] = if k == j {
                    &[ports::PHASE, ports::RUN, ports::INJECT]
                } else {
                    &[ports::PHASE, ports::RUN]
                };
                let faulty = e.step(tb.vector(k), high);
                e.probes.push(Probe::Mismatch {
                    step: faulty,
                    cycle: k,
                });
            }
        }
    }
    Ok(e.finish())
}

/// Grades `fault` by simulating the instrumented netlist under its
/// controller program and reading the probes in order.
pub fn structural_verdict(
    d: &InstrumentedDesign,
    tb: &Testbench,
    trace: &GoldenTrace,
    fault: Fault,
) -> Result<Verdict> {
    let program = controller_program(d, tb, trace, fault)?;
    let sim = simulate_instrumented(d, &program.schedule)?;
    let port = |name: &str| d.control_output_index(name).expect("control output exists");
    let n = tb.len();
    let mut final_state = vec![false; d.flop_map.len()];
    let mut scanned = false;
    for p in &program.probes {
        match *p {
            Probe::Outputs { step, cycle } => {
                if sim.functional[step] != trace.outputs[cycle] {
                    return Ok(Verdict::new(FaultClass::Failure, cycle));
                }
            }
            Probe::Mismatch { step, cycle } => {
                if sim.control[step][port(ports::OUT_MISMATCH)] {
                    return Ok(Verdict::new(FaultClass::Failure, cycle));
                }
            }
            Probe::Converged { step, cycle } => {
                if sim.control[step][port(ports::STATE_EQ)] {
                    return Ok(Verdict::new(FaultClass::Silent, cycle));
                }
            }
            Probe::ScanOut { step, flop } => {
                final_state[flop] = sim.control[step][port(ports::SCAN_OUT)];
                scanned = true;
            }
        }
    }
    if scanned {
        let class = if final_state[..] == trace.final_state()[..] {
            FaultClass::Silent
        } else {
            FaultClass::Latent
        };
        return Ok(Verdict {
            class,
            at_cycle: n - 1,
            final_compare: true,
        });
    }
    Ok(Verdict::new(FaultClass::Latent, n - 1))
}
