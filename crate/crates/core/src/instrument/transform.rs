// SPDX-License-Identifier: Apache-2.0

use super::{FlopCopies, InstrumentedDesign, Technique};
use crate::netlist::{Circuit, Flop, Gate, GateKind};

pub(crate) const RUN: &str = "__ctl_run";
pub(crate) const INJECT: &str = "__ctl_inject";
pub(crate) const MASK_SHIFT: &str = "__ctl_mask_shift";
pub(crate) const MASK_IN: &str = "__ctl_mask_in";
pub(crate) const MASK_OUT: &str = "__ctl_mask_out";
pub(crate) const SCAN_EN: &str = "__ctl_scan_en";
pub(crate) const SCAN_IN: &str = "__ctl_scan_in";
pub(crate) const SCAN_OUT: &str = "__ctl_scan_out";
pub(crate) const STATE_EQ: &str = "__ctl_state_eq";
pub(crate) const PHASE: &str = "__ctl_phase";
pub(crate) const RESTORE: &str = "__ctl_restore";
pub(crate) const CKPT_SAVE: &str = "__ctl_ckpt_save";
pub(crate) const OUT_MISMATCH: &str = "__ctl_out_mismatch";

pub(crate) fn golden_bus(i: usize) -> String {
    format!("__ctl_golden_{i}")
}

/// Accumulates added gates with fresh `__i_` names.
struct Builder {
    gates: Vec<Gate>,
    added: usize,
}

impl Builder {
    fn new(c: &Circuit) -> Self {
        Builder {
            gates: c.gates.clone(),
            added: 0,
        }
    }

    fn named(&mut self, kind: GateKind, ins: Vec<String>, out: String) -> String {
        self.gates.push(Gate {
            id: format!("__i_g{}", self.added),
            kind,
            ins,
            out: out.clone(),
        });
        self.added += 1;
        out
    }

    fn gate(&mut self, kind: GateKind, ins: Vec<String>) -> String {
        let out = format!("__i_n{}", self.added);
        self.named(kind, ins, out)
    }

    fn mux(&mut self, sel: &str, a: &str, b: &str) -> String {
        self.gate(GateKind::Mux, vec![sel.into(), a.into(), b.into()])
    }

    /// Wide AND/OR of `items` driving `out`; constants for empty inputs.
    fn reduce(&mut self, kind: GateKind, items: Vec<String>, out: &str) {
        let (kind, ins) = match items.len() {
            0 if kind == GateKind::And => (GateKind::Const1, items),
            0 => (GateKind::Const0, items),
            1 => (GateKind::Buf, items),
            _ => (kind, items),
        };
        self.named(kind, ins, out.into());
    }

    fn tap(&mut self, src: Option<&str>, out: &str) {
        match src {
            Some(s) => self.named(GateKind::Buf, vec![s.into()], out.into()),
            None => self.named(GateKind::Const0, Vec::new(), out.into()),
        };
    }
}

/// Control ports added by a transform.
struct Ports {
    inputs: Vec<String>,
    outputs: Vec<String>,
}

fn finish(
    c: &Circuit,
    technique: Technique,
    b: Builder,
    flops: Vec<Flop>,
    ports: Ports,
    flop_map: Vec<FlopCopies>,
    output_latches: Vec<String>,
) -> InstrumentedDesign {
    let Ports {
        inputs: control_inputs,
        outputs: control_outputs,
    } = ports;
    let mut inputs = c.inputs.clone();
    inputs.extend(control_inputs.iter().cloned());
    let mut outputs = c.outputs.clone();
    outputs.extend(control_outputs.iter().cloned());
    InstrumentedDesign {
        technique,
        circuit: Circuit {
            name: format!("{}__{}", c.name, technique.as_str().replace('-', "_")),
            inputs,
            outputs,
            gates: b.gates,
            flops,
        },
        functional_inputs: c.inputs.len(),
        functional_outputs: c.outputs.len(),
        control_inputs,
        control_outputs,
        flop_map,
        output_latches,
        added_gates: b.added,
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Functional flop plus a mask flop. Masks form a one-hot shift chain; the
/// masked bit is XORed into the state seen by the logic while `inject` is
/// high. Functional flops hold when `run` is low and form a scan chain
/// (under `scan_en`) for reading out the final state.
pub(super) fn mask_scan(c: &Circuit) -> InstrumentedDesign {
    let mut b = Builder::new(c);
    let mut flops = Vec::new();
    let mut flop_map = Vec::new();
    let f = c.flops.len();
    for (i, fl) in c.flops.iter().enumerate() {
        let raw = format!("__i_raw_{i}");
        let mq = format!("__i_mq_{i}");
        let hit = b.gate(GateKind::And, vec![mq.clone(), INJECT.into()]);
        b.named(GateKind::Xor, vec![raw.clone(), hit], fl.q.clone());
        let run_d = b.mux(RUN, &fl.q, &fl.d);
        let prev_raw = if i == 0 {
            SCAN_IN.to_string()
        } else {
            format!("__i_raw_{}", i - 1)
        };
        let d = b.mux(SCAN_EN, &run_d, &prev_raw);
        let prev_mask = if i == 0 {
            MASK_IN.to_string()
        } else {
            format!("__i_mq_{}", i - 1)
        };
        let md = b.mux(MASK_SHIFT, &mq, &prev_mask);
        let mask_id = format!("__i_mask_{i}");
        flops.push(Flop {
            id: fl.id.clone(),
            d,
            q: raw,
            init: fl.init,
        });
        flops.push(Flop {
            id: mask_id.clone(),
            d: md,
            q: mq,
            init: false,
        });
        flop_map.push(FlopCopies {
            original: fl.id.clone(),
            copies: vec![fl.id.clone(), mask_id],
        });
    }
    let last_raw = (f > 0).then(|| format!("__i_raw_{}", f - 1));
    let last_mask = (f > 0).then(|| format!("__i_mq_{}", f - 1));
    b.tap(last_raw.as_deref(), SCAN_OUT);
    b.tap(last_mask.as_deref(), MASK_OUT);
    finish(
        c,
        Technique::MaskScan,
        b,
        flops,
        Ports {
            inputs: names(&[RUN, INJECT, MASK_SHIFT, MASK_IN, SCAN_EN, SCAN_IN]),
            outputs: names(&[SCAN_OUT, MASK_OUT]),
        },
        flop_map,
        Vec::new(),
    )
}

/// Functional flop with a scan mux on D plus a golden-shadow flop loaded
/// every cycle from the controller's golden-state bus; `state_eq` compares
/// the two state vectors.
pub(super) fn state_scan(c: &Circuit) -> InstrumentedDesign {
    let mut b = Builder::new(c);
    let mut flops = Vec::new();
    let mut flop_map = Vec::new();
    let mut eq_bits = Vec::new();
    let mut control_inputs = names(&[SCAN_EN, SCAN_IN]);
    let f = c.flops.len();
    for (i, fl) in c.flops.iter().enumerate() {
        let prev = if i == 0 {
            SCAN_IN.to_string()
        } else {
            c.flops[i - 1].q.clone()
        };
        let d = b.mux(SCAN_EN, &fl.d, &prev);
        let shadow = format!("__i_gold_{i}");
        let gq = format!("__i_gq_{i}");
        let bus = golden_bus(i);
        eq_bits.push(b.gate(GateKind::Xnor, vec![fl.q.clone(), gq.clone()]));
        flops.push(Flop {
            id: fl.id.clone(),
            d,
            q: fl.q.clone(),
            init: fl.init,
        });
        flops.push(Flop {
            id: shadow.clone(),
            d: bus.clone(),
            q: gq,
            init: fl.init,
        });
        flop_map.push(FlopCopies {
            original: fl.id.clone(),
            copies: vec![fl.id.clone(), shadow],
        });
        control_inputs.push(bus);
    }
    b.reduce(GateKind::And, eq_bits, STATE_EQ);
    let last = (f > 0).then(|| c.flops[f - 1].q.clone());
    b.tap(last.as_deref(), SCAN_OUT);
    finish(
        c,
        Technique::StateScan,
        b,
        flops,
        Ports {
            inputs: control_inputs,
            outputs: names(&[SCAN_OUT, STATE_EQ]),
        },
        flop_map,
        Vec::new(),
    )
}

/// Golden, faulty, mask and checkpoint flops per original flop, sharing the
/// combinational logic through a phase multiplexer (0 golden, 1 faulty).
/// Golden outputs are latched during the golden phase so the faulty phase
/// can compare against them.
pub(super) fn time_mux(c: &Circuit) -> InstrumentedDesign {
    let mut b = Builder::new(c);
    let mut flops = Vec::new();
    let mut flop_map = Vec::new();
    let mut eq_bits = Vec::new();
    let f = c.flops.len();

    let not_phase = b.gate(GateKind::Not, vec![PHASE.into()]);
    let golden_en = b.gate(GateKind::And, vec![RUN.into(), not_phase]);
    let faulty_en = b.gate(GateKind::And, vec![RUN.into(), PHASE.into()]);

    for (i, fl) in c.flops.iter().enumerate() {
        let gq = format!("__i_gq_{i}");
        let fq = format!("__i_fq_{i}");
        let mq = format!("__i_mq_{i}");
        let cq = format!("__i_cq_{i}");

        let hit = b.gate(GateKind::And, vec![mq.clone(), INJECT.into()]);
        let view = b.gate(GateKind::Xor, vec![fq.clone(), hit]);
        b.named(
            GateKind::Mux,
            vec![PHASE.into(), gq.clone(), view],
            fl.q.clone(),
        );

        let g_run = b.mux(&golden_en, &gq, &fl.d);
        let g_d = b.mux(RESTORE, &g_run, &cq);
        let f_run = b.mux(&faulty_en, &fq, &fl.d);
        let f_d = b.mux(RESTORE, &f_run, &cq);
        let c_d = b.mux(CKPT_SAVE, &cq, &gq);
        let prev_mask = if i == 0 {
            MASK_IN.to_string()
        } else {
            format!("__i_mq_{}", i - 1)
        };
        let m_d = b.mux(MASK_SHIFT, &mq, &prev_mask);
        eq_bits.push(b.gate(GateKind::Xnor, vec![gq.clone(), fq.clone()]));

        let ids = [
            fl.id.clone(),
            format!("__i_faulty_{i}"),
            format!("__i_mask_{i}"),
            format!("__i_ckpt_{i}"),
        ];
        flops.push(Flop {
            id: ids[0].clone(),
            d: g_d,
            q: gq,
            init: fl.init,
        });
        flops.push(Flop {
            id: ids[1].clone(),
            d: f_d,
            q: fq,
            init: fl.init,
        });
        flops.push(Flop {
            id: ids[2].clone(),
            d: m_d,
            q: mq,
            init: false,
        });
        flops.push(Flop {
            id: ids[3].clone(),
            d: c_d,
            q: cq,
            init: fl.init,
        });
        flop_map.push(FlopCopies {
            original: fl.id.clone(),
            copies: ids.to_vec(),
        });
    }

    let mut latches = Vec::new();
    let mut diff_bits = Vec::new();
    for (o, y) in c.outputs.iter().enumerate() {
        let lq = format!("__i_ylq_{o}");
        let id = format!("__i_ylatch_{o}");
        let d = b.mux(PHASE, y, &lq);
        diff_bits.push(b.gate(GateKind::Xor, vec![y.clone(), lq.clone()]));
        flops.push(Flop {
            id: id.clone(),
            d,
            q: lq,
            init: false,
        });
        latches.push(id);
    }
    b.reduce(GateKind::Or, diff_bits, OUT_MISMATCH);
    b.reduce(GateKind::And, eq_bits, STATE_EQ);
    let last_mask = (f > 0).then(|| format!("__i_mq_{}", f - 1));
    b.tap(last_mask.as_deref(), MASK_OUT);

    finish(
        c,
        Technique::TimeMux,
        b,
        flops,
        Ports {
            inputs: names(&[PHASE, RUN, RESTORE, CKPT_SAVE, INJECT, MASK_SHIFT, MASK_IN]),
            outputs: names(&[OUT_MISMATCH, STATE_EQ, MASK_OUT]),
        },
        flop_map,
        latches,
    )
}

pub(crate) mod ports {
    pub(crate) use super::{
        CKPT_SAVE, INJECT, MASK_IN, MASK_SHIFT, OUT_MISMATCH, PHASE, RESTORE, RUN, SCAN_EN,
        SCAN_IN, SCAN_OUT, STATE_EQ,
    };
}
