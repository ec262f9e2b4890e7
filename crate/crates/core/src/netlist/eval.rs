// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use super::{validate, Circuit, GateKind, Violation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Op {
    kind: GateKind,
    start: u32,
    len: u32,
    out: u32,
}

/// A validated circuit compiled to net indices, with its gates in a
/// topological evaluation order.
///
/// Nets are numbered inputs first, then flop outputs, then gate outputs in
/// declaration order.
#[derive(Debug, Clone)]
pub struct Levelized {
    order: Vec<usize>,
    ops: Vec<Op>,
    operands: Vec<u32>,
    net_count: usize,
    inputs: Vec<u32>,
    outputs: Vec<u32>,
    flop_q: Vec<u32>,
    flop_d: Vec<u32>,
    init: Vec<bool>,
    net_names: Vec<String>,
    gate_ids: Vec<String>,
}

/// Result of settling the combinational logic for one input/state pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombEval {
    pub nets: Vec<bool>,
    pub outputs: Vec<bool>,
    pub gates_evaluated: usize,
}

/// Topologically sorts the gates of a valid circuit.
pub fn levelize(c: &Circuit) -> Result<Levelized> {
    let violations = validate(c);
    if !violations.is_empty() {
        if let [Violation::CombinationalCycle(gates)] = violations.as_slice() {
            return Err(Error::Cycle(gates.clone()));
        }
        return Err(Error::Invalid(violations));
    }

    let mut index: HashMap<&str, u32> = HashMap::new();
    let mut net_names = Vec::new();
    for net in c
        .inputs
        .iter()
        .chain(c.flops.iter().map(|f| &f.q))
        .chain(c.gates.iter().map(|g| &g.out))
    {
        index.insert(net.as_str(), net_names.len() as u32);
        net_names.push(net.clone());
    }

    let producer: HashMap<&str, usize> = c
        .gates
        .iter()
        .enumerate()
        .map(|(i, g)| (g.out.as_str(), i))
        .collect();
    let mut indegree = vec![0usize; c.gates.len()];
    let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); c.gates.len()];
    for (i, g) in c.gates.iter().enumerate() {
        for net in &g.ins {
            if let Some(&p) = producer.get(net.as_str()) {
                indegree[i] += 1;
                fanout[p].push(i);
            }
        }
    }
    // FIFO over declaration order keeps the order stable and level-major.
    let mut order: Vec<usize> = (0..c.gates.len()).filter(|&i| indegree[i] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let i = order[head];
        head += 1;
        for &s in &fanout[i] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                order.push(s);
            }
        }
    }
    if order.len() != c.gates.len() {
        let placed: std::collections::HashSet<usize> = order.iter().copied().collect();
        let stuck = (0..c.gates.len())
            .filter(|i| !placed.contains(i))
            .map(|i| c.gates[i].id.clone())
            .collect();
        return Err(Error::Cycle(stuck));
    }

    let mut ops = Vec::with_capacity(order.len());
    let mut operands = Vec::new();
    for &gi in &order {
        let g = &c.gates[gi];
        let start = operands.len() as u32;
        operands.extend(g.ins.iter().map(|n| index[n.as_str()]));
        ops.push(Op {
            kind: g.kind,
            start,
            len: g.ins.len() as u32,
            out: index[g.out.as_str()],
        });
    }

    Ok(Levelized {
        gate_ids: order.iter().map(|&i| c.gates[i].id.clone()).collect(),
        order,
        ops,
        operands,
        net_count: net_names.len(),
        inputs: (0..c.inputs.len() as u32).collect(),
        outputs: c.outputs.iter().map(|n| index[n.as_str()]).collect(),
        flop_q: c.flops.iter().map(|f| index[f.q.as_str()]).collect(),
        flop_d: c.flops.iter().map(|f| index[f.d.as_str()]).collect(),
        init: c.init_state(),
        net_names,
    })
}

impl Levelized {
    /// Gate indices (into `Circuit::gates`) in evaluation order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn order_ids(&self) -> &[String] {
        &self.gate_ids
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn num_flops(&self) -> usize {
        self.flop_q.len()
    }

    pub fn num_nets(&self) -> usize {
        self.net_count
    }

    pub fn net_names(&self) -> &[String] {
        &self.net_names
    }

    pub fn init_state(&self) -> &[bool] {
        &self.init
    }

    fn check_widths(&self, inputs: &[bool], state: &[bool]) -> Result<()> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::Width {
                what: "input vector",
                expected: self.inputs.len(),
                found: inputs.len(),
            });
        }
        if state.len() != self.flop_q.len() {
            return Err(Error::Width {
                what: "state",
                expected: self.flop_q.len(),
                found: state.len(),
            });
        }
        Ok(())
    }

    /// Settles all nets into `nets` (length `num_nets`). Widths are the
    /// caller's responsibility; this is the hot loop of every engine.
    #[inline]
    pub(crate) fn settle(&self, nets: &mut [bool], inputs: &[bool], state: &[bool]) {
        for (&n, &v) in self.inputs.iter().zip(inputs) {
            nets[n as usize] = v;
        }
        for (&n, &v) in self.flop_q.iter().zip(state) {
            nets[n as usize] = v;
        }
        for op in &self.ops {
            let ins = &self.operands[op.start as usize..(op.start + op.len) as usize];
            let at = |k: usize| nets[ins[k] as usize];
            let v = match op.kind {
                GateKind::And => ins.iter().all(|&n| nets[n as usize]),
                GateKind::Or => ins.iter().any(|&n| nets[n as usize]),
                GateKind::Nand => !ins.iter().all(|&n| nets[n as usize]),
                GateKind::Nor => !ins.iter().any(|&n| nets[n as usize]),
                GateKind::Xor => ins.iter().fold(false, |a, &n| a ^ nets[n as usize]),
                GateKind::Xnor => !ins.iter().fold(false, |a, &n| a ^ nets[n as usize]),
                GateKind::Not => !at(0),
                GateKind::Buf => at(0),
                GateKind::Mux => {
                    if at(0) {
                        at(2)
                    } else {
                        at(1)
                    }
                }
                GateKind::Const0 => false,
                GateKind::Const1 => true,
            };
            nets[op.out as usize] = v;
        }
    }

    #[inline]
    pub(crate) fn read_outputs(&self, nets: &[bool], out: &mut Vec<bool>) {
        out.clear();
        out.extend(self.outputs.iter().map(|&n| nets[n as usize]));
    }

    #[inline]
    pub(crate) fn outputs_equal(&self, nets: &[bool], expected: &[bool]) -> bool {
        self.outputs
            .iter()
            .zip(expected)
            .all(|(&n, &e)| nets[n as usize] == e)
    }

    #[inline]
    pub(crate) fn read_next_state(&self, nets: &[bool], next: &mut [bool]) {
        for (slot, &n) in next.iter_mut().zip(&self.flop_d) {
            *slot = nets[n as usize];
        }
    }

    pub fn eval_comb(&self, inputs: &[bool], state: &[bool]) -> Result<CombEval> {
        self.check_widths(inputs, state)?;
        let mut nets = vec![false; self.net_count];
        self.settle(&mut nets, inputs, state);
        let mut outputs = Vec::with_capacity(self.outputs.len());
        self.read_outputs(&nets, &mut outputs);
        Ok(CombEval {
            nets,
            outputs,
            gates_evaluated: self.ops.len(),
        })
    }
}

/// Evaluates the combinational logic of a levelized circuit for one cycle.
pub fn eval_comb(lev: &Levelized, inputs: &[bool], state: &[bool]) -> Result<CombEval> {
    lev.eval_comb(inputs, state)
}
