// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::Circuit;

/// One broken circuit invariant, naming the offending entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyName(String),
    DuplicateId(String),
    MultipleDrivers(String),
    UndefinedNet { net: String, user: String },
    UndrivenOutput(String),
    DuplicateOutput(String),
    Arity(String),
    CombinationalCycle(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyName(what) => write!(f, "empty name: {what}"),
            Violation::DuplicateId(id) => write!(f, "duplicate id: {id}"),
            Violation::MultipleDrivers(net) => write!(f, "multiple drivers: {net}"),
            Violation::UndefinedNet { net, user } => {
                write!(f, "undefined net: {net} (used by {user})")
            }
            Violation::UndrivenOutput(net) => write!(f, "undriven output: {net}"),
            Violation::DuplicateOutput(net) => write!(f, "duplicate output: {net}"),
            Violation::Arity(id) => write!(f, "arity: {id}"),
            Violation::CombinationalCycle(gates) => {
                write!(f, "combinational cycle: {}", gates.join(", "))
            }
        }
    }
}

/// Checks every circuit invariant. An empty list means the circuit is valid.
pub fn validate(c: &Circuit) -> Vec<Violation> {
    let mut out = Vec::new();

    if c.name.is_empty() {
        out.push(Violation::EmptyName("circuit".into()));
    }

    // Driver table in first-appearance order so reports are deterministic.
    let mut drivers: HashMap<&str, usize> = HashMap::new();
    let mut driver_order: Vec<&str> = Vec::new();
    let mut driven: Vec<&str> = Vec::new();
    driven.extend(c.inputs.iter().map(String::as_str));
    driven.extend(c.gates.iter().map(|g| g.out.as_str()));
    driven.extend(c.flops.iter().map(|f| f.q.as_str()));
    for net in driven {
        let n = drivers.entry(net).or_insert(0);
        if *n == 0 {
            driver_order.push(net);
        }
        *n += 1;
    }
    for net in &driver_order {
        if net.is_empty() {
            out.push(Violation::EmptyName("net".into()));
        } else if drivers[net] > 1 {
            out.push(Violation::MultipleDrivers((*net).to_string()));
        }
    }

    let mut ids = HashSet::new();
    for id in c
        .gates
        .iter()
        .map(|g| &g.id)
        .chain(c.flops.iter().map(|f| &f.id))
    {
        if id.is_empty() {
            out.push(Violation::EmptyName("instance".into()));
        } else if !ids.insert(id.as_str()) {
            out.push(Violation::DuplicateId(id.clone()));
        }
    }

    for g in &c.gates {
        if !g.kind.arity_ok(g.ins.len()) {
            out.push(Violation::Arity(g.id.clone()));
        }
        for net in &g.ins {
            if !drivers.contains_key(net.as_str()) {
                out.push(Violation::UndefinedNet {
                    net: net.clone(),
                    user: g.id.clone(),
                });
            }
        }
    }
    for f in &c.flops {
        if !drivers.contains_key(f.d.as_str()) {
            out.push(Violation::UndefinedNet {
                net: f.d.clone(),
                user: f.id.clone(),
            });
        }
    }

    let mut seen_outputs = HashSet::new();
    for net in &c.outputs {
        if !drivers.contains_key(net.as_str()) {
            out.push(Violation::UndrivenOutput(net.clone()));
        }
        if !seen_outputs.insert(net.as_str()) {
            out.push(Violation::DuplicateOutput(net.clone()));
        }
    }

    let cyclic = cyclic_gates(c);
    if !cyclic.is_empty() {
        out.push(Violation::CombinationalCycle(cyclic));
    }
    out
}

/// Gates that Kahn's algorithm cannot schedule: members of a combinational
/// cycle and everything downstream of one.
fn cyclic_gates(c: &Circuit) -> Vec<String> {
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
    let mut ready: Vec<usize> = (0..c.gates.len()).filter(|&i| indegree[i] == 0).collect();
    let mut done = vec![false; c.gates.len()];
    while let Some(i) = ready.pop() {
        done[i] = true;
        for &s in &fanout[i] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.push(s);
            }
        }
    }
    c.gates
        .iter()
        .zip(&done)
        .filter(|(_, &d)| !d)
        .map(|(g, _)| g.id.clone())
        .collect()
}
