// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::netlist::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location of a JSON syntax error, 1-based like editors report it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: Position, message: String },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("invalid circuit: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("combinational cycle through gates: {}", .0.join(", "))]
    Cycle(Vec<String>),

    #[error("{what} width mismatch: expected {expected}, found {found}")]
    Width {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("flop index {index} out of range for {count} flops")]
    FlopIndex { index: usize, count: usize },

    #[error("fault (flop {flop}, cycle {cycle}) outside {flops} flops x {cycles} cycles")]
    FaultRange {
        flop: usize,
        cycle: usize,
        flops: usize,
        cycles: usize,
    },

    #[error("stimuli: {0}")]
    Stimuli(String),

    #[error("report: {0}")]
    Report(String),

    #[error("schedule: {0}")]
    Schedule(String),

    #[error("cost model: {0}")]
    CostModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
