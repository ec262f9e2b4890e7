// SPDX-License-Identifier: Apache-2.0

//! Synchronous gate-level circuits: data model, JSON format, validation and
//! levelized two-valued evaluation.

mod eval;
mod json;
mod validate;

pub use eval::{eval_comb, levelize, CombEval, Levelized};
pub use json::{parse_netlist, to_json};
pub use validate::{validate, Violation};

use serde::{Deserialize, Serialize};

/// Combinational cell kinds. `MUX` takes `(select, a, b)` and yields `a` when
/// `select` is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    And,
    Or,
    Not,
    Xor,
    Nand,
    Nor,
    Xnor,
    Buf,
    Mux,
    Const0,
    Const1,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::And,
        GateKind::Or,
        GateKind::Not,
        GateKind::Xor,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xnor,
        GateKind::Buf,
        GateKind::Mux,
        GateKind::Const0,
        GateKind::Const1,
    ];

    pub fn arity_ok(self, n: usize) -> bool {
        match self {
            GateKind::Not | GateKind::Buf => n == 1,
            GateKind::Mux => n == 3,
            GateKind::Const0 | GateKind::Const1 => n == 0,
            _ => n >= 2,
        }
    }

    /// Evaluates the cell over input values in declared order.
    #[inline]
    pub fn eval(self, ins: &[bool]) -> bool {
        match self {
            GateKind::And => ins.iter().all(|&v| v),
            GateKind::Or => ins.iter().any(|&v| v),
            GateKind::Nand => !ins.iter().all(|&v| v),
            GateKind::Nor => !ins.iter().any(|&v| v),
            GateKind::Xor => ins.iter().fold(false, |acc, &v| acc ^ v),
            GateKind::Xnor => !ins.iter().fold(false, |acc, &v| acc ^ v),
            GateKind::Not => !ins[0],
            GateKind::Buf => ins[0],
            GateKind::Mux => {
                if ins[0] {
                    ins[2]
                } else {
                    ins[1]
                }
            }
            GateKind::Const0 => false,
            GateKind::Const1 => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub ins: Vec<String>,
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flop {
    pub id: String,
    pub d: String,
    pub q: String,
    #[serde(default, with = "bit")]
    pub init: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Circuit {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub gates: Vec<Gate>,
    pub flops: Vec<Flop>,
}

impl Circuit {
    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn num_flops(&self) -> usize {
        self.flops.len()
    }

    pub fn init_state(&self) -> Vec<bool> {
        self.flops.iter().map(|f| f.init).collect()
    }
}

/// Logic values travel as the integers 0 and 1 in every file format.
pub(crate) mod bit {
    use serde::de::{self, Deserializer, Unexpected};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(*v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        let v: u64 = de::Deserialize::deserialize(d)?;
        match v {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(de::Error::invalid_value(
                Unexpected::Unsigned(other),
                &"0 or 1",
            )),
        }
    }
}

/// `Vec<Vec<bool>>` as nested arrays of 0/1.
pub(crate) mod bit_rows {
    use serde::de::{self, Deserializer};
    use serde::ser::{SerializeSeq, Serializer};
    use serde::Deserialize;

    struct Row<'a>(&'a [bool]);

    impl serde::Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(self.0.len()))?;
            for &b in self.0 {
                seq.serialize_element(&u8::from(b))?;
            }
            seq.end()
        }
    }

    pub fn serialize<S: Serializer, R: AsRef<[bool]>>(rows: &[R], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            seq.serialize_element(&Row(r.as_ref()))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<bool>>, D::Error> {
        let raw: Vec<Vec<u8>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(de::Error::custom(format!("expected 0 or 1, found {other}"))),
                    })
                    .collect()
            })
            .collect()
    }
}
