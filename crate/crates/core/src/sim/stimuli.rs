// SPDX-License-Identifier: Apache-2.0

use super::Testbench;
use crate::error::{Error, Result};
use crate::netlist::Circuit;

/// Reads a stimuli CSV: a header naming the circuit inputs in order, then
/// one row of 0/1 cells per cycle.
pub fn parse_stimuli(text: &str, c: &Circuit) -> Result<Testbench> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| Error::Stimuli(e.to_string()))?
        .clone();
    if header.len() != c.inputs.len() {
        return Err(Error::Stimuli(format!(
            "header has {} columns but the circuit has {} inputs",
            header.len(),
            c.inputs.len()
        )));
    }
    for (k, (got, want)) in header.iter().zip(&c.inputs).enumerate() {
        if got != want {
            return Err(Error::Stimuli(format!(
                "column {} is {got:?}, expected input {want:?}",
                k + 1
            )));
        }
    }

    let mut vectors = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Stimuli(e.to_string()))?;
        if rec.len() != header.len() {
            return Err(Error::Stimuli(format!(
                "row {} has {} columns, expected {}",
                row + 1,
                rec.len(),
                header.len()
            )));
        }
        let v = rec
            .iter()
            .map(|cell| match cell {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::Stimuli(format!(
                    "row {}: cell {other:?} is not 0 or 1",
                    row + 1
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        vectors.push(v);
    }
    Testbench::new(vectors, c.inputs.len())
}

pub fn write_stimuli(tb: &Testbench, c: &Circuit) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&c.inputs).expect("in-memory write");
    for v in tb.vectors() {
        w.write_record(v.iter().map(|&b| if b { "1" } else { "0" }))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}
