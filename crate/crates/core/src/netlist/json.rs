// SPDX-License-Identifier: Apache-2.0

use serde_json::error::Category;

use super::{validate, Circuit};
use crate::error::{Error, Position, Result};

/// Parses and validates a netlist document.
///
/// Syntax errors carry the offending position. Documents that are valid JSON
/// but do not fit the schema fail with [`Error::Schema`]; structurally sound
/// circuits that break an invariant fail with every violation listed.
pub fn parse_netlist(doc: &str) -> Result<Circuit> {
    let circuit: Circuit = serde_json::from_str(doc).map_err(|e| match e.classify() {
        Category::Syntax | Category::Eof => Error::Syntax {
            position: Position {
                line: e.line(),
                column: e.column(),
            },
            message: e.to_string(),
        },
        Category::Data | Category::Io => Error::Schema(e.to_string()),
    })?;
    let violations = validate(&circuit);
    if violations.is_empty() {
        Ok(circuit)
    } else {
        Err(Error::Invalid(violations))
    }
}

pub fn to_json(c: &Circuit) -> String {
    serde_json::to_string_pretty(c).expect("circuit serialization is infallible")
}
