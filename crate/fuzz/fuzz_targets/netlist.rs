// SPDX-License-Identifier: Apache-2.0
#![no_main]

use libfuzzer_sys::fuzz_target;
use seugrade::netlist::{levelize, parse_netlist, to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = parse_netlist(text) {
        // Accepted netlists are acyclic and survive a round trip.
        levelize(&c).expect("validated netlist levelizes");
        assert_eq!(parse_netlist(&to_json(&c)).expect("round trip"), c);
    }
});
