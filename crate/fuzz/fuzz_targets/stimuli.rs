// SPDX-License-Identifier: Apache-2.0
#![no_main]

use libfuzzer_sys::fuzz_target;
use seugrade::netlist::parse_netlist;
use seugrade::sim::{parse_stimuli, write_stimuli};

const NETLIST: &str = include_str!("../../fixtures/gated.json");

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let c = parse_netlist(NETLIST).unwrap();
    if let Ok(tb) = parse_stimuli(text, &c) {
        assert_eq!(tb.width(), c.num_inputs());
        assert_eq!(parse_stimuli(&write_stimuli(&tb, &c), &c).unwrap(), tb);
    }
});
