// SPDX-License-Identifier: Apache-2.0
#![no_main]

use libfuzzer_sys::fuzz_target;
use seugrade::sim::GoldenTrace;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(trace) = GoldenTrace::from_json(text) {
        assert_eq!(
            GoldenTrace::from_json(&trace.to_json()).expect("round trip"),
            trace
        );
    }
});
