// SPDX-License-Identifier: Apache-2.0
#![no_main]

use libfuzzer_sys::fuzz_target;
use seugrade::report::{parse_fault_csv, write_fault_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_fault_csv(text) {
        let again = write_fault_csv(&rows).expect("rows serialize");
        assert_eq!(parse_fault_csv(&again).expect("round trip"), rows);
    }
});
