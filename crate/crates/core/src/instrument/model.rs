// SPDX-License-Identifier: Apache-2.0

//! Area and memory models for the instrumented emulator.

use serde::{Deserialize, Serialize};

use super::{instrument, Technique};
use crate::error::{Error, Result};
use crate::netlist::Circuit;

/// Closed-form instrument flop count: `2F`, `2F` or `4F`.
pub fn model_instrumented_ff(flops: usize, t: Technique) -> usize {
    t.copies_per_flop() * flops
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverheadReport {
    pub technique: Technique,
    pub original_ff: usize,
    pub instrumented_ff: usize,
    /// Time-mux golden-output latches, excluded from `instrumented_ff`.
    pub output_latch_ff: usize,
    pub added_gates: usize,
    /// `None` for circuits without flops.
    pub ff_overhead_pct: Option<f64>,
}

/// Flop overhead of the actual transform of `c`.
pub fn overhead_report(c: &Circuit, t: Technique) -> Result<OverheadReport> {
    let d = instrument(c, t)?;
    let original_ff = c.flops.len();
    let instrumented_ff = d.instrument_ff();
    Ok(OverheadReport {
        technique: t,
        original_ff,
        instrumented_ff,
        output_latch_ff: d.output_latches.len(),
        added_gates: d.added_gates,
        ff_overhead_pct: (original_ff > 0)
            .then(|| 100.0 * (instrumented_ff as f64 - original_ff as f64) / original_ff as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FootprintParams {
    pub flops: u64,
    pub inputs: u64,
    pub outputs: u64,
    pub cycles: u64,
    /// Bits stored per fault verdict, 1 or 2.
    pub verdict_width: u64,
}

impl FootprintParams {
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.verdict_width) {
            return Err(Error::CostModel(format!(
                "verdict width must be 1 or 2 bits, got {}",
                self.verdict_width
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Footprint {
    pub technique: Technique,
    pub fpga_ram_bits: u64,
    pub board_ram_bits: u64,
}

impl Footprint {
    pub fn fpga_kbits(&self) -> f64 {
        self.fpga_ram_bits as f64 / 1024.0
    }

    pub fn board_kbits(&self) -> f64 {
        self.board_ram_bits as f64 / 1024.0
    }
}

/// RAM needed by the autonomous emulator.
///
/// On-chip RAM holds stimuli and, unless the technique recomputes them live,
/// golden outputs. Board RAM holds one verdict per fault; state-scan also
/// stores every faulty state to scan in and the golden state of every cycle.
pub fn memory_footprint(p: FootprintParams, t: Technique) -> Result<Footprint> {
    p.validate()?;
    let FootprintParams {
        flops: f,
        inputs: i,
        outputs: o,
        cycles: n,
        verdict_width: w,
    } = p;
    let faults = f * n;
    let (fpga, board) = match t {
        Technique::MaskScan => (n * (i + o), faults * w),
        Technique::StateScan => (n * (i + o), faults * (f + w) + n * f),
        Technique::TimeMux => (n * i, faults * w),
    };
    Ok(Footprint {
        technique: t,
        fpga_ram_bits: fpga,
        board_ram_bits: board,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::fixtures;

    fn b14(w: u64) -> FootprintParams {
        FootprintParams {
            flops: 215,
            inputs: 32,
            outputs: 54,
            cycles: 160,
            verdict_width: w,
        }
    }

    #[test]
    fn footprint_b14_shape() {
        let ms = memory_footprint(b14(1), Technique::MaskScan).unwrap();
        assert_eq!(ms.fpga_ram_bits, 13_760);
        assert_eq!(ms.board_ram_bits, 34_400);
        let ss = memory_footprint(b14(1), Technique::StateScan).unwrap();
        assert_eq!(ss.board_ram_bits, 215 * 160 * 217);
        assert_eq!(ss.board_ram_bits, 7_464_800);
        let tm = memory_footprint(b14(2), Technique::TimeMux).unwrap();
        assert_eq!(tm.fpga_ram_bits, 5_120);
        assert_eq!(tm.board_ram_bits, 68_800);
    }

    #[test]
    fn footprint_rejects_bad_width() {
        assert!(memory_footprint(b14(3), Technique::MaskScan).is_err());
        assert!(memory_footprint(b14(0), Technique::MaskScan).is_err());
    }

    #[test]
    fn zero_flops() {
        let p = FootprintParams { flops: 0, ..b14(1) };
        for t in Technique::ALL {
            assert_eq!(memory_footprint(p, t).unwrap().board_ram_bits, 0);
        }
    }

    #[test]
    fn overhead_fixture_b() {
        let c = fixtures::gated();
        let ms = overhead_report(&c, Technique::MaskScan).unwrap();
        assert_eq!(ms.instrumented_ff, 2);
        assert_eq!(ms.ff_overhead_pct, Some(100.0));
        let tm = overhead_report(&c, Technique::TimeMux).unwrap();
        assert_eq!(tm.instrumented_ff, 4);
        assert_eq!(tm.output_latch_ff, 1);
        assert_eq!(tm.ff_overhead_pct, Some(300.0));
        assert!(tm.added_gates > ms.added_gates);
    }
}
