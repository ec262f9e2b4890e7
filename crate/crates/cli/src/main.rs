// SPDX-License-Identifier: Apache-2.0

//! `seugrade` command-line driver.
//!
//! Exit codes: 0 success, 1 report mismatch (`compare`), 2 input or
//! configuration error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use seugrade::emu::{Campaign, CostModel, Engine, Exec};
use seugrade::grading::{gen_random_fixture, shift_register, FixtureParams, Taps};
use seugrade::instrument::{
    instrument, memory_footprint, overhead_report, Footprint, FootprintParams, OverheadReport,
    Technique,
};
use seugrade::netlist::{levelize, parse_netlist, to_json, Circuit};
use seugrade::report::{
    compare_reports, fault_rows, parse_fault_csv, write_fault_csv, SummaryReport,
};
use seugrade::sim::{golden_run, parse_stimuli, write_stimuli, Testbench};

const COST_PREFIX: &str = "--cost.";

#[derive(Parser, Debug)]
#[command(
    name = "seugrade",
    version,
    about = "Bit-flip fault grading for synchronous netlists"
)]
#[command(
    after_help = "Cost-model knobs are overridden with --cost.<knob>=<int>, e.g. --cost.reset_edges=2."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate the fault-free run and write its trace as JSON.
    Golden {
        #[command(flatten)]
        design: Design,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Grade every single-bit fault and write the per-fault CSV and summary JSON.
    Campaign {
        #[command(flatten)]
        design: Design,
        #[arg(long, value_enum)]
        technique: EngineArg,
        /// Per-fault report.
        #[arg(long)]
        csv: PathBuf,
        /// Summary report.
        #[arg(long)]
        summary: PathBuf,
        /// Emulation clock in Hz [default: 25000000].
        #[arg(long)]
        fclk: Option<u64>,
        #[arg(long)]
        no_timestamp: bool,
        /// Grade faults on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Write the instrumented netlist and its overhead report.
    Instrument {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long, value_enum)]
        technique: TechniqueArg,
        #[arg(long, short)]
        out: PathBuf,
        /// Overhead report; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Report RAM footprints from a design or from explicit dimensions.
    Footprint(FootprintArgs),
    /// Compare the class columns of two per-fault reports.
    Compare {
        left: PathBuf,
        right: PathBuf,
        /// Differences to print.
        #[arg(short = 'k', long = "max-diffs", default_value_t = 10)]
        k: usize,
    },
    /// Generate a seeded fixture netlist and stimuli.
    Fixture {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FixtureKind::Random)]
        kind: FixtureKind,
        #[arg(long, default_value_t = 8)]
        flops: usize,
        #[arg(long, default_value_t = 32)]
        gates: usize,
        #[arg(long, default_value_t = 4)]
        inputs: usize,
        #[arg(long, default_value_t = 4)]
        outputs: usize,
        #[arg(long, default_value_t = 16)]
        cycles: usize,
        #[arg(long)]
        netlist_out: PathBuf,
        #[arg(long)]
        stimuli_out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Design {
    #[arg(long)]
    netlist: PathBuf,
    #[arg(long)]
    stimuli: PathBuf,
}

#[derive(Args, Debug)]
#[allow(non_snake_case)]
struct FootprintArgs {
    #[arg(long, requires = "stimuli", conflicts_with_all = ["F", "I", "O", "N"])]
    netlist: Option<PathBuf>,
    #[arg(long, requires = "netlist")]
    stimuli: Option<PathBuf>,
    #[arg(long = "F", required_unless_present = "netlist", requires_all = ["I", "O", "N"])]
    F: Option<u64>,
    #[arg(long = "I")]
    I: Option<u64>,
    #[arg(long = "O")]
    O: Option<u64>,
    #[arg(long = "N")]
    N: Option<u64>,
    /// Verdict bits per fault.
    #[arg(long = "w", default_value_t = 2)]
    w: u64,
    /// Every technique when omitted.
    #[arg(long, value_enum)]
    technique: Option<TechniqueArg>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineArg {
    Oracle,
    MaskScan,
    StateScan,
    TimeMux,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Oracle => Engine::Oracle,
            EngineArg::MaskScan => Engine::MaskScan,
            EngineArg::StateScan => Engine::StateScan,
            EngineArg::TimeMux => Engine::TimeMux,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TechniqueArg {
    MaskScan,
    StateScan,
    TimeMux,
}

impl From<TechniqueArg> for Technique {
    fn from(t: TechniqueArg) -> Self {
        match t {
            TechniqueArg::MaskScan => Technique::MaskScan,
            TechniqueArg::StateScan => Technique::StateScan,
            TechniqueArg::TimeMux => Technique::TimeMux,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FixtureKind {
    Random,
    ShiftSerial,
    ShiftParallel,
}

/// A failed command and its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<seugrade::Error> for Failure {
    fn from(e: seugrade::Error) -> Self {
        Failure::input(e)
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let (args, overrides) = split_cost_overrides(std::env::args());
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = cost_model(&overrides).and_then(|cm| run(cli.command, &cm));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Pulls `--cost.<knob>=<value>` arguments out before clap sees them.
fn split_cost_overrides(args: impl IntoIterator<Item = String>) -> (Vec<String>, Vec<String>) {
    args.into_iter().partition(|a| !a.starts_with(COST_PREFIX))
}

fn cost_model(overrides: &[String]) -> Result<CostModel, Failure> {
    let mut cm = CostModel::default();
    for arg in overrides {
        let spec = &arg[COST_PREFIX.len()..];
        let (knob, value) = spec
            .split_once('=')
            .ok_or_else(|| Failure::input(format!("{arg}: expected {COST_PREFIX}<knob>=<int>")))?;
        let value: u64 = value.parse().map_err(|_| {
            Failure::input(format!("{arg}: {value:?} is not a non-negative integer"))
        })?;
        cm.set(knob, value)?;
    }
    cm.validate()?;
    Ok(cm)
}

fn run(cmd: Command, cm: &CostModel) -> CmdResult {
    match cmd {
        Command::Golden { design, out } => {
            let (c, tb) = load_design(&design.netlist, &design.stimuli)?;
            let trace = golden_run(&levelize(&c)?, &tb)?;
            write_atomic(&out, trace.to_json().as_bytes())?;
            Ok(0)
        }
        Command::Campaign {
            design,
            technique,
            csv,
            summary,
            fclk,
            no_timestamp,
            sequential,
        } => {
            let (c, tb) = load_design(&design.netlist, &design.stimuli)?;
            let mut cm = *cm;
            if let Some(f) = fclk {
                cm.f_clk = f;
            }
            cm.validate()?;
            let exec = if sequential {
                Exec::Sequential
            } else {
                Exec::Parallel
            };
            let result = Campaign::new(&c, tb)?.run(technique.into(), &cm, exec)?;
            let rows = fault_rows(&result, &c)?;
            let timestamp = (!no_timestamp).then(unix_seconds);
            let report = SummaryReport::new(&result, cm.f_clk, timestamp)?;
            write_atomic(&csv, write_fault_csv(&rows)?.as_bytes())?;
            write_atomic(&summary, with_newline(report.to_json()?).as_bytes())?;
            Ok(0)
        }
        Command::Instrument {
            netlist,
            technique,
            out,
            report,
        } => {
            let c = load_netlist(&netlist)?;
            let t = technique.into();
            let design = instrument(&c, t)?;
            let overhead: OverheadReport = overhead_report(&c, t)?;
            write_atomic(&out, with_newline(to_json(&design.circuit)).as_bytes())?;
            let json = to_pretty(&overhead)?;
            match report {
                Some(path) => write_atomic(&path, json.as_bytes())?,
                None => print!("{json}"),
            }
            Ok(0)
        }
        Command::Footprint(args) => footprint(args),
        Command::Compare { left, right, k } => {
            let a = parse_fault_csv(&read(&left)?)
                .map_err(|e| Failure::input(format!("{}: {e}", left.display())))?;
            let b = parse_fault_csv(&read(&right)?)
                .map_err(|e| Failure::input(format!("{}: {e}", right.display())))?;
            let diffs = compare_reports(&a, &b)?;
            if diffs.is_empty() {
                println!("{} faults, class columns identical", a.len());
                return Ok(0);
            }
            for d in diffs.iter().take(k) {
                println!("{d}");
            }
            if diffs.len() > k {
                println!("... {} more", diffs.len() - k);
            }
            println!("{} of {} faults differ", diffs.len(), a.len());
            Ok(1)
        }
        Command::Fixture {
            seed,
            kind,
            flops,
            gates,
            inputs,
            outputs,
            cycles,
            netlist_out,
            stimuli_out,
        } => {
            if cycles == 0 {
                return Err(Failure::input("--cycles must be at least 1"));
            }
            let (c, tb) = match kind {
                FixtureKind::Random => {
                    if inputs == 0 || outputs == 0 {
                        return Err(Failure::input("--inputs and --outputs must be at least 1"));
                    }
                    let p = FixtureParams {
                        flops,
                        gates,
                        inputs,
                        outputs,
                        cycles,
                    };
                    gen_random_fixture(seed, p)
                }
                FixtureKind::ShiftSerial | FixtureKind::ShiftParallel => {
                    if flops == 0 {
                        return Err(Failure::input("a shift register needs at least one flop"));
                    }
                    let taps = if kind == FixtureKind::ShiftSerial {
                        Taps::Serial
                    } else {
                        Taps::Parallel
                    };
                    shift_register(flops, cycles, taps, seed)
                }
            };
            write_atomic(&netlist_out, with_newline(to_json(&c)).as_bytes())?;
            write_atomic(&stimuli_out, write_stimuli(&tb, &c).as_bytes())?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct FootprintEntry {
    #[serde(flatten)]
    footprint: Footprint,
    fpga_kbits: f64,
    board_kbits: f64,
}

fn footprint(args: FootprintArgs) -> CmdResult {
    let (flops, inputs, outputs, cycles) = match (&args.netlist, &args.stimuli) {
        (Some(n), Some(s)) => {
            let (c, tb) = load_design(n, s)?;
            (
                c.num_flops() as u64,
                c.num_inputs() as u64,
                c.num_outputs() as u64,
                tb.len() as u64,
            )
        }
        _ => {
            let need = |v: Option<u64>, flag: &str| {
                v.ok_or_else(|| Failure::input(format!("missing --{flag}")))
            };
            (
                need(args.F, "F")?,
                need(args.I, "I")?,
                need(args.O, "O")?,
                need(args.N, "N")?,
            )
        }
    };
    if flops == 0 || cycles == 0 {
        eprintln!("warning: empty fault space (F={flops}, N={cycles})");
    }
    let params = FootprintParams {
        flops,
        inputs,
        outputs,
        cycles,
        verdict_width: args.w,
    };
    let techniques = match args.technique {
        Some(t) => vec![t.into()],
        None => Technique::ALL.to_vec(),
    };
    let entries = techniques
        .into_iter()
        .map(|t| {
            let f = memory_footprint(params, t)?;
            Ok(FootprintEntry {
                footprint: f,
                fpga_kbits: f.fpga_kbits(),
                board_kbits: f.board_kbits(),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let json = if entries.len() == 1 {
        to_pretty(&entries[0])?
    } else {
        to_pretty(&entries)?
    };
    match args.out {
        Some(path) => write_atomic(&path, json.as_bytes())?,
        None => print!("{json}"),
    }
    Ok(0)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_netlist(path: &Path) -> Result<Circuit, Failure> {
    parse_netlist(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_design(netlist: &Path, stimuli: &Path) -> Result<(Circuit, Testbench), Failure> {
    let c = load_netlist(netlist)?;
    let tb = parse_stimuli(&read(stimuli)?, &c)
        .map_err(|e| Failure::input(format!("{}: {e}", stimuli.display())))?;
    Ok((c, tb))
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(with_newline)
        .map_err(Failure::input)
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn unix_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Writes through a sibling temporary file and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let fail = |e: std::io::Error| Failure::input(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
