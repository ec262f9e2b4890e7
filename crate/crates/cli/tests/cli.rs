// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

fn fixture(name: &str) -> PathBuf {
    Path::new(FIXTURES).join(name)
}

fn seugrade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seugrade"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

struct Run {
    csv: PathBuf,
    summary: PathBuf,
}

fn campaign(dir: &TempDir, netlist: &Path, stimuli: &Path, technique: &str, extra: &[&str]) -> Run {
    let csv = dir.path().join(format!("{technique}.csv"));
    let summary = dir.path().join(format!("{technique}.json"));
    let mut args = vec![
        "campaign",
        "--netlist",
        p(netlist),
        "--stimuli",
        p(stimuli),
        "--technique",
        technique,
        "--csv",
        p(&csv),
        "--summary",
        p(&summary),
    ];
    args.extend_from_slice(extra);
    let o = seugrade(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    Run { csv, summary }
}

#[test]
fn golden_fixture_b() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("trace.json");
    let o = seugrade(&[
        "golden",
        "--netlist",
        p(&fixture("gated.json")),
        "--stimuli",
        p(&fixture("gated.csv")),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let trace = json(&out);
    assert_eq!(trace["outputs"], serde_json::json!([[0], [0], [0], [0]]));
    assert_eq!(trace["states"], serde_json::json!([[0], [0], [0], [0]]));
}

#[test]
fn golden_missing_stimuli() {
    let dir = TempDir::new().unwrap();
    let o = seugrade(&[
        "golden",
        "--netlist",
        p(&fixture("gated.json")),
        "--stimuli",
        p(&dir.path().join("absent.csv")),
        "--out",
        p(&dir.path().join("t.json")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("t.json").exists());
}

#[test]
fn golden_stimuli_width_mismatch() {
    let dir = TempDir::new().unwrap();
    let stim = dir.path().join("wide.csv");
    fs::write(&stim, "a,b,c\n0,1,0\n").unwrap();
    let o = seugrade(&[
        "golden",
        "--netlist",
        p(&fixture("gated.json")),
        "--stimuli",
        p(&stim),
        "--out",
        p(&dir.path().join("t.json")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("3 columns"), "{}", stderr(&o));
}

#[test]
fn time_mux_summary_fixture_b() {
    let dir = TempDir::new().unwrap();
    let run = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "time-mux",
        &["--no-timestamp"],
    );
    let s = json(&run.summary);
    assert_eq!(
        s["counts"],
        serde_json::json!({"failure": 2, "latent": 1, "silent": 1})
    );
    assert_eq!(s["percentages"]["failure"], 50.0);
    assert_eq!(s["technique"], "time-mux");
    assert_eq!(s["f_clk"], 25_000_000);
    assert!(s.get("timestamp").is_none());
    let csv = fs::read_to_string(&run.csv).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("fault_id,flop_id,cycle,class,at_cycle,edges")
    );
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn timestamp_is_optional() {
    let dir = TempDir::new().unwrap();
    let run = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "state-scan",
        &[],
    );
    assert!(json(&run.summary)["timestamp"].is_u64());
}

#[test]
fn oracle_and_mask_scan_agree() {
    let dir = TempDir::new().unwrap();
    let oracle = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "oracle",
        &[],
    );
    let mask = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "mask-scan",
        &[],
    );
    let o = seugrade(&["compare", p(&oracle.csv), p(&mask.csv)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn compare_one_changed_class() {
    let dir = TempDir::new().unwrap();
    let run = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "oracle",
        &[],
    );
    let text = fs::read_to_string(&run.csv).unwrap();
    let changed = dir.path().join("changed.csv");
    fs::write(&changed, text.replacen("LATENT", "SILENT", 1)).unwrap();
    let o = seugrade(&["compare", p(&run.csv), p(&changed)]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let diff_lines: Vec<_> = out.lines().filter(|l| l.starts_with("fault ")).collect();
    assert_eq!(diff_lines, ["fault 3 (f0 @ cycle 3): LATENT vs SILENT"]);
}

#[test]
fn compare_limits_printed_diffs() {
    let dir = TempDir::new().unwrap();
    let run = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "oracle",
        &[],
    );
    let text = fs::read_to_string(&run.csv).unwrap();
    let flipped = text
        .replace("FAILURE", "X")
        .replace("SILENT", "FAILURE")
        .replace("LATENT", "FAILURE")
        .replace('X', "SILENT");
    let other = dir.path().join("flipped.csv");
    fs::write(&other, flipped).unwrap();
    let o = seugrade(&["compare", "-k", "2", p(&run.csv), p(&other)]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("fault ")).count(), 2);
    assert!(out.contains("4 of 4 faults differ"));
}

#[test]
fn compare_different_fault_counts() {
    let dir = TempDir::new().unwrap();
    let run = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "oracle",
        &[],
    );
    let text = fs::read_to_string(&run.csv).unwrap();
    let short = dir.path().join("short.csv");
    let kept: Vec<_> = text.lines().take(3).collect();
    fs::write(&short, kept.join("\n") + "\n").unwrap();
    assert_eq!(code(&seugrade(&["compare", p(&run.csv), p(&short)])), 2);
}

#[test]
fn footprint_state_scan_b14() {
    let o = seugrade(&[
        "footprint",
        "--F",
        "215",
        "--I",
        "32",
        "--O",
        "54",
        "--N",
        "160",
        "--w",
        "1",
        "--technique",
        "state-scan",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["board_ram_bits"], 7_464_800);
    assert_eq!(v["fpga_ram_bits"], 13_760);
}

#[test]
fn footprint_empty_fault_space() {
    let o = seugrade(&[
        "footprint",
        "--F",
        "0",
        "--I",
        "4",
        "--O",
        "4",
        "--N",
        "16",
        "--technique",
        "mask-scan",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("empty fault space"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["board_ram_bits"], 0);
}

#[test]
fn footprint_from_design_lists_all_techniques() {
    let o = seugrade(&[
        "footprint",
        "--netlist",
        p(&fixture("gated.json")),
        "--stimuli",
        p(&fixture("gated.csv")),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<_> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["technique"].clone())
        .collect();
    assert_eq!(names, ["mask-scan", "state-scan", "time-mux"]);
}

#[test]
fn footprint_bad_params() {
    assert_eq!(
        code(&seugrade(&[
            "footprint",
            "--F",
            "2",
            "--I",
            "1",
            "--O",
            "1",
            "--N",
            "2",
            "--w",
            "3"
        ])),
        2
    );
    assert_eq!(code(&seugrade(&["footprint", "--F", "2"])), 2);
}

#[test]
fn instrument_time_mux_fixture_b() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("tm.json");
    let report = dir.path().join("overhead.json");
    let o = seugrade(&[
        "instrument",
        "--netlist",
        p(&fixture("gated.json")),
        "--technique",
        "time-mux",
        "--out",
        p(&out),
        "--report",
        p(&report),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&report)["instrumented_ff"], 4);
    let netlist = json(&out);
    // Four instrument flops plus one output latch.
    assert_eq!(netlist["flops"].as_array().unwrap().len(), 5);
}

#[test]
fn fixture_generation_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let gen = |tag: &str| {
        let n = dir.path().join(format!("{tag}.json"));
        let s = dir.path().join(format!("{tag}.csv"));
        let o = seugrade(&[
            "fixture",
            "--seed",
            "42",
            "--flops",
            "6",
            "--cycles",
            "12",
            "--netlist-out",
            p(&n),
            "--stimuli-out",
            p(&s),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        (fs::read(&n).unwrap(), fs::read(&s).unwrap(), n, s)
    };
    let (na, sa, n, s) = gen("a");
    let (nb, sb, _, _) = gen("b");
    assert_eq!(na, nb);
    assert_eq!(sa, sb);

    let first = campaign(&dir, &n, &s, "mask-scan", &["--no-timestamp"]);
    let a = (
        fs::read(&first.csv).unwrap(),
        fs::read(&first.summary).unwrap(),
    );
    let second = campaign(
        &dir,
        &n,
        &s,
        "mask-scan",
        &["--no-timestamp", "--sequential"],
    );
    let b = (
        fs::read(&second.csv).unwrap(),
        fs::read(&second.summary).unwrap(),
    );
    assert_eq!(a, b);
}

#[test]
fn b14_shaped_campaign_counts_every_fault() {
    let dir = TempDir::new().unwrap();
    let n = dir.path().join("b14.json");
    let s = dir.path().join("b14.csv");
    let o = seugrade(&[
        "fixture",
        "--seed",
        "14",
        "--flops",
        "215",
        "--gates",
        "400",
        "--inputs",
        "32",
        "--outputs",
        "54",
        "--cycles",
        "160",
        "--netlist-out",
        p(&n),
        "--stimuli-out",
        p(&s),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let run = campaign(&dir, &n, &s, "time-mux", &["--no-timestamp"]);
    let v = json(&run.summary);
    assert_eq!(v["faults"], 34_400);
    let counts = &v["counts"];
    let sum = ["failure", "latent", "silent"]
        .iter()
        .map(|k| counts[k].as_u64().unwrap())
        .sum::<u64>();
    assert_eq!(sum, 34_400);
}

#[test]
fn cost_overrides_reach_the_ledger() {
    let dir = TempDir::new().unwrap();
    let base = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "mask-scan",
        &[],
    );
    let base_edges = json(&base.summary)["total_edges"].as_u64().unwrap();
    let csv = dir.path().join("r.csv");
    let summary = dir.path().join("r.json");
    let o = seugrade(&[
        "--cost.reset_edges=3",
        "campaign",
        "--netlist",
        p(&fixture("gated.json")),
        "--stimuli",
        p(&fixture("gated.csv")),
        "--technique",
        "mask-scan",
        "--csv",
        p(&csv),
        "--summary",
        p(&summary),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    // Four faults, two extra reset edges each.
    assert_eq!(
        json(&summary)["total_edges"].as_u64().unwrap(),
        base_edges + 8
    );
}

#[test]
fn fclk_changes_reported_time() {
    let dir = TempDir::new().unwrap();
    let run = campaign(
        &dir,
        &fixture("gated.json"),
        &fixture("gated.csv"),
        "mask-scan",
        &["--fclk", "1000", "--no-timestamp"],
    );
    let v = json(&run.summary);
    let edges = v["total_edges"].as_f64().unwrap();
    assert_eq!(v["total_seconds"].as_f64().unwrap(), edges / 1000.0);
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir.path().join("x")).to_owned();
    let gated = p(&fixture("gated.json")).to_owned();
    let stim = p(&fixture("gated.csv")).to_owned();
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["bogus"],
        vec![
            "campaign",
            "--netlist",
            &gated,
            "--stimuli",
            &stim,
            "--technique",
            "nope",
            "--csv",
            &out,
            "--summary",
            &out,
        ],
        vec![
            "--cost.nope=1",
            "golden",
            "--netlist",
            &gated,
            "--stimuli",
            &stim,
            "--out",
            &out,
        ],
        vec![
            "--cost.reset_edges=x",
            "golden",
            "--netlist",
            &gated,
            "--stimuli",
            &stim,
            "--out",
            &out,
        ],
        vec![
            "golden",
            "--netlist",
            &stim,
            "--stimuli",
            &stim,
            "--out",
            &out,
        ],
        vec![
            "fixture",
            "--cycles",
            "0",
            "--netlist-out",
            &out,
            "--stimuli-out",
            &out,
        ],
    ];
    for args in cases {
        assert_eq!(code(&seugrade(&args)), 2, "{args:?}");
    }
    assert_eq!(code(&seugrade(&["--help"])), 0);
}
