use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ccsplan_core::{fixtures, io::write_dataset, RawInstance};
use tempfile::TempDir;

fn toy() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy-nation")
}

fn ccsplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccsplan"))
        .args(args)
        .env_remove("CCSPLAN_DATA")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_toy_nation() {
    let o = ccsplan(&["validate", "--data", p(&toy())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("10 regions (3 storage-capable), horizon 2018–2050"));
}

#[test]
fn validate_reads_data_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_ccsplan"))
        .arg("validate")
        .env("CCSPLAN_DATA", toy())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn validate_lists_errors() {
    let dir = TempDir::new().unwrap();
    let mut raw = RawInstance::from(&fixtures::toy_nation());
    raw.regions[0].baseline_emissions = -1.0;
    raw.techs[0].potential = -5.0;
    write_dataset(&raw, dir.path()).unwrap();
    let o = ccsplan(&["validate", "--data", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().count() >= 2, "{out}");
    assert!(
        stderr(&o).contains("2 validation error(s)"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn missing_files_fail_validation() {
    let dir = TempDir::new().unwrap();
    let o = ccsplan(&["validate", "--data", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing required files"));
}

#[test]
fn missing_data_is_usage_error() {
    let o = ccsplan(&["validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn solve_writes_bundle() {
    let out = TempDir::new().unwrap();
    let o = ccsplan(&[
        "solve",
        "--data",
        p(&toy()),
        "--scenario",
        "1",
        "--objective",
        "max-reduction",
        "--out",
        p(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.starts_with("scenario 1 optimal objective"), "{line}");
    assert!(line.contains("reduction 65.371%"), "{line}");
    assert!(line.contains("payback"), "{line}");
    for f in [
        "summary.json",
        "plan.csv",
        "emissions.csv",
        "trades.csv",
        "cashflow.csv",
        "plotdata/offsets_by_tech.csv",
    ] {
        assert!(out.path().join(f).is_file(), "{f}");
    }
    let r = ccsplan(&["report", p(out.path())]);
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    assert!(stdout(&r).contains("consistent"));
}

#[test]
fn solve_defaults_to_max_reduction() {
    let a = TempDir::new().unwrap();
    let o = ccsplan(&[
        "solve",
        "--data",
        p(&toy()),
        "--scenario",
        "3",
        "--out",
        p(a.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary = fs::read_to_string(a.path().join("summary.json")).unwrap();
    assert!(
        summary.contains("\"objective_mode\": \"max-reduction\""),
        "{summary}"
    );
}

#[test]
fn bad_scenario_is_usage_error() {
    let out = TempDir::new().unwrap();
    let o = ccsplan(&[
        "solve",
        "--data",
        p(&toy()),
        "--scenario",
        "5",
        "--out",
        p(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infeasible_solve_names_binding_rows() {
    let data = TempDir::new().unwrap();
    write_dataset(
        &RawInstance::from(&fixtures::unit_one_infeasible()),
        data.path(),
    )
    .unwrap();
    let out = TempDir::new().unwrap();
    let o = ccsplan(&[
        "solve",
        "--data",
        p(data.path()),
        "--scenario",
        "1",
        "--out",
        p(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(
        err.contains("infeasible") && err.contains("cap[2018]"),
        "{err}"
    );
    assert!(!out.path().join("summary.json").exists());
}

#[test]
fn nonneg_flag_enables_trading() {
    let data = TempDir::new().unwrap();
    write_dataset(&RawInstance::from(&fixtures::forced_trade()), data.path()).unwrap();
    let out = TempDir::new().unwrap();
    let o = ccsplan(&[
        "solve",
        "--data",
        p(data.path()),
        "--scenario",
        "1",
        "--objective",
        "cost",
        "--ccs-nonneg-emissions",
        "--out",
        p(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = fs::read_to_string(out.path().join("summary.json")).unwrap();
    assert!(summary.contains("\"any_trading\": true"), "{summary}");
}

#[test]
fn sweep_writes_monotone_table() {
    let out = TempDir::new().unwrap();
    let o = ccsplan(&[
        "sweep",
        "--data",
        p(&toy()),
        "--scenario",
        "1",
        "--param",
        "carbon-price",
        "--from",
        "10000",
        "--to",
        "220000",
        "--steps",
        "8",
        "--jobs",
        "2",
        "--out",
        p(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stderr(&o).contains("WARN"), "{}", stderr(&o));
    let table = fs::read_to_string(out.path().join("sweep.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next().unwrap(),
        "param_value,reduction_pct,objective,any_trading,status"
    );
    let red: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(red.len(), 8);
    assert!(red.windows(2).all(|w| w[1] >= w[0]), "{red:?}");
    assert!(out.path().join("sweep.json").is_file());
    assert!(out.path().join("points/08/summary.json").is_file());
}

#[test]
fn single_step_sweep_matches_solve() {
    let sw = TempDir::new().unwrap();
    let so = TempDir::new().unwrap();
    let a = ccsplan(&[
        "sweep",
        "--data",
        p(&toy()),
        "--scenario",
        "2",
        "--param",
        "ccs-cost",
        "--from",
        "30000",
        "--to",
        "30000",
        "--steps",
        "1",
        "--out",
        p(sw.path()),
    ]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let b = ccsplan(&[
        "solve",
        "--data",
        p(&toy()),
        "--scenario",
        "2",
        "--objective",
        "cost",
        "--ccs-cost",
        "30000",
        "--out",
        p(so.path()),
    ]);
    assert_eq!(b.status.code(), Some(0), "{}", stderr(&b));
    assert_eq!(
        fs::read(sw.path().join("points/01/summary.json")).unwrap(),
        fs::read(so.path().join("summary.json")).unwrap()
    );
}

#[test]
fn reversed_grid_is_usage_error() {
    let out = TempDir::new().unwrap();
    let o = ccsplan(&[
        "sweep",
        "--data",
        p(&toy()),
        "--scenario",
        "1",
        "--param",
        "transport-cost",
        "--from",
        "5",
        "--to",
        "1",
        "--steps",
        "3",
        "--out",
        p(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_steps_is_usage_error() {
    let out = TempDir::new().unwrap();
    let o = ccsplan(&[
        "sweep",
        "--data",
        p(&toy()),
        "--scenario",
        "1",
        "--param",
        "carbon-price",
        "--from",
        "1",
        "--to",
        "2",
        "--steps",
        "0",
        "--out",
        p(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_all_is_byte_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let o = ccsplan(&["run-all", "--data", p(&toy()), "--out", p(dir.path())]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let files = tree(a.path());
    assert_eq!(files, tree(b.path()));
    assert!(files.len() > 40);
    for rel in &files {
        assert_eq!(
            fs::read(a.path().join(rel)).unwrap(),
            fs::read(b.path().join(rel)).unwrap(),
            "{rel:?}"
        );
    }
}

fn tree(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push(path.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

#[test]
fn help_documents_units_everywhere() {
    for sub in ["validate", "solve", "run-all", "sweep", "report"] {
        let o = ccsplan(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(text.contains("yen/t") && text.contains("GW"), "{sub}");
    }
}

#[test]
fn report_flags_tampered_bundle() {
    let out = TempDir::new().unwrap();
    let o = ccsplan(&[
        "solve",
        "--data",
        p(&toy()),
        "--scenario",
        "1",
        "--objective",
        "cost",
        "--out",
        p(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let path = out.path().join("summary.json");
    let text = fs::read_to_string(&path)
        .unwrap()
        .replace("\"reduction_pct\": 35", "\"reduction_pct\": 36");
    fs::write(&path, text).unwrap();
    let r = ccsplan(&["report", p(out.path())]);
    assert_eq!(r.status.code(), Some(1), "{}", stdout(&r));
    assert!(stdout(&r).contains("mismatch"));
}
