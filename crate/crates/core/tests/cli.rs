use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use accretive_lab::linalg::ComplexMatrix;
use accretive_lab::means::{geom_mean, WeightParam};
use accretive_lab::sectorial::sectorial_index;
use accretive_lab::verify::InequalityReport;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_accretive-lab"));
    cmd.env_remove("ACCRETIVE_LAB_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_matrix(path: &Path) -> ComplexMatrix {
    ComplexMatrix::from_json(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn version_and_help() {
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8_lossy(&help.stdout);
    for sub in ["gen", "compute", "radius", "entropy", "verify"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn gen_writes_a_certified_sectorial_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.json");
    let o = run(&["gen", "--class", "sectorial", "--alpha", "0.7", "--dim", "4", "--seed", "42", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let a = read_matrix(&out);
    assert_eq!(a.dim(), 4);
    assert!(sectorial_index(&a).unwrap() <= 0.7);

    let again = dir.path().join("b.json");
    run(&["gen", "--class", "sectorial", "--alpha", "0.7", "--dim", "4", "--seed", "42", "--out", p(&again)]);
    assert_eq!(fs::read_to_string(&out).unwrap(), fs::read_to_string(&again).unwrap());

    let missing = run(&["gen", "--class", "loewner-pair", "--dim", "3", "--out", p(&out)]);
    assert_eq!(missing.status.code(), Some(2));
    let no_alpha = run(&["gen", "--class", "sectorial", "--dim", "3", "--out", p(&out)]);
    assert_eq!(no_alpha.status.code(), Some(2));
}

#[test]
fn compute_mean_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, m) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("m.json"));
    let o = run(&["gen", "--class", "positive-pair", "--dim", "3", "--seed", "5", "--out", p(&a), "--out-b", p(&b)]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["compute", "mean", "--kind", "geom", "--t", "0.3", "--A", p(&a), "--B", p(&b), "--out", p(&m)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let expected = geom_mean(&read_matrix(&a), &read_matrix(&b), WeightParam::new(0.3).unwrap()).unwrap();
    assert!(read_matrix(&m).relative_distance(&expected) < 1e-12);

    let o = run(&["compute", "mean", "--kind", "measure", "--alpha", "0.3", "--A", p(&a), "--B", p(&b)]);
    assert_eq!(o.status.code(), Some(0));
    let via_measure = ComplexMatrix::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(via_measure.relative_distance(&expected) < 1e-6);

    let bad_t = run(&["compute", "mean", "--kind", "arith", "--t", "2", "--A", p(&a), "--B", p(&b)]);
    assert_eq!(bad_t.status.code(), Some(2));
}

#[test]
fn radius_prints_bounds_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("j.json");
    fs::write(&a, r#"{"n": 2, "re": [[0, 1], [0, 0]]}"#).unwrap();
    let o = run(&["radius", "--A", p(&a), "--bounds"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["omega"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((v["kittaneh"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["power"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert!(v["refined"].as_f64().unwrap() >= v["omega"].as_f64().unwrap() - 1e-9);

    let plain: serde_json::Value = serde_json::from_slice(&run(&["radius", "--A", p(&a)]).stdout).unwrap();
    assert!(plain.get("kittaneh").is_none() && plain.get("omega").is_some());
}

#[test]
fn entropy_prints_matrix_json() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    fs::write(&a, r#"{"n": 1, "re": [[1]]}"#).unwrap();
    fs::write(&b, r#"{"n": 1, "re": [[4]]}"#).unwrap();
    let o = run(&["entropy", "--A", p(&a), "--B", p(&b), "--t", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let t = ComplexMatrix::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!((t.get(0, 0).re - 2.0).abs() < 1e-12);

    let o = run(&["entropy", "--A", p(&a), "--B", p(&b), "--t", "0.5", "--s"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["relative_entropy"]["re"][0][0].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn verify_report_schema_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o =
        run(&["verify", "--case", "lemma_scalar,mccarthy_lower", "--trials", "8", "--dim", "2..3", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = String::from_utf8(o.stdout).unwrap();
    assert_eq!(summary.lines().filter(|l| l.contains("PASS")).count(), 2);

    let text = fs::read_to_string(&out).unwrap();
    let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["case", "trials", "dims", "seed", "min_margin", "margins_histogram", "failures", "pass"] {
        assert!(raw[0].get(key).is_some(), "missing {key}");
    }
    let parsed: Vec<InequalityReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
}

#[test]
fn forced_failure_exits_one_and_lists_replays() {
    let o = run(&["verify", "--case", "prop_path_convex", "--trials", "5", "--dim", "2..3", "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(1));
    let summary = String::from_utf8(o.stdout).unwrap();
    assert!(summary.contains("FAIL") && summary.contains("replay 42:"));

    let line = summary.lines().find(|l| l.contains("replay 42:")).unwrap();
    let target = line.split_whitespace().nth(1).unwrap();
    let replay = run(&["verify", "--case", "prop_path_convex", "--dim", "2..3", "--tol", "1e-20", "--replay", target]);
    assert_eq!(replay.status.code(), Some(1));
    let margin = line.split_whitespace().last().unwrap();
    let replayed: f64 = String::from_utf8(replay.stdout)
        .unwrap()
        .split("margin=")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(format!("{replayed:+.3e}"), margin);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--t", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--case", "nonexistent"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--replay", "nonsense", "--case", "lemma_scalar"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn seed_env_var_is_a_default_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = ["verify", "--case", "lemma_scalar", "--trials", "1", "--out", p(&out)];
    let seed_of = |extra: &[&str], env: Option<&str>| {
        let mut cmd = bin();
        cmd.args(args).args(extra);
        if let Some(v) = env {
            cmd.env("ACCRETIVE_LAB_SEED", v);
        }
        assert_eq!(cmd.output().unwrap().status.code(), Some(0));
        let reports: Vec<InequalityReport> = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        reports[0].seed
    };
    assert_eq!(seed_of(&[], None), 42);
    assert_eq!(seed_of(&[], Some("7")), 7);
    assert_eq!(seed_of(&["--seed", "3"], Some("7")), 3);
}
