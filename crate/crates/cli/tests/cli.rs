use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use multiproj::Instance;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multiproj"))
}

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_of(args: &[&str], dir: &Path, tag: &str) -> (Value, Output) {
    let path = dir.join(format!("{tag}.json"));
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--json", p]);
    let out = run(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("no report: {}", String::from_utf8_lossy(&out.stderr)));
    (serde_json::from_str(&text).unwrap(), out)
}

#[test]
fn analyze_golden() {
    let dir = tempfile::tempdir().unwrap();
    let file = instance("golden.json");
    let (r, out) = json_of(&["analyze", file.to_str().unwrap()], dir.path(), "golden");
    assert_eq!(code(&out), 0);
    assert_eq!(r["p"], 4);
    assert_eq!(r["support"].as_array().unwrap().len(), 7);
    assert_eq!(r["mode"], "arrangement");
    assert_eq!(r["rank_table"]["1,2"], 1);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "PASS"));
    assert!(stdout(&out).contains("dimension p = 4"));
}

#[test]
fn analyze_single_subspace() {
    let dir = tempfile::tempdir().unwrap();
    let file = instance("point.json");
    let (r, out) = json_of(&["analyze", file.to_str().unwrap()], dir.path(), "point");
    assert_eq!(code(&out), 0);
    assert_eq!(r["p"], 3);
    assert_eq!(r["hilbert_polynomial"]["text"], "binom(u1+3,3)");
    assert_eq!(r["initial_ideal"].as_array().unwrap().len(), 0);
}

#[test]
fn analyze_abstract_table_is_matroid_mode() {
    let dir = tempfile::tempdir().unwrap();
    let file = instance("planes.json");
    let (r, out) = json_of(&["analyze", file.to_str().unwrap()], dir.path(), "planes");
    assert_eq!(code(&out), 0);
    assert_eq!(r["mode"], "matroid");
    assert_eq!(r["p"], 3);
    assert!(stdout(&out).contains("matroid mode"));
}

#[test]
fn verify_camera_all_pass() {
    let out = run(&["verify", instance("camera.json").to_str().unwrap(), "--which", "all", "--seed", "42", "--q", "101"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("overall PASS"));
    assert!(!text.contains("FAIL") && !text.contains("ABSTAIN"));
}

#[test]
fn verify_golden_groebner() {
    let dir = tempfile::tempdir().unwrap();
    let file = instance("golden.json");
    let (r, out) = json_of(&["verify", file.to_str().unwrap(), "--which", "groebner"], dir.path(), "gb");
    assert_eq!(code(&out), 0);
    let c = &r["suites"]["groebner"]["contracts"][0];
    assert_eq!(c["verdict"], "PASS");
    assert_eq!(c["detail"]["expected"], c["detail"]["computed"]);
}

#[test]
fn verify_corrupted_table_fails_with_witness() {
    let out = run(&["verify", instance("corrupted.json").to_str().unwrap(), "--which", "matroid"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("rank_table_axioms") && text.contains("FAIL"));
    assert!(text.contains("I = {1,2}, J = {1,2}"), "{text}");
}

#[test]
fn inapplicable_suites() {
    let planes = instance("planes.json");
    let out = run(&["verify", planes.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("skipped: needs a concrete arrangement"));
    let out = run(&["verify", planes.to_str().unwrap(), "--which", "groebner"]);
    assert_eq!(code(&out), 2);
    let out = run(&["analyze", instance("corrupted.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn budgets_give_exit_code_3() {
    let golden = instance("golden.json");
    let out = run(&["verify", golden.to_str().unwrap(), "--which", "pointcount", "--q", "101", "--trials", "1"]);
    assert_eq!(code(&out), 3, "{}", stdout(&out));
    assert!(stdout(&out).contains("(budget)"));
    let out = run(&["verify", golden.to_str().unwrap(), "--which", "groebner", "--max-vars", "4"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn pointcount_golden_small_field() {
    let out = run(&["verify", instance("golden.json").to_str().unwrap(), "--which", "pointcount", "--q", "11", "--trials", "2"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    let trials: Vec<&str> = text.lines().filter(|l| l.contains(" trial=")).collect();
    assert_eq!(trials.len(), 8 * 2);
    assert!(trials.iter().all(|l| l.ends_with("PASS")));
    assert!(text.contains("multiplicity_free") && text.ends_with("overall PASS\n"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = instance("golden.json");
    for cmd in ["analyze", "verify"] {
        let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
            .map(|k| {
                let path = dir.path().join(format!("{cmd}{k}.json"));
                let mut args = vec![cmd, file.to_str().unwrap(), "--json", path.to_str().unwrap()];
                if cmd == "verify" {
                    args.extend(["--seed", "9", "--q", "11", "--trials", "1"]);
                }
                let out = run(&args);
                (out.stdout, std::fs::read(&path).unwrap())
            })
            .collect();
        assert_eq!(runs[0], runs[1], "{cmd}");
    }
}

#[test]
fn seeds_change_only_randomized_parts() {
    let dir = tempfile::tempdir().unwrap();
    let file = instance("camera.json");
    let (a, _) = json_of(&["verify", file.to_str().unwrap(), "--seed", "1"], dir.path(), "s1");
    let (b, _) = json_of(&["verify", file.to_str().unwrap(), "--seed", "2"], dir.path(), "s2");
    assert_eq!(a["suites"]["hilbert"], b["suites"]["hilbert"]);
    assert_eq!(a["verdict"], b["verdict"]);
}

#[test]
fn gen_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (ambient, dims, field, seed, want) in
        [("5", "2,2,1", "rational", "7", vec![2, 2, 1]), ("3", "1,1", "rational", "0", vec![1, 1]), ("4", "1,2", "prime:13", "3", vec![1, 2])]
    {
        let path = dir.path().join(format!("gen{seed}.json"));
        let out = run(&["gen", "--ambient", ambient, "--dims", dims, "--field", field, "--seed", seed, "-o", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let inst = Instance::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let a = inst.arrangement().unwrap();
        assert_eq!(a.subspaces().iter().map(|s| s.dim()).collect::<Vec<_>>(), want);
        inst.rank_table().unwrap();
        let again = run(&["analyze", path.to_str().unwrap()]);
        assert_eq!(code(&again), 0);
    }
    let path = dir.path().join("impossible.json");
    let out = run(&["gen", "--ambient", "2", "--dims", "2,2", "--seed", "0", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no valid arrangement"));
    let out = run(&["gen", "--ambient", "3", "--dims", "1", "--field", "prime:12", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gen_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let read = |k: usize, seed: &str| {
        let path = dir.path().join(format!("g{k}.json"));
        let out = run(&["gen", "--ambient", "5", "--dims", "2,2,1", "--seed", seed, "-o", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        std::fs::read(path).unwrap()
    };
    assert_eq!(read(0, "7"), read(1, "7"));
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"field\": {\"type\": \"rational\"},\n  \"ambient_dim\": 3,\n  \"subspaces\": [[[\"1\", \"0\"]]]\n}\n").unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("subspaces[0][0]"));
    std::fs::write(&path, "{\n  \"field\": {\"type\": \"rational\"},\n  \"ambient_dim\": 3,\n  oops\n}\n").unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}
