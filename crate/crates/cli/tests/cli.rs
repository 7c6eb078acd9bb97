//! End-to-end runs of the `sbim` binary: exit statuses, tables, JSON.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn jobs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

fn sbim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbim")).args(args).env("SBIM_THREADS", "1").output().expect("binary runs")
}

fn write_job(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn wall_example_prints_two_summands() {
    let o = sbim(&[jobs_dir().join("a2_wall.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Decomposition (2 summands, total dim 4"), "{out}");
    assert!(out.contains("[s2 s1 s2]"));
    assert!(out.contains("pass: yes"));
}

#[test]
fn origin_gives_single_eight_dimensional_summand() {
    let o = sbim(&[jobs_dir().join("a2_origin.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Decomposition (1 summands, total dim 8"));
}

#[test]
fn generator_out_of_range_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "bad.toml", "coxeter = \"A2\"\npoint = { pairings = [0, 1] }\nword = [9]\n");
    let o = sbim(&[&job]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generator index out of range"));
}

#[test]
fn all_config_problems_are_reported_together() {
    let dir = tempfile::tempdir().unwrap();
    let job =
        write_job(dir.path(), "bad.toml", "coxeter = \"A2\"\nfield_d = 8\npoint = { coords = [1] }\nword = [0]\n");
    let o = sbim(&[&job]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("field_d") && err.contains("point.coords") && err.contains("word[0]"), "{err}");
}

#[test]
fn unparseable_and_missing_files_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "broken.toml", "coxeter = [\n");
    assert_eq!(sbim(&[&job]).status.code(), Some(2));
    assert_eq!(sbim(&["/nonexistent/job.toml"]).status.code(), Some(2));
}

#[test]
fn point_outside_tits_cone_is_a_precondition_failure() {
    let o = sbim(&[jobs_dir().join("affine_outside.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("undetermined"));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let job = jobs_dir().join("b3_edge.toml");
    let o = sbim(&[job.to_str().unwrap(), "-q", "--json", first.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let o = sbim(&[first.to_str().unwrap(), "-q", "--json", second.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let a = std::fs::read_to_string(&first).unwrap();
    let b = std::fs::read_to_string(&second).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["status"], "success");
    assert_eq!(v["word"], serde_json::json!([1, 2, 3, 2, 1]));
    assert_eq!(v["decomposition"]["summands"].as_array().unwrap().len(), 10);
}

#[test]
fn runs_are_deterministic() {
    let job = jobs_dir().join("h3_wall.toml");
    let a = sbim(&[job.to_str().unwrap(), "--json", "-"]);
    let b = sbim(&[job.to_str().unwrap(), "--json", "-"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn user_realisation_runs() {
    let o = sbim(&[jobs_dir().join("user_matrix.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "j.toml", "coxeter = \"B2\"\npoint = { pairings = [1, 0] }\nword = [2, 1, 2]\n");
    let plain = stdout(&sbim(&[&job]));
    assert!(!plain.contains("Oracle verification"));
    let verified = stdout(&sbim(&[&job, "--verify", "--caps", "orbit=50,descent=50"]));
    assert!(verified.contains("Oracle verification"));
    let o = sbim(&[&job, "--caps", "orbit=2"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(sbim(&[&job, "--caps", "radius=2"]).status.code(), Some(2));
}

#[test]
fn a2_sweep_up_to_four_letters_passes() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "s.toml", "coxeter = \"A2\"\n");
    let o = sbim(&[&job, "--sweep", "--max-word-len", "4", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("cases 124  passed 124  failed 0"));
}

#[test]
fn b2_sweep_up_to_four_letters_passes() {
    let o = sbim(&[jobs_dir().join("b2_sweep.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified 124"));
}

#[test]
fn sweep_without_oracle_runs_structural_checks_only() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "s.toml", "coxeter = \"G2\"\n");
    let report = dir.path().join("r.json");
    let o = sbim(&[&job, "--max-word-len", "3", "--json", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("oracle off"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["cases"].as_array().unwrap().iter().all(|c| c["verified"].is_null()));
    let again = sbim(&[report.to_str().unwrap(), "-q", "--json", "-"]);
    assert_eq!(String::from_utf8_lossy(&again.stdout), std::fs::read_to_string(&report).unwrap());
}

#[test]
fn bad_thread_count_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "s.toml", "coxeter = \"A1\"\n[sweep]\nmax_word_len = 2\n");
    let o = Command::new(env!("CARGO_BIN_EXE_sbim")).arg(&job).env("SBIM_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
