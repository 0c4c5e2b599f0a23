//! The `listreg` binary: outputs and exit codes (0 pass, 1 property failure, 2 usage error).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("listreg-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn listreg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_listreg")).current_dir(dir).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

#[test]
fn built_class_reports_its_fat_dimension() {
    let dir = workdir("dims");
    assert_eq!(code(&listreg(&dir, &["build-class", "example1", "--n", "4", "--out", "c.json"])), 0);
    let out = listreg(&dir, &["dims", "--class", "c.json", "--gamma", "1/20", "--k", "2", "--which", "fat"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["fat"]["dimension"], 3);
}

#[test]
fn train_then_eval_round_trip() {
    let dir = workdir("train");
    assert_eq!(code(&listreg(&dir, &["build-class", "example1", "--n", "3", "--out", "c.json"])), 0);
    write(&dir, "s.json", r#"{"pairs":[[0,"1/10"],[1,"2/10"],[2,"3/10"],[0,"1/10"]]}"#);
    let train = listreg(&dir, &["train", "--class", "c.json", "--sample", "s.json", "--gamma", "1/20", "--k", "2", "--m", "12", "--l", "4", "--out", "h.json"]);
    assert_eq!(code(&train), 0, "{}", String::from_utf8_lossy(&train.stderr));
    assert!(dir.join("h.report.json").exists());
    write(&dir, "d.json", r#"{"Q":10,"support":[[0,1,1,3],[1,2,1,3],[2,3,1,3]]}"#);
    let eval = listreg(&dir, &["eval", "--hypothesis", "h.json", "--dist", "d.json"]);
    assert_eq!(code(&eval), 0);
    assert!(stdout_json(&eval)["population_error"].is_string());
}

#[test]
fn run_writes_identical_reports_and_a_csv() {
    let dir = workdir("run");
    write(
        &dir,
        "cfg.json",
        r#"{"class":{"builder":"example1","n":3},"distribution":{"kind":"realizable"},"mode":"realizable",
            "gamma":"1/20","k":2,"sample_sizes":[6,12],"trials":2,"seed":7,"m":12,"l":4}"#,
    );
    assert_eq!(code(&listreg(&dir, &["run", "--config", "cfg.json", "--out", "a.json"])), 0);
    assert_eq!(code(&listreg(&dir, &["run", "--config", "cfg.json", "--out", "b.json"])), 0);
    let (a, b) = (std::fs::read(dir.join("a.json")).unwrap(), std::fs::read(dir.join("b.json")).unwrap());
    assert_eq!(a, b);
    assert!(std::fs::read_to_string(dir.join("a.csv")).unwrap().lines().count() >= 3);
}

#[test]
fn verify_passes_on_a_filtered_suite() {
    let dir = workdir("verify");
    let out = listreg(&dir, &["verify", "--filter", "core::"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS core::loss_zero_iff_member"));
}

#[test]
fn unmet_game_target_is_a_property_failure() {
    let dir = workdir("fail");
    assert_eq!(code(&listreg(&dir, &["build-class", "example1", "--n", "3", "--out", "c.json"])), 0);
    write(&dir, "s.json", r#"{"pairs":[[0,"1/10"],[1,"2/10"],[2,"3/10"],[0,"1/10"]]}"#);
    let out = listreg(&dir, &["train", "--class", "c.json", "--sample", "s.json", "--gamma", "1/20", "--k", "1", "--m", "1", "--l", "1", "--out", "h.json"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = workdir("usage");
    assert_eq!(code(&listreg(&dir, &["frobnicate"])), 2);
    assert_eq!(code(&listreg(&dir, &["dims", "--class", "missing.json", "--gamma", "1/20", "--k", "2"])), 2);
    assert_eq!(code(&listreg(&dir, &["build-class", "example1", "--n", "3", "--out", "c.json"])), 0);
    assert_eq!(code(&listreg(&dir, &["dims", "--class", "c.json", "--gamma", "abc", "--k", "2"])), 2);
}
