use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn opnorm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opnorm"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().last().expect("a report line");
    let v: Value = serde_json::from_str(line).expect("report is JSON");
    assert_eq!(v["schema_version"], 1);
    v
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("identity.mm"),
        "%%MatrixMarket matrix coordinate real general\n4 4 4\n1 1 1\n2 2 1\n3 3 1\n4 4 1\n",
    )
    .unwrap();
    fs::write(dir.path().join("hadamard2.csv"), "1,1\n1,-1\n").unwrap();
    fs::write(dir.path().join("bad.csv"), "1,2\n3,oops\n").unwrap();
    dir
}

#[test]
fn identity_inf_to_one_is_n() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &["norm", "identity.mm", "--p", "inf", "--q", "1"],
    );
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["result"]["value"], 4.0);
    assert_eq!(r["result"]["method"], "exact-enum");
    assert_eq!(r["config"]["p"], "inf");
}

#[test]
fn hadamard_inf_to_one_is_two() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &["norm", "hadamard2.csv", "--p", "inf", "--q", "1"],
    );
    assert!(out.status.success());
    assert!((report(&out)["result"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn bad_matrix_names_the_line() {
    let dir = setup();
    let out = opnorm(dir.path(), &["norm", "bad.csv", "--p", "2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn missing_exact_route_is_a_resource_error() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &[
            "norm",
            "hadamard2.csv",
            "--p",
            "3",
            "--q",
            "1.5",
            "--engine",
            "exact",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn planted_reduction_is_complete_and_reproducible() {
    let dir = setup();
    let args = |out: &'static str| {
        vec![
            "reduce",
            "--vertices",
            "2",
            "--big-labels",
            "2",
            "--small-labels",
            "2",
            "--seed",
            "5",
            "--out",
            out,
        ]
    };
    let first = opnorm(dir.path(), &args("a.mtx"));
    assert!(first.status.success());
    let r = report(&first);
    assert!(r["result"]["completeness"]["residual"].as_f64().unwrap() <= 1e-9);
    assert!(r["result"]["symmetry_residual"].as_f64().unwrap() <= 1e-12);
    assert!(opnorm(dir.path(), &args("b.mtx")).status.success());
    let (a, b) = (
        fs::read(dir.path().join("a.mtx")).unwrap(),
        fs::read(dir.path().join("b.mtx")).unwrap(),
    );
    assert_eq!(a, b);
}

#[test]
fn oversize_reduction_hits_the_cap() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &[
            "reduce",
            "--vertices",
            "4",
            "--big-labels",
            "16",
            "--small-labels",
            "2",
            "--out",
            "x.bin",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn instance_and_labeling_files_feed_back_in() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &[
            "reduce",
            "--vertices",
            "4",
            "--degree",
            "3",
            "--big-labels",
            "3",
            "--small-labels",
            "2",
            "--seed",
            "2",
            "--instance-out",
            "inst.lc",
            "--out",
            "a.bin",
        ],
    );
    assert!(out.status.success());
    let planted = report(&out);
    let out = opnorm(
        dir.path(),
        &["reduce", "--instance", "inst.lc", "--out", "b.bin"],
    );
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["result"]["trace"], planted["result"]["trace"]);
    assert!(r["result"]["completeness"].is_null());
    assert_eq!(
        fs::read(dir.path().join("a.bin")).unwrap(),
        fs::read(dir.path().join("b.bin")).unwrap()
    );

    // the all-zero labeling need not satisfy anything, but it must parse
    fs::write(dir.path().join("zero.lab"), "0 0 0 0\n").unwrap();
    let out = opnorm(
        dir.path(),
        &[
            "reduce",
            "--instance",
            "inst.lc",
            "--labeling",
            "zero.lab",
            "--out",
            "c.csv",
        ],
    );
    assert!(out.status.success());
    assert!(report(&out)["result"]["completeness"]["satisfied_edges"].is_u64());

    // the binary output reads back as a matrix
    let out = opnorm(
        dir.path(),
        &[
            "norm",
            "a.bin",
            "--p",
            "2",
            "--q",
            "2",
            "--kind",
            "expectation",
        ],
    );
    assert!(out.status.success());
    assert!((report(&out)["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn kwise_embedding_satisfies_the_identity() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &["embed", "kwise", "--n", "8", "--q", "4", "--out", "b.mtx"],
    );
    assert!(out.status.success());
    let r = report(&out);
    assert!(r["result"]["identity_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(r["result"]["rows"], 128);
    assert!(dir.path().join("b.mtx").exists());
}

#[test]
fn gaussian_embedding_is_near_isometric() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &[
            "embed", "gaussian", "--n", "20", "--m", "20000", "--q", "4", "--trials", "1000",
            "--seed", "1",
        ],
    );
    assert!(out.status.success());
    assert!(
        report(&out)["result"]["isometry"]["max_rel_dev"]
            .as_f64()
            .unwrap()
            <= 0.10
    );
}

#[test]
fn stable_embedding_rejects_q_above_p() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &["embed", "stable", "--n", "4", "--p", "1.2", "--q", "1.5"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));
}

#[test]
fn tensor_square_is_multiplicative() {
    let dir = setup();
    let out = opnorm(
        dir.path(),
        &[
            "tensor",
            "hadamard2.csv",
            "identity.mm",
            "--p",
            "2",
            "--q",
            "4",
        ],
    );
    assert!(out.status.success());
    assert!(report(&out)["result"]["rel_gap"].as_f64().unwrap() <= 1e-3);
    let out = opnorm(
        dir.path(),
        &[
            "tensor",
            "hadamard2.csv",
            "--p",
            "2",
            "--q",
            "2",
            "--k",
            "3",
        ],
    );
    assert!(out.status.success());
    assert!((report(&out)["result"]["power"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-9);
    // p > q: only the lower bound, and the Hadamard cube beats it
    let out = opnorm(
        dir.path(),
        &[
            "tensor",
            "hadamard2.csv",
            "--p",
            "inf",
            "--q",
            "1",
            "--k",
            "3",
        ],
    );
    assert!(out.status.success());
    assert!(report(&out)["result"]["power"].as_f64().unwrap() > 8.0 + 1e-6);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let dir = setup();
    fs::write(
        dir.path().join("m.csv"),
        "0.3,-1.2,0.5,2.0\n1.1,0.4,-0.7,0.2\n-0.9,0.8,1.5,-0.1\n0.6,-0.3,0.2,1.0\n",
    )
    .unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_opnorm"))
            .current_dir(dir.path())
            .env("OPNORM_THREADS", threads)
            .args(["norm", "m.csv", "--p", "3", "--q", "1.5", "--seed", "4"])
            .output()
            .unwrap()
    };
    let (one, two) = (run("1"), run("2"));
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn verify_runs_named_suites() {
    let dir = setup();
    let out = opnorm(dir.path(), &["verify", "hardness-factor", "1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);
    assert_eq!(
        opnorm(dir.path(), &["verify", "no-such-suite"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_reports_both_engines() {
    let dir = setup();
    let out = opnorm(dir.path(), &["bench", "--sizes", "3,5"]);
    assert!(out.status.success());
    assert_eq!(report(&out)["result"].as_array().unwrap().len(), 4);
}
