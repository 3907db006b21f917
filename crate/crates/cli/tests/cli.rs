use std::path::Path;
use std::process::Command;

use maboost::data;
use maboost_cli::model::Model;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with(args: &[&str], stdin: &str) -> Output {
    let argv: Vec<String> = std::iter::once("maboost")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = maboost_cli::run(&argv, stdin.as_bytes(), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn run(args: &[&str]) -> Output {
    run_with(args, "")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn train_separable_blobs() {
    let out = run(&[
        "train",
        "--algo",
        "maboost-active",
        "--geometry",
        "entropy",
        "--gen",
        "blobs:0:100:0.5",
        "--rounds",
        "50",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(
        out.stdout.starts_with("rounds=1 train_error=0 bound="),
        "{}",
        out.stdout
    );
}

#[test]
fn configuration_errors_exit_one() {
    let cases: [&[&str]; 6] = [
        &[
            "train",
            "--algo",
            "smooth",
            "--k",
            "0.5",
            "--gen",
            "blobs:0:100:0.5",
        ],
        &[
            "train",
            "--algo",
            "mada",
            "--geometry",
            "quadratic",
            "--gen",
            "blobs:0:100:0.5",
        ],
        &[
            "train",
            "--algo",
            "sparse",
            "--geometry",
            "entropy",
            "--gen",
            "blobs:0:100:0.5",
        ],
        &["train", "--algo", "smooth", "--gen", "blobs:0:100:0.5"],
        &["train", "--algo", "maboost-active", "--gen", "blobs:0:100"],
        &["train", "--algo", "maboost-active"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.code, 1, "{args:?}: {}", out.stderr);
        assert!(!out.stderr.is_empty());
    }
    assert!(run(&[
        "train",
        "--algo",
        "sparse",
        "--geometry",
        "entropy",
        "--gen",
        "blobs:0:10:0.5"
    ])
    .stderr
    .contains("quadratic"));
}

#[test]
fn no_weak_learnability_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("flat.csv");
    std::fs::write(&csv, "label,f1\n1,0\n-1,0\n").unwrap();
    let out = run(&[
        "train",
        "--algo",
        "maboost-active",
        "--data",
        path_str(&csv),
    ]);
    assert_eq!(out.code, 2, "{}", out.stderr);
}

#[test]
fn parse_errors_exit_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "label,f1\n1,0.5\n3,0.2\n").unwrap();
    let out = run(&[
        "train",
        "--algo",
        "maboost-active",
        "--data",
        path_str(&csv),
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
}

fn train_to(dir: &Path, name: &str, extra: &[&str]) -> (std::path::PathBuf, std::path::PathBuf) {
    let trace = dir.join(format!("{name}.jsonl"));
    let model = dir.join(format!("{name}.model"));
    let mut args = vec![
        "train",
        "--trace",
        path_str(&trace),
        "--model",
        path_str(&model),
    ];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert_eq!(out.code, 0, "{name}: {}", out.stderr);
    (trace, model)
}

#[test]
fn every_trained_trace_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, &[&str]); 9] = [
        (
            "active",
            &[
                "--algo",
                "maboost-active",
                "--geometry",
                "quadratic",
                "--gen",
                "noisy:1:80:0.1",
            ],
        ),
        (
            "lazy",
            &["--algo", "maboost-lazy", "--gen", "diagonal:1:80:0.1"],
        ),
        (
            "maxmargin",
            &[
                "--algo",
                "maxmargin",
                "--gen",
                "blobs:1:60:0.4",
                "--rounds",
                "200",
            ],
        ),
        (
            "smooth",
            &[
                "--algo",
                "smooth",
                "--k",
                "8",
                "--gen",
                "noisy:1:80:0.1",
                "--rounds",
                "300",
            ],
        ),
        (
            "combined",
            &[
                "--algo",
                "combined",
                "--k",
                "4",
                "--target-eps",
                "0.02",
                "--gen",
                "combined:0:60:20:0.3",
            ],
        ),
        ("sparse0", &["--algo", "sparse", "--gen", "noisy:2:80:0.1"]),
        (
            "sparse-half",
            &[
                "--algo",
                "sparse",
                "--alpha-mode",
                "half",
                "--gen",
                "noisy:2:80:0.1",
            ],
        ),
        ("mada", &["--algo", "mada", "--gen", "noisy:3:80:0.1"]),
        (
            "mada-fixed",
            &[
                "--algo",
                "mada",
                "--mada-eta",
                "fixed-point",
                "--gen",
                "diagonal:3:80:0.1",
            ],
        ),
    ];
    for (name, args) in runs {
        let (trace, _) = train_to(dir.path(), name, args);
        let out = run(&["verify", path_str(&trace)]);
        assert_eq!(out.code, 0, "{name}: {}", out.stdout);
        assert!(
            out.stdout.lines().all(|l| l.starts_with("PASS")),
            "{name}: {}",
            out.stdout
        );
    }
}

#[test]
fn trace_layout() {
    let dir = tempfile::tempdir().unwrap();
    let (trace, _) = train_to(
        dir.path(),
        "t",
        &[
            "--algo",
            "sparse",
            "--gen",
            "noisy:2:40:0.1",
            "--rounds",
            "5",
        ],
    );
    let text = std::fs::read_to_string(trace).unwrap();
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["schema"], 1);
    assert_eq!(lines[0]["algorithm"], "sparse");
    assert_eq!(lines[0]["alpha_mode"], "zero");
    assert_eq!(lines.len(), 6);
    for (i, rec) in lines[1..].iter().enumerate() {
        assert_eq!(rec["t"], i + 1);
        assert!(rec["y_norm"].is_number() && rec["nnz"].is_number());
    }
}

#[test]
fn corrupted_trace_fails_at_first_violation() {
    let dir = tempfile::tempdir().unwrap();
    let (trace, _) = train_to(
        dir.path(),
        "c",
        &[
            "--algo",
            "maboost-active",
            "--gen",
            "noisy:1:80:0.2",
            "--rounds",
            "20",
        ],
    );
    let text = std::fs::read_to_string(&trace).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    for k in [4, 7] {
        let mut rec: serde_json::Value = serde_json::from_str(&lines[k]).unwrap();
        rec["train_error"] = serde_json::json!(0.99);
        lines[k] = rec.to_string();
    }
    std::fs::write(&trace, lines.join("\n") + "\n").unwrap();
    let out = run(&["verify", path_str(&trace)]);
    assert_eq!(out.code, 1);
    assert!(
        out.stdout
            .contains("FAIL mirror-ascent-entropy: first violation at round 4"),
        "{}",
        out.stdout
    );
}

#[test]
fn empty_and_malformed_traces() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    let out = run(&["verify", path_str(&empty)]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("PASS") && out.stderr.contains("warning"));

    let header_only = dir.path().join("header.jsonl");
    std::fs::write(
        &header_only,
        "{\"schema\":1,\"algorithm\":\"mada\",\"geometry\":\"entropy\",\"n\":4}\n",
    )
    .unwrap();
    let out = run(&["verify", path_str(&header_only)]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("warning"));

    let junk = dir.path().join("junk.jsonl");
    std::fs::write(
        &junk,
        "{\"schema\":1,\"algorithm\":\"mada\",\"geometry\":\"entropy\",\"n\":4}\nnot json\n",
    )
    .unwrap();
    assert_eq!(run(&["verify", path_str(&junk)]).code, 1);
    assert_eq!(run(&["verify", "/nonexistent/trace.jsonl"]).code, 1);
}

fn floats(s: &str) -> Vec<f64> {
    serde_json::from_str(s.trim()).unwrap()
}

#[test]
fn project_examples() {
    let out = run_with(
        &["project", "--geometry", "entropy", "--set", "simplex"],
        "[2,2]",
    );
    assert_eq!(floats(&out.stdout), vec![0.5, 0.5]);
    let out = run_with(
        &["project", "--geometry", "entropy", "--set", "hypercube"],
        "[0.5, 3]",
    );
    assert_eq!(floats(&out.stdout), vec![0.5, 1.0]);
    let out = run_with(
        &["project", "--geometry", "quadratic", "--set", "simplex"],
        "[0.8,0.4]",
    );
    let v = floats(&out.stdout);
    assert!((v[0] - 0.7).abs() < 1e-12 && (v[1] - 0.3).abs() < 1e-12);
    let out = run_with(
        &[
            "project",
            "--geometry",
            "quadratic",
            "--set",
            "orthant-l1:0.5",
        ],
        "[1.0,0.2,-1]",
    );
    assert_eq!(floats(&out.stdout), vec![0.5, 0.0, 0.0]);
    let out = run_with(
        &["project", "--geometry", "entropy", "--set", "capped:0.4"],
        "[1,1,8]",
    );
    let v = floats(&out.stdout);
    assert!((v[2] - 0.4).abs() < 1e-15 && (v[0] - 0.3).abs() < 1e-12);
}

#[test]
fn project_errors() {
    assert_eq!(
        run_with(
            &["project", "--geometry", "entropy", "--set", "simplex"],
            "[1,-1]"
        )
        .code,
        1
    );
    assert_eq!(
        run_with(
            &["project", "--geometry", "entropy", "--set", "simplex"],
            "[0,0]"
        )
        .code,
        1
    );
    assert_eq!(
        run_with(
            &["project", "--geometry", "entropy", "--set", "capped:0.1"],
            "[1,1]"
        )
        .code,
        1
    );
    assert_eq!(
        run_with(
            &["project", "--geometry", "entropy", "--set", "orthant-l1:1"],
            "[1,1]"
        )
        .code,
        1
    );
    assert_eq!(
        run_with(
            &["project", "--geometry", "quadratic", "--set", "ball"],
            "[1]"
        )
        .code,
        1
    );
    assert_eq!(
        run_with(
            &["project", "--geometry", "quadratic", "--set", "simplex"],
            "[1,"
        )
        .code,
        1
    );
}

#[test]
fn model_round_trip_reproduces_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("train.csv");
    let ds = data::gen_diagonal(4, 120, 0.05).unwrap();
    ds.save_csv(&csv).unwrap();
    let (_, model_path) = train_to(
        dir.path(),
        "m",
        &[
            "--algo",
            "smooth",
            "--k",
            "10",
            "--data",
            path_str(&csv),
            "--rounds",
            "60",
        ],
    );
    let cfg = maboost::BoosterConfig::new(
        maboost::Algorithm::Smooth { k: 10.0 },
        maboost::GeometryKind::NegativeEntropy,
    )
    .rounds(60);
    let trained = maboost::boost::run(&cfg, &ds).unwrap();
    let model = Model::load(&model_path).unwrap();
    assert_eq!(model.ensemble, trained.ensemble);
    let out = run(&[
        "predict",
        "--model",
        path_str(&model_path),
        "--data",
        path_str(&csv),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let predicted: Vec<f64> = out.stdout.lines().map(|l| l.parse().unwrap()).collect();
    let expected: Vec<f64> = (0..ds.n())
        .map(|i| trained.ensemble.predict(ds.row(i)).unwrap())
        .collect();
    assert_eq!(predicted, expected);
}

#[test]
fn libsvm_input() {
    let dir = tempfile::tempdir().unwrap();
    let svm = dir.path().join("tiny.svm");
    std::fs::write(&svm, "+1 1:2\n+1 1:3\n-1 1:-1 2:1\n-1 2:4\n").unwrap();
    let out = run(&["train", "--algo", "maboost-lazy", "--data", path_str(&svm)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("train_error=0"));
}

#[test]
fn bench_filter_and_repeatability() {
    let first = run(&["bench", "--criterion", "c10"]);
    assert_eq!(first.code, 0, "{}", first.stdout);
    assert_eq!(first.stdout.lines().count(), 2);
    assert!(first.stdout.contains("C10 adaboost-degeneration") && first.stdout.contains("PASS"));
    let by_name = run(&["bench", "--criterion", "adaboost-degeneration"]);
    assert_eq!(first.stdout, by_name.stdout);
    assert_eq!(run(&["bench", "--criterion", "c99"]).code, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_maboost");
    let ok = Command::new(bin)
        .args([
            "train",
            "--algo",
            "maboost-active",
            "--gen",
            "blobs:0:20:0.5",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let usage = Command::new(bin)
        .args(["train", "--algo", "nope"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
