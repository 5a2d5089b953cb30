use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ohno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ohno"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Field-by-field comparison; real-valued numeric strings may differ by `tol`.
fn compare(expected: &Value, actual: &Value, path: &str, tol: f64) {
    match (expected, actual) {
        (Value::Object(a), Value::Object(b)) => {
            let keys_a: Vec<_> = a.keys().collect();
            let keys_b: Vec<_> = b.keys().collect();
            assert_eq!(keys_a, keys_b, "keys at {path}");
            for (k, v) in a {
                compare(v, &b[k], &format!("{path}.{k}"), tol);
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            assert_eq!(a.len(), b.len(), "length at {path}");
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                compare(x, y, &format!("{path}[{i}]"), tol);
            }
        }
        (Value::String(a), Value::String(b))
            if ["value", "err", "difference"]
                .iter()
                .any(|f| path.ends_with(f)) =>
        {
            let (x, y): (f64, f64) = (a.parse().unwrap(), b.parse().unwrap());
            assert!((x - y).abs() <= tol, "{path}: {a} vs {b}");
        }
        _ => assert_eq!(expected, actual, "at {path}"),
    }
}

#[test]
fn structural_commands_print_expected_values() {
    assert_eq!(stdout(&ohno(&["dual", "1,2"])), "3\n");
    assert_eq!(stdout(&ohno(&["dual", "(1, 1, 2)"])), "4\n");
    assert_eq!(stdout(&ohno(&["hdual", "3"])), "1,1,1\n");
    assert_eq!(
        stdout(&ohno(&["product", "--type", "shuffle", "2", "1"])),
        "(2,1) + (1,2)\n"
    );
    assert_eq!(
        stdout(&ohno(&["product", "--type", "harmonic", "2", "1"])),
        "(2,1) + (1,2) - (3)\n"
    );
    assert_eq!(
        stdout(&ohno(&["product", "--type", "harmonic", "", "2"])),
        "(2)\n"
    );
    assert_eq!(
        stdout(&ohno(&["bernoulli-modp", "--n", "1", "--p", "7"])),
        "3\n"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(ohno(&["dual", "2,1"]).status.code(), Some(2));
    let out = ohno(&["dual", "1,x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x"));
    assert_eq!(ohno(&["hdual", ""]).status.code(), Some(2));
    assert_eq!(
        ohno(&["bernoulli-modp", "--n", "4", "--p", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ohno(&["verify-modp", "--pmin", "3", "--pmax", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ohno(&["verify-real", "--families", "oyama"]).status.code(),
        Some(2)
    );
    assert_eq!(ohno(&["--version"]).status.code(), Some(0));
    assert_eq!(ohno(&["--help"]).status.code(), Some(0));
    assert_eq!(ohno(&[]).status.code(), Some(2));
}

#[test]
fn failing_checks_exit_one() {
    // At N = 20 without extrapolation the deep sum formulas miss 1e-6.
    let out = ohno(&[
        "verify-real",
        "--families",
        "sum_classical",
        "--max-total-weight",
        "4",
        "--N",
        "20",
        "--tol",
        "1e-6",
        "--plain",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL sum_classical/"));
}

#[test]
fn reports_do_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for jobs in ["1", "4"] {
        let path = dir.path().join(format!("r{jobs}.json"));
        let out = ohno(&[
            "verify-modp",
            "--families",
            "lemma25,harmonic_hom",
            "--max-total-weight",
            "4",
            "--pmax",
            "61",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        reports.push((stdout(&out), std::fs::read(&path).unwrap()));
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    std::fs::write(
        &config,
        "families = [\"duality_finite\"]\nmax_total_weight = 3\npmin = 11\npmax = 13\n",
    )
    .unwrap();
    let from_file = ohno(&["verify-modp", "--config", config.to_str().unwrap()]);
    let from_flags = ohno(&[
        "verify-modp",
        "--families",
        "duality_finite",
        "--max-total-weight",
        "3",
        "--pmin",
        "11",
        "--pmax",
        "13",
    ]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&from_flags));
    assert!(stdout(&from_file).contains("PASS duality_finite/k=1,2 2 primes"));

    // Flags override the file.
    let narrowed = ohno(&[
        "verify-modp",
        "--config",
        config.to_str().unwrap(),
        "--max-total-weight",
        "1",
    ]);
    assert_eq!(stdout(&narrowed).lines().count(), 2);

    std::fs::write(&config, "max_weight = 3\n").unwrap();
    assert_eq!(
        ohno(&["verify-modp", "--config", config.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn diagnose_remark_table() {
    let out = ohno(&["diagnose-remark", "--k", "3", "--pmax", "13"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "p\tzeta_A(1,2)\tZ_A(3)\tratio\n5\t1\t2\t3\n7\t3\t1\t3\n11\t4\t5\t3\n13\t5\t6\t3\nconstant ratio: 3\n"
    );
}

fn check_golden(name: &str, args: &[&str], tol: f64) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(name);
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", path.to_str().unwrap()]);
    let out = ohno(&full);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    compare(&read_json(&golden(name)), &read_json(&path), "$", tol);
}

#[test]
fn golden_modp_report() {
    check_golden(
        "modp_w5.json",
        &[
            "verify-modp",
            "--families",
            "ohno_star_finite,oyama",
            "--max-total-weight",
            "5",
            "--pmin",
            "5",
            "--pmax",
            "97",
        ],
        0.0,
    );
}

#[test]
fn golden_real_report() {
    check_golden(
        "real_w5.json",
        &[
            "verify-real",
            "--families",
            "ohno_star,sum_classical_star,duality_classical",
            "--max-total-weight",
            "5",
            "--N",
            "100000",
        ],
        1e-9,
    );
}

#[test]
fn golden_remark_report() {
    check_golden(
        "remark_k5.json",
        &["diagnose-remark", "--k", "5", "--pmax", "61"],
        0.0,
    );
}
