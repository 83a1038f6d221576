use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cmc(args: &[&str]) -> Output {
    cmc_in(Path::new("."), args, &[])
}

fn cmc_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cmc"));
    c.args(args).current_dir(dir);
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("cmc runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn curve_example_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args =
        "curve --type elliptic --profile 2 --C 0.25 --hsign +1 --interval 0:6.28 --out curve.csv";
    let o = cmc_in(dir.path(), &args.split(' ').collect::<Vec<_>>(), &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "u,x1,x1_d1,x1_d2,x2,x2_d1,x2_d2,r,r_d1,r_d2"
    );
    assert_eq!(lines.count(), 201);
    // nothing but the output is left in the directory
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn validate_example_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmc_in(
        dir.path(),
        &[
            "validate",
            "--type",
            "parabolic",
            "--profile",
            "u",
            "--C",
            "0.5",
            "--A",
            "0",
            "--interval",
            "0.5:2",
            "--report",
            "report.json",
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&dir.path().join("report.json"));
    assert!(r["max_cmc_residual"].as_f64().unwrap() <= 1e-6);
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["kind"], "parabolic");
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("PASS"));
}

#[test]
fn case_mismatch_exits_two() {
    let o = cmc(&[
        "curve",
        "--type",
        "hyperbolicA",
        "--profile",
        "u/2",
        "--C",
        "0.5",
        "--interval",
        "0.5:2",
    ]);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).starts_with("ERROR[case-mismatch]"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &[
            "curve",
            "--type",
            "elliptic",
            "--profile",
            "2",
            "--interval",
            "0:1",
        ],
        &[
            "curve",
            "--type",
            "elliptic",
            "--profile",
            "2",
            "--C",
            "0.25",
            "--interval",
            "1:0",
        ],
        &[
            "curve",
            "--type",
            "conic",
            "--profile",
            "2",
            "--C",
            "0.25",
            "--interval",
            "0:1",
        ],
        &[
            "curve",
            "--type",
            "elliptic",
            "--profile",
            "2",
            "--C",
            "x",
            "--interval",
            "0:1",
        ],
        &[
            "curve",
            "--type",
            "elliptic",
            "--profile",
            "2",
            "--C",
            "0.25",
            "--A",
            "1",
            "--interval",
            "0:1",
        ],
        &[
            "curve",
            "--type",
            "elliptic",
            "--C",
            "0.25",
            "--interval",
            "0:1",
        ],
        &[
            "surface",
            "--type",
            "elliptic",
            "--profile",
            "2",
            "--C",
            "0.25",
            "--interval",
            "0:1",
            "--project",
            "x1,x1,x2",
        ],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        let o = cmc(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(
            stderr(&o).starts_with("ERROR[usage]"),
            "{args:?}: {}",
            stderr(&o)
        );
    }
}

#[test]
fn domain_errors_exit_two_with_their_code() {
    let o = cmc(&[
        "curve",
        "--type",
        "elliptic",
        "--profile",
        "2*",
        "--C",
        "0.25",
        "--interval",
        "0:1",
    ]);
    assert!(
        code(&o) == 2 && stderr(&o).starts_with("ERROR[syntax]"),
        "{}",
        stderr(&o)
    );
    let o = cmc(&[
        "curve",
        "--type",
        "elliptic",
        "--profile",
        "k",
        "--C",
        "0.25",
        "--interval",
        "0:1",
    ]);
    assert!(
        code(&o) == 2 && stderr(&o).starts_with("ERROR[unknown-identifier]"),
        "{}",
        stderr(&o)
    );
    let o = cmc(&[
        "curve",
        "--type",
        "parabolic",
        "--profile",
        "u^2+1",
        "--C",
        "1",
        "--interval",
        "-1:1",
    ]);
    assert!(
        code(&o) == 2 && stderr(&o).starts_with("ERROR[zero-derivative-profile]"),
        "{}",
        stderr(&o)
    );
    // partially valid interval: the error names the valid part
    let o = cmc(&[
        "curve",
        "--type",
        "elliptic",
        "--profile",
        "sqrt(-u^2+2*u+3)",
        "--C",
        "1",
        "--interval",
        "-2:4",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("valid subintervals"), "{}", stderr(&o));
    let o = cmc(&[
        "validate",
        "--type",
        "elliptic",
        "--curve-csv",
        "/nonexistent/c.csv",
        "--C",
        "1",
        "--interval",
        "0:1",
    ]);
    assert!(
        code(&o) == 2 && stderr(&o).starts_with("ERROR[io]"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn negative_values_and_constants_parse() {
    let o = cmc(&[
        "curve",
        "--type",
        "hyperbolicB",
        "--profile",
        "-k*u+c",
        "--const",
        "k=-0.5",
        "--const",
        "c=1.5",
        "--C",
        "0.5",
        "--hsign",
        "-1",
        "--eta",
        "-1",
        "--interval",
        "-1:1",
        "--phi0",
        "-0.25",
        "--c1",
        "-3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let first: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(first[0], -1.0);
    assert_eq!(first[1], 1.0); // r(−1) = 0.5·(−1) + 1.5
    assert_eq!(first[4], -3.0); // x2(u0) = c1
}

#[test]
fn perturbed_curve_fails_validation() {
    let o = cmc(&[
        "validate",
        "--type",
        "elliptic",
        "--profile",
        "2",
        "--C",
        "0.25",
        "--interval",
        "0:6",
        "--perturb-phi",
        "1.01",
    ]);
    assert_eq!(code(&o), 1);
    assert!(
        stderr(&o).starts_with("ERROR[validation-failed]: cmc"),
        "{}",
        stderr(&o)
    );
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("FAIL"));
}

#[test]
fn csv_round_trip_reproduces_validation() {
    let dir = tempfile::tempdir().unwrap();
    let gen = [
        "--type",
        "hyperbolicA",
        "--profile",
        "2*u",
        "--C",
        "0.5",
        "--eta",
        "-1",
        "--interval",
        "0.5:2",
    ];
    let run = |extra: &[&str]| {
        let args: Vec<&str> = extra.iter().chain(gen.iter()).copied().collect();
        let o = cmc_in(dir.path(), &args, &[]);
        assert_eq!(code(&o), 0, "{extra:?}: {}", stderr(&o));
    };
    run(&["curve", "--nu", "101", "--out", "c.csv"]);
    run(&[
        "validate",
        "--nu",
        "101",
        "--fd-step",
        "0",
        "--report",
        "direct.json",
    ]);
    run(&["validate", "--curve-csv", "c.csv", "--report", "csv.json"]);
    let (a, b) = (
        report(&dir.path().join("direct.json")),
        report(&dir.path().join("csv.json")),
    );
    for key in [
        "max_cmc_residual",
        "max_arclength_residual",
        "max_frame_residual",
        "max_closed_frame_residual",
        "max_sigma_xy",
        "max_closed_vs_oracle",
    ] {
        let (x, y) = (a[key].as_f64().unwrap(), b[key].as_f64().unwrap());
        assert!((x - y).abs() <= 1e-6, "{key}: {x} vs {y}");
    }
    assert_eq!(a["grid"], b["grid"]);

    // a CSV for another type is rejected
    let o = cmc_in(
        dir.path(),
        &[
            "validate",
            "--type",
            "elliptic",
            "--curve-csv",
            "c.csv",
            "--C",
            "0.5",
            "--interval",
            "0:1",
        ],
        &[],
    );
    assert!(
        code(&o) == 2 && stderr(&o).starts_with("ERROR[format]"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn surface_exports() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmc_in(
        dir.path(),
        &[
            "surface",
            "--type",
            "parabolic",
            "--profile",
            "u",
            "--C",
            "0.5",
            "--interval",
            "0.5:2",
            "--nu",
            "7",
            "--nv",
            "5",
            "--v-window",
            "-1:1",
            "--out",
            "s.csv",
            "--obj",
            "s.obj",
            "--project",
            "x2,x3,x4",
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let obj = std::fs::read_to_string(dir.path().join("s.obj")).unwrap();
    assert!(obj.lines().any(|l| l == "# projection: x2,x3,x4"));
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 35);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 24);
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "u,v,x1,x2,x3,x4");
    assert_eq!(csv.lines().count(), 36);
    // the OBJ vertices are the projected CSV rows
    for (row, v) in csv
        .lines()
        .skip(1)
        .zip(obj.lines().filter(|l| l.starts_with("v ")))
    {
        let x: Vec<&str> = row.split(',').collect();
        assert_eq!(v, format!("v {} {} {}", x[3], x[4], x[5]));
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec![
            "validate",
            "--type",
            "elliptic",
            "--profile",
            "1+0.5*u",
            "--C",
            "0.5",
            "--interval",
            "0:3",
            "--report",
            out,
        ]
    };
    assert_eq!(
        code(&cmc_in(
            dir.path(),
            &args("one.json"),
            &[("CMC_THREADS", "1")]
        )),
        0
    );
    assert_eq!(
        code(&cmc_in(
            dir.path(),
            &args("many.json"),
            &[("CMC_THREADS", "8")]
        )),
        0
    );
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("one.json"), read("many.json"));
}

#[test]
fn special_reports_a_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = cmc_in(
        dir.path(),
        &[
            "special",
            "--type",
            "parabolic",
            "--a",
            "1",
            "--b",
            "0",
            "--B",
            "2",
            "--C",
            "0.5",
            "--interval",
            "0.5:2",
            "--report",
            "s.json",
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("verdict=probable-misprint"));
    let r = report(&dir.path().join("s.json"));
    assert_eq!(r["verdict"], "probable-misprint");
    assert_eq!(r["constants"]["B"], 2.0);
}

#[test]
fn oracle_checks_explicit_curves() {
    let circle = [
        "oracle",
        "--type",
        "elliptic",
        "--x1",
        "cos(u)",
        "--x2",
        "sin(u)",
        "--r",
        "2",
        "--interval",
        "0:6",
    ];
    let o = cmc(&circle);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    // unit circle profile at r ≡ 2: ⟨H,H⟩ = (1 − 1/r²)/4 = 3/16
    let with = |t: &'static str| {
        circle
            .iter()
            .copied()
            .chain(["--target", t])
            .collect::<Vec<_>>()
    };
    assert_eq!(code(&cmc(&with("0.1875"))), 0);
    assert_eq!(code(&cmc(&with("0.19"))), 1);
    let o = cmc(&[
        "oracle",
        "--type",
        "elliptic",
        "--x1",
        "u",
        "--r",
        "2",
        "--interval",
        "0:6",
    ]);
    assert!(
        code(&o) == 2 && stderr(&o).contains("--x2"),
        "{}",
        stderr(&o)
    );
}
