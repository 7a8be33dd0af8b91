use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == name)
        .expect("column exists");
    lines
        .map(|l| l.split(',').nth(idx).unwrap().to_string())
        .collect()
}

#[test]
fn truncate_reports_every_solution() {
    let out = qes(&["truncate", "--n", "1", "--gamma", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(column(&text, "delta"), ["1.63299316186", "-1.63299316186"]);
    assert_eq!(column(&text, "W"), ["3.33333333333", "3.33333333333"]);

    let out = qes(&["truncate", "--n", "0", "--gamma", "2"]);
    assert_eq!(
        stdout(&out),
        "n,i,delta,W,nodes,coefficients\n0,1,0,6,0,1\n"
    );

    let out = qes(&["truncate", "--n", "2", "--gamma", "0", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let nodes: Vec<i64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["nodes"].as_i64().unwrap())
        .collect();
    assert_eq!(nodes, [0, 1, 2]);
    assert_eq!(v[0]["coefficients"].as_array().unwrap().len(), 3);
}

#[test]
fn spectrum_examples() {
    let out = qes(&["spectrum", "--gamma", "0", "--delta", "0", "--levels", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(column(&stdout(&out), "W"), ["2", "6", "10"]);

    let out = qes(&["spectrum", "--gamma", "0", "--delta", "1", "--levels", "5"]);
    let w: Vec<f64> = column(&stdout(&out), "W")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert!((w[0] - 2.840687067).abs() < 1e-9);
    assert_eq!(w.len(), 5);

    let out = qes(&[
        "spectrum",
        "--gamma",
        "0",
        "--delta",
        "-1.6329931619",
        "--levels",
        "5",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v[1]["W"].as_f64().unwrap() - 10.0 / 3.0).abs() < 1e-8);
    assert_eq!(v[1]["converged"], Value::Bool(true));
}

#[test]
fn non_convergence_exits_one_with_partial_output() {
    let out = qes(&[
        "spectrum", "--gamma", "0", "--delta", "0", "--levels", "5", "--tol", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let flags = column(&stdout(&out), "converged");
    assert_eq!(flags.len(), 5);
    assert!(flags.iter().any(|f| f == "false"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not all levels converged"));
}

#[test]
fn hft_examples() {
    let out = qes(&["hft", "--gamma", "0", "--delta", "1", "--level", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let diff: f64 = column(&stdout(&out), "abs_diff")[0].parse().unwrap();
    assert!(diff < 1e-4);

    let out = qes(&[
        "hft", "--gamma", "1", "--delta", "0", "--level", "1", "--format", "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v[0]["lhs"].as_f64().unwrap() > 0.0 && v[0]["rhs"].as_f64().unwrap() > 0.0);

    let out = qes(&[
        "hft", "--gamma", "0", "--delta", "0", "--level", "3", "--h", "6",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("changes character"));
}

#[test]
fn physical_examples() {
    let base = [
        "physical", "--m", "1", "--q", "1", "--b", "1", "--rho", "0.5", "--l", "0", "--s", "1",
    ];
    let out = qes(&[&base[..], &["--g", "0", "--k", "0"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(column(&text, "energy"), ["0.5", "1.5", "2.5", "3.5", "4.5"]);
    assert_eq!(column(&text, "omega")[0], "1");

    let shifted = stdout(&qes(&[&base[..], &["--g", "0", "--k", "2"]].concat()));
    assert_eq!(
        column(&shifted, "energy"),
        ["2.5", "3.5", "4.5", "5.5", "6.5"]
    );

    let plus = stdout(&qes(&[&base[..], &["--g", "0.7"]].concat()));
    let minus = stdout(&qes(&[&base[..], &["--g", "-0.7"]].concat()));
    let dp: f64 = column(&plus, "delta")[0].parse().unwrap();
    let dm: f64 = column(&minus, "delta")[0].parse().unwrap();
    assert!(dp > 0.0 && dp == -dm);
    assert!(
        column(&plus, "W")[0].parse::<f64>().unwrap()
            > column(&minus, "W")[0].parse::<f64>().unwrap()
    );

    let out = qes(&[&base[..], &["--g", "0", "--s", "0"]].concat());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["truncate", "--gamma", "0"][..],
        &["truncate", "--n", "-1", "--gamma", "0"],
        &["truncate", "--n", "1", "--gamma", "-0.5"],
        &["spectrum", "--gamma", "0"],
        &[
            "spectrum", "--gamma", "0", "--delta", "1", "--format", "xml",
        ],
        &["figure", "--gamma", "0", "--range", "2:1"],
        &["figure", "--gamma", "0", "--grid", "1"],
        &["hft", "--gamma", "0", "--delta", "0", "--h", "0"],
        &["spectrum", "--gamma", "0", "--delta", "0", "--jobs", "0"],
        &["frobnicate"],
    ] {
        let out = qes(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["truncate", "--n", "4", "--gamma", "1", "--format", "json"][..],
        &[
            "spectrum", "--gamma", "0.5", "--delta", "-2", "--levels", "5",
        ],
        &[
            "spectrum", "--gamma", "0.5", "--delta", "-2", "--levels", "5", "--format", "json",
        ],
    ] {
        assert_eq!(qes(args).stdout, qes(args).stdout, "{args:?}");
    }
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn figure_writes_files_deterministically() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(a.path(), "1"), (b.path(), "4")] {
        let out = qes(&[
            "figure",
            "--gamma",
            "0",
            "--range",
            "-3:3",
            "--grid",
            "13",
            "--svg",
            "--jobs",
            jobs,
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for name in ["curves.csv", "points.csv", "figure.svg"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }

    let curves = read(a.path(), "curves.csv");
    assert!(curves.starts_with("delta,W_0,W_1,W_2,W_3,W_4\n-3,"));
    assert_eq!(curves.lines().count(), 14);
    assert!(!curves.contains('\r'));

    let points = read(a.path(), "points.csv");
    assert!(points.starts_with("n,i,delta_root,W,matched_level,residual\n"));
    for r in column(&points, "residual") {
        assert!(r.parse::<f64>().unwrap() < 1e-6);
    }
    for (i, level) in column(&points, "i")
        .iter()
        .zip(column(&points, "matched_level"))
    {
        assert_eq!(
            i.parse::<usize>().unwrap() - 1,
            level.parse::<usize>().unwrap()
        );
    }

    let svg = read(a.path(), "figure.svg");
    assert!(svg.contains(r#"stroke="red""#) && svg.contains(r#"fill="blue""#));
    assert!(svg.contains(">δ<") && svg.contains(">W<"));
}

#[test]
fn io_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = qes(&[
        "figure",
        "--gamma",
        "0",
        "--grid",
        "3",
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# spectrum at the oscillator point\ngamma = 0\ndelta = 0\nlevels = 2\nformat = json\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();

    let v: Value = serde_json::from_slice(&qes(&["spectrum", "--config", cfg]).stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["W"], Value::from(6.0));

    let out = qes(&[
        "spectrum", "--config", cfg, "--levels", "3", "--format", "csv",
    ]);
    assert_eq!(column(&stdout(&out), "W"), ["2", "6", "10"]);

    std::fs::write(dir.path().join("bad.conf"), "gama = 1\n").unwrap();
    let out = qes(&[
        "spectrum",
        "--config",
        dir.path().join("bad.conf").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = qes(&[
        "truncate",
        "--n",
        "1",
        "--gamma",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(read(dir.path(), "t.csv").starts_with("n,i,delta,W"));
}
