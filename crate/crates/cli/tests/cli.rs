use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sagnac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sagnac"))
        .args(args)
        .env_remove("SAGNAC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(&sagnac(args))).unwrap()
}

fn diagnostic(out: &Output) -> Value {
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "one-line diagnostic: {err}");
    serde_json::from_str(err.trim()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn witness_ideal_and_noisy() {
    let ideal = json(&["dicke-witness"]);
    assert_eq!(ideal["value"], -0.666667);
    assert_eq!(ideal["entangled"], true);
    assert_eq!(ideal["terms"].as_array().unwrap().len(), 18);

    let noisy = json(&["dicke-witness", "--noise", "0.1708"]);
    let v = noisy["value"].as_f64().unwrap();
    assert!((v - (1.0 - 5.0 / 3.0 * 0.8292)).abs() < 1e-6, "{v}");

    let measured = json(&["dicke-witness", "--measured"]);
    assert!((measured["value"].as_f64().unwrap() + 0.38167).abs() < 1e-5);

    let at_threshold = json(&["dicke-witness", "--noise", "0.4"]);
    assert!(at_threshold["value"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn sampled_witness_is_near_model() {
    let v = json(&["dicke-witness", "--sample", "--seed", "3"]);
    let value = v["value"].as_f64().unwrap();
    let sigma = v["sigma"].as_f64().unwrap();
    assert!((value + 2.0 / 3.0).abs() < 4.0 * sigma, "{value} ± {sigma}");
}

#[test]
fn wmult_reports_both_forms() {
    let m = json(&["wmult", "--measured"]);
    let c = m["collective"]["value"].as_f64().unwrap();
    let e = m["expanded"]["value"].as_f64().unwrap();
    assert!((c + 0.341).abs() < 1e-6);
    assert!((e + 2.716).abs() < 1e-6);
    assert!((c - e - 19.0 / 8.0).abs() < 1e-6);
    assert!(m["note"].as_str().unwrap().contains("19/8"));

    let ideal = json(&["wmult"]);
    assert_eq!(ideal["collective"]["value"], -1.0);
    assert_eq!(ideal["expanded"]["value"], -3.375);
}

#[test]
fn dicke_table_rows() {
    let (header, rows) = csv_rows(&stdout(&sagnac(&["dicke-table"])));
    assert_eq!(header, ["operator", "qubits", "settings", "value", "sigma"]);
    assert_eq!(rows.len(), 18);
    let zz: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == "ZZ")
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert_eq!(zz, vec![-0.333333; 6]);
    let measured = csv_rows(&stdout(&sagnac(&["dicke-table", "--measured"]))).1;
    assert_eq!(measured.len(), 18);
}

#[test]
fn truth_table_example() {
    let text = stdout(&sagnac(&[
        "cphase-truth",
        "--phi-r",
        "3.141592653589793",
        "--phi-l",
        "0",
    ]));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header[0], "control");
    assert_eq!(rows.len(), 2);
    let num = |s: &str| s.parse::<f64>().unwrap();
    let r = &rows[0];
    assert_eq!(r[0], "r");
    assert!((num(&r[3]) - FRAC_1_SQRT_2).abs() < 1e-6 && (num(&r[5]) + FRAC_1_SQRT_2).abs() < 1e-6);
    let l = &rows[1];
    assert!((num(&l[3]) - FRAC_1_SQRT_2).abs() < 1e-6 && (num(&l[5]) - FRAC_1_SQRT_2).abs() < 1e-6);
    assert!((num(&r[2]) - 0.5).abs() < 1e-12);

    let negative = stdout(&sagnac(&[
        "cphase-truth",
        "--phi-r",
        "-1.5",
        "--phi-l",
        "-0.5",
    ]));
    assert_eq!(csv_rows(&negative).1.len(), 2);
}

#[test]
fn fringe_csv_shape_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = sagnac(&[
            "cphase-fringe",
            "--project",
            "0",
            "--steps",
            "32",
            "--seed",
            "7",
            "--out",
            path_str(p),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["phi", "probability", "counts", "sigma"]);
    assert_eq!(rows.len(), 32);
    for r in &rows {
        let phi: f64 = r[0].parse().unwrap();
        let p: f64 = r[1].parse().unwrap();
        let n: f64 = r[2].parse().unwrap();
        let s: f64 = r[3].parse().unwrap();
        assert!((p - (1.0 + phi.cos()) / 2.0).abs() < 1e-5);
        assert!((s - n.sqrt()).abs() < 1e-3 * (1.0 + s));
        assert!((n - 1e4 * p).abs() <= 5.0 * (1e4 * p * (1.0 - p)).sqrt() + 1.0);
    }

    let other = stdout(&sagnac(&["cphase-fringe", "--seed", "8"]));
    assert_ne!(other, text);
}

#[test]
fn seed_environment_variable() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_sagnac"));
        c.args(args).env_remove("SAGNAC_SEED");
        if let Some(s) = env {
            c.env("SAGNAC_SEED", s);
        }
        stdout(&c.output().unwrap())
    };
    let from_env = run(Some("7"), &["cphase-fringe"]);
    let from_flag = run(None, &["cphase-fringe", "--seed", "7"]);
    let default = run(None, &["cphase-fringe"]);
    let explicit_default = run(None, &["cphase-fringe", "--seed", "42"]);
    assert_eq!(from_env, from_flag);
    assert_eq!(default, explicit_default);
    assert_ne!(from_env, default);
    assert_eq!(run(Some("7"), &["cphase-fringe", "--seed", "42"]), default);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["bogus"],
        vec!["dicke-witness", "--noise", "1.5"],
        vec!["dicke-witness", "--shots", "0"],
        vec!["cphase-fringe", "--project", "2"],
        vec!["cphase-fringe", "--steps", "0"],
        vec!["dicke-witness", "--format", "csv"],
        vec!["state", "--name", "nope"],
        vec!["dicke-witness", "--sample", "--measured"],
    ] {
        let out = sagnac(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(diagnostic(&out)["error"], "usage", "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    let out = sagnac(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("cphase-fringe"));
}

#[test]
fn numerical_and_io_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let counts = dir.path().join("c.json");
    let out = sagnac(&[
        "tomo-counts",
        "--project",
        "0",
        "--format",
        "json",
        "--out",
        path_str(&counts),
    ]);
    assert!(out.status.success());
    let mut data: Value = serde_json::from_str(&std::fs::read_to_string(&counts).unwrap()).unwrap();
    data["records"].as_array_mut().unwrap().truncate(1);
    let partial = dir.path().join("partial.json");
    std::fs::write(&partial, data.to_string()).unwrap();

    let out = sagnac(&["tomo", "--input", path_str(&partial)]);
    assert_eq!(out.status.code(), Some(1));
    let d = diagnostic(&out);
    assert_eq!(d["error"], "numerical");
    assert_eq!(d["kind"], "IncompleteSettings");

    let out = sagnac(&[
        "tomo",
        "--input",
        path_str(&dir.path().join("missing.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(diagnostic(&out)["error"], "io");
}

#[test]
fn tomography_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single.json");
    assert!(sagnac(&[
        "tomo-counts",
        "--project",
        "0",
        "--format",
        "json",
        "--out",
        path_str(&single)
    ])
    .status
    .success());
    let rho = json(&["tomo", "--input", path_str(&single), "--target", "minus"]);
    assert!(rho["fidelity"].as_f64().unwrap() > 0.99);
    assert!(rho["min_eigenvalue"].as_f64().unwrap() >= -1e-12);
    assert_eq!(rho["dim"], 2);

    let pair = dir.path().join("pair.json");
    let args = [
        "tomo-counts",
        "--noise",
        "0.1",
        "--format",
        "json",
        "--out",
        path_str(&pair),
    ];
    assert!(sagnac(&args).status.success());
    let ml = json(&["tomo", "--input", path_str(&pair)]);
    let lin = json(&["tomo", "--input", path_str(&pair), "--method", "linear"]);
    assert_eq!(ml["dim"], 4);
    assert!(
        ml["log_likelihood"].as_f64().unwrap() >= lin["log_likelihood"].as_f64().unwrap() - 1.0
    );
    let trace: f64 = (0..4)
        .map(|i| ml["rho"][2 * (4 * i + i)].as_f64().unwrap())
        .sum();
    assert!((trace - 1.0).abs() < 1e-5);
}

#[test]
fn run_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("w.json");
    let cfg = dir.path().join("cfg.json");
    let body = serde_json::json!({
        "experiment": "dicke-witness",
        "noise_p": 0.1708,
        "shots": 10000,
        "seed": 1,
        "output": {"path": out_path, "format": "json"},
    });
    std::fs::write(&cfg, body.to_string()).unwrap();
    let out = sagnac(&["run", "--config", path_str(&cfg)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!((report["value"].as_f64().unwrap() + 0.382).abs() < 1e-3);

    let fringe_cfg = dir.path().join("fringe.json");
    std::fs::write(&fringe_cfg, r#"{"experiment":"cphase-fringe","seed":7}"#).unwrap();
    let via_run = stdout(&sagnac(&["run", "--config", path_str(&fringe_cfg)]));
    assert_eq!(via_run, stdout(&sagnac(&["cphase-fringe", "--seed", "7"])));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"experiment":"dicke-witness","noise":0.1}"#).unwrap();
    let out = sagnac(&["run", "--config", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_and_json_agree() {
    let csv_text = stdout(&sagnac(&["cphase-fringe", "--steps", "8"]));
    let j = json(&["cphase-fringe", "--steps", "8", "--format", "json"]);
    let points = j["points"].as_array().unwrap();
    let (_, rows) = csv_rows(&csv_text);
    assert_eq!(points.len(), rows.len());
    for (p, r) in points.iter().zip(&rows) {
        assert_eq!(p["counts"].as_u64().unwrap(), r[2].parse::<u64>().unwrap());
        assert_eq!(
            p["probability"].as_f64().unwrap(),
            r[1].parse::<f64>().unwrap()
        );
    }
}

#[test]
fn circuit_default_reaches_phased_dicke() {
    let c = json(&["circuit"]);
    assert!((c["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(c["qubits"].as_array().unwrap().len(), 4);
}

#[test]
fn named_states() {
    for name in ["he", "xi", "dicke", "phased-dicke"] {
        let s = json(&["state", "--name", name]);
        let amps = s["amplitudes"].as_array().unwrap();
        let norm: f64 = amps.iter().map(|a| a.as_f64().unwrap().powi(2)).sum();
        assert!((norm - 1.0).abs() < 1e-4, "{name} {norm}");
    }
}
