use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use casimir_core::lifshitz::{free_energy, matsubara_pressure};
use casimir_core::DielectricModel;
use casimir_lab::units::{free_energy_j_m2, pressure_pa};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir-lab"))
        .args(args)
        .env_remove("CASIMIR_LAB_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

const DRUDE_SWEEP: [&str; 15] = [
    "sweep", "--param", "ttilde", "--from", "0.02", "--to", "10", "--points", "40", "--log", "--route", "matsubara",
    "--model", "drude", "--wp",
];

fn drude_sweep(extra: &[&str]) -> Output {
    let mut args: Vec<&str> = DRUDE_SWEEP.to_vec();
    args.extend(["1", "--gamma", "0.1"]);
    args.extend(extra);
    lab(&args)
}

#[test]
fn sweep_is_monotone_and_bridges_the_limits() {
    let o = drude_sweep(&[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 41);
    assert!(csv.starts_with("sweep_param,value,phi,err_estimate,route,converged\n"));
    let phi = column(&csv, "phi");
    assert!(phi.windows(2).all(|w| w[1] > w[0]));
    let zero_t = column(&stdout(&lab(&["pressure", "--model", "drude", "--wp", "1", "--gamma", "0.1", "--route", "zeroT"])), "phi")[0];
    let classical = column(
        &stdout(&lab(&[
            "pressure", "--model", "drude", "--wp", "1", "--gamma", "0.1", "--route", "classical", "--ttilde", "10",
        ])),
        "phi",
    )[0];
    assert!((phi[0] - zero_t).abs() < 0.02 * zero_t);
    assert!((phi[39] - classical).abs() < 0.01 * classical);
}

#[test]
fn output_does_not_depend_on_the_thread_count() {
    let one = drude_sweep(&["--jobs", "1"]);
    let eight = drude_sweep(&["--jobs", "8"]);
    assert!(one.status.success() && eight.status.success());
    assert_eq!(one.stdout, eight.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_casimir-lab"))
        .args(DRUDE_SWEEP)
        .args(["1", "--gamma", "0.1"])
        .env("CASIMIR_LAB_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn dumped_config_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    let dumped = drude_sweep(&["--dump-config"]);
    assert!(dumped.status.success());
    fs::write(&cfg_path, &dumped.stdout).unwrap();
    let cfg = cfg_path.to_str().unwrap();
    let rerun = lab(&["sweep", "--config", cfg]);
    assert!(rerun.status.success(), "{}", String::from_utf8_lossy(&rerun.stderr));
    assert_eq!(rerun.stdout, drude_sweep(&[]).stdout);
    let again = lab(&["sweep", "--config", cfg, "--dump-config"]);
    assert_eq!(again.stdout, dumped.stdout);
}

#[test]
fn flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    fs::write(
        &cfg_path,
        r#"{"model": {"kind": "drude", "wp": 1.0, "gamma": {"law": "constant", "value": 0.1}}, "ttilde": 0.1}"#,
    )
    .unwrap();
    let cfg = cfg_path.to_str().unwrap();
    let base = column(&stdout(&lab(&["pressure", "--config", cfg])), "phi")[0];
    let weaker = column(&stdout(&lab(&["pressure", "--config", cfg, "--wp", "0.5"])), "phi")[0];
    assert!(weaker < base);
    let direct = column(&stdout(&lab(&["pressure", "--model", "drude", "--wp", "0.5", "--gamma", "0.1", "--ttilde", "0.1"])), "phi")[0];
    assert_eq!(weaker, direct);
}

#[test]
fn mode_route_matches_zero_temperature() {
    let modes = column(&stdout(&lab(&["pressure", "--model", "plasma", "--wp", "1.0", "--route", "modes"])), "phi")[0];
    let zero_t = column(&stdout(&lab(&["pressure", "--model", "plasma", "--wp", "1.0", "--route", "zeroT"])), "phi")[0];
    assert!(modes > 0.0);
    assert!((modes - zero_t).abs() < 1e-3 * zero_t);
}

#[test]
fn plasma_audit_is_inadmissible() {
    let o = lab(&["audit", "--model", "plasma", "--wp", "1.0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "inadmissible");
    assert_eq!(v["reasons"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    let bad_flag = lab(&["pressure", "--model", "drude", "--wp", "1", "--gamma", "0.1", "--bogus"]);
    assert_eq!(bad_flag.status.code(), Some(1));
    let no_temperature = lab(&["pressure", "--model", "drude", "--wp", "1", "--gamma", "0.1"]);
    assert_eq!(no_temperature.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&no_temperature.stderr).contains("temperature"));
    let half_units = lab(&["pressure", "--model", "plasma", "--wp", "1", "--omega-ref", "1e15", "--gap-m", "1e-8"]);
    assert_eq!(half_units.status.code(), Some(1));
    // eps -> 12 at high frequency: the sum diverges, the row is still written.
    let divergent = lab(&["pressure", "--model", "conductivity", "--eps-l", "12", "--sigma", "0.5", "--ttilde", "0.1"]);
    assert_eq!(divergent.status.code(), Some(2));
    let csv = stdout(&divergent);
    assert!(csv.lines().nth(1).unwrap().ends_with(",false"), "{csv}");
}

#[test]
fn doubling_the_gap_divides_the_pressure_by_eight() {
    let run = |gap: &str| {
        column(
            &stdout(&lab(&[
                "pressure", "--model", "drude", "--wp", "1", "--gamma", "0.1", "--omega-ref", "1.5e15", "--gap-m", gap,
                "--temperature-k", "300",
            ])),
            "pressure_pa",
        )[0]
    };
    let (a, b) = (run("1e-8"), run("2e-8"));
    assert_eq!(a / 8.0, b);
    let sweep = stdout(&lab(&[
        "sweep", "--model", "drude", "--wp", "1", "--gamma", "0.1", "--omega-ref", "1.5e15", "--gap-m", "1e-8",
        "--temperature-k", "300", "--param", "l", "--from", "1e-8", "--to", "5e-8", "--points", "5",
    ]));
    let phi = column(&sweep, "phi");
    let gaps = column(&sweep, "value");
    let pa = column(&sweep, "pressure_pa");
    assert!(phi.iter().all(|&p| p == phi[0]));
    for (p, l) in pa.iter().zip(&gaps) {
        assert!((p * l.powi(3) / (pa[0] * gaps[0].powi(3)) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn pressure_is_minus_the_gap_derivative_of_the_free_energy() {
    let m = DielectricModel::drude(1.0, 0.1);
    let (w, t) = (1.5e15, 0.2);
    let phi = matsubara_pressure(&m, t, 1e-12).unwrap().phi;
    let psi = free_energy(&m, t, 1e-12).unwrap().psi;
    let l = 1e-8;
    let h = 1e-4 * l;
    let dfdl = (free_energy_j_m2(psi, w, l + h) - free_energy_j_m2(psi, w, l - h)) / (2.0 * h);
    let f = pressure_pa(phi, w, l);
    assert!((-dfdl / f - 1.0).abs() < 1e-6, "{} vs {f}", -dfdl);
}

fn write_table(path: &Path, rows: &[(f64, f64)]) {
    let mut s = String::from("omega,im_eps\n");
    for (w, v) in rows {
        s.push_str(&format!("{w:e},{v:e}\n"));
    }
    fs::write(path, s).unwrap();
}

fn drude_rows(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let w = 1e-4 * 1e8f64.powf(i as f64 / (n - 1) as f64);
            (w, 0.1 / (w * (w * w + 0.01)))
        })
        .collect()
}

#[test]
fn ingest_accepts_a_drude_table_and_audits_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("drude.csv");
    write_table(&path, &drude_rows(200));
    let p = path.to_str().unwrap();
    let o = lab(&["ingest-check", p, "--tail-low", "conductivity", "--tail-high", "drude"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"], 200);
    let a = lab(&["audit", "--table", p, "--tail-low", "conductivity", "--tail-high", "drude", "--wp", "1"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["verdict"], "admissible", "{v}");
}

#[test]
fn ingest_reports_the_offending_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let mut rows = drude_rows(40);
    // data row 16 sits on line 17 after the header
    rows[15].1 = -0.1;
    write_table(&path, &rows);
    let o = lab(&["ingest-check", path.to_str().unwrap(), "--tail-low", "conductivity", "--tail-high", "drude"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 17"), "{}", String::from_utf8_lossy(&o.stderr));

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let o = lab(&["ingest-check", empty.to_str().unwrap(), "--tail-low", "zero", "--tail-high", "drude"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn modes_and_entropy_commands() {
    let o = lab(&["modes", "--model", "plasma", "--wp", "1", "--ql-from", "0.01", "--ql-to", "20", "--points", "10", "--log"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("ql,omega_minus,omega_plus\n"));
    for (lo, hi) in column(&csv, "omega_minus").iter().zip(column(&csv, "omega_plus")) {
        assert!((lo * lo + hi * hi - 1.0).abs() < 1e-12);
    }
    let e = lab(&["entropy", "--model", "drude", "--wp", "1", "--gamma", "0.05", "--ttilde", "0.02,0.04,0.06,0.08", "--format", "json"]);
    assert!(e.status.success(), "{}", String::from_utf8_lossy(&e.stderr));
    let v: serde_json::Value = serde_json::from_slice(&e.stdout).unwrap();
    assert!(v["extrapolated_to_zero"].as_f64().unwrap().abs() < 1e-3);
}

#[test]
fn compare_reports_the_gap() {
    let o = lab(&["compare", "--model", "drude", "--wp", "1", "--gamma", "0.2", "--ttilde", "0.1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["route_b"], "realaxis");
    assert!(v["relative_gap"].as_f64().unwrap() < 1e-2);
}
