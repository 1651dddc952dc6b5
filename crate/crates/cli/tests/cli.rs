use std::path::Path;
use std::process::Command;

use hwlab_cli::config::{CommandKind, ExperimentConfig, InitChoice};
use proptest::prelude::*;
use serde_json::Value;

fn hwlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hwlab")).args(args).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).to_string() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap_or(-1), text)
}

fn small(dir: &Path, extra: &[&str]) -> Vec<String> {
    let mut a: Vec<String> = [
        "--grid.nx", "64", "--grid.ny", "64", "--grid.lx", "20", "--grid.ly", "20", "--out",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    a.push(dir.display().to_string());
    a.extend(extra.iter().map(|s| s.to_string()));
    a
}

fn run_small(cmd: &str, dir: &Path, extra: &[&str]) -> (i32, String) {
    let mut args = vec![cmd.to_string()];
    args.extend(small(dir, extra));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    hwlab(&refs)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(hwlab(&["ground-state", "--config", "/nonexistent/run.cfg"]).0, 2);
    assert_eq!(hwlab(&["fly"]).0, 2);
    assert_eq!(hwlab(&[]).0, 2);
    assert_eq!(hwlab(&["ground-state", "--grid.nz", "3"]).0, 2);
    assert_eq!(hwlab(&["ground-state", "--grid.nx", "abc"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_small("ground-state", dir.path(), &["--model.p", "5"]).0, 2);
    assert_eq!(run_small("stability", dir.path(), &["--model.p", "3"]).0, 2);
    assert_eq!(run_small("instability", dir.path(), &["--model.p", "2"]).0, 2);
    assert_eq!(run_small("sweep-velocity", dir.path(), &["--experiment.v_list", "0, 1"]).0, 2);
    assert_eq!(run_small("travel", dir.path(), &[]).0, 2);
}

#[test]
fn ground_state_writes_snapshot_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_small("ground-state", dir.path(), &[]);
    assert_eq!(code, 0, "{text}");
    let r = json(&dir.path().join("ground_state.json"));
    assert!(r["nehari_residual"].as_f64().unwrap().abs() <= 1e-8);
    assert!(r["gradient_residual"].as_f64().unwrap() <= 1e-9);
    assert!(r["gn_quotient"].as_f64().unwrap() > 0.0);
    let snap = hwlab::snapshot::Snapshot::load(dir.path().join("q.hwsf")).unwrap();
    assert_eq!(snap.field.grid().nx(), 64);

    // non-convergence keeps the report and exits with 1
    let (code, _) = run_small("ground-state", dir.path(), &["--solver.max_iter", "2"]);
    assert_eq!(code, 1);
    assert_eq!(json(&dir.path().join("ground_state.json"))["converged"], Value::Bool(false));
}

#[test]
fn evolve_output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let extra = ["--evolution.t_final", "0.05", "--evolution.sample_stride", "10"];
    assert_eq!(run_small("evolve", a.path(), &extra).0, 0);
    let ca = std::fs::read(a.path().join("evolve.csv")).unwrap();
    assert_eq!(run_small("evolve", a.path(), &extra).0, 0);
    let cb = std::fs::read(a.path().join("evolve.csv")).unwrap();
    assert_eq!(ca, cb);
    let text = String::from_utf8(ca).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config-hash: "));
    assert_eq!(lines.next().unwrap(), "t,mass,hamiltonian,l2x_hsy,linf,orbital_distance");
    assert_eq!(lines.count(), 6);
}

#[test]
fn unperturbed_stability_run_stays_on_the_orbit() {
    let dir = tempfile::tempdir().unwrap();
    let extra = [
        "--experiment.delta", "0", "--evolution.t_final", "0.5", "--evolution.dt", "5e-4",
    ];
    let (code, text) = run_small("stability", dir.path(), &extra);
    assert_eq!(code, 0, "{text}");
    let r = json(&dir.path().join("stability.json"));
    let max = r["max_distance"].as_f64().unwrap();
    let qx = r["q_x_norm"].as_f64().unwrap();
    assert!(max <= 1e-3 * qx, "{max} vs {qx}");
    assert_eq!(r["verdict"], "STABLE");
}

#[test]
fn instability_reports_pairing_sign() {
    let dir = tempfile::tempdir().unwrap();
    let extra = [
        "--model.p", "3", "--grid.ny", "256", "--evolution.t_final", "0.05",
        "--evolution.sample_stride", "25", "--experiment.lambdas", "0.95, 1",
    ];
    let (code, text) = run_small("instability", dir.path(), &extra);
    assert_eq!(code, 0, "{text}");
    let r = json(&dir.path().join("instability.json"));
    let runs = r["runs"].as_array().unwrap();
    assert!(runs[0]["initial_pairing"].as_f64().unwrap() > 0.0);
    // λ = 1 starts on the orbit
    assert!(runs[1]["initial_distance"].as_f64().unwrap() < 1e-8);
    assert!(dir.path().join("instability_lambda0.95.csv").exists());
}

#[test]
fn sweep_of_zero_velocity_matches_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_small("ground-state", dir.path(), &[]).0, 0);
    let m = json(&dir.path().join("ground_state.json"))["m_value"].as_f64().unwrap();
    let (code, text) = run_small("sweep-velocity", dir.path(), &["--experiment.v_list", "0"]);
    assert_eq!(code, 0, "{text}");
    let csv = std::fs::read_to_string(dir.path().join("sweep_velocity.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(2).unwrap().split(',').collect();
    let swept: f64 = row[1].parse().unwrap();
    assert!((swept - m).abs() <= 1e-12 * m, "{swept} vs {m}");
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.cfg");
    std::fs::write(&cfg_path, "grid.nx = 32\ngrid.ny = 32\ngrid.lx = 16\ngrid.ly = 16\nmodel.p = 2.5\n").unwrap();
    let out = dir.path().join("o");
    let (code, text) = hwlab(&[
        "ground-state", "--config", cfg_path.to_str().unwrap(), "--model.p", "2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{text}");
    let r = json(&out.join("ground_state.json"));
    let echoed = ExperimentConfig::parse(r["config"].as_str().unwrap()).unwrap();
    assert_eq!((echoed.nx, echoed.p), (32, 2.0));
    assert_eq!(r["config_hash"].as_str().unwrap(), echoed.hash());
}

fn arb_config() -> impl Strategy<Value = ExperimentConfig> {
    (
        0usize..7,
        (1usize..12, 1usize..12, 1e-3..1e3f64, 1e-3..1e3f64),
        (1.01..5.0f64, 1e-3..10.0f64, -0.999..0.999f64),
        (1e-14..1e-2f64, 0usize..100000, 0usize..3, any::<u64>()),
        (1e-3..100.0f64, 1e-6..1e-1f64, 1usize..1000, 0.0..2.0f64),
        prop::collection::vec(0.1..2.0f64, 0..4),
        "[a-z0-9_/.]{1,12}",
    )
        .prop_map(|(c, g, m, s, e, l, name)| ExperimentConfig {
            command: CommandKind::ALL[c],
            nx: 1 << g.0,
            ny: 1 << g.1,
            lx: g.2,
            ly: g.3,
            p: m.0,
            omega: m.1,
            v: m.2,
            tol: s.0,
            max_iter: s.1,
            init_kind: [InitChoice::Gaussian, InitChoice::Sech, InitChoice::Random][s.2],
            seed: s.3,
            t_final: e.0,
            dt: e.1,
            sample_stride: e.2,
            s_monitor: e.3,
            lambdas: l.clone(),
            v_list: l.iter().map(|x| x - 1.0).collect(),
            snapshot_out: name,
            ..ExperimentConfig::default()
        })
}

proptest! {
    #[test]
    fn canonical_form_round_trips(cfg in arb_config()) {
        let text = cfg.canonical();
        let back = ExperimentConfig::parse(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.canonical(), text);
        prop_assert_eq!(back.hash(), cfg.hash());
    }
}
