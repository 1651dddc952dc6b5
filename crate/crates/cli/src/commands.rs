//! One function per command: run the experiment, write CSV/JSON/snapshot
//! files under `output.out_dir`, and return the process exit code.

use std::path::Path;

use hwlab::evolution::{evolve, EvolutionConfig};
use hwlab::functionals::{gn_quotient, x_norm, FunctionalReport};
use hwlab::snapshot::Snapshot;
use serde_json::{json, Value};

use crate::config::{CommandKind, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::experiments::*;
use crate::table::{Cell, Table};
use crate::verify::run_suite;

fn write_json(cfg: &ExperimentConfig, name: &str, mut report: Value) -> CliResult<()> {
    report["config_hash"] = json!(cfg.hash());
    report["config"] = json!(cfg.canonical());
    let text = serde_json::to_string_pretty(&report).expect("serializable report");
    std::fs::write(cfg.output_path(name), text + "\n")?;
    Ok(())
}

fn write_csv(cfg: &ExperimentConfig, name: &str, table: &Table) -> CliResult<()> {
    Ok(table.write(&cfg.output_path(name), &cfg.hash())?)
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<i32> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    match cfg.command {
        CommandKind::GroundState | CommandKind::Travel => cmd_ground_state(cfg),
        CommandKind::Evolve => cmd_evolve(cfg),
        CommandKind::Stability => cmd_stability(cfg),
        CommandKind::Instability => cmd_instability(cfg),
        CommandKind::SweepVelocity => cmd_sweep_velocity(cfg),
        CommandKind::Verify => cmd_verify(cfg),
    }
}

pub fn cmd_ground_state(cfg: &ExperimentConfig) -> CliResult<i32> {
    let params = cfg.params()?;
    if cfg.command == CommandKind::Travel && params.v == 0.0 {
        return Err(CliError::Usage("travel needs a nonzero model.v".into()));
    }
    match solve_ground_state(cfg) {
        Ok(s) => {
            let snap_path = cfg.output_path(&cfg.snapshot_out);
            Snapshot::new(s.q.clone(), params).save(&snap_path)?;
            let f = FunctionalReport::of(&s.q, &params);
            write_json(
                cfg,
                "ground_state.json",
                json!({
                    "converged": true,
                    "m_value": s.action_value,
                    "nehari_residual": s.nehari_residual,
                    "gradient_residual": s.gradient_residual,
                    "iterations": s.iterations,
                    "tail_mass_fraction": s.tail_mass_fraction,
                    "gn_quotient": gn_quotient(&s.q, params.p).ok(),
                    "mass": f.mass,
                    "hamiltonian": f.hamiltonian,
                    "x_norm": f.x_norm,
                    "snapshot": snap_path.display().to_string(),
                }),
            )?;
            Ok(0)
        }
        Err(CliError::Numerical(e)) if !matches!(e, hwlab::Error::InvalidParameter(_)) => {
            write_json(cfg, "ground_state.json", json!({"converged": false, "error": e.to_string()}))?;
            Err(CliError::Numerical(e))
        }
        Err(e) => Err(e),
    }
}

fn trace_table(trace: &hwlab::evolution::EvolutionTrace) -> Table {
    let mut t = Table::new(&["t", "mass", "hamiltonian", "l2x_hsy", "linf", "orbital_distance"]);
    let dist = trace.orbital_distance_series.as_deref();
    for i in 0..trace.times.len() {
        t.push_reals(&[
            trace.times[i],
            trace.mass_series[i],
            trace.hamiltonian_series[i],
            trace.l2x_hsy_series[i],
            trace.linf_series[i],
            dist.map_or(f64::NAN, |d| d[i]),
        ]);
    }
    t
}

pub fn cmd_evolve(cfg: &ExperimentConfig) -> CliResult<i32> {
    let (q, params) = load_or_solve(cfg)?;
    let mut e = EvolutionConfig::new(params.p, cfg.t_final, cfg.dt)
        .with_stride(cfg.sample_stride)
        .with_reference(q.clone());
    e.s_monitor = cfg.s_monitor;
    e.hamiltonian_tolerance = cfg.hamiltonian_tolerance;
    let trace = evolve(&q, &e)?;
    write_csv(cfg, "evolve.csv", &trace_table(&trace))?;
    write_json(
        cfg,
        "evolve.json",
        json!({
            "mass_drift": trace.mass_drift(),
            "hamiltonian_drift": trace.hamiltonian_drift(),
            "final_time": trace.times.last(),
            "aborted": trace.aborted.map(|a| format!("{a:?}")),
        }),
    )?;
    Ok(0)
}

pub fn cmd_stability(cfg: &ExperimentConfig) -> CliResult<i32> {
    require_stability_range(cfg.p)?;
    let (q, params) = load_or_solve(cfg)?;
    let run = stability_run(&q, params.p, cfg)?;
    let mut t = Table::new(&["t", "orbital_distance", "mass", "hamiltonian"]);
    let tr = &run.trace;
    for (i, d) in run.distances().iter().enumerate() {
        t.push_reals(&[tr.times[i], *d, tr.mass_series[i], tr.hamiltonian_series[i]]);
    }
    write_csv(cfg, "stability.csv", &t)?;
    write_json(cfg, "stability.json", serde_json::to_value(&run).expect("serializable"))?;
    Ok(0)
}

pub fn cmd_instability(cfg: &ExperimentConfig) -> CliResult<i32> {
    require_instability_range(cfg.p)?;
    let (q, params) = load_or_solve(cfg)?;
    let mut runs = Vec::new();
    for &lambda in &cfg.lambdas {
        let run = instability_run(&q, &params, lambda, cfg)?;
        let mut t = Table::new(&["t", "orbital_distance", "scaling_pairing"]);
        for (i, d) in run.distances().iter().enumerate() {
            t.push_reals(&[run.trace.times[i], *d, run.pairings[i]]);
        }
        write_csv(cfg, &format!("instability_lambda{lambda}.csv"), &t)?;
        runs.push(run);
    }
    write_json(
        cfg,
        "instability.json",
        json!({ "q_x_norm": x_norm(&q), "runs": runs }),
    )?;
    Ok(0)
}

pub fn cmd_sweep_velocity(cfg: &ExperimentConfig) -> CliResult<i32> {
    let sweep = velocity_sweep(cfg, &cfg.v_list)?;
    let mut t = Table::new(&["v", "m_value", "l2_norm", "dx_norm", "dy_half_norm", "iterations"]);
    for r in &sweep.rows {
        t.push(vec![
            Cell::Real(r.v),
            Cell::Real(r.m_value),
            Cell::Real(r.l2_norm),
            Cell::Real(r.dx_norm),
            Cell::Real(r.dy_half_norm),
            Cell::Int(r.iterations as u64),
        ]);
    }
    write_csv(cfg, "sweep_velocity.csv", &t)?;
    let trend = sweep_trend_holds(&sweep.rows);
    write_json(
        cfg,
        "sweep_velocity.json",
        json!({
            "rows": sweep.rows,
            "trend_holds": trend,
            "trend_slack": TREND_SLACK,
            "error": sweep.failure.as_ref().map(|e| e.to_string()),
        }),
    )?;
    if let Some(e) = sweep.failure {
        return Err(e);
    }
    Ok(if trend { 0 } else { 1 })
}

pub fn cmd_verify(cfg: &ExperimentConfig) -> CliResult<i32> {
    let params = cfg.params()?;
    let snapshot = if cfg.snapshot_in.is_empty() {
        None
    } else {
        Some(load_or_solve(cfg)?.0)
    };
    let checks = run_suite(&params, snapshot.as_ref());
    let all = checks.iter().all(|c| c.passed);
    write_json(cfg, "verify.json", json!({ "all_passed": all, "checks": checks }))?;
    for c in &checks {
        println!(
            "{:<28} {} measured {:.3e} threshold {:.3e}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.measured,
            c.threshold
        );
    }
    Ok(if all { 0 } else { 1 })
}

/// Load a config file (if any), then apply `key = value` overrides in order.
pub fn assemble(
    command: &str,
    config: Option<&Path>,
    overrides: &[(String, String)],
) -> CliResult<ExperimentConfig> {
    let mut cfg = match config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.command = CommandKind::parse(command)?;
    for (k, v) in overrides {
        cfg.set(k, v)?;
    }
    Ok(cfg)
}
