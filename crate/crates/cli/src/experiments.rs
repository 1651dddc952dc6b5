//! The numerical side of each command, free of file handling.

use hwlab::evolution::{evolve_with, AbortReason, EvolutionConfig, EvolutionTrace};
use hwlab::functionals::{x_norm, QuadraticParts};
use hwlab::snapshot::Snapshot;
use hwlab::solitary::{
    initial_guess, orbital_fit, scaling_pairing_with_threshold, solve_nehari, t_lambda,
    SolitarySolution, SolverOptions,
};
use hwlab::{Complex64, Field, Grid, ModelParams, Representation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

/// Growth of the orbital distance tolerated by the stability verdict.
pub const STABILITY_FACTOR: f64 = 3.0;
/// Growth of the orbital distance that triggers the instability verdict.
pub const INSTABILITY_FACTOR: f64 = 10.0;
/// Allowed relative increase between consecutive sweep members.
pub const TREND_SLACK: f64 = 1e-3;

pub fn solver_options(cfg: &ExperimentConfig) -> SolverOptions {
    SolverOptions {
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        ..SolverOptions::default()
    }
}

pub fn solve_ground_state(cfg: &ExperimentConfig) -> CliResult<SolitarySolution> {
    let grid = cfg.grid()?;
    let params = cfg.params()?;
    params.require_variational()?;
    let init = initial_guess(cfg.init(), &grid, &params);
    Ok(solve_nehari(&params, &init, &solver_options(cfg))?)
}

/// The ground state named by `output.snapshot_in`, or a fresh solve when
/// that key is empty. A snapshot must match the configured grid and model.
pub fn load_or_solve(cfg: &ExperimentConfig) -> CliResult<(Field, ModelParams)> {
    let params = cfg.params()?;
    if cfg.snapshot_in.is_empty() {
        return Ok((solve_ground_state(cfg)?.q, params));
    }
    let snap = Snapshot::load_on(&cfg.snapshot_in, &cfg.grid()?)?;
    if snap.params != params {
        return Err(CliError::Usage(format!(
            "snapshot parameters {:?} differ from the configured model {params:?}",
            snap.params
        )));
    }
    Ok((snap.field, params))
}

/// Independent samples, real and imaginary parts uniform on `[-1, 1)`.
pub fn uniform_field(grid: &Grid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Field::from_values(grid, values, Representation::Physical).expect("length matches")
}

/// Seeded complex noise with the top third of the spectrum removed, scaled
/// to unit X norm.
pub fn band_limited_noise(grid: &Grid, seed: u64) -> Field {
    let raw = uniform_field(grid, seed);
    let smooth = raw.low_pass(2.0 / 3.0);
    let n = x_norm(&smooth);
    smooth.scaled(1.0 / n)
}

/// `q + δ‖q‖_X·noise`.
pub fn perturb(q: &Field, delta: f64, seed: u64) -> Field {
    let noise = band_limited_noise(q.grid(), seed);
    q + &noise.scaled(delta * x_norm(q))
}

fn evolution_config(cfg: &ExperimentConfig, p: f64, reference: &Field) -> EvolutionConfig {
    let mut e = EvolutionConfig::new(p, cfg.t_final, cfg.dt)
        .with_stride(cfg.sample_stride)
        .with_reference(reference.clone());
    e.s_monitor = cfg.s_monitor;
    e.hamiltonian_tolerance = cfg.hamiltonian_tolerance;
    e
}

fn describe_abort(a: &Option<AbortReason>) -> Option<String> {
    a.map(|r| match r {
        AbortReason::BlowUp { time, ratio } => {
            format!("blow-up monitor at t = {time}: norm ratio {ratio:.3e}")
        }
        AbortReason::HamiltonianDrift { time, drift } => {
            format!("Hamiltonian drift {drift:.3e} at t = {time}")
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "STABLE")]
    Stable,
    #[serde(rename = "UNSTABLE")]
    Unstable,
    #[serde(rename = "FLAGGED")]
    Flagged,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityRun {
    pub delta: f64,
    pub q_x_norm: f64,
    pub initial_distance: f64,
    pub max_distance: f64,
    pub threshold_factor: f64,
    pub verdict: Verdict,
    pub mass_drift: f64,
    pub hamiltonian_drift: f64,
    pub aborted: Option<String>,
    #[serde(skip)]
    pub trace: EvolutionTrace,
}

impl StabilityRun {
    pub fn distances(&self) -> &[f64] {
        self.trace.orbital_distance_series.as_deref().unwrap_or(&[])
    }
}

pub fn require_stability_range(p: f64) -> CliResult<()> {
    if !(p > 1.0 && p < 7.0 / 3.0) {
        return Err(CliError::Usage(format!("stability needs 1 < p < 7/3, got p = {p}")));
    }
    Ok(())
}

pub fn require_instability_range(p: f64) -> CliResult<()> {
    if !(p > 7.0 / 3.0 && p < 5.0) {
        return Err(CliError::Usage(format!("instability needs 7/3 < p < 5, got p = {p}")));
    }
    Ok(())
}

/// Evolve the perturbed ground state and track its distance to the orbit of
/// `q`. The verdict is `STABLE` when the distance never exceeds
/// [`STABILITY_FACTOR`] times its initial value (or `1e-3·‖q‖_X` for an
/// unperturbed start).
pub fn stability_run(q: &Field, p: f64, cfg: &ExperimentConfig) -> CliResult<StabilityRun> {
    let u0 = perturb(q, cfg.delta, cfg.seed);
    let trace = evolve_with(&u0, &evolution_config(cfg, p, q), |_, _| Ok(()))?;
    let d = trace.orbital_distance_series.clone().unwrap_or_default();
    let q_x_norm = x_norm(q);
    let initial = d.first().copied().unwrap_or(0.0);
    let max = d.iter().copied().fold(0.0, f64::max);
    let bound = (STABILITY_FACTOR * initial).max(1e-3 * q_x_norm);
    let verdict = if trace.aborted.is_some() {
        Verdict::Inconclusive
    } else if max <= bound {
        Verdict::Stable
    } else {
        Verdict::Flagged
    };
    Ok(StabilityRun {
        delta: cfg.delta,
        q_x_norm,
        initial_distance: initial,
        max_distance: max,
        threshold_factor: STABILITY_FACTOR,
        verdict,
        mass_drift: trace.mass_drift(),
        hamiltonian_drift: trace.hamiltonian_drift(),
        aborted: describe_abort(&trace.aborted),
        trace,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InstabilityRun {
    pub lambda: f64,
    pub initial_distance: f64,
    pub max_growth: f64,
    /// First sample time at which the growth factor was reached.
    pub growth_time: Option<f64>,
    pub threshold_factor: f64,
    pub initial_pairing: f64,
    pub verdict: Verdict,
    pub aborted: Option<String>,
    #[serde(skip)]
    pub pairings: Vec<f64>,
    #[serde(skip)]
    pub trace: EvolutionTrace,
}

impl InstabilityRun {
    pub fn distances(&self) -> &[f64] {
        self.trace.orbital_distance_series.as_deref().unwrap_or(&[])
    }
}

/// Evolve `T_λ q` and follow its distance to the orbit of `q` together with
/// the scaling pairing `⟨S'(u), ∂_λ T_λ u⟩`. The run stops at the first
/// abort of the evolution monitors; the verdict uses the samples up to it.
/// No range check on `p`, so the same protocol serves as a control.
pub fn instability_run(
    q: &Field,
    params: &ModelParams,
    lambda: f64,
    cfg: &ExperimentConfig,
) -> CliResult<InstabilityRun> {
    let u0 = t_lambda(q, lambda)?;
    let mut pairings = Vec::new();
    let trace = evolve_with(&u0, &evolution_config(cfg, params.p, q), |_, u| {
        pairings.push(scaling_pairing_with_threshold(u, params, 1.0)?);
        Ok(())
    })?;
    let d = trace.orbital_distance_series.clone().unwrap_or_default();
    let initial = d.first().copied().unwrap_or(0.0);
    let growth: Vec<f64> = d.iter().map(|x| x / initial).collect();
    let max_growth = growth.iter().copied().fold(0.0, f64::max);
    let growth_time = growth
        .iter()
        .position(|&g| g >= INSTABILITY_FACTOR)
        .map(|i| trace.times[i]);
    let verdict = if growth_time.is_some() {
        Verdict::Unstable
    } else if trace.aborted.is_some() {
        Verdict::Inconclusive
    } else {
        Verdict::Stable
    };
    Ok(InstabilityRun {
        lambda,
        initial_distance: initial,
        max_growth,
        growth_time,
        threshold_factor: INSTABILITY_FACTOR,
        initial_pairing: pairings.first().copied().unwrap_or(f64::NAN),
        verdict,
        aborted: describe_abort(&trace.aborted),
        pairings,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub v: f64,
    pub m_value: f64,
    pub l2_norm: f64,
    pub dx_norm: f64,
    pub dy_half_norm: f64,
    pub iterations: usize,
}

#[derive(Debug)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// Set when a member solve failed; `rows` holds the members before it.
    pub failure: Option<CliError>,
}

/// Solve for each velocity in order, warm-starting from the previous member.
pub fn velocity_sweep(cfg: &ExperimentConfig, v_list: &[f64]) -> CliResult<Sweep> {
    if let Some(&v) = v_list.iter().find(|v| !(v.abs() < 1.0)) {
        return Err(CliError::Usage(format!("sweep velocities need |v| < 1, got {v}")));
    }
    let grid = cfg.grid()?;
    let options = solver_options(cfg);
    let mut rows = Vec::new();
    let mut previous: Option<Field> = None;
    for &v in v_list {
        let params = ModelParams::new(cfg.p, cfg.omega, v)?;
        params.require_variational()?;
        let init = previous
            .take()
            .unwrap_or_else(|| initial_guess(cfg.init(), &grid, &params));
        match solve_nehari(&params, &init, &options) {
            Ok(s) => {
                let parts = QuadraticParts::of(&s.q);
                rows.push(SweepRow {
                    v,
                    m_value: s.action_value,
                    l2_norm: parts.l2_sq.sqrt(),
                    dx_norm: parts.dx_sq.sqrt(),
                    dy_half_norm: parts.half_dy_sq.sqrt(),
                    iterations: s.iterations,
                });
                previous = Some(s.q);
            }
            Err(e) => {
                return Ok(Sweep {
                    rows,
                    failure: Some(e.into()),
                })
            }
        }
    }
    Ok(Sweep { rows, failure: None })
}

/// `L²` and `∂x` norms non-increasing along the sweep, up to [`TREND_SLACK`].
pub fn sweep_trend_holds(rows: &[SweepRow]) -> bool {
    rows.windows(2).all(|w| {
        w[1].l2_norm <= w[0].l2_norm * (1.0 + TREND_SLACK)
            && w[1].dx_norm <= w[0].dx_norm * (1.0 + TREND_SLACK)
    })
}

/// Orbital distance of `u` to `q`, relative to `‖q‖_X`.
pub fn relative_orbit_distance(u: &Field, q: &Field) -> CliResult<f64> {
    Ok(orbital_fit(u, q)?.distance / x_norm(q))
}
