//! Ground states and traveling waves as Nehari-constrained minimisers of the
//! action.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::descent::{self, Objective, Settings};
use crate::error::{Error, Result};
use crate::field::{Field, Representation};
use crate::functionals::{action_gradient_with, potential, ModelParams, QuadraticParts};
use crate::grid::Grid;

/// Band used for the tail diagnostic: the outer 10% of each half-width.
pub const TAIL_BAND: f64 = 0.1;

/// Starting guesses for the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitKind {
    /// `exp(−(x/wx)² − (y/wy)²)`
    Gaussian { wx: f64, wy: f64 },
    /// `sech(x/wx)·(1 + (y/wy)²)^{-1}`
    SechLorentzian { wx: f64, wy: f64 },
    /// A Gaussian envelope times a seeded smooth random modulation.
    Random { seed: u64 },
}

impl Default for InitKind {
    fn default() -> Self {
        InitKind::Gaussian { wx: 2.0, wy: 4.0 }
    }
}

/// Initial field for `params` on `grid`. For `v ≠ 0` the envelope is
/// modulated by `e^{iη₀y}` with `η₀ = 2π/ly`, the positive frequency where
/// `(1 − v)η` is smallest.
pub fn initial_guess(kind: InitKind, grid: &Grid, params: &ModelParams) -> Field {
    let envelope = match kind {
        InitKind::Gaussian { wx, wy } => {
            Field::from_real_fn(grid, |x, y| (-(x / wx).powi(2) - (y / wy).powi(2)).exp())
        }
        InitKind::SechLorentzian { wx, wy } => {
            Field::from_real_fn(grid, |x, y| 1.0 / (x / wx).cosh() / (1.0 + (y / wy).powi(2)))
        }
        InitKind::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let modes: Vec<(f64, f64, f64, f64)> = (0..6)
                .map(|_| {
                    (
                        rng.gen_range(-0.5..0.5),
                        rng.gen_range(-0.5..0.5),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                        rng.gen_range(0.0..0.3),
                    )
                })
                .collect();
            let wx = rng.gen_range(1.5..3.0);
            let wy = rng.gen_range(2.0..6.0);
            Field::from_real_fn(grid, |x, y| {
                let m: f64 = modes.iter().map(|&(a, b, ph, c)| c * (a * x + b * y + ph).cos()).sum();
                (1.0 + m) * (-(x / wx).powi(2) - (y / wy).powi(2)).exp()
            })
        }
    };
    if params.v == 0.0 {
        envelope
    } else {
        let eta0 = 2.0 * std::f64::consts::PI / grid.ly();
        let mut u = envelope;
        let ys = grid.ys();
        let ny = grid.ny();
        for (idx, z) in u.values_mut().iter_mut().enumerate() {
            *z *= Complex64::from_polar(1.0, eta0 * ys[idx % ny]);
        }
        u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once `‖S'(u)‖ ≤ tol·‖u‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of correction pairs kept by the quasi-Newton direction.
    pub memory: usize,
    /// Apply the 2/3-rule filter to the nonlinearity.
    pub dealias: bool,
    /// Rotate `v = 0` minimisers to be real and nonnegative at the peak.
    pub fix_phase: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 2000,
            memory: 8,
            dealias: false,
            fix_phase: true,
        }
    }
}

/// A converged Nehari minimiser.
#[derive(Debug, Clone)]
pub struct SolitarySolution {
    pub params: ModelParams,
    /// Physical representation.
    pub q: Field,
    /// `S(q)`, an upper bound for the Nehari infimum on this grid.
    pub action_value: f64,
    /// `N(q) / Q(q)` with `Q` the quadratic form.
    pub nehari_residual: f64,
    /// `‖S'(q)‖ / ‖q‖`.
    pub gradient_residual: f64,
    pub iterations: usize,
    pub tail_mass_fraction: f64,
    /// Action after each accepted step, starting from the projected initial guess.
    pub action_history: Vec<f64>,
}

/// Exact projection `u ↦ t*u`, `t* = (Q(u)/P(u))^{1/(p−1)}`.
pub fn nehari_project(u: &Field, params: &ModelParams) -> Result<Field> {
    let quad = QuadraticParts::of(u).quadratic(params.omega, params.v);
    let pot = potential(u, params.p);
    let t = nehari_scale(quad, pot, params.p)?;
    Ok(u.scaled(t))
}

fn nehari_scale(quad: f64, pot: f64, p: f64) -> Result<f64> {
    let t = (quad / pot).powf(1.0 / (p - 1.0));
    if !(pot > 0.0) || !t.is_finite() {
        return Err(Error::Collapse { iterations: 0 });
    }
    Ok(t)
}

pub(crate) fn action_weights(grid: &Grid, params: &ModelParams) -> Vec<f64> {
    let sym = params.symbol();
    let mut w = Vec::with_capacity(grid.len());
    for k in 0..grid.nx() {
        for m in 0..grid.ny() {
            w.push(sym.eval(grid, k, m).re);
        }
    }
    w
}

struct NehariObjective<'a> {
    grid: &'a Grid,
    params: ModelParams,
    sym: &'a [f64],
    dealias: bool,
}

impl NehariObjective<'_> {
    fn field(&self, u: &[Complex64]) -> Field {
        Field::from_values(self.grid, u.to_vec(), Representation::Spectral).expect("length checked")
    }
}

impl Objective for NehariObjective<'_> {
    fn retract(&self, mut u: Vec<Complex64>) -> Result<(Vec<Complex64>, f64)> {
        let da = self.grid.cell_area();
        let quad: f64 = self.sym.iter().zip(&u).map(|(s, z)| s * z.norm_sqr()).sum::<f64>() * da;
        let pot = potential(&self.field(&u), self.params.p);
        let t = nehari_scale(quad, pot, self.params.p)?;
        u.iter_mut().for_each(|z| *z *= t);
        let p = self.params.p;
        Ok((u, (0.5 - 1.0 / (p + 1.0)) * t * t * quad))
    }

    fn gradient(&self, u: &[Complex64]) -> Vec<Complex64> {
        action_gradient_with(&self.field(u), &self.params, self.dealias)
            .into_spectral()
            .into_values()
    }

    fn residual(&self, u: &[Complex64], g: &[Complex64]) -> f64 {
        let gn: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        let un: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        (gn / un).sqrt()
    }
}

/// Minimise the action on the Nehari manifold, starting from `init`.
pub fn solve_nehari(
    params: &ModelParams,
    init: &Field,
    options: &SolverOptions,
) -> Result<SolitarySolution> {
    params.require_variational()?;
    if init.norm_sq() == 0.0 || !init.is_finite() {
        return Err(Error::InvalidParameter("initial field must be nonzero and finite".into()));
    }
    let grid = init.grid().clone();
    let sym = action_weights(&grid, params);
    let obj = NehariObjective {
        grid: &grid,
        params: *params,
        sym: &sym,
        dealias: options.dealias,
    };
    let settings = Settings {
        tol: options.tol,
        max_iter: options.max_iter,
        memory: options.memory,
        cell_area: grid.cell_area(),
    };
    let out = descent::minimize(&obj, init.to_spectral().into_values(), &sym, &settings).map_err(
        |e| match e {
            Error::Collapse { .. } => Error::Collapse { iterations: 0 },
            other => other,
        },
    )?;
    let mut q = obj.field(&out.u).into_physical();
    let mut history = out.history;
    if options.fix_phase && params.v == 0.0 {
        q = fix_phase(&q);
        q = nehari_project(&q, params)?;
        history.push(crate::functionals::action(&q, params));
    }
    finish(params, q, out.iterations, history, options.dealias)
}

fn finish(
    params: &ModelParams,
    q: Field,
    iterations: usize,
    action_history: Vec<f64>,
    dealias: bool,
) -> Result<SolitarySolution> {
    let parts = QuadraticParts::of(&q);
    let quad = parts.quadratic(params.omega, params.v);
    let pot = potential(&q, params.p);
    let grad = action_gradient_with(&q, params, dealias);
    Ok(SolitarySolution {
        params: *params,
        action_value: 0.5 * quad - pot / (params.p + 1.0),
        nehari_residual: (quad - pot) / quad,
        gradient_residual: grad.l2_norm() / q.l2_norm(),
        iterations,
        tail_mass_fraction: q.tail_mass_fraction(TAIL_BAND),
        action_history,
        q,
    })
}

/// Global phase rotation making the largest sample real and positive, then
/// dropping the imaginary part.
pub fn fix_phase(u: &Field) -> Field {
    let phys = u.to_physical();
    let peak = phys
        .values()
        .iter()
        .copied()
        .fold(Complex64::new(0.0, 0.0), |a, z| if z.norm() > a.norm() { z } else { a });
    if peak.norm() == 0.0 {
        return phys;
    }
    let rot = peak.conj() / peak.norm();
    phys.map_physical(|z| Complex64::new((z * rot).re, 0.0))
}

/// Solve with the default initial guess for `params`.
pub fn ground_state(params: &ModelParams, grid: &Grid, options: &SolverOptions) -> Result<SolitarySolution> {
    solve_nehari(params, &initial_guess(InitKind::default(), grid, params), options)
}
