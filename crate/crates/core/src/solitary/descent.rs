//! Preconditioned limited-memory quasi-Newton descent with retraction.
//!
//! Iterates are spectral coefficient arrays. The metric is the weighted inner
//! product `⟨a, b⟩_W = re Σ w·conj(a)·b`, so the Riesz representative of an
//! L² gradient `g` is `g / w`. Every trial point is retracted onto the
//! constraint set before the Armijo test, which makes the accepted values a
//! monotone sequence of feasible objective values.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) trait Objective {
    /// Map a trial point onto the constraint set; returns it with its value.
    fn retract(&self, u: Vec<Complex64>) -> Result<(Vec<Complex64>, f64)>;
    /// L² gradient of the objective (spectral coefficients).
    fn gradient(&self, u: &[Complex64]) -> Vec<Complex64>;
    /// Stopping residual at a feasible point with gradient `g`.
    fn residual(&self, u: &[Complex64], g: &[Complex64]) -> f64;
    /// Restrict a direction to the tangent space at `u`.
    fn tangent(&self, _u: &[Complex64], d: Vec<Complex64>) -> Vec<Complex64> {
        d
    }
}

pub(crate) struct Settings {
    pub tol: f64,
    pub max_iter: usize,
    pub memory: usize,
    /// `dx·dy`, so that `cell_area·re Σ conj(g)·d` is a directional derivative.
    pub cell_area: f64,
}

pub(crate) struct Outcome {
    pub u: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<f64>,
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;

fn dot_w(w: &[f64], a: &[Complex64], b: &[Complex64]) -> f64 {
    w.iter()
        .zip(a.iter().zip(b))
        .map(|(w, (a, b))| w * (a.re * b.re + a.im * b.im))
        .sum()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
}

fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(a, b)| a - b).collect()
}

fn axpy(y: &mut [Complex64], a: f64, x: &[Complex64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += a * x);
}

/// Relative change below which action values are at round-off level.
const ROUNDOFF: f64 = 1e-13;

/// Backtracking from unit step; `None` if no step above `MIN_STEP` passes.
///
/// Near convergence the predicted decrease `c₁·α·slope` drops below the
/// round-off of the objective itself. In that regime a unit step is also
/// accepted when the value stays within `ROUNDOFF·|value|` and the stopping
/// residual strictly decreases.
fn line_search(
    obj: &impl Objective,
    u: &[Complex64],
    residual: f64,
    d: &[Complex64],
    slope: f64,
) -> Result<Option<(Vec<Complex64>, f64)>> {
    let (_, value) = obj.retract(u.to_vec())?;
    let slack = 4.0 * f64::EPSILON * value.abs();
    let mut step = 1.0;
    while step >= MIN_STEP {
        let mut trial = u.to_vec();
        axpy(&mut trial, step, d);
        match obj.retract(trial) {
            Ok((un, vn)) => {
                if vn <= value + ARMIJO * step * slope + slack {
                    return Ok(Some((un, vn)));
                }
                if step == 1.0 && -slope < ROUNDOFF * value.abs() && vn <= value + ROUNDOFF * value.abs() {
                    let gn = obj.gradient(&un);
                    if obj.residual(&un, &gn) < residual {
                        return Ok(Some((un, vn)));
                    }
                }
            }
            Err(Error::Collapse { .. }) => {}
            Err(e) => return Err(e),
        }
        step *= 0.5;
    }
    Ok(None)
}

/// Minimise `obj` from `u0`, whose weights `w` define the metric.
pub(crate) fn minimize(
    obj: &impl Objective,
    u0: Vec<Complex64>,
    w: &[f64],
    settings: &Settings,
) -> Result<Outcome> {
    let (mut u, mut value) = obj.retract(u0)?;
    let mut history = vec![value];
    let mut pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = Vec::new();
    let mut previous: Option<(Vec<Complex64>, Vec<Complex64>)> = None;
    let mut iterations = 0;
    loop {
        let g = obj.gradient(&u);
        let residual = obj.residual(&u, &g);
        if !residual.is_finite() {
            return Err(Error::NonFinite { time: iterations as f64 });
        }
        if residual <= settings.tol {
            return Ok(Outcome {
                u,
                residual,
                iterations,
                history,
            });
        }
        if iterations >= settings.max_iter {
            return Err(Error::NotConverged {
                iterations,
                residual,
            });
        }
        let pg: Vec<Complex64> = g.iter().zip(w).map(|(g, w)| g / w).collect();
        let pg = obj.tangent(&u, pg);
        if let Some((u_old, pg_old)) = previous.take() {
            let s = sub(&u, &u_old);
            let y = sub(&pg, &pg_old);
            if dot_w(w, &s, &y) > 0.0 {
                pairs.push((s, y));
                if pairs.len() > settings.memory {
                    pairs.remove(0);
                }
            }
        }
        // two-loop recursion in the W metric
        let mut q = pg.clone();
        let mut alphas = Vec::with_capacity(pairs.len());
        for (s, y) in pairs.iter().rev() {
            let a = dot_w(w, s, &q) / dot_w(w, y, s);
            axpy(&mut q, -a, y);
            alphas.push(a);
        }
        if let Some((s, y)) = pairs.last() {
            let gamma = dot_w(w, s, y) / dot_w(w, y, y);
            q.iter_mut().for_each(|z| *z *= gamma);
        }
        for ((s, y), a) in pairs.iter().zip(alphas.iter().rev()) {
            let b = dot_w(w, y, &q) / dot_w(w, y, s);
            axpy(&mut q, a - b, s);
        }
        let d: Vec<Complex64> = obj.tangent(&u, q.into_iter().map(|z| -z).collect());
        let steepest: Vec<Complex64> = pg.iter().map(|z| -z).collect();
        let mut accepted = None;
        for (attempt, dir) in [d, steepest].into_iter().enumerate() {
            if attempt == 1 {
                pairs.clear();
            }
            let slope = settings.cell_area * dot(&g, &dir);
            if !(slope < 0.0) {
                continue;
            }
            accepted = line_search(obj, &u, residual, &dir, slope)?;
            if accepted.is_some() {
                break;
            }
        }
        let Some((un, vn)) = accepted else {
            return Err(Error::NotConverged {
                iterations,
                residual,
            });
        };
        previous = Some((u, pg));
        u = un;
        value = vn;
        history.push(value);
        iterations += 1;
    }
}
