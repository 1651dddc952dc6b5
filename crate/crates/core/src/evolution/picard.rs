use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Representation};
use crate::grid::Grid;
use crate::symbol::Symbol;

use super::split::Nonlinearity;

#[derive(Debug, Clone)]
pub struct PicardResult {
    /// `ψ(T)` after the last sweep (physical).
    pub u: Field,
    /// `max_k ‖ψ^{j+1}(t_k) − ψ^j(t_k)‖` after each sweep `j`.
    pub distances: Vec<f64>,
    pub sweeps: usize,
}

/// Sweeps stop early once successive iterates agree to this relative level.
const STAGNATION: f64 = 1e-14;

fn group(grid: &Grid, t: f64) -> Vec<Complex64> {
    let sym = Symbol::HalfwaveGroup(t);
    let mut v = Vec::with_capacity(grid.len());
    for k in 0..grid.nx() {
        for m in 0..grid.ny() {
            v.push(sym.eval(grid, k, m));
        }
    }
    v
}

/// Fixed-point iteration of `ψ(t) = S(t)ψ₀ + iσ∫₀ᵗ S(t−τ)|ψ|^{p−1}ψ(τ)dτ`.
///
/// Works with `w(t) = S(−t)ψ(t)`, for which the map reads
/// `w ↦ ψ₀ + iσ∫₀ᵗ S(−τ)N(S(τ)w(τ))dτ`, on `n_steps + 1` uniform nodes with
/// the cumulative trapezoidal rule. Fails with `NonContraction` if the
/// distance between successive iterates stops decreasing before it reaches
/// round-off.
pub fn picard_solve(
    u0: &Field,
    t_final: f64,
    n_steps: usize,
    n_iter: usize,
    nl: Nonlinearity,
) -> Result<PicardResult> {
    if !(t_final > 0.0) || n_steps == 0 {
        return Err(Error::InvalidParameter("need T > 0 and at least one step".into()));
    }
    let grid = u0.grid().clone();
    let h = t_final / n_steps as f64;
    let w0 = u0.to_spectral().into_values();
    let scale = w0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let da = grid.cell_area();
    // S(t_k) for every node; t_k = k·h, S(−t_k) = conj(S(t_k))
    let forward: Vec<Vec<Complex64>> = (0..=n_steps).map(|k| group(&grid, k as f64 * h)).collect();
    let mut w: Vec<Vec<Complex64>> = vec![w0.clone(); n_steps + 1];
    let e = 0.5 * (nl.p - 1.0);
    let coef = Complex64::new(0.0, nl.sign);
    let mut distances = Vec::new();
    let mut sweeps = 0;
    for sweep in 0..n_iter {
        // integrand f_k = iσ S(−t_k) N(S(t_k) w_k)
        let f: Vec<Vec<Complex64>> = w
            .iter()
            .zip(&forward)
            .map(|(wk, sk)| {
                let psi: Vec<Complex64> = wk.iter().zip(sk).map(|(a, b)| a * b).collect();
                let mut phys = Field::from_values(&grid, psi, Representation::Spectral)
                    .expect("length matches")
                    .into_physical();
                for z in phys.values_mut() {
                    *z *= z.norm_sqr().max(0.0).powf(e);
                }
                phys.into_spectral()
                    .into_values()
                    .into_iter()
                    .zip(sk)
                    .map(|(n, s)| coef * n * s.conj())
                    .collect()
            })
            .collect();
        let mut next = Vec::with_capacity(n_steps + 1);
        let mut acc = w0.clone();
        next.push(acc.clone());
        for k in 1..=n_steps {
            for ((a, fa), fb) in acc.iter_mut().zip(&f[k - 1]).zip(&f[k]) {
                *a += 0.5 * h * (fa + fb);
            }
            next.push(acc.clone());
        }
        let dist = next
            .iter()
            .zip(&w)
            .map(|(a, b)| {
                a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>()
            })
            .fold(0.0, f64::max)
            .sqrt();
        w = next;
        sweeps = sweep + 1;
        let converged = dist <= STAGNATION * scale;
        distances.push(dist * da.sqrt());
        if let [.., a, b] = distances[..] {
            if b >= a && !converged {
                return Err(Error::NonContraction {
                    sweep: sweeps,
                    ratio: b / a,
                });
            }
        }
        if converged {
            break;
        }
    }
    let last: Vec<Complex64> = w[n_steps]
        .iter()
        .zip(&forward[n_steps])
        .map(|(a, b)| a * b)
        .collect();
    let u = Field::from_values(&grid, last, Representation::Spectral)?.into_physical();
    Ok(PicardResult {
        u,
        distances,
        sweeps,
    })
}
