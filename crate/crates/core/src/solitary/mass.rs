//! Minimisation of the Hamiltonian at fixed mass.

use num_complex::Complex64;

use super::descent::{self, Objective, Settings};
use crate::error::{Error, Result};
use crate::field::{Field, Representation};
use crate::functionals::{critical_regularity, hamiltonian, nonlinearity, potential};
use crate::grid::Grid;

/// A mass-constrained minimiser.
#[derive(Debug, Clone)]
pub struct MassMinimizer {
    pub mu: f64,
    pub p: f64,
    /// Physical representation.
    pub u: Field,
    /// `H(u)`, an upper bound for the constrained infimum.
    pub energy: f64,
    /// `−re⟨H'(u), u⟩/‖u‖²`, the frequency of the corresponding standing wave.
    pub omega_multiplier: f64,
    /// `‖H'(u) + ω u‖/‖u‖` with `ω` the multiplier.
    pub residual: f64,
    pub iterations: usize,
    pub energy_history: Vec<f64>,
}

struct MassObjective<'a> {
    grid: &'a Grid,
    p: f64,
    mu: f64,
    kinetic: Vec<f64>,
    weights: Vec<f64>,
}

impl MassObjective<'_> {
    fn field(&self, u: &[Complex64]) -> Field {
        Field::from_values(self.grid, u.to_vec(), Representation::Spectral).expect("length checked")
    }
}

fn re_dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
}

impl Objective for MassObjective<'_> {
    fn retract(&self, mut u: Vec<Complex64>) -> Result<(Vec<Complex64>, f64)> {
        let da = self.grid.cell_area();
        let l2: f64 = u.iter().map(|z| z.norm_sqr()).sum::<f64>() * da;
        if !(l2 > 0.0) || !l2.is_finite() {
            return Err(Error::Collapse { iterations: 0 });
        }
        let c = (2.0 * self.mu / l2).sqrt();
        u.iter_mut().for_each(|z| *z *= c);
        let kin: f64 = self.kinetic.iter().zip(&u).map(|(s, z)| s * z.norm_sqr()).sum::<f64>() * da;
        let pot = potential(&self.field(&u), self.p);
        Ok((u, 0.5 * kin - pot / (self.p + 1.0)))
    }

    fn gradient(&self, u: &[Complex64]) -> Vec<Complex64> {
        let n = nonlinearity(&self.field(u), self.p, false).into_spectral();
        u.iter()
            .zip(&self.kinetic)
            .zip(n.values())
            .map(|((z, s), nz)| s * z - nz)
            .collect()
    }

    fn residual(&self, u: &[Complex64], g: &[Complex64]) -> f64 {
        let uu = re_dot(u, u);
        let lam = re_dot(g, u) / uu;
        let r: f64 = g.iter().zip(u).map(|(g, u)| (g - lam * u).norm_sqr()).sum();
        (r / uu).sqrt()
    }

    /// W-orthogonal projection onto `{re⟨d, u⟩ = 0}`: subtracts a multiple of `W⁻¹u`.
    fn tangent(&self, u: &[Complex64], mut d: Vec<Complex64>) -> Vec<Complex64> {
        let wu: f64 = u.iter().zip(&self.weights).map(|(z, w)| z.norm_sqr() / w).sum();
        let a = re_dot(&d, u) / wu;
        d.iter_mut()
            .zip(u.iter().zip(&self.weights))
            .for_each(|(d, (u, w))| *d -= a * u / w);
        d
    }
}

/// Minimise `H` on `{M(u) = μ}` for `1 < p < 7/3`.
pub fn solve_mass_constrained(
    mu: f64,
    p: f64,
    init: &Field,
    tol: f64,
    max_iter: usize,
) -> Result<MassMinimizer> {
    if !(p > 1.0 && critical_regularity(p) < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "the mass-constrained problem needs 1 < p < 7/3, got p = {p}"
        )));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mass mu = {mu} must be positive")));
    }
    if init.norm_sq() == 0.0 || !init.is_finite() {
        return Err(Error::InvalidParameter("initial field must be nonzero and finite".into()));
    }
    let grid = init.grid().clone();
    let mut kinetic = Vec::with_capacity(grid.len());
    let mut weights = Vec::with_capacity(grid.len());
    for &xi in grid.xi() {
        for &eta in grid.eta() {
            kinetic.push(xi * xi + eta.abs());
            weights.push(xi * xi + eta.abs() + 1.0);
        }
    }
    let obj = MassObjective {
        grid: &grid,
        p,
        mu,
        kinetic,
        weights,
    };
    let settings = Settings {
        tol,
        max_iter,
        memory: 8,
        cell_area: grid.cell_area(),
    };
    let out = descent::minimize(&obj, init.to_spectral().into_values(), &obj.weights, &settings)?;
    let u = obj.field(&out.u).into_physical();
    let g = obj.field(&obj.gradient(&out.u));
    let omega = -g.real_inner(&u)? / u.norm_sq();
    Ok(MassMinimizer {
        mu,
        p,
        energy: hamiltonian(&u, p),
        omega_multiplier: omega,
        residual: out.residual,
        iterations: out.iterations,
        energy_history: out.history,
        u,
    })
}
