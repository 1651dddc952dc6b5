//! The concentrating family used to bound the traveling-wave level from
//! above as `v → 1`.
//!
//! For `φ` with spectrum in `η ≥ 0`, `φ_λ(x, y) = λ φ(x, λ^α y)` and
//! `v = 1 − λ^{−α}`, every term of the quadratic form scales like `λ^{2−α}`,
//! so `I(φ_λ) → 0` for `α > 2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Representation};
use crate::functionals::{i_value, nehari, ModelParams};
use crate::grid::Grid;

/// `φ̂(ξ, η) = e^{−ξ²/2} η e^{−η}` for `η > 0` and zero otherwise, in physical
/// representation.
pub fn half_line_profile(grid: &Grid) -> Field {
    let mut values = Vec::with_capacity(grid.len());
    for &xi in grid.xi() {
        for (m, &eta) in grid.eta().iter().enumerate() {
            let keep = eta > 0.0 && m != grid.nyquist_y();
            values.push(if keep {
                Complex64::new((-0.5 * xi * xi).exp() * eta * (-eta).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            });
        }
    }
    let f = Field::from_values(grid, values, Representation::Spectral).expect("length matches");
    let f = f.into_physical();
    let n = f.l2_norm();
    f.scaled(1.0 / n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunctionBound {
    pub lambda: f64,
    pub v: f64,
    pub i_value: f64,
    pub nehari: f64,
}

/// `φ_λ` sampled exactly on the box `(lx, ly/λ^α)`.
pub fn concentrate(phi: &Field, lambda: f64, alpha: f64) -> Result<Field> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be positive")));
    }
    let grid = phi.grid().shrunk(1.0, lambda.powf(alpha))?;
    let values = phi.to_physical().values().iter().map(|z| z * lambda).collect();
    Field::from_values(&grid, values, Representation::Physical)
}

/// `I(φ_λ)` and `N(φ_λ)` at `v = 1 − λ^{−α}` for each `λ`.
pub fn test_function_bounds(
    phi: &Field,
    p: f64,
    omega: f64,
    alpha: f64,
    lambdas: &[f64],
) -> Result<Vec<TestFunctionBound>> {
    lambdas
        .iter()
        .map(|&lambda| {
            let v = 1.0 - lambda.powf(-alpha);
            let params = ModelParams::new(p, omega, v)?;
            let f = concentrate(phi, lambda, alpha)?;
            Ok(TestFunctionBound {
                lambda,
                v,
                i_value: i_value(&f, &params),
                nehari: nehari(&f, &params),
            })
        })
        .collect()
}
