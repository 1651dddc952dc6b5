//! The mass-preserving scaling `T_λ`, the frequency rescaling of ground
//! states, and quantities built from the scaling generator.
//!
//! `T_λu(x, y) = λ^{3/4} u(λ^{1/2}x, λy)`; its generator at `λ = 1` is
//! `Gu = (3/4)u + (x/2)∂x u + y∂y u`. Both are taken about the mass centroid
//! of `u`, since the ground state is only determined up to translation.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::{action, action_gradient, potential, ModelParams};
use crate::resample::dilate;
use crate::symbol::{apply_symbol, Symbol};

use super::nehari::TAIL_BAND;

/// Tail fraction above which the weighted operators `x∂x`, `y∂y` are refused.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-3;

/// `T_λu` on the same grid, by band-limited resampling about the centroid.
pub fn t_lambda(u: &Field, lambda: f64) -> Result<Field> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be positive")));
    }
    if lambda == 1.0 {
        return Ok(u.clone());
    }
    let c = u.centroid();
    Ok(dilate(u, c, lambda.sqrt(), lambda)?.scaled(lambda.powf(0.75)))
}

/// `Q_ω(x, y) = ω^{1/(p−1)} Q₁(√ω x, ω y)` sampled exactly: the returned field
/// lives on the box `(lx/√ω, ly/ω)` with the same sample counts.
pub fn rescale_omega(q1: &Field, p: f64, omega: f64) -> Result<Field> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!("omega = {omega} must be positive")));
    }
    let grid = q1.grid().shrunk(omega.sqrt(), omega)?;
    let phys = q1.to_physical();
    let a = omega.powf(1.0 / (p - 1.0));
    let values = phys.values().iter().map(|z| z * a).collect();
    Field::from_values(&grid, values, crate::field::Representation::Physical)
}

/// The same rescaling evaluated on `q1`'s own box by band-limited
/// interpolation about the centroid. Points whose preimage falls outside the
/// original box are set to zero.
pub fn rescale_omega_on_box(q1: &Field, p: f64, omega: f64) -> Result<Field> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!("omega = {omega} must be positive")));
    }
    let c = q1.centroid();
    let (sx, sy) = (omega.sqrt(), omega);
    let mut out = dilate(q1, c, sx, sy)?.scaled(omega.powf(1.0 / (p - 1.0)));
    let g = q1.grid().clone();
    let (hx, hy) = (0.5 * g.lx(), 0.5 * g.ly());
    let ny = g.ny();
    for (idx, z) in out.values_mut().iter_mut().enumerate() {
        let (i, j) = (idx / ny, idx % ny);
        let (px, py) = (c.0 + sx * (g.x(i) - c.0), c.1 + sy * (g.y(j) - c.1));
        if px < -hx || px >= hx || py < -hy || py >= hy {
            *z = num_complex::Complex64::new(0.0, 0.0);
        }
    }
    Ok(out)
}

fn check_tail(u: &Field, threshold: f64) -> Result<()> {
    let fraction = u.tail_mass_fraction(TAIL_BAND);
    if fraction > threshold {
        return Err(Error::TailMass {
            fraction,
            threshold,
        });
    }
    Ok(())
}

/// `a·u + bx·(x − cx)∂x u + by·(y − cy)∂y u` with coordinates centred on the
/// centroid and wrapped into the box.
pub(crate) fn weighted_derivatives(u: &Field, a: f64, bx: f64, by: f64) -> Field {
    let phys = u.to_physical();
    let (cx, cy) = phys.centroid();
    let (xs, ys) = phys.centered_coordinates(cx, cy);
    let ux = apply_symbol(&phys, Symbol::Dx).expect("valid symbol");
    let uy = apply_symbol(&phys, Symbol::Dy).expect("valid symbol");
    let ny = ys.len();
    let mut out = phys.scaled(a);
    for (idx, z) in out.values_mut().iter_mut().enumerate() {
        let (i, j) = (idx / ny, idx % ny);
        *z += bx * xs[i] * ux.values()[idx] + by * ys[j] * uy.values()[idx];
    }
    out
}

/// `ψ = (3/4)q + (x/2)∂x q + y∂y q`, refusing fields whose tail fraction
/// exceeds [`DEFAULT_TAIL_THRESHOLD`].
pub fn psi_omega(q: &Field) -> Result<Field> {
    psi_omega_with_threshold(q, DEFAULT_TAIL_THRESHOLD)
}

pub fn psi_omega_with_threshold(q: &Field, tail_threshold: f64) -> Result<Field> {
    if q.norm_sq() == 0.0 {
        return Ok(Field::zeros(q.grid()));
    }
    check_tail(q, tail_threshold)?;
    Ok(weighted_derivatives(q, 0.75, 0.5, 1.0))
}

/// `−3(p−1)(3p−7)/(16(p+1))`, the factor multiplying `‖u‖_{p+1}^{p+1}` in
/// `d²/dλ² S(T_λu)` at `λ = 1`.
pub fn second_variation_coefficient(p: f64) -> f64 {
    -3.0 * (p - 1.0) * (3.0 * p - 7.0) / (16.0 * (p + 1.0))
}

/// Step used for the second central difference in `λ`.
pub const SECOND_VARIATION_STEP: f64 = 2e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondVariation {
    pub analytic: f64,
    pub numeric: f64,
}

impl SecondVariation {
    pub fn relative_error(&self) -> f64 {
        (self.analytic - self.numeric).abs() / self.analytic.abs()
    }
}

/// The closed form next to `(S(T_{1+h}q) − 2S(q) + S(T_{1−h}q))/h²`.
pub fn second_variation_scaling(q: &Field, params: &ModelParams) -> Result<SecondVariation> {
    second_variation_scaling_with_step(q, params, SECOND_VARIATION_STEP)
}

pub fn second_variation_scaling_with_step(
    q: &Field,
    params: &ModelParams,
    h: f64,
) -> Result<SecondVariation> {
    if params.v != 0.0 {
        return Err(Error::InvalidParameter("second variation is defined for v = 0".into()));
    }
    let analytic = second_variation_coefficient(params.p) * potential(q, params.p);
    let s0 = action(q, params);
    let sp = action(&t_lambda(q, 1.0 + h)?, params);
    let sm = action(&t_lambda(q, 1.0 - h)?, params);
    Ok(SecondVariation {
        analytic,
        numeric: (sp - 2.0 * s0 + sm) / (h * h),
    })
}

/// `S(T_λq)` at each `λ`.
pub fn action_along_scaling(q: &Field, params: &ModelParams, lambdas: &[f64]) -> Result<Vec<f64>> {
    lambdas
        .iter()
        .map(|&l| Ok(action(&t_lambda(q, l)?, params)))
        .collect()
}

/// `re⟨S'(u), Gu⟩ = d/dλ S(T_λu)` at `λ = 1`.
pub fn scaling_pairing(u: &Field, params: &ModelParams) -> Result<f64> {
    scaling_pairing_with_threshold(u, params, DEFAULT_TAIL_THRESHOLD)
}

pub fn scaling_pairing_with_threshold(
    u: &Field,
    params: &ModelParams,
    tail_threshold: f64,
) -> Result<f64> {
    if params.v != 0.0 {
        return Err(Error::InvalidParameter("scaling pairing is defined for v = 0".into()));
    }
    if u.norm_sq() == 0.0 {
        return Ok(0.0);
    }
    check_tail(u, tail_threshold)?;
    let g = action_gradient(u, params);
    let dir = weighted_derivatives(u, 0.75, 0.5, 1.0);
    g.real_inner(&dir)
}

/// `re⟨u, w⟩ / ‖u‖²`
pub fn relative_overlap(u: &Field, w: &Field) -> Result<f64> {
    if u.norm_sq() == 0.0 {
        return Err(Error::Degenerate("overlap relative to a zero field".into()));
    }
    Ok(u.inner(w)?.re / u.norm_sq())
}
