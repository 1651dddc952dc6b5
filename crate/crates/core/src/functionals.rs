//! Scalar functionals of the model and the gradient of the action.
//!
//! With `Q(u) = ‖∂x u‖² + ⟨|Dy|u, u⟩ − v⟨η u, u⟩ + ω‖u‖²` (the quadratic form
//! of the symbol `ξ² + |η| − vη + ω`) and `P(u) = ‖u‖_{p+1}^{p+1}`:
//!
//! ```text
//! M = ½‖u‖²                 H = ½(‖∂x u‖² + ⟨|Dy|u,u⟩) − P/(p+1)
//! S = ½Q − P/(p+1)          N = Q − P          I = S − N/(p+1) = (p−1)/(2(p+1))·Q
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::symbol::{apply_symbol, Symbol};

/// Nonlinearity exponent `p`, frequency `ω` and velocity `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub p: f64,
    pub omega: f64,
    pub v: f64,
}

impl ModelParams {
    /// Checks `1 < p ≤ 5`, `ω > 0` and `|v| < 1`.
    pub fn new(p: f64, omega: f64, v: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 5.0) {
            return Err(Error::InvalidParameter(format!("p = {p} outside (1, 5]")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega = {omega} must be positive")));
        }
        if !(v.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!("|v| = {} must be below 1", v.abs())));
        }
        Ok(Self { p, omega, v })
    }

    pub fn standing(p: f64, omega: f64) -> Result<Self> {
        Self::new(p, omega, 0.0)
    }

    /// Variational routines additionally need `p < 5`.
    pub fn require_variational(&self) -> Result<()> {
        if self.p >= 5.0 {
            return Err(Error::InvalidParameter(format!(
                "variational problems need 1 < p < 5, got p = {}",
                self.p
            )));
        }
        Ok(())
    }

    /// Critical regularity `s_p = 3/2 − 2/(p−1)`; zero at the L²-critical
    /// exponent `p = 7/3`.
    pub fn s_p(&self) -> f64 {
        critical_regularity(self.p)
    }

    /// Frequency whose ground state carries mass `mu`, given the squared L²
    /// norm of the `ω = 1` ground state: `ω(μ) = (2μ/‖Q₁‖²)^(−1/s_p)`.
    pub fn omega_for_mass(&self, mu: f64, q1_l2_sq: f64) -> f64 {
        (2.0 * mu / q1_l2_sq).powf(-1.0 / self.s_p())
    }

    pub fn symbol(&self) -> Symbol {
        Symbol::ActionQuadratic {
            omega: self.omega,
            v: self.v,
        }
    }
}

pub fn critical_regularity(p: f64) -> f64 {
    1.5 - 2.0 / (p - 1.0)
}

/// The spectral sums every functional is assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticParts {
    /// `‖u‖²`
    pub l2_sq: f64,
    /// `‖∂x u‖²`
    pub dx_sq: f64,
    /// `⟨|Dy|u, u⟩ = ‖|Dy|^{1/2}u‖²`
    pub half_dy_sq: f64,
    /// `⟨ηu, u⟩` with the Nyquist η-mode excluded.
    pub momentum: f64,
}

impl QuadraticParts {
    pub fn of(u: &Field) -> Self {
        let s = u.to_spectral();
        let g = s.grid();
        let ny = g.ny();
        let nyq = g.nyquist_y();
        let (mut l2, mut dx, mut dy, mut mom) = (0.0, 0.0, 0.0, 0.0);
        for (k, &xi) in g.xi().iter().enumerate() {
            let row = &s.values()[k * ny..(k + 1) * ny];
            for (m, (z, &eta)) in row.iter().zip(g.eta()).enumerate() {
                let w = z.norm_sqr();
                l2 += w;
                dx += xi * xi * w;
                dy += eta.abs() * w;
                if m != nyq {
                    mom += eta * w;
                }
            }
        }
        let da = g.cell_area();
        Self {
            l2_sq: l2 * da,
            dx_sq: dx * da,
            half_dy_sq: dy * da,
            momentum: mom * da,
        }
    }

    /// Quadratic form of `ξ² + |η| − vη + ω`.
    pub fn quadratic(&self, omega: f64, v: f64) -> f64 {
        self.dx_sq + self.half_dy_sq - v * self.momentum + omega * self.l2_sq
    }
}

/// `|u|^{p+1}` summed as `(|u|²)^{(p+1)/2}`.
pub fn potential(u: &Field, p: f64) -> f64 {
    let phys = u.to_physical();
    let e = 0.5 * (p + 1.0);
    phys.values()
        .iter()
        .map(|z| z.norm_sqr().max(0.0).powf(e))
        .sum::<f64>()
        * u.grid().cell_area()
}

pub fn mass(u: &Field) -> f64 {
    0.5 * u.norm_sq()
}

pub fn hamiltonian(u: &Field, p: f64) -> f64 {
    let q = QuadraticParts::of(u);
    0.5 * (q.dx_sq + q.half_dy_sq) - potential(u, p) / (p + 1.0)
}

/// Hamiltonian with nonlinearity sign `σ` (`+1` focusing, `−1` defocusing).
pub fn hamiltonian_with_sign(u: &Field, p: f64, sign: f64) -> f64 {
    let q = QuadraticParts::of(u);
    0.5 * (q.dx_sq + q.half_dy_sq) - sign * potential(u, p) / (p + 1.0)
}

pub fn action(u: &Field, params: &ModelParams) -> f64 {
    let q = QuadraticParts::of(u).quadratic(params.omega, params.v);
    0.5 * q - potential(u, params.p) / (params.p + 1.0)
}

pub fn nehari(u: &Field, params: &ModelParams) -> f64 {
    QuadraticParts::of(u).quadratic(params.omega, params.v) - potential(u, params.p)
}

pub fn i_value(u: &Field, params: &ModelParams) -> f64 {
    let p = params.p;
    (0.5 - 1.0 / (p + 1.0)) * QuadraticParts::of(u).quadratic(params.omega, params.v)
}

/// `‖u‖_X = (‖∂x u‖² + ‖|Dy|^{1/2}u‖² + ‖u‖²)^{1/2}`
pub fn x_norm(u: &Field) -> f64 {
    let q = QuadraticParts::of(u);
    (q.dx_sq + q.half_dy_sq + q.l2_sq).sqrt()
}

/// `⟨u, w⟩_X` (complex, conjugate-linear in `w`).
pub fn x_inner(u: &Field, w: &Field) -> Result<Complex64> {
    let a = u.to_spectral();
    let b = w.to_spectral();
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let g = a.grid();
    let ny = g.ny();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &xi) in g.xi().iter().enumerate() {
        for (m, &eta) in g.eta().iter().enumerate() {
            let idx = k * ny + m;
            acc += (1.0 + xi * xi + eta.abs()) * a.values()[idx] * b.values()[idx].conj();
        }
    }
    Ok(acc * g.cell_area())
}

/// `‖u‖_{p+1}^{p+1} / (‖∂x u‖^{(p−1)/2} ‖|Dy|^{1/2}u‖^{p−1} ‖u‖^{(5−p)/2})`
pub fn gn_quotient(u: &Field, p: f64) -> Result<f64> {
    let q = QuadraticParts::of(u);
    let (a, b, c) = (q.dx_sq.sqrt(), q.half_dy_sq.sqrt(), q.l2_sq.sqrt());
    if a == 0.0 || b == 0.0 || c == 0.0 {
        return Err(Error::Degenerate(
            "Gagliardo–Nirenberg quotient undefined: a factor norm vanishes".into(),
        ));
    }
    let denom = a.powf(0.5 * (p - 1.0)) * b.powf(p - 1.0) * c.powf(0.5 * (5.0 - p));
    Ok(potential(u, p) / denom)
}

/// `|u|^{p−1}u` in physical space, optionally followed by the 2/3-rule filter.
pub fn nonlinearity(u: &Field, p: f64, dealias: bool) -> Field {
    let e = 0.5 * (p - 1.0);
    let n = u.map_physical(|z| z * z.norm_sqr().max(0.0).powf(e));
    if dealias {
        n.low_pass(2.0 / 3.0).into_physical()
    } else {
        n
    }
}

/// `S'(u) = (−∂xx + |Dy| + (transport) + ω)u − |u|^{p−1}u`, returned in
/// physical representation. Duality is `re ∫ f·conj(g)`.
pub fn action_gradient(u: &Field, params: &ModelParams) -> Field {
    action_gradient_with(u, params, false)
}

pub fn action_gradient_with(u: &Field, params: &ModelParams, dealias: bool) -> Field {
    let lin = apply_symbol(&u.to_spectral(), params.symbol())
        .expect("action symbol is always valid")
        .into_physical();
    let n = nonlinearity(u, params.p, dealias);
    &lin - &n
}

/// Every scalar functional at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalReport {
    pub mass: f64,
    pub hamiltonian: f64,
    pub action: f64,
    pub nehari: f64,
    pub i_value: f64,
    pub x_norm: f64,
    pub lp1_norm: f64,
    pub gn_quotient: f64,
    pub quadratic: f64,
    pub potential: f64,
}

impl FunctionalReport {
    /// `gn_quotient` is reported as NaN when one of its factor norms vanishes.
    pub fn of(u: &Field, params: &ModelParams) -> Self {
        let p = params.p;
        let q = QuadraticParts::of(u);
        let pot = potential(u, p);
        let quad = q.quadratic(params.omega, params.v);
        Self {
            mass: 0.5 * q.l2_sq,
            hamiltonian: 0.5 * (q.dx_sq + q.half_dy_sq) - pot / (p + 1.0),
            action: 0.5 * quad - pot / (p + 1.0),
            nehari: quad - pot,
            i_value: (0.5 - 1.0 / (p + 1.0)) * quad,
            x_norm: (q.dx_sq + q.half_dy_sq + q.l2_sq).sqrt(),
            lp1_norm: pot.powf(1.0 / (p + 1.0)),
            gn_quotient: gn_quotient(u, p).unwrap_or(f64::NAN),
            quadratic: quad,
            potential: pot,
        }
    }
}
