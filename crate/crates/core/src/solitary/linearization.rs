//! The ω-derivative of the ground-state family and its multiplier
//! representation.
//!
//! `R₁ = Q₁/(p−1) + (x/2)∂x Q₁ + y∂y Q₁` solves
//! `−∂xx R₁ + |Dy|R₁ + R₁ − pQ₁^{p−1}R₁ = −Q₁`, so with
//! `P = −Q₁ + pQ₁^{p−1}R₁` the multipliers
//!
//! ```text
//! Φ₁ = 1/(ξ² + |η| + ω)    Φ₂ = −ξ²/(ξ² + |η| + ω)    Φ₃ = |η|/(ξ² + |η| + ω)
//! ```
//!
//! recover `R₁`, `∂xx R₁` and `|Dy|R₁` from `P`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;

use super::scaling::{weighted_derivatives, DEFAULT_TAIL_THRESHOLD};
use super::nehari::TAIL_BAND;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplier {
    Phi1,
    Phi2,
    Phi3,
}

impl Multiplier {
    pub fn eval(self, grid: &Grid, k: usize, m: usize, omega: f64) -> f64 {
        let xi2 = grid.xi()[k].powi(2);
        let eta = grid.eta()[m].abs();
        let d = xi2 + eta + omega;
        match self {
            Multiplier::Phi1 => 1.0 / d,
            Multiplier::Phi2 => -xi2 / d,
            Multiplier::Phi3 => eta / d,
        }
    }

    pub fn apply(self, f: &Field, omega: f64) -> Field {
        let g = f.grid().clone();
        f.multiply_spectral(|k, m| Complex64::new(self.eval(&g, k, m, omega), 0.0))
    }

    /// Largest absolute value on the grid.
    pub fn sup(self, grid: &Grid, omega: f64) -> f64 {
        let mut best: f64 = 0.0;
        for k in 0..grid.nx() {
            for m in 0..grid.ny() {
                best = best.max(self.eval(grid, k, m, omega).abs());
            }
        }
        best
    }
}

#[derive(Debug, Clone)]
pub struct R1Diagnostics {
    pub r1: Field,
    /// `P = −Q₁ + pQ₁^{p−1}R₁`
    pub source: Field,
    /// `‖−∂xx R₁ + |Dy|R₁ + R₁ − pQ₁^{p−1}R₁ + Q₁‖ / ‖Q₁‖`
    pub linearized_residual: f64,
    /// `‖R₁ − F⁻¹[Φ₁ F(P)]‖ / ‖R₁‖`
    pub multiplier_roundtrip_error: f64,
    /// `‖∂xx R₁ − F⁻¹[Φ₂ F(P)]‖ / ‖∂xx R₁‖`
    pub dxx_roundtrip_error: f64,
    /// `‖|Dy|R₁ − F⁻¹[Φ₃ F(P)]‖ / ‖|Dy|R₁‖`
    pub abs_dy_roundtrip_error: f64,
    /// `max |ωΦ₁ − Φ₂ + Φ₃ − 1|` over the grid.
    pub partition_defect: f64,
    pub tail_mass_fraction: f64,
    /// The multiplier representation is stated for `7/3 < p < 5`.
    pub outside_stated_range: bool,
}

/// Build `R₁` from a real `ω = 1` ground state and measure both identities.
pub fn r1_diagnostics(q1: &Field, p: f64) -> Result<R1Diagnostics> {
    r1_diagnostics_with_threshold(q1, p, DEFAULT_TAIL_THRESHOLD)
}

pub fn r1_diagnostics_with_threshold(q1: &Field, p: f64, tail_threshold: f64) -> Result<R1Diagnostics> {
    let omega = 1.0;
    let tail = q1.tail_mass_fraction(TAIL_BAND);
    if tail > tail_threshold {
        return Err(Error::TailMass {
            fraction: tail,
            threshold: tail_threshold,
        });
    }
    let q = q1.to_physical();
    let qn = q.l2_norm();
    if qn == 0.0 {
        return Err(Error::Degenerate("zero ground state".into()));
    }
    let r1 = weighted_derivatives(&q, 1.0 / (p - 1.0), 0.5, 1.0);
    let e = p - 1.0;
    let mut source = r1.clone();
    for (s, z) in source.values_mut().iter_mut().zip(q.values()) {
        *s = p * z.norm_sqr().powf(0.5 * e) * *s - z;
    }
    let g = q.grid().clone();
    let lin = r1.multiply_spectral(|k, m| {
        Complex64::new(1.0 / Multiplier::Phi1.eval(&g, k, m, omega), 0.0)
    });
    let defect = &lin - &source;
    let rel = |a: &Field, b: &Field| (a - b).l2_norm() / a.l2_norm();
    let dxx = r1.multiply_spectral(|k, _| Complex64::new(-g.xi()[k].powi(2), 0.0));
    let ady = r1.multiply_spectral(|_, m| Complex64::new(g.eta()[m].abs(), 0.0));
    let mut partition: f64 = 0.0;
    for k in 0..g.nx() {
        for m in 0..g.ny() {
            let v = omega * Multiplier::Phi1.eval(&g, k, m, omega)
                - Multiplier::Phi2.eval(&g, k, m, omega)
                + Multiplier::Phi3.eval(&g, k, m, omega)
                - 1.0;
            partition = partition.max(v.abs());
        }
    }
    Ok(R1Diagnostics {
        linearized_residual: defect.l2_norm() / qn,
        multiplier_roundtrip_error: rel(&r1, &Multiplier::Phi1.apply(&source, omega)),
        dxx_roundtrip_error: rel(&dxx, &Multiplier::Phi2.apply(&source, omega)),
        abs_dy_roundtrip_error: rel(&ady, &Multiplier::Phi3.apply(&source, omega)),
        partition_defect: partition,
        tail_mass_fraction: tail,
        outside_stated_range: !(p > 7.0 / 3.0 && p < 5.0),
        r1,
        source,
    })
}
