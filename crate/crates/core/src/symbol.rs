//! Fourier multipliers for the linear operators of the model.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;

/// A Fourier multiplier `σ(ξ, η)`.
///
/// The odd-order symbols (`Dx`, `Dy`, `Transport`, and the transport part of
/// `ActionQuadratic`) vanish on the Nyquist mode of their axis, which has no
/// well-defined sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    /// `∂xx ↦ −ξ²`
    Dxx,
    /// `|Dy| ↦ |η|`
    AbsDy,
    /// `|Dy|^s ↦ |η|^s`, `s ∈ (0, 1]`
    FracDy(f64),
    /// Quadratic-form symbol of the transport term, `−v·η`.
    Transport(f64),
    /// `S(t) = exp(it(∂xx − |Dy|)) ↦ exp(it(−ξ² − |η|))`
    HalfwaveGroup(f64),
    /// `ξ² + |η| − v·η + ω`
    ActionQuadratic { omega: f64, v: f64 },
    /// `∂x ↦ iξ`
    Dx,
    /// `∂y ↦ iη`
    Dy,
}

impl Symbol {
    fn validate(&self) -> Result<()> {
        if let Symbol::FracDy(s) = *self {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "fractional order s = {s} outside (0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Value at spectral index `(k, m)` of `grid`.
    pub fn eval(&self, grid: &Grid, k: usize, m: usize) -> Complex64 {
        let xi = grid.xi()[k];
        let eta = grid.eta()[m];
        let nyq_x = k == grid.nyquist_x();
        let nyq_y = m == grid.nyquist_y();
        let re = |a: f64| Complex64::new(a, 0.0);
        match *self {
            Symbol::Dxx => re(-xi * xi),
            Symbol::AbsDy => re(eta.abs()),
            Symbol::FracDy(s) => re(eta.abs().powf(s)),
            Symbol::Transport(v) => re(if nyq_y { 0.0 } else { -v * eta }),
            Symbol::HalfwaveGroup(t) => Complex64::from_polar(1.0, -t * (xi * xi + eta.abs())),
            Symbol::ActionQuadratic { omega, v } => {
                let transport = if nyq_y { 0.0 } else { -v * eta };
                re(xi * xi + eta.abs() + transport + omega)
            }
            Symbol::Dx => Complex64::new(0.0, if nyq_x { 0.0 } else { xi }),
            Symbol::Dy => Complex64::new(0.0, if nyq_y { 0.0 } else { eta }),
        }
    }
}

/// Pointwise multiplication of the spectral coefficients of `f` by `symbol`.
/// The result comes back in the representation `f` was given in.
pub fn apply_symbol(f: &Field, symbol: Symbol) -> Result<Field> {
    symbol.validate()?;
    let grid = f.grid().clone();
    Ok(f.multiply_spectral(|k, m| symbol.eval(&grid, k, m)))
}

/// `Σ σ(k,m)·|û(k,m)|²·dx·dy` for a real symbol; the quadratic form
/// `⟨σ(D)u, u⟩`.
pub fn quadratic_form(f: &Field, symbol: Symbol) -> f64 {
    let s = f.to_spectral();
    let g = s.grid();
    let ny = g.ny();
    let mut acc = 0.0;
    for k in 0..g.nx() {
        for m in 0..ny {
            acc += symbol.eval(g, k, m).re * s.values()[k * ny + m].norm_sqr();
        }
    }
    acc * g.cell_area()
}
