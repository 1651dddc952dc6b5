//! Time integration of `i∂tψ + ∂xxψ − |Dy|ψ + |ψ|^{p−1}ψ = 0`.
//!
//! * [`strang_step`] and [`evolve`]: second-order splitting between the exact
//!   phase rotation `ψ ↦ ψ·e^{iσ dt|ψ|^{p−1}}` and the exact linear group.
//! * [`picard_solve`]: fixed-point iteration of the Duhamel formula, used as an
//!   independent reference.
//! * [`dispersive_decay_probe`]: sup-norm decay of the 1-D Schrödinger factor.

mod dispersive;
mod picard;
mod split;

pub use dispersive::{dispersive_decay_probe, DecayFit};
pub use picard::{picard_solve, PicardResult};
pub use split::{
    evolve, evolve_with, linear_propagate, max_symbol, strang_step, strang_step_with, AbortReason,
    EvolutionConfig, EvolutionTrace, Nonlinearity, Scheme,
};
