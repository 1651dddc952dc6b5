//! Pseudospectral laboratory for the focusing half-wave-Schrödinger equation
//!
//! ```text
//! i ∂t ψ + ∂xx ψ − |Dy| ψ + |ψ|^(p−1) ψ = 0      on a periodic box in (x, y)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`grid`], [`field`], [`symbol`]: periodic grid, unitary 2-D transforms and
//!   Fourier multipliers.
//! * [`fractional`], [`quadrature`]: the Gagliardo seminorm identity for `|Dy|^s`
//!   and the adaptive quadrature it relies on.
//! * [`functionals`]: mass, Hamiltonian, action, Nehari functional, X norm and
//!   the Gagliardo–Nirenberg quotient.
//! * [`solitary`]: ground states and traveling waves, the L²-scaling `T_λ`,
//!   linearization diagnostics and orbit fitting.
//! * [`evolution`]: Strang splitting, a Duhamel/Picard reference solver and
//!   conservation monitors.
//! * [`snapshot`]: the binary field snapshot format.

pub mod error;
pub mod evolution;
pub mod field;
pub mod fractional;
pub mod functionals;
pub mod grid;
pub mod quadrature;
pub mod resample;
pub mod snapshot;
pub mod solitary;
pub mod symbol;

mod fft;

pub use error::{Error, Result};
pub use field::{Direction, Field, Representation};
pub use functionals::{FunctionalReport, ModelParams};
pub use grid::Grid;
pub use symbol::Symbol;

pub use num_complex::Complex64;
