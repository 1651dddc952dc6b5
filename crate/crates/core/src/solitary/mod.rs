//! Solitary waves: Nehari and mass-constrained minimisers, the L²-scaling
//! apparatus, linearisation diagnostics and orbit fitting.

mod descent;
mod linearization;
mod mass;
mod nehari;
mod orbit;
mod scaling;
mod velocity;

pub use linearization::{r1_diagnostics, r1_diagnostics_with_threshold, Multiplier, R1Diagnostics};
pub use mass::{solve_mass_constrained, MassMinimizer};
pub use nehari::{
    fix_phase, ground_state, initial_guess, nehari_project, solve_nehari, InitKind,
    SolitarySolution, SolverOptions, TAIL_BAND,
};
pub use orbit::{orbital_fit, OrbitFit};
pub use scaling::{
    action_along_scaling, psi_omega, psi_omega_with_threshold, relative_overlap, rescale_omega,
    rescale_omega_on_box, scaling_pairing, scaling_pairing_with_threshold,
    second_variation_coefficient, second_variation_scaling, second_variation_scaling_with_step,
    t_lambda, SecondVariation, DEFAULT_TAIL_THRESHOLD, SECOND_VARIATION_STEP,
};
pub use velocity::{concentrate, half_line_profile, test_function_bounds, TestFunctionBound};
