use std::f64::consts::PI;

use hwlab::functionals::{action, hamiltonian, mass, x_norm};
use hwlab::solitary::*;
use hwlab::{Complex64, Error, Field, Grid, ModelParams};

fn small_grid() -> Grid {
    Grid::new(64, 64, 20.0, 20.0).unwrap()
}

fn solve(p: f64, grid: &Grid) -> SolitarySolution {
    let params = ModelParams::standing(p, 1.0).unwrap();
    ground_state(&params, grid, &SolverOptions::default()).unwrap()
}

#[test]
fn ground_state_residuals_meet_tolerance() {
    let s = solve(2.0, &small_grid());
    assert!(s.gradient_residual <= 1e-9, "{}", s.gradient_residual);
    assert!(s.nehari_residual.abs() <= 1e-12, "{}", s.nehari_residual);
    assert!(s.action_value > 0.0);
    // non-increasing action history up to round-off
    for w in s.action_history.windows(2) {
        assert!(w[1] <= w[0] + 1e-12 * w[0].abs());
    }
    // real and positive at the peak
    let peak = s.q.values().iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
    assert!(peak.re > 0.0 && peak.im == 0.0);
}

#[test]
fn independent_starts_reach_the_same_level() {
    let grid = small_grid();
    let params = ModelParams::standing(2.0, 1.0).unwrap();
    let opts = SolverOptions::default();
    let a = solve_nehari(&params, &initial_guess(InitKind::default(), &grid, &params), &opts).unwrap();
    let b = solve_nehari(
        &params,
        &initial_guess(InitKind::SechLorentzian { wx: 1.0, wy: 1.5 }, &grid, &params),
        &opts,
    )
    .unwrap();
    let c = solve_nehari(&params, &initial_guess(InitKind::Random { seed: 7 }, &grid, &params), &opts)
        .unwrap();
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
    assert!(rel(a.action_value, b.action_value) < 1e-9);
    assert!(rel(a.action_value, c.action_value) < 1e-9);
    let fit = orbital_fit(&b.q, &a.q).unwrap();
    assert!(fit.distance < 1e-6 * x_norm(&a.q), "{}", fit.distance);
}

#[test]
fn solver_rejects_bad_input() {
    let grid = small_grid();
    let params = ModelParams::standing(2.0, 1.0).unwrap();
    let zero = Field::zeros(&grid);
    assert!(matches!(
        solve_nehari(&params, &zero, &SolverOptions::default()),
        Err(Error::InvalidParameter(_))
    ));
    let quintic = ModelParams::standing(5.0, 1.0).unwrap();
    assert!(ground_state(&quintic, &grid, &SolverOptions::default()).is_err());
}

#[test]
fn warm_restart_is_a_fixed_point() {
    let grid = small_grid();
    let s = solve(2.0, &grid);
    let again = solve_nehari(&s.params, &s.q, &SolverOptions::default()).unwrap();
    assert!(again.iterations <= 1, "{}", again.iterations);
    assert!((again.action_value - s.action_value).abs() < 1e-12 * s.action_value);
}

#[test]
fn orbit_fit_recovers_a_known_symmetry() {
    // fine enough in y that the Nyquist modes carry no weight
    let grid = Grid::new(64, 512, 20.0, 20.0).unwrap();
    let q = solve(2.0, &grid).q;
    let rot = Complex64::from_polar(1.0, PI / 3.0);

    let u = &q.translated(0.7, -1.3) * rot;
    let fit = orbital_fit(&u, &q).unwrap();
    assert!((fit.theta - PI / 3.0).abs() < 1e-10, "{}", fit.theta);
    assert!((fit.tau1 - 0.7).abs() < 1e-9 && (fit.tau2 + 1.3).abs() < 1e-9, "{fit:?}");
    assert!(fit.distance < 1e-9 * x_norm(&q));

    // out[i] = q[i - 5] is q(· − 5dx)
    let u = &q.circular_shift(5, -3) * rot;
    let fit = orbital_fit(&u, &q).unwrap();
    assert!((fit.tau1 + 5.0 * grid.dx()).abs() < 1e-9, "{fit:?}");
    assert!((fit.tau2 - 3.0 * grid.dy()).abs() < 1e-9, "{fit:?}");
    assert!(fit.distance < 1e-9 * x_norm(&q));
}

#[test]
fn orbit_fit_distance_is_bounded_by_the_untransformed_distance() {
    let grid = small_grid();
    let q = solve(2.0, &grid).q;
    let u = Field::from_real_fn(&grid, |x, y| (-(x * x + y * y) / 3.0).exp());
    let fit = orbital_fit(&u, &q).unwrap();
    assert!(fit.distance <= x_norm(&(&u - &q)) * (1.0 + 1e-12));
    let zero = orbital_fit(&u, &Field::zeros(&grid)).unwrap();
    assert!((zero.distance - x_norm(&u)).abs() < 1e-12 * x_norm(&u));
    let other = Field::zeros(&Grid::new(32, 32, 20.0, 20.0).unwrap());
    assert!(matches!(orbital_fit(&other, &q), Err(Error::GridMismatch)));
}

#[test]
fn fix_phase_undoes_a_gauge_rotation() {
    let q = solve(2.0, &small_grid()).q;
    let rotated = &q * Complex64::from_polar(1.0, 2.1);
    let back = fix_phase(&rotated);
    assert!((&back - &q).l2_norm() < 1e-12 * q.l2_norm());
}

#[test]
fn frequency_rescaling_is_exact_on_the_shrunk_grid() {
    let grid = small_grid();
    let q1 = solve(2.0, &grid).q;
    let q2_pred = rescale_omega(&q1, 2.0, 2.0).unwrap();
    let params = ModelParams::standing(2.0, 2.0).unwrap();
    let q2 = ground_state(&params, q2_pred.grid(), &SolverOptions::default()).unwrap();
    let fit = orbital_fit(&q2.q, &q2_pred).unwrap();
    assert!(fit.distance < 1e-7 * x_norm(&q2.q), "{}", fit.distance / x_norm(&q2.q));
    let s_p = params.s_p();
    let ratio = mass(&q2.q) / mass(&q1);
    assert!((ratio - 2f64.powf(-s_p)).abs() < 1e-9, "{ratio}");
}

#[test]
fn second_variation_coefficient_changes_sign_at_the_critical_power() {
    assert!(second_variation_coefficient(2.0) > 0.0);
    assert!(second_variation_coefficient(7.0 / 3.0).abs() < 1e-15);
    assert!(second_variation_coefficient(3.0) < 0.0);
    assert!((second_variation_coefficient(3.0) + 3.0 * 2.0 * 2.0 / 64.0).abs() < 1e-15);
}

#[test]
fn t_lambda_preserves_mass_and_is_identity_at_one() {
    let grid = Grid::new(64, 128, 20.0, 40.0).unwrap();
    let q = solve(2.0, &grid).q;
    let same = t_lambda(&q, 1.0).unwrap();
    assert!((&same - &q).l2_norm() < 1e-10 * q.l2_norm());
    let wider = t_lambda(&q, 0.9).unwrap();
    assert!((mass(&wider) - mass(&q)).abs() < 1e-4 * mass(&q));
}

#[test]
fn scaling_profile_is_minimal_at_one_for_quadratic_power() {
    let grid = Grid::new(64, 128, 20.0, 40.0).unwrap();
    let s = solve(2.0, &grid);
    let lambdas = [0.9, 1.0, 1.1];
    let vals = action_along_scaling(&s.q, &s.params, &lambdas).unwrap();
    assert!(vals[0] > vals[1] && vals[2] > vals[1], "{vals:?}");
    assert!((action(&s.q, &s.params) - s.action_value).abs() < 1e-12 * s.action_value);
}

#[test]
fn psi_and_overlap_handle_degenerate_input() {
    let grid = small_grid();
    let zero = Field::zeros(&grid);
    let psi = psi_omega(&zero).unwrap();
    assert_eq!(psi.l2_norm(), 0.0);
    assert!(relative_overlap(&zero, &psi).is_err());
    let q = solve(2.0, &grid).q;
    assert!((relative_overlap(&q, &q).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn psi_is_rejected_when_the_box_is_too_small() {
    let grid = Grid::new(32, 32, 6.0, 6.0).unwrap();
    let q = solve(3.0, &grid).q;
    assert!(matches!(psi_omega(&q), Err(Error::TailMass { .. })));
}

#[test]
fn multiplier_partition_of_unity() {
    let grid = Grid::new(64, 128, 20.0, 40.0).unwrap();
    let q = solve(3.0, &grid).q;
    let d = r1_diagnostics_with_threshold(&q, 3.0, 1.0).unwrap();
    assert!(d.partition_defect < 1e-13, "{}", d.partition_defect);
    assert!(d.linearized_residual.is_finite());
    for m in [Multiplier::Phi1, Multiplier::Phi2, Multiplier::Phi3] {
        assert!(m.sup(&grid, 1.0).is_finite());
    }
}

#[test]
fn mass_constrained_minimiser_recovers_the_ground_state_frequency() {
    let grid = small_grid();
    let q = solve(2.0, &grid).q;
    let mu = mass(&q);
    let init = Field::from_real_fn(&grid, |x, y| (-(x * x) / 4.0 - y * y / 16.0).exp());
    let m = solve_mass_constrained(mu, 2.0, &init, 1e-9, 3000).unwrap();
    assert!((mass(&m.u) - mu).abs() < 1e-12 * mu);
    assert!(m.energy <= hamiltonian(&q, 2.0) + 1e-9 * m.energy.abs());
    assert!((m.omega_multiplier - 1.0).abs() < 1e-6, "{}", m.omega_multiplier);
}

#[test]
fn mass_constrained_rejects_supercritical_power() {
    let grid = small_grid();
    let init = Field::from_real_fn(&grid, |x, y| (-(x * x) - y * y).exp());
    assert!(solve_mass_constrained(1.0, 3.0, &init, 1e-9, 10).is_err());
    assert!(solve_mass_constrained(-1.0, 2.0, &init, 1e-9, 10).is_err());
}

#[test]
fn traveling_wave_is_complex_and_below_the_standing_level() {
    let grid = Grid::new(64, 256, 20.0, 20.0).unwrap();
    let standing = solve(2.0, &grid);
    let params = ModelParams::new(2.0, 1.0, 0.5).unwrap();
    let init = initial_guess(InitKind::default(), &grid, &params);
    let t = solve_nehari(&params, &init, &SolverOptions::default()).unwrap();
    assert!(t.gradient_residual <= 1e-9);
    assert!(t.action_value < standing.action_value);
    let imag: f64 = t.q.values().iter().map(|z| z.im.abs()).sum();
    assert!(imag > 1e-3 * t.q.values().iter().map(|z| z.norm()).sum::<f64>());
}

#[test]
fn concentrating_family_scales_as_predicted() {
    let grid = Grid::new(32, 256, 20.0, 40.0).unwrap();
    let phi = half_line_profile(&grid);
    assert!((phi.l2_norm() - 1.0).abs() < 1e-12);
    let alpha = 3.0;
    let lambdas = [4.0, 8.0, 16.0, 32.0];
    let b = test_function_bounds(&phi, 2.0, 1.0, alpha, &lambdas).unwrap();
    for w in b.windows(2) {
        assert!(w[1].i_value < w[0].i_value);
        // every quadratic term scales like λ^{2 − α}
        let r = w[1].i_value / w[0].i_value;
        assert!((r - 2f64.powf(2.0 - alpha)).abs() < 1e-10, "{r}");
    }
    let c = concentrate(&phi, 4.0, alpha).unwrap();
    assert!((c.norm_sq() - 4f64.powf(2.0 - alpha)).abs() < 1e-12);
    assert!(concentrate(&phi, 0.0, alpha).is_err());
}
