use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::signed_index;

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    /// Least-squares slope of `log‖u(t)‖_∞` against `log t`.
    pub slope: f64,
    pub intercept: f64,
    pub sup_norms: Vec<f64>,
}

/// Relative amplitude in the outer tenth of the box that invalidates a fit.
pub const WRAP_THRESHOLD: f64 = 1e-3;

/// Evolve the 1-D profile `g` (period `length`) under `e^{it∂xx}` and fit the
/// decay exponent of its sup norm over `times`.
pub fn dispersive_decay_probe(g: &[Complex64], length: f64, times: &[f64]) -> Result<DecayFit> {
    if times.len() < 2 {
        return Err(Error::Degenerate("a decay fit needs at least two times".into()));
    }
    if times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidParameter("probe times must be positive".into()));
    }
    let n = g.len();
    if !n.is_power_of_two() || n < 8 {
        return Err(Error::InvalidGrid(format!("profile length {n} must be a power of two ≥ 8")));
    }
    if g.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::Degenerate("zero profile".into()));
    }
    let mut spec = g.to_vec();
    fft::fft1(&mut spec, true);
    let unit = 2.0 * std::f64::consts::PI / length;
    let edge = n / 20;
    let mut sup_norms = Vec::with_capacity(times.len());
    for &t in times {
        let mut u: Vec<Complex64> = spec
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let xi = unit * signed_index(k, n) as f64;
                c * Complex64::from_polar(1.0, -t * xi * xi)
            })
            .collect();
        fft::fft1(&mut u, false);
        let sup = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let boundary = u[..edge]
            .iter()
            .chain(&u[n - edge..])
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if boundary > WRAP_THRESHOLD * sup {
            return Err(Error::WrapAround {
                time: t,
                amplitude: boundary / sup,
            });
        }
        sup_norms.push(sup);
    }
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = sup_norms.iter().map(|s| s.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("probe times must not all coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(DecayFit {
        slope,
        intercept: my - slope * mx,
        sup_norms,
    })
}
