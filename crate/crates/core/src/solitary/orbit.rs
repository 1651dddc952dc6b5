//! Distance from a field to the orbit `{e^{iθ} q(· + τ)}` in the X norm.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::Field;
use crate::functionals::x_norm;
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitFit {
    pub theta: f64,
    pub tau1: f64,
    pub tau2: f64,
    /// `‖u − e^{iθ} q(· + τ)‖_X` at the optimum.
    pub distance: f64,
}

/// X-inner product `C(τ) = ⟨u, q(· + τ)⟩_X` with its first and second
/// derivatives in `τ`, from the cross spectrum `h = w·û·conj(q̂)·dA`.
struct CrossSpectrum<'a> {
    grid: &'a Grid,
    h: Vec<Complex64>,
}

impl CrossSpectrum<'_> {
    fn eval(&self, tau: (f64, f64)) -> (Complex64, [Complex64; 2], [[Complex64; 3]; 1]) {
        let g = self.grid;
        let (nqx, nqy) = (g.nyquist_x(), g.nyquist_y());
        let ny = g.ny();
        let mut c = Complex64::new(0.0, 0.0);
        let mut d = [Complex64::new(0.0, 0.0); 2];
        // (∂11, ∂12, ∂22)
        let mut hess = [Complex64::new(0.0, 0.0); 3];
        for (k, &xi) in g.xi().iter().enumerate() {
            // factor for conj(e^{iξτ}) and its derivatives; Nyquist uses cos
            let (fx, dfx, ddfx) = if k == nqx {
                let (s, co) = (xi * tau.0).sin_cos();
                let r = |a: f64| Complex64::new(a, 0.0);
                (r(co), r(-xi * s), r(-xi * xi * co))
            } else {
                let e = Complex64::from_polar(1.0, -xi * tau.0);
                (e, Complex64::new(0.0, -xi) * e, -xi * xi * e)
            };
            let row = &self.h[k * ny..(k + 1) * ny];
            for (m, (&hk, &eta)) in row.iter().zip(g.eta()).enumerate() {
                let (fy, dfy, ddfy) = if m == nqy {
                    let (s, co) = (eta * tau.1).sin_cos();
                    let r = |a: f64| Complex64::new(a, 0.0);
                    (r(co), r(-eta * s), r(-eta * eta * co))
                } else {
                    let e = Complex64::from_polar(1.0, -eta * tau.1);
                    (e, Complex64::new(0.0, -eta) * e, -eta * eta * e)
                };
                c += hk * fx * fy;
                d[0] += hk * dfx * fy;
                d[1] += hk * fx * dfy;
                hess[0] += hk * ddfx * fy;
                hess[1] += hk * dfx * dfy;
                hess[2] += hk * fx * ddfy;
            }
        }
        (c, d, [hess])
    }
}

fn wrap(t: f64, l: f64) -> f64 {
    t - l * (t / l + 0.5).floor()
}

/// Minimise `‖u − e^{iθ} q(· + τ)‖_X` over `θ` and `τ`.
///
/// The integer part of `τ` comes from the cross-correlation of `u` and `q`
/// in the X inner product (one FFT); Newton iterations on `|C(τ)|²` refine it
/// below the grid scale, and `θ = arg C(τ)`.
pub fn orbital_fit(u: &Field, q: &Field) -> Result<OrbitFit> {
    if u.grid() != q.grid() {
        return Err(Error::GridMismatch);
    }
    let g = u.grid().clone();
    let (uh, qh) = (u.to_spectral(), q.to_spectral());
    let da = g.cell_area();
    let ny = g.ny();
    let mut h = Vec::with_capacity(g.len());
    for (k, &xi) in g.xi().iter().enumerate() {
        for (m, &eta) in g.eta().iter().enumerate() {
            let idx = k * ny + m;
            let w = 1.0 + xi * xi + eta.abs();
            h.push(w * uh.values()[idx] * qh.values()[idx].conj() * da);
        }
    }
    if h.iter().all(|z| z.norm() == 0.0) {
        let distance = x_norm(u);
        return Ok(OrbitFit {
            theta: 0.0,
            tau1: 0.0,
            tau2: 0.0,
            distance,
        });
    }
    // C(i·dx, j·dy) ∝ Σ h e^{−2πi(ki/nx + mj/ny)}, a forward DFT
    let mut corr = h.clone();
    fft::fft2(&mut corr, g.nx(), g.ny(), true);
    let (best, _) = corr
        .iter()
        .enumerate()
        .fold((0, -1.0), |(bi, bv), (i, z)| if z.norm() > bv { (i, z.norm()) } else { (bi, bv) });
    let (bi, bj) = (best / ny, best % ny);
    let mut tau = (
        wrap(bi as f64 * g.dx(), g.lx()),
        wrap(bj as f64 * g.dy(), g.ly()),
    );
    let cs = CrossSpectrum { grid: &g, h };
    for _ in 0..30 {
        let (c, d, [hs]) = cs.eval(tau);
        // F = |C|², ∇F = 2 re(conj C ∇C), ∇²F = 2 re(conj ∇C ∇Cᵀ + conj C ∇²C)
        let gr = [2.0 * (c.conj() * d[0]).re, 2.0 * (c.conj() * d[1]).re];
        let a11 = 2.0 * (d[0].conj() * d[0] + c.conj() * hs[0]).re;
        let a12 = 2.0 * (d[0].conj() * d[1] + c.conj() * hs[1]).re;
        let a22 = 2.0 * (d[1].conj() * d[1] + c.conj() * hs[2]).re;
        let det = a11 * a22 - a12 * a12;
        let mut step = if a11 < 0.0 && det > 0.0 {
            [(-a22 * gr[0] + a12 * gr[1]) / det, (a12 * gr[0] - a11 * gr[1]) / det]
        } else {
            // not locally concave: small ascent step
            let n = (gr[0] * gr[0] + gr[1] * gr[1]).sqrt().max(f64::MIN_POSITIVE);
            [0.1 * g.dx() * gr[0] / n, 0.1 * g.dy() * gr[1] / n]
        };
        step[0] = step[0].clamp(-g.dx(), g.dx());
        step[1] = step[1].clamp(-g.dy(), g.dy());
        let before = c.norm();
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-6 {
            let trial = (tau.0 + t * step[0], tau.1 + t * step[1]);
            if cs.eval(trial).0.norm() >= before {
                tau = trial;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved || (step[0].abs() < 1e-14 * g.lx() && step[1].abs() < 1e-14 * g.ly()) {
            break;
        }
    }
    let (c, _, _) = cs.eval(tau);
    let theta = c.arg();
    let fitted = &q.translated(tau.0, tau.1) * Complex64::from_polar(1.0, theta);
    let distance = x_norm(&(u - &fitted));
    Ok(OrbitFit {
        theta,
        tau1: wrap(tau.0, g.lx()),
        tau2: wrap(tau.1, g.ly()),
        distance,
    })
}
