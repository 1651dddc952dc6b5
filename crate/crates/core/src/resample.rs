//! Band-limited evaluation of a periodic field on an affinely mapped grid.
//!
//! A dilation `x ↦ c + s·(x − c)` maps the uniform sample grid onto another
//! uniform grid, so evaluating the trigonometric interpolant there is a
//! chirp-z transform per axis (Bluestein's identity `kj = (k² + j² − (k−j)²)/2`).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::Field;
use crate::grid::Grid;

/// Evaluate the trigonometric interpolant of `samples` (period `length`,
/// first sample at coordinate `origin`) at `count` points `start + j·step`.
///
/// The Nyquist coefficient is split symmetrically between `±n/2`, so real
/// samples interpolate to real values.
pub fn interpolate_uniform(
    samples: &[Complex64],
    length: f64,
    origin: f64,
    start: f64,
    step: f64,
    count: usize,
) -> Vec<Complex64> {
    let n = samples.len();
    let mut coef = samples.to_vec();
    fft::fft_chunks(&mut coef, n, true);
    let inv_n = 1.0 / n as f64;
    let half = (n / 2) as i64;
    // signed modes -n/2 ..= n/2 as offset index k + n/2 ∈ [0, n]
    let modes = n + 1;
    let mut a = vec![Complex64::new(0.0, 0.0); modes];
    for (idx, c) in coef.iter().enumerate() {
        let c = c * inv_n;
        if idx == n / 2 {
            a[0] += 0.5 * c;
            a[n] += 0.5 * c;
        } else {
            let k = crate::grid::signed_index(idx, n);
            a[(k + half) as usize] += c;
        }
    }
    let unit = 2.0 * PI / length;
    let beta = unit * step;
    let shift = start - origin;
    for (off, z) in a.iter_mut().enumerate() {
        let k = off as i64 - half;
        *z *= Complex64::from_polar(1.0, unit * k as f64 * shift);
    }
    // f_j = Σ_k a_k e^{iβ k j}, k = off − half
    // e^{iβkj} = e^{iβ(k² + j² − (k−j)²)/2}
    let chirp = |t: f64| Complex64::from_polar(1.0, 0.5 * beta * t * t);
    let conv_len = (modes + count - 1).next_power_of_two();
    let mut x = vec![Complex64::new(0.0, 0.0); conv_len];
    for (off, z) in a.iter().enumerate() {
        let k = (off as i64 - half) as f64;
        x[off] = z * chirp(k);
    }
    // kernel h[d] = e^{-iβ (j − k)²/2} with j − k = d − half ... indexed so that
    // y[j + n] collects Σ_off x[off]·h[j + n − off]
    let mut h = vec![Complex64::new(0.0, 0.0); conv_len];
    let span = modes + count - 1;
    for (d, hd) in h.iter_mut().enumerate().take(span) {
        // index d corresponds to (j − k) = d − n + (−half)·(−1) … see below
        let jk = d as f64 - n as f64 + half as f64;
        *hd = chirp(jk).conj();
    }
    fft::fft_chunks(&mut x, conv_len, true);
    fft::fft_chunks(&mut h, conv_len, true);
    for (xv, hv) in x.iter_mut().zip(&h) {
        *xv *= hv;
    }
    fft::fft_chunks(&mut x, conv_len, false);
    let norm = 1.0 / conv_len as f64;
    (0..count)
        .map(|j| x[j + n] * norm * chirp(j as f64))
        .collect()
}

/// `out(x, y) = u(cx + sx·(x − cx), cy + sy·(y − cy))` on the same grid,
/// using the periodic band-limited interpolant of `u`.
pub fn dilate(u: &Field, center: (f64, f64), sx: f64, sy: f64) -> Result<Field> {
    if !(sx > 0.0 && sy > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dilation factors must be positive, got ({sx}, {sy})"
        )));
    }
    let g = u.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let phys = u.to_physical();
    let vals = phys.values();
    let (x0, y0) = (g.x(0), g.y(0));
    // along y: rows are contiguous
    let mut stage = vec![Complex64::new(0.0, 0.0); g.len()];
    let ystart = center.1 + sy * (y0 - center.1);
    for i in 0..nx {
        let row = &vals[i * ny..(i + 1) * ny];
        let out = interpolate_uniform(row, g.ly(), y0, ystart, sy * g.dy(), ny);
        stage[i * ny..(i + 1) * ny].copy_from_slice(&out);
    }
    let xstart = center.0 + sx * (x0 - center.0);
    let mut result = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut col = vec![Complex64::new(0.0, 0.0); nx];
    for j in 0..ny {
        for i in 0..nx {
            col[i] = stage[i * ny + j];
        }
        let out = interpolate_uniform(&col, g.lx(), x0, xstart, sx * g.dx(), nx);
        for i in 0..nx {
            result[i * ny + j] = out[i];
        }
    }
    let f = Field::from_values(&g, result, crate::Representation::Physical)?;
    Ok(f.into_representation(u.representation()))
}

/// Band-limited transfer of `u` onto `target`, which must have the same
/// sample counts; points of `target` outside `u`'s box wrap periodically.
pub fn resample_onto(u: &Field, target: &Grid) -> Result<Field> {
    let g = u.grid();
    if g.nx() != target.nx() || g.ny() != target.ny() {
        return Err(Error::GridMismatch);
    }
    let (nx, ny) = (g.nx(), g.ny());
    let phys = u.to_physical();
    let vals = phys.values();
    let mut stage = vec![Complex64::new(0.0, 0.0); g.len()];
    for i in 0..nx {
        let out = interpolate_uniform(
            &vals[i * ny..(i + 1) * ny],
            g.ly(),
            g.y(0),
            target.y(0),
            target.dy(),
            ny,
        );
        stage[i * ny..(i + 1) * ny].copy_from_slice(&out);
    }
    let mut result = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut col = vec![Complex64::new(0.0, 0.0); nx];
    for j in 0..ny {
        for i in 0..nx {
            col[i] = stage[i * ny + j];
        }
        let out = interpolate_uniform(&col, g.lx(), g.x(0), target.x(0), target.dx(), nx);
        for i in 0..nx {
            result[i * ny + j] = out[i];
        }
    }
    Field::from_values(target, result, crate::Representation::Physical)
}
