//! Shared FFT plans and the unitary 2-D transform on row-major data.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

pub(crate) fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = planner().lock().expect("fft planner poisoned");
    if forward {
        planner.plan_fft_forward(len)
    } else {
        planner.plan_fft_inverse(len)
    }
}

/// Unnormalised in-place transform of every contiguous length-`n` chunk.
pub(crate) fn fft_chunks(data: &mut [Complex64], n: usize, forward: bool) {
    let fft = plan(n, forward);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const BLOCK: usize = 32;
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Unitary 2-D DFT of an `nx × ny` array stored x-slow / y-fast.
pub(crate) fn fft2(data: &mut [Complex64], nx: usize, ny: usize, forward: bool) {
    debug_assert_eq!(data.len(), nx * ny);
    fft_chunks(data, ny, forward);
    let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
    transpose(data, &mut t, nx, ny);
    fft_chunks(&mut t, nx, forward);
    transpose(&t, data, ny, nx);
    let scale = 1.0 / ((nx * ny) as f64).sqrt();
    data.iter_mut().for_each(|z| *z *= scale);
}

/// Unitary 1-D DFT.
pub(crate) fn fft1(data: &mut [Complex64], forward: bool) {
    let n = data.len();
    fft_chunks(data, n, forward);
    let scale = 1.0 / (n as f64).sqrt();
    data.iter_mut().for_each(|z| *z *= scale);
}
