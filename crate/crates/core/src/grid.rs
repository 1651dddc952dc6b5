//! Periodic box geometry and its wavenumbers.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-lx/2, lx/2) × [-ly/2, ly/2)`.
///
/// Physical samples sit at `x_i = -lx/2 + i·dx`, so the box centre `(0, 0)` is
/// the grid point `(nx/2, ny/2)`. Wavenumbers use FFT ordering; the Nyquist
/// index `n/2` carries the negative frequency `-π/d`.
#[derive(Debug, Clone)]
pub struct Grid {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    xi: Vec<f64>,
    eta: Vec<f64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }
}

fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let unit = 2.0 * PI / length;
    (0..n).map(|k| unit * signed_index(k, n) as f64).collect()
}

/// FFT-order index `k` mapped to its signed frequency in `[-n/2, n/2)`.
pub(crate) fn signed_index(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be a power of two and at least 8"
                )));
            }
        }
        for (name, l) in [("lx", lx), ("ly", ly)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} = {l} must be positive")));
            }
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            xi: wavenumbers(nx, lx),
            eta: wavenumbers(ny, ly),
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    /// Area element `dx·dy` used by every physical-space quadrature.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// Number of grid points `nx·ny`.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.lx + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        -0.5 * self.ly + j as f64 * self.dy()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    pub fn nyquist_x(&self) -> usize {
        self.nx / 2
    }

    pub fn nyquist_y(&self) -> usize {
        self.ny / 2
    }

    /// Flat row-major index, x slow and y fast.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    /// Same sample counts on a box with lengths divided by `(sx, sy)`.
    pub fn shrunk(&self, sx: f64, sy: f64) -> Result<Self> {
        Self::new(self.nx, self.ny, self.lx / sx, self.ly / sy)
    }

    /// Largest wavenumber magnitudes `(max|ξ|, max|η|)`.
    pub fn max_wavenumbers(&self) -> (f64, f64) {
        (PI / self.dx(), PI / self.dy())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_box_wavenumbers() {
        let g = Grid::new(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let expected = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (a, b) in g.xi().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(g.xi(), g.eta());
    }

    #[test]
    fn spacing_matches_length() {
        let g = Grid::new(256, 256, 40.0, 40.0).unwrap();
        assert_eq!(g.dx(), 0.15625);
        assert_eq!(g.dy(), 0.15625);
        assert_eq!(g.dx() * g.nx() as f64, g.lx());
        assert_eq!(g.x(128), 0.0);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(8, 12, 1.0, 1.0).is_err());
        assert!(Grid::new(4, 8, 1.0, 1.0).is_err());
        assert!(Grid::new(8, 8, 0.0, 1.0).is_err());
        assert!(Grid::new(8, 8, 1.0, -2.0).is_err());
    }

    #[test]
    fn wavenumbers_symmetric_except_nyquist() {
        let g = Grid::new(16, 32, 3.0, 5.0).unwrap();
        for (n, k) in [(g.nx(), g.xi()), (g.ny(), g.eta())] {
            for (idx, &w) in k.iter().enumerate() {
                if idx == n / 2 {
                    continue;
                }
                assert!(k.iter().any(|&o| (o + w).abs() < 1e-12));
            }
        }
    }
}
