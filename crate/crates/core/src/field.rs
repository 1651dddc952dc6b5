//! Complex fields on a [`Grid`] in physical or spectral representation.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::{signed_index, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

impl Representation {
    fn name(self) -> &'static str {
        match self {
            Representation::Physical => "physical",
            Representation::Spectral => "spectral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// physical → spectral
    Forward,
    /// spectral → physical
    Inverse,
}

/// Complex samples on a periodic grid.
///
/// Values are stored row-major with the x index slow and the y index fast.
/// Spectral coefficients use the unitary DFT, so `Σ|u|²·dx·dy` is the L² norm
/// squared in either representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
    repr: Representation,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            repr: Representation::Physical,
        }
    }

    pub fn from_values(grid: &Grid, values: Vec<Complex64>, repr: Representation) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
            repr,
        })
    }

    /// Samples `f(x, y)` at the grid points.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            let x = grid.x(i);
            for j in 0..grid.ny() {
                values.push(f(x, grid.y(j)));
            }
        }
        Self {
            grid: grid.clone(),
            values,
            repr: Representation::Physical,
        }
    }

    pub fn from_real_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, |x, y| Complex64::new(f(x, y), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    /// Transform in the stated direction; the field must currently be in the
    /// source representation of that direction.
    pub fn transform(mut self, direction: Direction) -> Result<Self> {
        let (from, to, forward) = match direction {
            Direction::Forward => (Representation::Physical, Representation::Spectral, true),
            Direction::Inverse => (Representation::Spectral, Representation::Physical, false),
        };
        if self.repr != from {
            return Err(Error::RepresentationMismatch {
                expected: from.name(),
                found: self.repr.name(),
            });
        }
        fft::fft2(&mut self.values, self.grid.nx(), self.grid.ny(), forward);
        self.repr = to;
        Ok(self)
    }

    pub fn into_spectral(self) -> Self {
        match self.repr {
            Representation::Spectral => self,
            Representation::Physical => self.transform(Direction::Forward).unwrap(),
        }
    }

    pub fn into_physical(self) -> Self {
        match self.repr {
            Representation::Physical => self,
            Representation::Spectral => self.transform(Direction::Inverse).unwrap(),
        }
    }

    pub fn to_spectral(&self) -> Self {
        self.clone().into_spectral()
    }

    pub fn to_physical(&self) -> Self {
        self.clone().into_physical()
    }

    pub fn into_representation(self, repr: Representation) -> Self {
        match repr {
            Representation::Physical => self.into_physical(),
            Representation::Spectral => self.into_spectral(),
        }
    }

    /// `∫|u|²`, identical in both representations up to round-off.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.to_physical()
            .values
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `∫ u·conj(w)`, evaluated in the representation of `self`.
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        self.check_compatible(other)?;
        let other = other.clone().into_representation(self.repr);
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.grid.cell_area())
    }

    /// Real duality pairing `re ∫ u·conj(w)`.
    pub fn real_inner(&self, other: &Field) -> Result<f64> {
        Ok(self.inner(other)?.re)
    }

    pub fn scale(&mut self, a: Complex64) {
        self.values.iter_mut().for_each(|z| *z *= a);
    }

    pub fn scaled(&self, a: f64) -> Field {
        let mut out = self.clone();
        out.scale(Complex64::new(a, 0.0));
        out
    }

    /// `self += a·other`
    pub fn axpy(&mut self, a: Complex64, other: &Field) -> Result<()> {
        self.check_compatible(other)?;
        let other = other.clone().into_representation(self.repr);
        for (z, w) in self.values.iter_mut().zip(&other.values) {
            *z += a * w;
        }
        Ok(())
    }

    /// Pointwise map in physical space.
    pub fn map_physical(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        let mut out = self.to_physical();
        out.values.iter_mut().for_each(|z| *z = f(*z));
        out
    }

    /// Multiply spectral coefficient `(k, m)` by `symbol(k, m)`; the result is
    /// returned in the caller's representation.
    pub fn multiply_spectral(&self, symbol: impl Fn(usize, usize) -> Complex64) -> Field {
        let repr = self.repr;
        let mut s = self.to_spectral();
        let ny = s.grid.ny();
        for k in 0..s.grid.nx() {
            for m in 0..ny {
                s.values[k * ny + m] *= symbol(k, m);
            }
        }
        s.into_representation(repr)
    }

    /// Circular shift by whole grid points: `out[i][j] = self[i - si][j - sj]`.
    pub fn circular_shift(&self, si: i64, sj: i64) -> Field {
        let u = self.to_physical();
        let (nx, ny) = (self.grid.nx() as i64, self.grid.ny() as i64);
        let mut out = Field::zeros(&self.grid);
        for i in 0..nx {
            let src_i = (i - si).rem_euclid(nx);
            for j in 0..ny {
                let src_j = (j - sj).rem_euclid(ny);
                out.values[(i * ny + j) as usize] = u.values[(src_i * ny + src_j) as usize];
            }
        }
        out.into_representation(self.repr)
    }

    /// Band-limited translate `u(· + τ1, · + τ2)`.
    pub fn translated(&self, tau1: f64, tau2: f64) -> Field {
        let g = self.grid.clone();
        let (nqx, nqy) = (g.nyquist_x(), g.nyquist_y());
        self.multiply_spectral(|k, m| {
            // Nyquist modes are shifted by their real (cosine) part.
            let px = if k == nqx {
                Complex64::new((g.xi()[k] * tau1).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, g.xi()[k] * tau1)
            };
            let py = if m == nqy {
                Complex64::new((g.eta()[m] * tau2).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, g.eta()[m] * tau2)
            };
            px * py
        })
    }

    /// Periodic centre of mass of `|u|²`, one circular mean per axis.
    pub fn centroid(&self) -> (f64, f64) {
        let u = self.to_physical();
        let g = &self.grid;
        let mut cx = Complex64::new(0.0, 0.0);
        let mut cy = Complex64::new(0.0, 0.0);
        for i in 0..g.nx() {
            let ex = Complex64::from_polar(1.0, 2.0 * PI * g.x(i) / g.lx());
            for j in 0..g.ny() {
                let w = u.values[g.index(i, j)].norm_sqr();
                cx += ex * w;
                cy += Complex64::from_polar(w, 2.0 * PI * g.y(j) / g.ly());
            }
        }
        let wrap = |c: Complex64, l: f64| {
            if c.norm() == 0.0 {
                0.0
            } else {
                c.arg() * l / (2.0 * PI)
            }
        };
        (wrap(cx, g.lx()), wrap(cy, g.ly()))
    }

    /// Coordinates of every grid point measured from `(cx, cy)` and wrapped
    /// into `[-L/2, L/2)`.
    pub fn centered_coordinates(&self, cx: f64, cy: f64) -> (Vec<f64>, Vec<f64>) {
        let g = &self.grid;
        let wrap = |d: f64, l: f64| d - l * (d / l + 0.5).floor();
        let xs = (0..g.nx()).map(|i| wrap(g.x(i) - cx, g.lx())).collect();
        let ys = (0..g.ny()).map(|j| wrap(g.y(j) - cy, g.ly())).collect();
        (xs, ys)
    }

    /// Fraction of `∫|u|²` carried by points whose centred coordinate lies in
    /// the outer `band` fraction of either half-width.
    pub fn tail_mass_fraction(&self, band: f64) -> f64 {
        let u = self.to_physical();
        let total: f64 = u.values.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let (cx, cy) = u.centroid();
        let (xs, ys) = u.centered_coordinates(cx, cy);
        let g = &self.grid;
        let (hx, hy) = (0.5 * g.lx() * (1.0 - band), 0.5 * g.ly() * (1.0 - band));
        let mut tail = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                if x.abs() > hx || y.abs() > hy {
                    tail += u.values[g.index(i, j)].norm_sqr();
                }
            }
        }
        tail / total
    }

    /// Zero every mode whose signed index exceeds `fraction` of the Nyquist
    /// index along either axis (`2/3` gives the classical de-aliasing rule).
    pub fn low_pass(&self, fraction: f64) -> Field {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let (kx, ky) = (fraction * (nx / 2) as f64, fraction * (ny / 2) as f64);
        self.multiply_spectral(|k, m| {
            let keep = (signed_index(k, nx).abs() as f64) <= kx
                && (signed_index(m, ny).abs() as f64) <= ky
                && k != nx / 2
                && m != ny / 2;
            Complex64::new(if keep { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// Pointwise product in physical space.
    pub fn pointwise_mul(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        let mut a = self.to_physical();
        let b = other.to_physical();
        for (z, w) in a.values.iter_mut().zip(&b.values) {
            *z *= w;
        }
        Ok(a)
    }
}

impl Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), rhs)
            .expect("field addition on different grids");
        out
    }
}

impl Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), rhs)
            .expect("field subtraction on different grids");
        out
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scaled(-1.0)
    }
}

impl Mul<Complex64> for &Field {
    type Output = Field;
    fn mul(self, rhs: Complex64) -> Field {
        let mut out = self.clone();
        out.scale(rhs);
        out
    }
}

impl Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, rhs: f64) -> Field {
        self.scaled(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::from_values(grid, values, Representation::Physical).unwrap()
    }

    #[test]
    fn constant_field_lives_in_zero_mode() {
        let g = Grid::new(16, 32, 3.0, 7.0).unwrap();
        let f = Field::from_real_fn(&g, |_, _| 1.0).into_spectral();
        let expected = (g.len() as f64).sqrt();
        assert!((f.values()[0].re - expected).abs() < 1e-12);
        for z in &f.values()[1..] {
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn plane_wave_single_coefficient() {
        let g = Grid::new(32, 16, 5.0, 2.0).unwrap();
        let k0 = 2.0 * PI * 3.0 / g.lx();
        let f = Field::from_fn(&g, |x, _| Complex64::from_polar(1.0, k0 * x)).into_spectral();
        for k in 0..g.nx() {
            for m in 0..g.ny() {
                let z = f.at(k, m).norm();
                if k == 3 && m == 0 {
                    assert!(z > 1.0);
                } else {
                    assert!(z < 1e-12, "mode ({k},{m}) = {z}");
                }
            }
        }
    }

    #[test]
    fn roundtrip_and_plancherel() {
        let g = Grid::new(64, 128, 10.0, 20.0).unwrap();
        let f = random_field(&g, 7);
        let s = f.clone().transform(Direction::Forward).unwrap();
        assert!((s.norm_sq() - f.norm_sq()).abs() <= 1e-12 * f.norm_sq());
        let back = s.transform(Direction::Inverse).unwrap();
        let err = (&back - &f).norm_sq().sqrt() / f.l2_norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn transform_rejects_wrong_representation() {
        let g = Grid::new(8, 8, 1.0, 1.0).unwrap();
        let f = Field::zeros(&g);
        assert!(matches!(
            f.transform(Direction::Inverse),
            Err(Error::RepresentationMismatch { .. })
        ));
    }

    #[test]
    fn integer_translate_matches_circular_shift() {
        let g = Grid::new(32, 32, 8.0, 8.0).unwrap();
        let f = Field::from_real_fn(&g, |x, y| (-(x * x) - 0.5 * y * y).exp());
        let shifted = f.circular_shift(5, -3);
        // u(x) = f(x - 5dx, y + 3dy)  ⇒  translate by (-5dx, 3dy)
        let t = f.translated(-5.0 * g.dx(), 3.0 * g.dy());
        assert!((&shifted - &t).l2_norm() < 1e-12 * f.l2_norm());
    }

    #[test]
    fn centroid_of_offset_gaussian() {
        let g = Grid::new(64, 64, 20.0, 20.0).unwrap();
        let f = Field::from_real_fn(&g, |x, y| (-(x - 1.5).powi(2) - (y + 2.0).powi(2)).exp());
        let (cx, cy) = f.centroid();
        assert!((cx - 1.5).abs() < 1e-8 && (cy + 2.0).abs() < 1e-8, "{cx} {cy}");
    }
}
