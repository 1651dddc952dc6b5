//! `HWSF` binary snapshots.
//!
//! Layout (little-endian): magic `b"HWSF"`, version `u32`, `nx`, `ny` as `u64`,
//! `lx`, `ly`, `p`, `omega`, `v` as `f64`, then `nx·ny` interleaved `(re, im)`
//! `f64` pairs in physical representation, x slow and y fast.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::ModelParams;
use crate::grid::Grid;

pub const MAGIC: [u8; 4] = *b"HWSF";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 4 + 4 + 8 + 8 + 5 * 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub field: Field,
    pub params: ModelParams,
}

impl Snapshot {
    pub fn new(field: Field, params: ModelParams) -> Self {
        Self {
            field: field.into_physical(),
            params,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let g = self.field.grid();
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * g.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(g.nx() as u64).to_le_bytes());
        out.extend_from_slice(&(g.ny() as u64).to_le_bytes());
        for x in [g.lx(), g.ly(), self.params.p, self.params.omega, self.params.v] {
            out.extend_from_slice(&x.to_le_bytes());
        }
        for z in self.field.values() {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Snapshot(format!("truncated header ({} bytes)", bytes.len())));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::Snapshot("bad magic".into()));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}")));
        }
        let nx = u64_at(8) as usize;
        let ny = u64_at(16) as usize;
        let (lx, ly, p, omega, v) = (f64_at(24), f64_at(32), f64_at(40), f64_at(48), f64_at(56));
        let grid = Grid::new(nx, ny, lx, ly).map_err(|e| Error::Snapshot(e.to_string()))?;
        let expected = HEADER_LEN + 16 * nx * ny;
        if bytes.len() != expected {
            return Err(Error::Snapshot(format!(
                "payload length {} does not match header ({expected})",
                bytes.len()
            )));
        }
        let values = bytes[HEADER_LEN..]
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        let params = ModelParams::new(p, omega, v).map_err(|e| Error::Snapshot(e.to_string()))?;
        Ok(Self {
            field: Field::from_values(&grid, values, crate::field::Representation::Physical)?,
            params,
        })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }

    /// Loads and fails unless the stored grid equals `grid`.
    pub fn load_on(path: impl AsRef<Path>, grid: &Grid) -> Result<Self> {
        let s = Self::load(path)?;
        if s.field.grid() != grid {
            let g = s.field.grid();
            return Err(Error::Snapshot(format!(
                "snapshot grid {}x{} on {}x{} does not match active grid {}x{} on {}x{}",
                g.nx(),
                g.ny(),
                g.lx(),
                g.ly(),
                grid.nx(),
                grid.ny(),
                grid.lx(),
                grid.ly()
            )));
        }
        Ok(s)
    }
}
