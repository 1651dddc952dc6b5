//! Flat `section.key = value` experiment configuration.
//!
//! The canonical form lists every key once, in [`KEYS`] order, with floats in
//! their shortest round-trip spelling; parsing it and serializing again gives
//! the same bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hwlab::solitary::InitKind;
use hwlab::{Grid, ModelParams};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    GroundState,
    Travel,
    Evolve,
    Stability,
    Instability,
    SweepVelocity,
    Verify,
}

impl CommandKind {
    pub const ALL: [CommandKind; 7] = [
        CommandKind::GroundState,
        CommandKind::Travel,
        CommandKind::Evolve,
        CommandKind::Stability,
        CommandKind::Instability,
        CommandKind::SweepVelocity,
        CommandKind::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::GroundState => "ground-state",
            CommandKind::Travel => "travel",
            CommandKind::Evolve => "evolve",
            CommandKind::Stability => "stability",
            CommandKind::Instability => "instability",
            CommandKind::SweepVelocity => "sweep-velocity",
            CommandKind::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> CliResult<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitChoice {
    Gaussian,
    Sech,
    Random,
}

impl InitChoice {
    fn name(self) -> &'static str {
        match self {
            InitChoice::Gaussian => "gaussian",
            InitChoice::Sech => "sech",
            InitChoice::Random => "random",
        }
    }

    fn parse(s: &str) -> CliResult<Self> {
        match s {
            "gaussian" => Ok(InitChoice::Gaussian),
            "sech" => Ok(InitChoice::Sech),
            "random" => Ok(InitChoice::Random),
            _ => Err(CliError::Usage(format!(
                "solver.init_kind must be gaussian, sech or random, got '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub p: f64,
    pub omega: f64,
    pub v: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub init_kind: InitChoice,
    pub seed: u64,
    pub t_final: f64,
    pub dt: f64,
    pub sample_stride: usize,
    pub s_monitor: f64,
    /// Relative Hamiltonian drift that stops an evolution.
    pub hamiltonian_tolerance: f64,
    /// Perturbation size relative to `‖Q‖_X`.
    pub delta: f64,
    pub lambdas: Vec<f64>,
    pub v_list: Vec<f64>,
    pub out_dir: PathBuf,
    /// Empty: solve for the ground state instead of loading one.
    pub snapshot_in: String,
    pub snapshot_out: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::GroundState,
            nx: 256,
            ny: 256,
            lx: 40.0,
            ly: 40.0,
            p: 2.0,
            omega: 1.0,
            v: 0.0,
            tol: 1e-9,
            max_iter: 2000,
            init_kind: InitChoice::Gaussian,
            seed: 0,
            t_final: 20.0,
            dt: 1e-3,
            sample_stride: 50,
            s_monitor: 0.6,
            hamiltonian_tolerance: 1e-4,
            delta: 1e-2,
            lambdas: vec![0.95, 1.05],
            v_list: vec![0.0, 0.5, 0.9, 0.99],
            out_dir: PathBuf::from("out"),
            snapshot_in: String::new(),
            snapshot_out: "q.hwsf".into(),
        }
    }
}

/// Every key, in canonical order.
pub const KEYS: [&str; 23] = [
    "command",
    "grid.nx",
    "grid.ny",
    "grid.lx",
    "grid.ly",
    "model.p",
    "model.omega",
    "model.v",
    "solver.tol",
    "solver.max_iter",
    "solver.init_kind",
    "solver.seed",
    "evolution.t_final",
    "evolution.dt",
    "evolution.sample_stride",
    "evolution.s_monitor",
    "evolution.hamiltonian_tolerance",
    "experiment.delta",
    "experiment.lambdas",
    "experiment.v_list",
    "output.out_dir",
    "output.snapshot_in",
    "output.snapshot_out",
];

fn float(key: &str, s: &str) -> CliResult<f64> {
    s.parse::<f64>()
        .map_err(|_| CliError::Usage(format!("{key}: '{s}' is not a number")))
}

fn uint<T: std::str::FromStr>(key: &str, s: &str) -> CliResult<T> {
    s.parse::<T>()
        .map_err(|_| CliError::Usage(format!("{key}: '{s}' is not a nonnegative integer")))
}

fn list(key: &str, s: &str) -> CliResult<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| float(key, t.trim())).collect()
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

impl ExperimentConfig {
    /// Assign one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        match key {
            "command" => self.command = CommandKind::parse(value)?,
            "grid.nx" => self.nx = uint(key, value)?,
            "grid.ny" => self.ny = uint(key, value)?,
            "grid.lx" => self.lx = float(key, value)?,
            "grid.ly" => self.ly = float(key, value)?,
            "model.p" => self.p = float(key, value)?,
            "model.omega" => self.omega = float(key, value)?,
            "model.v" => self.v = float(key, value)?,
            "solver.tol" => self.tol = float(key, value)?,
            "solver.max_iter" => self.max_iter = uint(key, value)?,
            "solver.init_kind" => self.init_kind = InitChoice::parse(value)?,
            "solver.seed" => self.seed = uint(key, value)?,
            "evolution.t_final" => self.t_final = float(key, value)?,
            "evolution.dt" => self.dt = float(key, value)?,
            "evolution.sample_stride" => self.sample_stride = uint(key, value)?,
            "evolution.s_monitor" => self.s_monitor = float(key, value)?,
            "evolution.hamiltonian_tolerance" => self.hamiltonian_tolerance = float(key, value)?,
            "experiment.delta" => self.delta = float(key, value)?,
            "experiment.lambdas" => self.lambdas = list(key, value)?,
            "experiment.v_list" => self.v_list = list(key, value)?,
            "output.out_dir" => self.out_dir = PathBuf::from(value),
            "output.snapshot_in" => self.snapshot_in = value.to_string(),
            "output.snapshot_out" => self.snapshot_out = value.to_string(),
            _ => return Err(CliError::Usage(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    fn get(&self, key: &str) -> String {
        match key {
            "command" => self.command.name().to_string(),
            "grid.nx" => self.nx.to_string(),
            "grid.ny" => self.ny.to_string(),
            "grid.lx" => format!("{:?}", self.lx),
            "grid.ly" => format!("{:?}", self.ly),
            "model.p" => format!("{:?}", self.p),
            "model.omega" => format!("{:?}", self.omega),
            "model.v" => format!("{:?}", self.v),
            "solver.tol" => format!("{:?}", self.tol),
            "solver.max_iter" => self.max_iter.to_string(),
            "solver.init_kind" => self.init_kind.name().to_string(),
            "solver.seed" => self.seed.to_string(),
            "evolution.t_final" => format!("{:?}", self.t_final),
            "evolution.dt" => format!("{:?}", self.dt),
            "evolution.sample_stride" => self.sample_stride.to_string(),
            "evolution.s_monitor" => format!("{:?}", self.s_monitor),
            "evolution.hamiltonian_tolerance" => format!("{:?}", self.hamiltonian_tolerance),
            "experiment.delta" => format!("{:?}", self.delta),
            "experiment.lambdas" => fmt_list(&self.lambdas),
            "experiment.v_list" => fmt_list(&self.v_list),
            "output.out_dir" => self.out_dir.display().to_string(),
            "output.snapshot_in" => self.snapshot_in.clone(),
            "output.snapshot_out" => self.snapshot_out.clone(),
            _ => unreachable!("key list and accessor disagree"),
        }
    }

    /// Parse `key = value` lines on top of the defaults. Blank lines and
    /// lines starting with `#` are skipped; repeated keys are an error.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected 'key = value'", n + 1)))?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err(CliError::Usage(format!("line {}: duplicate key '{key}'", n + 1)));
            }
            seen.push(key);
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key));
        }
        out
    }

    /// SHA-256 of the canonical form, lowercase hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn grid(&self) -> CliResult<Grid> {
        Ok(Grid::new(self.nx, self.ny, self.lx, self.ly)?)
    }

    pub fn params(&self) -> CliResult<ModelParams> {
        Ok(ModelParams::new(self.p, self.omega, self.v)?)
    }

    pub fn init(&self) -> InitKind {
        match self.init_kind {
            InitChoice::Gaussian => InitKind::default(),
            InitChoice::Sech => InitKind::SechLorentzian { wx: 1.0, wy: 1.5 },
            InitChoice::Random => InitKind::Random { seed: self.seed },
        }
    }

    /// `path` resolved against `out_dir` unless absolute.
    pub fn output_path(&self, path: &str) -> PathBuf {
        let p = Path::new(path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.out_dir.join(p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_canonical_form_is_stable() {
        let c = ExperimentConfig::default();
        let text = c.canonical();
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), c);
        assert_eq!(ExperimentConfig::parse(&text).unwrap().canonical(), text);
        assert!(text.contains("grid.nx = 256\n"));
        assert!(text.contains("solver.tol = 1e-9\n"));
        assert!(text.contains("experiment.lambdas = 0.95, 1.05\n"));
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn overrides_and_errors() {
        let c = ExperimentConfig::parse("# comment\n\ngrid.nx = 64\nmodel.p=3\n").unwrap();
        assert_eq!((c.nx, c.p), (64, 3.0));
        assert!(ExperimentConfig::parse("grid.nx = 64\ngrid.nx = 32\n").is_err());
        assert!(ExperimentConfig::parse("grid.nz = 64\n").is_err());
        assert!(ExperimentConfig::parse("grid.nx 64\n").is_err());
        assert!(ExperimentConfig::parse("model.p = two\n").is_err());
        assert!(ExperimentConfig::parse("command = fly\n").is_err());
        let e = ExperimentConfig::load(Path::new("/nonexistent/cfg")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash(), a.clone().hash());
    }
}
