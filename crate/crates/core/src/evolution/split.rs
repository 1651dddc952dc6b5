use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::{hamiltonian_with_sign, mass};
use crate::grid::Grid;
use crate::solitary::orbital_fit;
use crate::symbol::{apply_symbol, Symbol};

/// `S(t)u = exp(it(∂xx − |Dy|))u`, returned in the caller's representation.
pub fn linear_propagate(u: &Field, t: f64) -> Field {
    apply_symbol(u, Symbol::HalfwaveGroup(t)).expect("group symbol is always valid")
}

/// `max(ξ² + |η|)` over the grid.
pub fn max_symbol(grid: &Grid) -> f64 {
    let (kx, ky) = grid.max_wavenumbers();
    kx * kx + ky
}

/// The power nonlinearity `σ|ψ|^{p−1}ψ`; `σ = +1` is focusing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nonlinearity {
    pub p: f64,
    pub sign: f64,
}

impl Nonlinearity {
    pub fn focusing(p: f64) -> Self {
        Self { p, sign: 1.0 }
    }

    pub fn defocusing(p: f64) -> Self {
        Self { p, sign: -1.0 }
    }

    /// Exact flow of `i∂tψ = −σ|ψ|^{p−1}ψ` over time `t`, in place on physical
    /// values.
    fn rotate(&self, values: &mut [Complex64], t: f64) {
        let e = 0.5 * (self.p - 1.0);
        for z in values.iter_mut() {
            let phase = self.sign * t * z.norm_sqr().max(0.0).powf(e);
            *z *= Complex64::from_polar(1.0, phase);
        }
    }
}

/// One focusing Strang step: half phase rotation, `S(dt)`, half rotation.
pub fn strang_step(u: &Field, dt: f64, p: f64) -> Field {
    strang_step_with(u, dt, Nonlinearity::focusing(p))
}

pub fn strang_step_with(u: &Field, dt: f64, nl: Nonlinearity) -> Field {
    let repr = u.representation();
    let mut w = u.to_physical();
    nl.rotate(w.values_mut(), 0.5 * dt);
    let mut w = linear_propagate(&w, dt);
    nl.rotate(w.values_mut(), 0.5 * dt);
    w.into_representation(repr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Strang,
    Picard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub t_final: f64,
    pub dt: f64,
    pub sample_stride: usize,
    pub nonlinearity: Nonlinearity,
    /// Order `s` of the `L²_x H^s_y` monitor.
    pub s_monitor: f64,
    /// Required `dt·max(ξ² + |η|)` bound; `None` skips the check.
    pub cfl: Option<f64>,
    /// Abort once the `L²_x H^s_y` norm exceeds this multiple of its initial value.
    pub blowup_factor: f64,
    /// Abort once `|H(t) − H(0)| / |H(0)|` exceeds this.
    pub hamiltonian_tolerance: f64,
    /// Orbit against which the X-distance is tracked.
    pub reference: Option<Field>,
}

impl EvolutionConfig {
    pub fn new(p: f64, t_final: f64, dt: f64) -> Self {
        Self {
            t_final,
            dt,
            sample_stride: 1,
            nonlinearity: Nonlinearity::focusing(p),
            s_monitor: 0.6,
            cfl: Some(0.5),
            blowup_factor: 1e6,
            hamiltonian_tolerance: 1e-4,
            reference: None,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride;
        self
    }

    pub fn with_reference(mut self, q: Field) -> Self {
        self.reference = Some(q);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AbortReason {
    /// The `L²_x H^s_y` norm grew past the blow-up threshold.
    BlowUp { time: f64, ratio: f64 },
    /// The Hamiltonian drifted past the tolerance.
    HamiltonianDrift { time: f64, drift: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub mass_series: Vec<f64>,
    pub hamiltonian_series: Vec<f64>,
    pub l2x_hsy_series: Vec<f64>,
    pub linf_series: Vec<f64>,
    pub orbital_distance_series: Option<Vec<f64>>,
    pub dt: f64,
    pub sample_stride: usize,
    pub scheme: Scheme,
    pub aborted: Option<AbortReason>,
    /// Final state (physical).
    pub state: Field,
}

impl EvolutionTrace {
    /// `max |M(t) − M(0)| / M(0)`, zero for the zero field.
    pub fn mass_drift(&self) -> f64 {
        relative_drift(&self.mass_series)
    }

    pub fn hamiltonian_drift(&self) -> f64 {
        relative_drift(&self.hamiltonian_series)
    }
}

fn relative_drift(series: &[f64]) -> f64 {
    let Some(&first) = series.first() else {
        return 0.0;
    };
    let worst = series.iter().map(|v| (v - first).abs()).fold(0.0, f64::max);
    if first == 0.0 {
        worst
    } else {
        worst / first.abs()
    }
}

fn l2x_hsy(u: &Field, s: f64) -> f64 {
    let spec = u.to_spectral();
    let g = spec.grid();
    let ny = g.ny();
    let mut acc = 0.0;
    for k in 0..g.nx() {
        for (m, &eta) in g.eta().iter().enumerate() {
            acc += (1.0 + eta * eta).powf(s) * spec.values()[k * ny + m].norm_sqr();
        }
    }
    (acc * g.cell_area()).sqrt()
}

/// Strang integration to `t_final` with monitors sampled every
/// `sample_stride` steps.
///
/// Consecutive half rotations are merged: the rotation leaves `|ψ|` fixed,
/// so two half steps compose to one full step exactly.
pub fn evolve(u0: &Field, config: &EvolutionConfig) -> Result<EvolutionTrace> {
    evolve_with(u0, config, |_, _| Ok(()))
}

/// [`evolve`], also handing every sampled state to `observe`.
pub fn evolve_with(
    u0: &Field,
    config: &EvolutionConfig,
    mut observe: impl FnMut(f64, &Field) -> Result<()>,
) -> Result<EvolutionTrace> {
    let dt = config.dt;
    if !(dt > 0.0 && dt.is_finite()) || !(config.t_final > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need dt > 0 and T > 0, got dt = {dt}, T = {}",
            config.t_final
        )));
    }
    if config.sample_stride == 0 {
        return Err(Error::InvalidParameter("sample_stride must be at least 1".into()));
    }
    let grid = u0.grid().clone();
    if let Some(cfl) = config.cfl {
        let bound = dt * max_symbol(&grid);
        if bound > cfl {
            return Err(Error::InvalidParameter(format!(
                "dt·max|symbol| = {bound:.3} exceeds {cfl}"
            )));
        }
    }
    if let Some(q) = &config.reference {
        if q.grid() != &grid {
            return Err(Error::GridMismatch);
        }
    }
    let n_steps = (config.t_final / dt).round() as usize;
    let nl = config.nonlinearity;
    let group: Vec<Complex64> = {
        let sym = Symbol::HalfwaveGroup(dt);
        let mut v = Vec::with_capacity(grid.len());
        for k in 0..grid.nx() {
            for m in 0..grid.ny() {
                v.push(sym.eval(&grid, k, m));
            }
        }
        v
    };
    let p = nl.p;
    let mut trace = EvolutionTrace {
        times: Vec::new(),
        mass_series: Vec::new(),
        hamiltonian_series: Vec::new(),
        l2x_hsy_series: Vec::new(),
        linf_series: Vec::new(),
        orbital_distance_series: config.reference.as_ref().map(|_| Vec::new()),
        dt,
        sample_stride: config.sample_stride,
        scheme: Scheme::Strang,
        aborted: None,
        state: Field::zeros(&grid),
    };
    let mut record = |u: &Field, t: f64, trace: &mut EvolutionTrace| -> Result<Option<AbortReason>> {
        if !u.is_finite() {
            return Err(Error::NonFinite { time: t });
        }
        observe(t, u)?;
        let h = hamiltonian_with_sign(u, p, nl.sign);
        let hs = l2x_hsy(u, config.s_monitor);
        trace.times.push(t);
        trace.mass_series.push(mass(u));
        trace.hamiltonian_series.push(h);
        trace.l2x_hsy_series.push(hs);
        trace.linf_series.push(u.max_abs());
        if let (Some(q), Some(series)) = (&config.reference, trace.orbital_distance_series.as_mut()) {
            series.push(orbital_fit(u, q)?.distance);
        }
        let h0 = trace.hamiltonian_series[0];
        let hs0 = trace.l2x_hsy_series[0];
        if hs0 > 0.0 && hs > config.blowup_factor * hs0 {
            return Ok(Some(AbortReason::BlowUp { time: t, ratio: hs / hs0 }));
        }
        let drift = if h0 == 0.0 { (h - h0).abs() } else { (h - h0).abs() / h0.abs() };
        if drift > config.hamiltonian_tolerance {
            return Ok(Some(AbortReason::HamiltonianDrift { time: t, drift }));
        }
        Ok(None)
    };
    let mut u = u0.to_physical();
    record(&u, 0.0, &mut trace)?;
    let mut step = 0;
    while step < n_steps {
        let block = config.sample_stride.min(n_steps - step);
        nl.rotate(u.values_mut(), 0.5 * dt);
        for b in 0..block {
            let mut s = u.into_spectral();
            s.values_mut().iter_mut().zip(&group).for_each(|(z, g)| *z *= g);
            u = s.into_physical();
            let tail = if b + 1 == block { 0.5 } else { 1.0 };
            nl.rotate(u.values_mut(), tail * dt);
        }
        step += block;
        if let Some(reason) = record(&u, step as f64 * dt, &mut trace)? {
            trace.aborted = Some(reason);
            break;
        }
    }
    trace.state = u;
    Ok(trace)
}
