use crate::error::{Error, Result};
use crate::nonlinearity::{BoxGrid, KernelSpec, RealEntireSeries};
use crate::spectral_propagator::SignConvention;
use crate::tf_analysis::TFLattice;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Successive Picard solves on windows of length `dt`.
    Picard,
    Lie,
    #[default]
    Strang,
}

/// The nonlinear term `F(u)` in `i∂ₜu − Hu = F(u)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearitySpec {
    #[default]
    None,
    /// `sign · |u|^{2k} u`.
    Power { k: u32, sign: f64 },
    /// `(K ∗ |u|^{2k}) u`, convolved on `box_grid`.
    Hartree {
        kernel: KernelSpec,
        #[serde(default = "one")]
        k: u32,
        #[serde(default)]
        box_grid: Option<BoxGrid>,
    },
    Series { series: RealEntireSeries },
}

fn one() -> u32 {
    1
}

impl NonlinearitySpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            NonlinearitySpec::None | NonlinearitySpec::Series { .. } => Ok(()),
            NonlinearitySpec::Power { k, sign } => {
                if *k == 0 || !sign.is_finite() || *sign == 0.0 {
                    return Err(Error::invalid(format!("power nonlinearity needs k ≥ 1 and a nonzero sign (got {k}, {sign})")));
                }
                Ok(())
            }
            NonlinearitySpec::Hartree { kernel, k, box_grid } => {
                if *k == 0 {
                    return Err(Error::invalid("Hartree power k must be positive"));
                }
                kernel.validate(dim)?;
                box_grid.unwrap_or_else(|| BoxGrid::for_dim(dim)).axes(dim)?;
                Ok(())
            }
        }
    }

    /// Whether `F(u) = G(|u|²) u` with real `G`, so the nonlinear flow only
    /// rotates phases and conserves `|u|` pointwise.
    pub fn is_gauge(&self, dim: usize) -> bool {
        match self {
            NonlinearitySpec::None | NonlinearitySpec::Power { .. } => true,
            NonlinearitySpec::Hartree { kernel, .. } => kernel.is_even(dim),
            NonlinearitySpec::Series { series } => series.is_real_gauge(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Stop Picard once the sup-in-time l2 difference falls below this.
    pub fixed_point: f64,
    /// Largest admitted `|‖u(t)‖/‖u₀‖ − 1|` for gauge nonlinearities.
    pub conservation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { fixed_point: 1e-12, conservation: 1e-9 }
    }
}

/// Which modulation norms are recorded at each snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    /// `p` values for `‖u(t)‖_{M^{p,p}}`; empty disables them.
    #[serde(default = "default_monitor_p")]
    pub p: Vec<f64>,
    /// Defaults to `TFLattice::for_cutoff(d, N, 0.25·2^{d-1}, 1)`.
    #[serde(default)]
    pub lattice: Option<TFLattice>,
}

fn default_monitor_p() -> Vec<f64> {
    vec![1.0, 2.0]
}

impl Default for MonitorConfig {
    fn default() -> Self {
        MonitorConfig { p: default_monitor_p(), lattice: None }
    }
}

impl MonitorConfig {
    pub fn lattice_for(&self, dim: usize, cutoff: usize) -> Result<TFLattice> {
        match &self.lattice {
            Some(lat) if lat.dim == dim => Ok(lat.clone()),
            Some(lat) => Err(Error::DimensionMismatch { expected: dim, got: lat.dim }),
            None => TFLattice::for_cutoff(dim, cutoff, 0.25 * 2f64.powi(dim as i32 - 1), 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub horizon: f64,
    pub dt: f64,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub nonlinearity: NonlinearitySpec,
    /// Multiplies `F`; the linear limit is `coupling → 0`.
    #[serde(default = "unit")]
    pub coupling: f64,
    #[serde(default = "default_picard_iters")]
    pub picard_iters: usize,
    /// Gauss–Legendre nodes per Duhamel integral.
    #[serde(default = "default_quadrature_nodes")]
    pub time_quadrature_nodes: usize,
    /// Chebyshev–Lobatto times at which Picard iterates are stored.
    #[serde(default = "default_time_samples")]
    pub time_samples: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub sign_convention: SignConvention,
    /// Spacing of recorded snapshots; defaults to `horizon / 10`.
    #[serde(default)]
    pub snapshot_interval: Option<f64>,
    #[serde(default)]
    pub monitors: MonitorConfig,
    /// Restrict Picard to the local theory: Hartree kernels need
    /// `γ < min{2, d/2}`.
    #[serde(default = "yes")]
    pub well_posed_scope: bool,
}

fn unit() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn default_picard_iters() -> usize {
    30
}

fn default_quadrature_nodes() -> usize {
    8
}

fn default_time_samples() -> usize {
    16
}

impl SolverConfig {
    pub fn new(horizon: f64, dt: f64, scheme: Scheme, nonlinearity: NonlinearitySpec) -> Self {
        SolverConfig {
            horizon,
            dt,
            scheme,
            nonlinearity,
            coupling: 1.0,
            picard_iters: default_picard_iters(),
            time_quadrature_nodes: default_quadrature_nodes(),
            time_samples: default_time_samples(),
            tolerances: Tolerances::default(),
            sign_convention: SignConvention::default(),
            snapshot_interval: None,
            monitors: MonitorConfig::default(),
            well_posed_scope: true,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::invalid(format!("horizon must be positive (got {})", self.horizon)));
        }
        if !(self.dt > 0.0) || self.dt > self.horizon {
            return Err(Error::invalid(format!("need 0 < dt ≤ horizon (got dt = {}, T = {})", self.dt, self.horizon)));
        }
        if self.picard_iters < 2 {
            return Err(Error::invalid("picard_iters must be at least 2"));
        }
        if self.time_quadrature_nodes == 0 || self.time_samples < 2 {
            return Err(Error::invalid("need at least one quadrature node and two time samples"));
        }
        if !(self.tolerances.fixed_point > 0.0) || !(self.tolerances.conservation > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if !self.coupling.is_finite() {
            return Err(Error::invalid("coupling must be finite"));
        }
        if let Some(s) = self.snapshot_interval {
            if !(s > 0.0) {
                return Err(Error::invalid("snapshot interval must be positive"));
            }
        }
        if self.monitors.p.iter().any(|&p| !(p >= 1.0)) {
            return Err(Error::ExponentRange("monitor exponents must be at least 1".into()));
        }
        self.nonlinearity.validate(dim)
    }

    /// `(steps, step length)` with the step shrunk so that it divides `horizon`.
    pub fn steps(&self) -> (usize, f64) {
        let n = (self.horizon / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.horizon / n as f64)
    }

    pub fn scaled_coupling(&self, factor: f64) -> Self {
        SolverConfig { coupling: self.coupling * factor, ..self.clone() }
    }
}
