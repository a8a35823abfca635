//! Run configuration: one TOML file with a section per module.
//!
//! ```toml
//! dimension = 1
//! seed = 1
//! output_dir = "out"
//!
//! [basis]
//! cutoff = 16
//!
//! [solver]
//! horizon = 1.0
//! dt = 0.01
//! [solver.nonlinearity]
//! kind = "hartree"
//! kernel = { kind = "hartree", lambda = 1.0, gamma = 0.4 }
//!
//! [datum]
//! kind = "gaussian"
//! width = 1.0
//! ```
//!
//! Relative paths resolve against the directory holding the file.

use super::datum::DatumSpec;
use super::kernel_file::load_grid_kernel;
use crate::error::{Error, Result};
use crate::nonlinearity::KernelSpec;
use crate::solver::{NonlinearitySpec, SolverConfig};
use crate::tf_analysis::TFLattice;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Version string baked in at build time (`git describe`, else the crate version).
pub const VERSION: &str = env!("HERMION_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    /// Hermite modes per axis.
    pub cutoff: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Write a coefficient dump next to every trace record.
    #[serde(default)]
    pub snapshots: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Replace the linear group by one with level `k` sign-flipped.
    #[serde(default)]
    pub tamper_level: Option<usize>,
    /// Check ids whose failure does not fail the suite.
    #[serde(default)]
    pub soft: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Grid kernel (binary dump or CSV) replacing the Hartree kernel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_file: Option<PathBuf>,
    pub basis: BasisConfig,
    /// Lattice for `norm`; defaults to one sized for the cutoff.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<TFLattice>,
    pub solver: SolverConfig,
    pub datum: DatumSpec,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(skip)]
    base_dir: Option<PathBuf>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    /// Parses and validates; relative paths stay relative to the working directory.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Parse("empty configuration".into()));
        }
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// Canonical TOML; parsing it back gives the same configuration.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// SHA-256 of [`RunConfig::to_toml`], lowercase hex.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(self.to_toml()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        if self.basis.cutoff == 0 {
            return Err(Error::invalid("basis cutoff must be positive"));
        }
        if let Some(lat) = &self.lattice {
            if lat.dim != self.dimension {
                return Err(Error::DimensionMismatch { expected: self.dimension, got: lat.dim });
            }
            lat.validate()?;
        }
        if self.kernel_file.is_some() && !matches!(self.solver.nonlinearity, NonlinearitySpec::Hartree { .. }) {
            return Err(Error::invalid("kernel_file needs a hartree nonlinearity"));
        }
        self.datum.validate()?;
        self.solver.validate(self.dimension)
    }

    /// `p` joined to the config directory unless absolute.
    pub fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    /// Norm lattice: the configured one or `for_cutoff(d, N, 0.25, 1)`.
    pub fn norm_lattice(&self) -> Result<TFLattice> {
        match &self.lattice {
            Some(lat) => Ok(lat.clone()),
            None => TFLattice::for_cutoff(self.dimension, self.basis.cutoff, 0.25, 1.0),
        }
    }

    /// Solver settings with the kernel file, if any, loaded in place of the
    /// configured kernel.
    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut solver = self.solver.clone();
        if let (Some(file), NonlinearitySpec::Hartree { kernel, .. }) = (&self.kernel_file, &mut solver.nonlinearity) {
            let loaded: KernelSpec = load_grid_kernel(&self.resolve(file), self.dimension)?;
            *kernel = loaded;
            solver.validate(self.dimension)?;
        }
        Ok(solver)
    }
}
