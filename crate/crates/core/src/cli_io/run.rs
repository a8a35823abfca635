//! The `evolve`, `norm` and `report` subcommands.

use super::config::{RunConfig, VERSION};
use super::datum::{make_datum, Datum, DatumSpec};
use super::output::{read_trace, TraceHeader, TraceWriter, TRACE_FILE};
use crate::error::Result;
use crate::solver::evolve_streaming;
use crate::tf_analysis::modulation_norm;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// The configured datum, with file paths resolved against the config.
pub fn config_datum(cfg: &RunConfig) -> Result<Datum> {
    let spec = match &cfg.datum {
        DatumSpec::File { path } => DatumSpec::File { path: cfg.resolve(path) },
        other => other.clone(),
    };
    make_datum(&spec, cfg.dimension, cfg.basis.cutoff)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveSummary {
    pub output_dir: PathBuf,
    pub snapshots: usize,
    pub final_l2: f64,
}

/// Evolves the datum and writes the trace, plot CSV and optional dumps into
/// the output directory. A monitor breach still leaves a complete trace up
/// to and including the flagged snapshot.
pub fn run_evolve(cfg: &RunConfig) -> Result<EvolveSummary> {
    let datum = config_datum(cfg)?;
    let solver = cfg.solver_config()?;
    let dir = cfg.output_path();
    let header = TraceHeader::new(VERSION, &cfg.hash()?, cfg.dimension, cfg.basis.cutoff);
    let mut writer = TraceWriter::create(&dir, &header, cfg.output.snapshots)?;
    let result = evolve_streaming(&datum.field, &solver, |s| writer.push(s));
    let snapshots = writer.len();
    writer.finish()?;
    let field = result?;
    Ok(EvolveSummary { output_dir: dir, snapshots, final_l2: field.l2_norm() })
}

/// `‖u₀‖_{M^{p,q}}` of the configured datum on the configured lattice.
pub fn run_norm(cfg: &RunConfig, p: f64, q: f64) -> Result<f64> {
    let datum = config_datum(cfg)?;
    modulation_norm(&datum.field, p, q, &cfg.norm_lattice()?)
}

/// Summary of a trace directory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceSummary {
    pub header: TraceHeader,
    pub snapshots: usize,
    pub t_final: f64,
    /// `max_t |‖u(t)‖/‖u₀‖ − 1|`.
    pub l2_drift: f64,
    /// Per `M^{p,p}` monitor, `max_t ‖u(t)‖/‖u₀‖`.
    pub mpp_growth: BTreeMap<String, f64>,
    pub energy_growth: f64,
    /// How many snapshots carry each flag.
    pub flags: BTreeMap<String, usize>,
}

pub fn run_report(trace_dir: &Path) -> Result<TraceSummary> {
    let (header, records) = read_trace(&trace_dir.join(TRACE_FILE))?;
    let first = records.first();
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { f64::NAN };
    let mut summary = TraceSummary {
        header,
        snapshots: records.len(),
        t_final: records.last().map_or(0.0, |r| r.t),
        l2_drift: 0.0,
        mpp_growth: BTreeMap::new(),
        energy_growth: if first.is_some() { 1.0 } else { 0.0 },
        flags: BTreeMap::new(),
    };
    if let Some(first) = first {
        for r in &records {
            summary.l2_drift = summary.l2_drift.max((ratio(r.l2, first.l2) - 1.0).abs());
            summary.energy_growth = summary.energy_growth.max(ratio(r.energy, first.energy));
            for (k, v) in &r.mpp {
                if let Some(v0) = first.mpp.get(k) {
                    let g = summary.mpp_growth.entry(k.clone()).or_insert(1.0);
                    *g = g.max(ratio(*v, *v0));
                }
            }
            for f in &r.flags {
                *summary.flags.entry(f.clone()).or_insert(0) += 1;
            }
        }
    }
    Ok(summary)
}

impl std::fmt::Display for TraceSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "version      {}", self.header.version)?;
        writeln!(f, "config hash  {}", self.header.config_hash)?;
        writeln!(f, "snapshots    {} (d = {}, cutoff {})", self.snapshots, self.header.dimension, self.header.cutoff)?;
        writeln!(f, "t final      {}", self.t_final)?;
        writeln!(f, "l2 drift     {:.3e}", self.l2_drift)?;
        for (k, g) in &self.mpp_growth {
            writeln!(f, "{k} growth   {g:.6}")?;
        }
        writeln!(f, "energy growth {:.6}", self.energy_growth)?;
        for (k, n) in &self.flags {
            writeln!(f, "flag {k}: {n}")?;
        }
        Ok(())
    }
}
