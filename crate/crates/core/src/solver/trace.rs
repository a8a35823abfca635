use crate::error::{Error, Result};
use crate::hermite_basis::HermiteField;
use crate::tf_analysis::StftPlan;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Observables recorded at one snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct Monitors {
    pub l2_norm: f64,
    /// `(p, ‖u‖_{M^{p,p}})`.
    pub mpp_norms: Vec<(f64, f64)>,
    /// `Σ (2|α|+d) |c_α|²`.
    pub energy: f64,
}

impl Monitors {
    pub fn measure(f: &HermiteField, plan: Option<&StftPlan>, ps: &[f64]) -> Result<Self> {
        let mut mpp_norms = Vec::with_capacity(ps.len());
        if let Some(plan) = plan {
            let table = plan.apply(f)?;
            for &p in ps {
                mpp_norms.push((p, table.mixed_norm(p, p)?));
            }
        }
        Ok(Monitors { l2_norm: f.l2_norm(), mpp_norms, energy: f.energy() })
    }

    pub fn all_finite(&self) -> bool {
        self.l2_norm.is_finite() && self.energy.is_finite() && self.mpp_norms.iter().all(|(_, v)| v.is_finite())
    }

    /// Largest ratio of any monitored norm to its value in `initial`.
    pub fn growth_over(&self, initial: &Monitors) -> f64 {
        let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else if a > 0.0 { f64::INFINITY } else { 1.0 };
        let mut worst = ratio(self.l2_norm, initial.l2_norm).max(ratio(self.energy, initial.energy));
        for ((_, a), (_, b)) in self.mpp_norms.iter().zip(&initial.mpp_norms) {
            worst = worst.max(ratio(*a, *b));
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: HermiteField,
    pub monitors: Monitors,
    pub flags: Vec<String>,
}

impl Snapshot {
    /// One JSON-lines record: `{t, l2, m11, m22, energy, flags}`.
    pub fn record(&self) -> TraceRecord {
        TraceRecord {
            t: self.t,
            l2: self.monitors.l2_norm,
            mpp: self.monitors.mpp_norms.iter().map(|(p, v)| (format!("m{p}{p}"), *v)).collect(),
            energy: self.monitors.energy,
            flags: self.flags.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub l2: f64,
    #[serde(flatten)]
    pub mpp: BTreeMap<String, f64>,
    pub energy: f64,
    pub flags: Vec<String>,
}

/// Snapshots at strictly increasing times.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvolutionTrace {
    snapshots: Vec<Snapshot>,
}

impl EvolutionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, s: Snapshot) -> Result<()> {
        if let Some(last) = self.snapshots.last() {
            if !(s.t > last.t) {
                return Err(Error::invalid(format!("snapshot time {} does not follow {}", s.t, last.t)));
            }
        }
        if !s.monitors.all_finite() {
            return Err(Error::MonitorBreach { t: s.t, reason: "non-finite monitor".into() });
        }
        self.snapshots.push(s);
        Ok(())
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn last(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }
}
