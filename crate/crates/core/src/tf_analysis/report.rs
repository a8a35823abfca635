use super::lattice::TFLattice;
use super::stft::StftPlan;
use crate::error::{Error, Result};
use crate::hermite_basis::{lp_norm, HermiteField};
use serde::{Deserialize, Serialize};

/// A norm that can sit on either side of an embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum NormKind {
    Lebesgue { p: f64 },
    Modulation { p: f64, q: f64 },
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormKind::Lebesgue { p } => write!(f, "L^{p}"),
            NormKind::Modulation { p, q } => write!(f, "M^{{{p},{q}}}"),
        }
    }
}

/// Extremes of `‖f‖_target / ‖f‖_source` over a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub source: NormKind,
    pub target: NormKind,
    pub sup_ratio: f64,
    pub inf_ratio: f64,
}

/// Evaluates one norm, reusing a prebuilt STFT plan for modulation norms.
pub fn evaluate_norm(f: &HermiteField, kind: NormKind, plan: &StftPlan) -> Result<f64> {
    match kind {
        NormKind::Lebesgue { p } => lp_norm(f, p),
        NormKind::Modulation { p, q } => plan.apply(f)?.mixed_norm(p, q),
    }
}

/// Sup and inf of target/source norm ratios over `family`, one row per pair.
/// Diagnostic only: no embedding constant is asserted.
pub fn embedding_ratio_report(
    family: &[HermiteField],
    spaces: &[(NormKind, NormKind)],
    lat: &TFLattice,
) -> Result<Vec<RatioRow>> {
    let first = family.first().ok_or_else(|| Error::invalid("embedding report needs a nonempty family"))?;
    let cutoff = family.iter().map(|f| f.cutoff()).max().unwrap_or(1);
    let plan = StftPlan::new(&TFLattice { dim: first.dim(), ..lat.clone() }, cutoff)?;
    spaces
        .iter()
        .map(|&(source, target)| {
            let mut sup: f64 = 0.0;
            let mut inf = f64::INFINITY;
            for f in family {
                let r = evaluate_norm(f, target, &plan)? / evaluate_norm(f, source, &plan)?;
                sup = sup.max(r);
                inf = inf.min(r);
            }
            Ok(RatioRow { source, target, sup_ratio: sup, inf_ratio: inf })
        })
        .collect()
}
