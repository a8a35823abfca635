//! The invariant suite behind `hermion verify`.
//!
//! Every check runs isolated: an error or a panic marks that check failed
//! and the rest still run. Checks execute on a bounded rayon pool but the
//! report keeps the fixed order of [`CHECKS`]. Wall-clock timings go to a
//! separate value so the report itself is byte-reproducible.

use super::config::{RunConfig, VERSION};
use crate::error::{Error, Result};
use crate::family::{field_family, smooth_family};
use crate::hermite_basis::{GridField, HermiteField, QuadratureRule};
use crate::nonlinearity::{
    extrapolated_hartree_transform, hartree_constant, hartree_kernel_fourier, hls_ratio, BoxGrid, KernelSpec,
    MultilinearProbe, PINNED_HARTREE_CONSTANTS,
};
use crate::solver::{
    empirical_trilinear_constant, evolve_nonlinear, hartree_pair, is_admissible, local_existence_time, picard_solve,
    NonlinearitySpec, Scheme, SolverConfig,
};
use crate::spectral_propagator::{LinearPropagator, SignConvention};
use crate::tf_analysis::{
    special_hermite_table, ui_identity_deviation, StftPlan, TFLattice, WignerPlan, MAGIC,
};
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const REPORT_FILE: &str = "verify_report.json";
pub const TIMINGS_FILE: &str = "verify_timings.json";
/// Caps the verify worker pool.
pub const THREADS_VAR: &str = "HERMION_THREADS";

struct Context {
    seed: u64,
    prop: LinearPropagator,
}

#[derive(Default)]
struct Outcome {
    measured: BTreeMap<String, f64>,
    passed: bool,
    detail: Option<String>,
}

impl Outcome {
    fn with(mut self, key: &str, v: f64) -> Self {
        self.measured.insert(key.into(), v);
        self
    }
}

struct Check {
    id: &'static str,
    statement: &'static str,
    tolerance: &'static str,
    run: fn(&Context) -> Result<Outcome>,
}

pub const CHECK_IDS: [&str; 14] = [
    "isometry",
    "non_preservation",
    "moyal",
    "ui_identity",
    "special_hermite",
    "conservation",
    "revival",
    "strang_order",
    "picard_contraction",
    "hartree_constant",
    "hls",
    "trilinear",
    "admissible_pair",
    "determinism",
];

const CHECKS: [Check; 14] = [
    Check {
        id: "isometry",
        statement: "‖e^{itH}f‖_{M^{p,p}} = ‖f‖_{M^{p,p}}",
        tolerance: "relative change ≤ 1e-3 over 20 fields (d=1, N=24), p ∈ {1,2,4}, t ∈ {0.3, 1, π/2}; half-step lattice shrinks the worst error ≥ 2×",
        run: isometry,
    },
    Check {
        id: "non_preservation",
        statement: "e^{itH} is not bounded-norm-preserving on M^{p,q} for p ≠ q",
        tolerance: "some t in a 32-point scan of [0, π] changes ‖Φ_0+Φ_1‖_{M^{1,2}} by ≥ 1e-2 relative (lattice refined once if not)",
        run: non_preservation,
    },
    Check {
        id: "moyal",
        statement: "‖V_g f‖_{L²} = ‖g‖_{L²}‖f‖_{L²}",
        tolerance: "‖f‖_{M^{2,2}} = ‖f‖_{L²} within 1e-6 relative, 10 random fields, unit window",
        run: moyal,
    },
    Check {
        id: "ui_identity",
        statement: "F(x,y) = (2π)^{d/2} e^{-i x·y/2} V_g f(y, -x)",
        tolerance: "max deviation ≤ 1e-8 over the lattice for Φ_0, Φ_1, Φ_0 + iΦ_2",
        run: ui_identity,
    },
    Check {
        id: "special_hermite",
        statement: "special Hermite functions form an orthonormal basis of L²(ℂ^d)",
        tolerance: "Gram matrix for |α| ≤ 4 (d=1) within 1e-6 of identity; Fourier–Wigner transform of Φ_α within 1e-8 of the closed form",
        run: special_hermite,
    },
    Check {
        id: "conservation",
        statement: "‖u(t)‖_{L²} = ‖u₀‖_{L²}",
        tolerance: "relative L² drift ≤ 1e-9 for cubic and Hartree Strang runs (d=1, T=5, dt=1e-3)",
        run: conservation,
    },
    Check {
        id: "revival",
        statement: "e^{-iπH} = (-1)^d",
        tolerance: "max coefficient deviation ≤ 1e-12 for d = 1, 2",
        run: revival,
    },
    Check {
        id: "strang_order",
        statement: "Strang splitting is second order",
        tolerance: "observed order in [1.8, 2.2] on dt ∈ {4e-3, 2e-3, 1e-3}, cubic, T = 0.5",
        run: strang_order,
    },
    Check {
        id: "picard_contraction",
        statement: "c T M² ≤ 1/2 makes the Duhamel map a contraction",
        tolerance: "ratio < 1 for ≥ 95% of 20 small fields at T = local_existence_time(M, c); Picard and Strang agree at T to l² ≤ 1e-4",
        run: picard_contraction,
    },
    Check {
        id: "hartree_constant",
        statement: "FT(|x|^{-γ}) = C(d,γ) |ξ|^{γ-d}",
        tolerance: "pinned C(d,γ) within 1e-3 relative of the mollified transform at |ξ| ∈ {0.5, 1, 2}; homogeneity within 1e-12",
        run: hartree_constant_check,
    },
    Check {
        id: "hls",
        statement: "‖|x|^{-γ} ∗ f‖_{L^q} ≤ C ‖f‖_{L^p}",
        tolerance: "ratio finite and constant within 1% over dilations λ ∈ {1/2, 1, 2} (d=1, γ=0.5, p=4/3)",
        run: hls,
    },
    Check {
        id: "trilinear",
        statement: "‖(K ∗ |f|²) f‖_{M^{p,q}} ≤ C ‖f‖³_{M^{p,q}}",
        tolerance: "scale invariance ≤ 1e-10 under f → 3f; family supremum finite and within 10% across two seeds",
        run: trilinear,
    },
    Check {
        id: "admissible_pair",
        statement: "q = 8/γ, r = 4d/(2d-γ) satisfies 2/q = d(1/2 - 1/r)",
        tolerance: "exact rational equality for γ ∈ {3/10, 7/10}, d ∈ {1, 2, 3}",
        run: admissible_pair_check,
    },
    Check {
        id: "determinism",
        statement: "fixed seed and configuration give bit-identical output",
        tolerance: "two Hartree runs (d=1, γ=0.4, T=1) serialize to identical traces with ≥ 10 finite snapshots",
        run: determinism,
    },
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// The property the check exercises.
    pub citation: String,
    pub hard: bool,
    pub passed: bool,
    pub tolerance: String,
    pub measured: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub format: String,
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub tamper_level: Option<usize>,
    pub checks: Vec<CheckResult>,
    /// No hard check failed.
    pub passed: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| Error::Format(e.to_string()))
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyRun {
    pub report: VerifyReport,
    /// Wall-clock seconds per check, report order.
    pub timings: Vec<(String, f64)>,
}

/// Worker count from `HERMION_THREADS`; `None` lets rayon decide.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Parse(format!("{THREADS_VAR} must be a positive integer (got {s:?})"))),
        },
    }
}

/// Runs every check, or only `only`, on a pool capped by `HERMION_THREADS`.
pub fn run_verify(cfg: &RunConfig, only: Option<&str>) -> Result<VerifyRun> {
    if let Some(id) = only {
        if !CHECK_IDS.contains(&id) {
            return Err(Error::Parse(format!("unknown check {id:?}; known: {}", CHECK_IDS.join(", "))));
        }
    }
    let ctx = Context {
        seed: cfg.seed,
        prop: match cfg.verify.tamper_level {
            Some(k) => LinearPropagator::tampered(SignConvention::Minus, k),
            None => LinearPropagator::new(SignConvention::Minus),
        },
    };
    let selected: Vec<&Check> = CHECKS.iter().filter(|c| only.is_none_or(|id| c.id == id)).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let results: Vec<(CheckResult, f64)> = pool.install(|| {
        selected
            .par_iter()
            .map(|check| {
                let start = Instant::now();
                let outcome = match catch_unwind(AssertUnwindSafe(|| (check.run)(&ctx))) {
                    Ok(Ok(o)) => o,
                    Ok(Err(e)) => Outcome { detail: Some(format!("error: {e}")), ..Outcome::default() },
                    Err(payload) => {
                        let msg = payload
                            .downcast_ref::<&str>()
                            .map(|s| s.to_string())
                            .or_else(|| payload.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "unknown panic".into());
                        Outcome { detail: Some(format!("panicked: {msg}")), ..Outcome::default() }
                    }
                };
                let result = CheckResult {
                    id: check.id.into(),
                    citation: check.statement.into(),
                    hard: !cfg.verify.soft.iter().any(|s| s == check.id),
                    passed: outcome.passed,
                    tolerance: check.tolerance.into(),
                    measured: outcome.measured,
                    detail: outcome.detail,
                };
                (result, start.elapsed().as_secs_f64())
            })
            .collect()
    });
    let timings = results.iter().map(|(r, t)| (r.id.clone(), *t)).collect();
    let checks: Vec<CheckResult> = results.into_iter().map(|(r, _)| r).collect();
    let passed = checks.iter().all(|c| c.passed || !c.hard);
    let report = VerifyReport {
        format: String::from_utf8_lossy(MAGIC).into_owned(),
        version: VERSION.into(),
        config_hash: cfg.hash()?,
        seed: cfg.seed,
        tamper_level: cfg.verify.tamper_level,
        checks,
        passed,
    };
    Ok(VerifyRun { report, timings })
}

/// Writes the report and, separately, the timings into `dir`.
pub fn write_verify(run: &VerifyRun, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", dir.display())))?;
    let report = dir.join(REPORT_FILE);
    std::fs::write(&report, run.report.to_json()?)?;
    let timings = dir.join(TIMINGS_FILE);
    let map: BTreeMap<&str, f64> = run.timings.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    std::fs::write(&timings, serde_json::to_string_pretty(&map).map_err(|e| Error::Format(e.to_string()))? + "\n")?;
    Ok((report, timings))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn isometry(ctx: &Context) -> Result<Outcome> {
    let family = field_family(1, 24, 20, ctx.seed);
    let lat = TFLattice::for_cutoff(1, 24, 0.25, 1.0)?;
    let times = [0.3, 1.0, PI / 2.0];
    let ps = [1.0, 2.0, 4.0];
    let worst_on = |lat: &TFLattice| -> Result<Vec<f64>> {
        let plan = StftPlan::new(lat, 24)?;
        let mut worst = vec![0.0f64; ps.len()];
        for f in &family {
            let before = plan.apply(f)?;
            for &t in &times {
                let after = plan.apply(&ctx.prop.evolve(f, t))?;
                for (w, &p) in worst.iter_mut().zip(&ps) {
                    *w = w.max(rel(after.mixed_norm(p, p)?, before.mixed_norm(p, p)?));
                }
            }
        }
        Ok(worst)
    };
    let coarse = worst_on(&lat)?;
    let fine = worst_on(&lat.rescaled(0.5)?)?;
    let worst_coarse = coarse.iter().cloned().fold(0.0, f64::max);
    let worst_fine = fine.iter().cloned().fold(0.0, f64::max);
    let shrink = worst_coarse / worst_fine;
    let mut out = Outcome { passed: worst_coarse <= 1e-3 && shrink >= 2.0, ..Outcome::default() };
    for (k, &p) in ps.iter().enumerate() {
        out = out.with(&format!("worst_p{p}"), coarse[k]).with(&format!("worst_p{p}_half_step"), fine[k]);
    }
    Ok(out.with("worst", worst_coarse).with("refinement_shrink", shrink))
}

fn non_preservation(ctx: &Context) -> Result<Outcome> {
    let f = HermiteField::from_coeffs(1, 2, vec![Complex64::new(1.0, 0.0); 2])?;
    let scan = |lat: &TFLattice| -> Result<f64> {
        let plan = StftPlan::new(lat, 2)?;
        let n0 = plan.apply(&f)?.mixed_norm(1.0, 2.0)?;
        let mut best: f64 = 0.0;
        for j in 0..32 {
            let t = PI * j as f64 / 31.0;
            best = best.max(rel(plan.apply(&ctx.prop.evolve(&f, t))?.mixed_norm(1.0, 2.0)?, n0));
        }
        Ok(best)
    };
    let lat = TFLattice::for_cutoff(1, 2, 0.25, 1.0)?;
    let first = scan(&lat)?;
    let out = Outcome::default().with("max_relative_change", first);
    if first >= 1e-2 {
        return Ok(Outcome { passed: true, ..out });
    }
    let refined = scan(&lat.rescaled(0.5)?)?;
    Ok(Outcome { passed: refined >= 1e-2, ..out.with("max_relative_change_refined", refined) })
}

fn moyal(ctx: &Context) -> Result<Outcome> {
    let lat = TFLattice::for_cutoff(1, 16, 0.25, 1.0)?;
    let plan = StftPlan::new(&lat, 16)?;
    let mut worst: f64 = 0.0;
    for f in field_family(1, 16, 10, ctx.seed.wrapping_add(100)) {
        worst = worst.max(rel(plan.apply(&f)?.mixed_norm(2.0, 2.0)?, f.l2_norm()));
    }
    Ok(Outcome { passed: worst <= 1e-6, ..Outcome::default() }.with("worst_relative", worst))
}

fn ui_identity(_: &Context) -> Result<Outcome> {
    let lat = TFLattice::for_cutoff(1, 3, 0.25, 1.0)?;
    let c = |re, im| Complex64::new(re, im);
    let fields = [
        HermiteField::basis(1, 3, &[0])?,
        HermiteField::basis(1, 3, &[1])?,
        HermiteField::from_coeffs(1, 3, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])?,
    ];
    let mut worst: f64 = 0.0;
    for f in &fields {
        worst = worst.max(ui_identity_deviation(f, &lat)?);
    }
    Ok(Outcome { passed: worst <= 1e-8, ..Outcome::default() }.with("max_deviation", worst))
}

fn special_hermite(_: &Context) -> Result<Outcome> {
    let lat = TFLattice::for_cutoff(1, 5, 0.25, 1.0)?;
    let tables = (0..5).map(|a| special_hermite_table(&[a], &lat)).collect::<Result<Vec<_>>>()?;
    let scale = lat.x_step * lat.y_step / (2.0 * PI);
    let mut gram: f64 = 0.0;
    for a in 0..5 {
        for b in 0..5 {
            let g: Complex64 =
                tables[a].values.iter().zip(&tables[b].values).map(|(u, v)| u * v.conj()).sum::<Complex64>() * scale;
            let target = if a == b { 1.0 } else { 0.0 };
            gram = gram.max((g - target).norm());
        }
    }
    let plan = WignerPlan::new(&lat, 5)?;
    let mut closed: f64 = 0.0;
    for a in 0..5 {
        let fw = plan.apply(&HermiteField::basis(1, 5, &[a])?)?;
        closed = fw.values.iter().zip(&tables[a].values).fold(closed, |m, (u, v)| m.max((u - v).norm()));
    }
    Ok(Outcome { passed: gram <= 1e-6 && closed <= 1e-8, ..Outcome::default() }
        .with("gram_max_entry_error", gram)
        .with("closed_form_max_deviation", closed))
}

fn hartree() -> NonlinearitySpec {
    NonlinearitySpec::Hartree { kernel: KernelSpec::Hartree { lambda: 1.0, gamma: 0.4 }, k: 1, box_grid: None }
}

fn cubic() -> NonlinearitySpec {
    NonlinearitySpec::Power { k: 1, sign: -1.0 }
}

/// Solver settings without modulation monitors.
fn plain(horizon: f64, dt: f64, scheme: Scheme, spec: NonlinearitySpec) -> SolverConfig {
    let mut cfg = SolverConfig::new(horizon, dt, scheme, spec);
    cfg.monitors.p.clear();
    cfg
}

fn final_field(u0: &HermiteField, cfg: &SolverConfig) -> Result<HermiteField> {
    let trace = evolve_nonlinear(u0, cfg)?;
    Ok(trace.last().expect("traces hold the initial snapshot").field.clone())
}

fn conservation(ctx: &Context) -> Result<Outcome> {
    let u0 = smooth_family(1, 16, 1, 3.0, ctx.seed).remove(0);
    let mut out = Outcome::default();
    let mut worst: f64 = 0.0;
    for (name, spec) in [("cubic", cubic()), ("hartree", hartree())] {
        let mut cfg = plain(5.0, 1e-3, Scheme::Strang, spec);
        // measured here rather than enforced by the solver
        cfg.tolerances.conservation = 1.0;
        let drift = evolve_nonlinear(&u0, &cfg)?
            .snapshots()
            .iter()
            .map(|s| rel(s.monitors.l2_norm, u0.l2_norm()))
            .fold(0.0, f64::max);
        worst = worst.max(drift);
        out = out.with(&format!("{name}_drift"), drift);
    }
    Ok(Outcome { passed: worst <= 1e-9, ..out })
}

fn revival(ctx: &Context) -> Result<Outcome> {
    let mut out = Outcome { passed: true, ..Outcome::default() };
    for dim in [1usize, 2] {
        let f = field_family(dim, 8, 1, ctx.seed).remove(0);
        let sign = if dim % 2 == 0 { 1.0 } else { -1.0 };
        let dev = ctx.prop.evolve(&f, PI).max_abs_diff(&f.scale(Complex64::new(sign, 0.0)))?;
        out.passed &= dev <= 1e-12;
        out = out.with(&format!("max_deviation_d{dim}"), dev);
    }
    Ok(out)
}

fn strang_order(ctx: &Context) -> Result<Outcome> {
    let u0 = smooth_family(1, 16, 1, 3.0, ctx.seed).remove(0);
    let run = |dt| final_field(&u0, &plain(0.5, dt, Scheme::Strang, cubic()));
    let (a, b, c) = (run(4e-3)?, run(2e-3)?, run(1e-3)?);
    let (e1, e2) = (a.sub(&b)?.l2_norm(), b.sub(&c)?.l2_norm());
    let order = (e1 / e2).log2();
    Ok(Outcome { passed: (1.8..=2.2).contains(&order), ..Outcome::default() }
        .with("order", order)
        .with("difference_coarse", e1)
        .with("difference_fine", e2))
}

fn picard_contraction(ctx: &Context) -> Result<Outcome> {
    let kernel = KernelSpec::Hartree { lambda: 1.0, gamma: 0.4 };
    let family = smooth_family(1, 8, 20, 3.0, ctx.seed);
    let c = empirical_trilinear_constant(&kernel, &family, 1.0, 1.0)?;
    let plan = StftPlan::new(&TFLattice::for_cutoff(1, 8, 0.25, 1.0)?, 8)?;
    let (mut contracting, mut worst_ratio, mut worst_gap) = (0usize, 0.0f64, 0.0f64);
    let (mut t_min, mut t_max) = (f64::INFINITY, 0.0f64);
    for f in &family {
        let u0 = f.scale(Complex64::new(0.5, 0.0));
        let m = 2.0 * plan.apply(&u0)?.mixed_norm(1.0, 1.0)?;
        let t = local_existence_time(m, c, 1.0)?;
        t_min = t_min.min(t);
        t_max = t_max.max(t);
        let out = picard_solve(&u0, &SolverConfig::new(t, t, Scheme::Picard, hartree()))?;
        let ratio = out.max_ratio().unwrap_or(0.0);
        worst_ratio = worst_ratio.max(ratio);
        if ratio < 1.0 {
            contracting += 1;
        }
        let strang = final_field(&u0, &plain(t, 1e-3, Scheme::Strang, hartree()))?;
        worst_gap = worst_gap.max(out.field.sub(&strang)?.l2_norm());
    }
    let fraction = contracting as f64 / family.len() as f64;
    Ok(Outcome { passed: fraction >= 0.95 && worst_gap <= 1e-4, ..Outcome::default() }
        .with("trilinear_constant", c)
        .with("horizon_min", t_min)
        .with("horizon_max", t_max)
        .with("contracting_fraction", fraction)
        .with("worst_ratio", worst_ratio)
        .with("picard_strang_l2_gap", worst_gap))
}

fn hartree_constant_check(_: &Context) -> Result<Outcome> {
    let mut out = Outcome::default();
    let (mut worst, mut homogeneity) = (0.0f64, 0.0f64);
    for &(d, gamma, _, _) in &PINNED_HARTREE_CONSTANTS {
        let c = hartree_constant(d, gamma)?;
        for rho in [0.5, 1.0, 2.0] {
            let numeric = extrapolated_hartree_transform(d, gamma, rho)? * rho.powf(d as f64 - gamma);
            worst = worst.max(rel(c, numeric));
        }
        let xi: Vec<f64> = (0..d).map(|k| 0.3 + 0.2 * k as f64).collect();
        let xi2: Vec<f64> = xi.iter().map(|v| 2.0 * v).collect();
        let scaled = hartree_kernel_fourier(1.0, gamma, &xi2)?;
        let predicted = 2f64.powf(gamma - d as f64) * hartree_kernel_fourier(1.0, gamma, &xi)?;
        homogeneity = homogeneity.max(rel(scaled, predicted));
        out = out.with(&format!("constant_d{d}"), c);
    }
    Ok(Outcome { passed: worst <= 1e-3 && homogeneity <= 1e-12, ..out }
        .with("worst_relative", worst)
        .with("homogeneity_relative", homogeneity))
}

fn hls(_: &Context) -> Result<Outcome> {
    let rule = QuadratureRule::uniform_box(20.0, 2048)?;
    let mut ratios = Vec::new();
    for lam in [0.5f64, 1.0, 2.0] {
        let f = GridField::from_fn(vec![rule.clone()], |x| Complex64::new((-(lam * x[0]).powi(2) / 2.0).exp(), 0.0))?;
        ratios.push(hls_ratio(&f, 0.5, 4.0 / 3.0)?);
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let spread = hi / lo - 1.0;
    Ok(Outcome { passed: lo > 0.0 && hi.is_finite() && spread < 0.01, ..Outcome::default() }
        .with("ratio_min", lo)
        .with("ratio_max", hi)
        .with("relative_spread", spread))
}

fn trilinear(ctx: &Context) -> Result<Outcome> {
    let lat = MultilinearProbe::lattice_for(1, 1, 8, 0.25, 1.0)?;
    let kernel = KernelSpec::Hartree { lambda: 1.0, gamma: 0.4 };
    let probe = MultilinearProbe::new(&kernel, 1, 1, 8, BoxGrid::for_dim(1), &lat)?;
    let sup = |seed| -> Result<f64> {
        smooth_family(1, 8, 20, 3.0, seed).iter().try_fold(0.0f64, |m, f| Ok(m.max(probe.ratio(f, 1.0, 1.0)?)))
    };
    let f = smooth_family(1, 8, 1, 3.0, ctx.seed).remove(0);
    let a = probe.ratio(&f, 1.0, 1.0)?;
    let b = probe.ratio(&f.scale(Complex64::new(3.0, 0.0)), 1.0, 1.0)?;
    let scale = rel(b, a);
    let (s1, s2) = (sup(ctx.seed)?, sup(ctx.seed.wrapping_add(1))?);
    let spread = (s1 - s2).abs() / s1.max(s2);
    let finite = s1.is_finite() && s2.is_finite() && s1 > 0.0 && s2 > 0.0;
    Ok(Outcome { passed: scale <= 1e-10 && finite && spread <= 0.1, ..Outcome::default() }
        .with("scale_deviation", scale)
        .with("sup_seed", s1)
        .with("sup_next_seed", s2)
        .with("seed_spread", spread))
}

fn admissible_pair_check(_: &Context) -> Result<Outcome> {
    let mut exact = 0usize;
    let mut total = 0usize;
    for gamma in [Ratio::new(3, 10), Ratio::new(7, 10)] {
        for d in 1..=3 {
            total += 1;
            let (q, r) = hartree_pair(gamma, d)?;
            if is_admissible(q, r, d) {
                exact += 1;
            }
        }
    }
    Ok(Outcome { passed: exact == total, ..Outcome::default() }
        .with("exact_pairs", exact as f64)
        .with("pairs", total as f64))
}

fn determinism(ctx: &Context) -> Result<Outcome> {
    let u0 = smooth_family(1, 16, 1, 3.0, ctx.seed).remove(0);
    let cfg = SolverConfig::new(1.0, 1e-2, Scheme::Strang, hartree());
    let serialize = || -> Result<(String, usize, bool)> {
        let trace = evolve_nonlinear(&u0, &cfg)?;
        let mut text = String::new();
        for s in trace.snapshots() {
            text += &serde_json::to_string(&s.record()).map_err(|e| Error::Format(e.to_string()))?;
            for c in s.field.coeffs() {
                text += &format!(" {:016x}{:016x}", c.re.to_bits(), c.im.to_bits());
            }
            text.push('\n');
        }
        Ok((text, trace.len(), trace.snapshots().iter().all(|s| s.monitors.all_finite())))
    };
    let (a, n, finite) = serialize()?;
    let (b, _, _) = serialize()?;
    let identical = a == b;
    Ok(Outcome { passed: identical && n >= 10 && finite, ..Outcome::default() }
        .with("identical", if identical { 1.0 } else { 0.0 })
        .with("snapshots", n as f64))
}
