//! Initial data: explicit coefficients, Gaussians, the lattice-sum rough
//! datum `Σ_{k≠0} |k|^{-d/q-ε} e^{ik·x} e^{-|x|²}`, and fields read from disk.
//!
//! Gaussians and the rough datum are tensor sums of one-dimensional factors,
//! so their coefficients come from one-dimensional trapezoid projections.
//! Both know their exact L² norm; a projection that misses more than
//! [`PARSEVAL_TOLERANCE`] of it is rejected as under-resolved.

use crate::error::{Error, Result};
use crate::hermite_basis::{analyze, hermite_functions, GridField, HermiteField, QuadratureRule};
use crate::tensor::{flat_index, for_each_index};
use crate::tf_analysis::BinaryDump;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

/// Largest admitted `1 − ‖c‖_{l²}/‖f‖_{L²}` for projected data.
pub const PARSEVAL_TOLERANCE: f64 = 1e-10;

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Real(f64),
    Complex([f64; 2]),
}

impl Coefficient {
    fn value(self) -> Complex64 {
        match self {
            Coefficient::Real(re) => Complex64::new(re, 0.0),
            Coefficient::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// A scalar (repeated on every axis) or one value per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Default for Point {
    fn default() -> Self {
        Point::Scalar(0.0)
    }
}

impl Point {
    fn expand(&self, dim: usize) -> Result<Vec<f64>> {
        match self {
            Point::Scalar(v) => Ok(vec![*v; dim]),
            Point::Vector(v) if v.len() == dim => Ok(v.clone()),
            Point::Vector(v) => Err(Error::DimensionMismatch { expected: dim, got: v.len() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatumSpec {
    /// Row-major coefficients, zero-padded to the cutoff.
    HermiteCoeffs { coeffs: Vec<Coefficient> },
    /// `(πw²)^{-d/4} e^{-|x-c|²/(2w²)} e^{ip·x}`, unit L² norm.
    Gaussian {
        #[serde(default)]
        center: Point,
        width: f64,
        #[serde(default)]
        momentum: Point,
    },
    /// `Σ_{0<|k|≤kmax} |k|^{-d/q-ε} e^{ik·x} e^{-|x|²}` over `k ∈ ℤ^d`.
    RoughExample { q: f64, epsilon: f64, kmax: usize },
    /// A `HERMION1` dump: coefficients when every step is zero, otherwise
    /// samples on the uniform box `x_j = -L + j·h`.
    File { path: PathBuf },
}

impl DatumSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DatumSpec::HermiteCoeffs { coeffs } => {
                if coeffs.iter().any(|c| !c.value().is_finite()) {
                    return Err(Error::invalid("coefficients must be finite"));
                }
            }
            DatumSpec::Gaussian { width, .. } => {
                if !(*width > 0.0) || !width.is_finite() {
                    return Err(Error::invalid(format!("Gaussian width must be positive (got {width})")));
                }
            }
            DatumSpec::RoughExample { q, epsilon, kmax } => {
                if !(*q >= 1.0) || !q.is_finite() {
                    return Err(Error::invalid(format!("rough datum needs finite q ≥ 1 (got {q})")));
                }
                if !(*epsilon > 0.0) || !epsilon.is_finite() {
                    return Err(Error::invalid(format!("rough datum needs ε > 0 (got {epsilon})")));
                }
                if *kmax == 0 {
                    return Err(Error::invalid("rough datum needs kmax ≥ 1"));
                }
            }
            DatumSpec::File { .. } => {}
        }
        Ok(())
    }
}

/// Truncation bookkeeping for the rough datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughTail {
    /// Largest omitted weight, `(kmax+1)^{-d/q-ε}`.
    pub tail_term: f64,
    /// `(Σ_{|k|>kmax} |k|^{-d-εq})^{1/q}` from the shell integral
    /// `|S^{d-1}| kmax^{-εq}/(εq)`.
    pub lq_tail: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Datum {
    pub field: HermiteField,
    /// Exact `‖f‖_{L²}` when known in closed form.
    pub exact_l2: Option<f64>,
    pub tail: Option<RoughTail>,
}

/// Builds the datum with `cutoff` modes per axis; file paths are taken as given.
pub fn make_datum(spec: &DatumSpec, dim: usize, cutoff: usize) -> Result<Datum> {
    spec.validate()?;
    if dim == 0 || cutoff == 0 {
        return Err(Error::invalid("dimension and cutoff must be positive"));
    }
    match spec {
        DatumSpec::HermiteCoeffs { coeffs } => {
            let count = cutoff.pow(dim as u32);
            if coeffs.len() > count {
                return Err(Error::invalid(format!("{} coefficients exceed the {count} modes", coeffs.len())));
            }
            let mut values = vec![Complex64::new(0.0, 0.0); count];
            for (v, c) in values.iter_mut().zip(coeffs) {
                *v = c.value();
            }
            Ok(Datum { field: HermiteField::from_coeffs(dim, cutoff, values)?, exact_l2: None, tail: None })
        }
        DatumSpec::Gaussian { center, width, momentum } => {
            let (c, p) = (center.expand(dim)?, momentum.expand(dim)?);
            let norm = (PI * width * width).powf(-0.25);
            let factors: Vec<Vec<Complex64>> = (0..dim)
                .map(|j| {
                    let (cj, pj, w) = (c[j], p[j], *width);
                    let g = |x: f64| Complex64::from_polar(norm * (-(x - cj).powi(2) / (2.0 * w * w)).exp(), pj * x);
                    project_1d(g, cutoff, cj.abs() + 12.0 * w, pj.abs() + 12.0 / w)
                })
                .collect();
            let mut field = HermiteField::zeros(dim, cutoff);
            add_product(&mut field, &factors.iter().collect::<Vec<_>>(), Complex64::new(1.0, 0.0));
            guard(&field, 1.0)?;
            Ok(Datum { field, exact_l2: Some(1.0), tail: None })
        }
        DatumSpec::RoughExample { q, epsilon, kmax } => rough_example(dim, cutoff, *q, *epsilon, *kmax),
        DatumSpec::File { path } => Ok(Datum { field: field_from_file(path, dim, cutoff)?, exact_l2: None, tail: None }),
    }
}

/// `⟨g, h_n⟩` for `n < cutoff` by the trapezoid rule on `[-L, L]`, with the
/// step set by the combined band of `g` and the Hermite functions.
fn project_1d(g: impl Fn(f64) -> Complex64, cutoff: usize, half_width: f64, band: f64) -> Vec<Complex64> {
    let band = band + (2.0 * cutoff as f64 + 1.0).sqrt() + 4.0;
    let points = ((2.0 * half_width * band / PI).ceil() as usize).max(16);
    let h = 2.0 * half_width / points as f64;
    let mut acc = vec![Complex64::new(0.0, 0.0); cutoff];
    for j in 0..=points {
        let x = -half_width + j as f64 * h;
        let w = if j == 0 || j == points { 0.5 * h } else { h };
        let gx = g(x) * w;
        for (a, hn) in acc.iter_mut().zip(hermite_functions(cutoff, x)) {
            *a += gx * hn;
        }
    }
    acc
}

/// `field += s · ⊗_j factors[j]`.
fn add_product(field: &mut HermiteField, factors: &[&Vec<Complex64>], s: Complex64) {
    let shape = field.shape();
    let coeffs = field.coeffs_mut();
    for_each_index(&shape, |alpha| {
        let mut v = s;
        for (j, &a) in alpha.iter().enumerate() {
            v *= factors[j][a];
        }
        coeffs[flat_index(alpha, &shape)] += v;
    });
}

fn guard(field: &HermiteField, exact: f64) -> Result<()> {
    let deficit = 1.0 - field.l2_norm() / exact;
    if deficit.abs() > PARSEVAL_TOLERANCE {
        return Err(Error::UnderResolved(format!(
            "cutoff {} captures the datum only to relative l2 deficit {deficit:.3e}; raise the cutoff",
            field.cutoff()
        )));
    }
    Ok(())
}

fn rough_example(dim: usize, cutoff: usize, q: f64, epsilon: f64, kmax: usize) -> Result<Datum> {
    let exponent = dim as f64 / q + epsilon;
    let m = kmax as i64;
    let width = 2 * kmax + 1;
    let mut ks: Vec<(Vec<i64>, f64)> = Vec::new();
    for_each_index(&vec![width; dim], |idx| {
        let k: Vec<i64> = idx.iter().map(|&i| i as i64 - m).collect();
        let r2: i64 = k.iter().map(|v| v * v).sum();
        if r2 > 0 && r2 <= m * m {
            ks.push((k, (r2 as f64).powf(-0.5 * exponent)));
        }
    });
    // one projection per integer momentum, shared by every axis
    let factors: Vec<Vec<Complex64>> = (-m..=m)
        .map(|mom| {
            let g = |x: f64| Complex64::from_polar((-x * x).exp(), mom as f64 * x);
            project_1d(g, cutoff, 9.0, mom.unsigned_abs() as f64 + 18.0)
        })
        .collect();
    let mut field = HermiteField::zeros(dim, cutoff);
    for (k, w) in &ks {
        let fs: Vec<&Vec<Complex64>> = k.iter().map(|&kj| &factors[(kj + m) as usize]).collect();
        add_product(&mut field, &fs, Complex64::new(*w, 0.0));
    }
    // ∫ e^{i(k-k')·x} e^{-2|x|²} dx = (π/2)^{d/2} e^{-|k-k'|²/8}
    let gauss = (0.5 * PI).powf(0.5 * dim as f64);
    let mut l2sq = 0.0;
    for (k, w) in &ks {
        for (k2, w2) in &ks {
            let d2: i64 = k.iter().zip(k2).map(|(a, b)| (a - b) * (a - b)).sum();
            l2sq += w * w2 * gauss * (-(d2 as f64) / 8.0).exp();
        }
    }
    let exact = l2sq.sqrt();
    guard(&field, exact)?;
    let sphere = 2.0 * PI.powf(0.5 * dim as f64) / statrs::function::gamma::gamma(0.5 * dim as f64);
    let tail = RoughTail {
        tail_term: (kmax as f64 + 1.0).powf(-exponent),
        lq_tail: (sphere * (kmax as f64).powf(-epsilon * q) / (epsilon * q)).powf(1.0 / q),
    };
    Ok(Datum { field, exact_l2: Some(exact), tail: Some(tail) })
}

fn field_from_file(path: &Path, dim: usize, cutoff: usize) -> Result<HermiteField> {
    let mut file = std::fs::File::open(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    let dump = BinaryDump::read_from(&mut file)?;
    if dump.dims.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: dump.dims.len() });
    }
    if dump.steps.iter().all(|&h| h == 0.0) {
        let n = dump.dims[0];
        if dump.dims.iter().any(|&m| m != n) {
            return Err(Error::Format("coefficient dumps need the same extent on every axis".into()));
        }
        return Ok(HermiteField::from_coeffs(dim, n, dump.values)?.with_cutoff(cutoff));
    }
    let mut axes = Vec::with_capacity(dim);
    for j in 0..dim {
        let (n, h, l) = (dump.dims[j], dump.steps[j], dump.extents[j]);
        if !((h * n as f64 - 2.0 * l).abs() <= 1e-9 * l) {
            return Err(Error::Format(format!("axis {j}: step {h} does not tile [-{l}, {l}) with {n} points")));
        }
        axes.push(QuadratureRule::uniform_box(l, n)?);
    }
    analyze(&GridField::new(axes, dump.values)?, cutoff)
}
