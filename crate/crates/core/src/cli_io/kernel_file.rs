//! Sampled convolution kernels on disk: a `HERMION1` dump over the uniform
//! box, or CSV rows `x1..xd, value` in row-major order.

use crate::error::{Error, Result};
use crate::nonlinearity::KernelSpec;
use crate::tf_analysis::BinaryDump;
use std::path::Path;

pub fn load_grid_kernel(path: &Path, dim: usize) -> Result<KernelSpec> {
    let bytes = std::fs::read(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    let spec = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        from_csv(&String::from_utf8_lossy(&bytes), dim)?
    } else {
        from_dump(&BinaryDump::read_from(&mut bytes.as_slice())?, dim)?
    };
    spec.validate(dim)?;
    Ok(spec)
}

fn from_dump(dump: &BinaryDump, dim: usize) -> Result<KernelSpec> {
    if dump.dims.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: dump.dims.len() });
    }
    let (n, l) = (dump.dims[0], dump.extents[0]);
    if dump.dims.iter().any(|&m| m != n) || dump.extents.iter().any(|&e| e != l) {
        return Err(Error::Format("grid kernels need the same box on every axis".into()));
    }
    let scale = dump.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if dump.values.iter().any(|v| v.im.abs() > 1e-14 * scale) {
        return Err(Error::Format("grid kernel samples must be real".into()));
    }
    Ok(KernelSpec::GridKernel { half_width: l, points: n, samples: dump.values.iter().map(|v| v.re).collect() })
}

fn from_csv(text: &str, dim: usize) -> Result<KernelSpec> {
    let mut first = Vec::new();
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(|c: char| c.is_ascii_alphabetic()) {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
        if cols.len() != dim + 1 {
            return Err(Error::Format(format!("line {}: expected {} columns", lineno + 1, dim + 1)));
        }
        first.push(cols[0]);
        samples.push(cols[dim]);
    }
    let n = (samples.len() as f64).powf(1.0 / dim as f64).round() as usize;
    if n < 2 || n.pow(dim as u32) != samples.len() {
        return Err(Error::Format(format!("{} rows do not form an n^{dim} grid", samples.len())));
    }
    let half_width = -first[0];
    let stride = n.pow(dim as u32 - 1);
    let h = first[stride] - first[0];
    if !(half_width > 0.0) || (h * n as f64 - 2.0 * half_width).abs() > 1e-9 * half_width {
        return Err(Error::Format("first coordinate does not run over x_j = -L + j·2L/n".into()));
    }
    Ok(KernelSpec::GridKernel { half_width, points: n, samples })
}
