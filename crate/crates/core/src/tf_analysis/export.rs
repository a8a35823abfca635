//! Table export: CSV `x.., y.., re, im` and the little-endian binary dump.
//!
//! Binary layout: the 8-byte magic `HERMION1`, then `f64` header words
//! `[rank, dims[rank], steps[rank], extents[rank]]`, then the row-major payload
//! as `(re, im)` `f64` pairs.

use super::stft::STFTTable;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{Read, Write};

pub const MAGIC: &[u8; 8] = b"HERMION1";

/// A row-major complex array with per-axis step and half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDump {
    pub dims: Vec<usize>,
    pub steps: Vec<f64>,
    pub extents: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl BinaryDump {
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        let rank = self.dims.len();
        if self.steps.len() != rank || self.extents.len() != rank {
            return Err(Error::Format("header arrays must all have the array rank".into()));
        }
        if self.values.len() != self.dims.iter().product::<usize>() {
            return Err(Error::Format("payload length does not match dims".into()));
        }
        let mut buf = Vec::with_capacity(8 + 8 * (1 + 3 * rank) + 16 * self.values.len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&(rank as f64).to_le_bytes());
        for &d in &self.dims {
            buf.extend_from_slice(&(d as f64).to_le_bytes());
        }
        for v in self.steps.iter().chain(&self.extents) {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        for c in &self.values {
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() < 16 || &bytes[..8] != MAGIC {
            return Err(Error::Format("missing HERMION1 magic".into()));
        }
        let word = |k: usize| -> Result<f64> {
            let s = 8 + 8 * k;
            bytes
                .get(s..s + 8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
                .ok_or_else(|| Error::Format("truncated header".into()))
        };
        let rank_f = word(0)?;
        if !(rank_f >= 1.0 && rank_f <= 16.0 && rank_f.fract() == 0.0) {
            return Err(Error::Format(format!("invalid rank {rank_f}")));
        }
        let rank = rank_f as usize;
        let mut dims = Vec::with_capacity(rank);
        for k in 0..rank {
            let d = word(1 + k)?;
            if !(d >= 1.0 && d.fract() == 0.0 && d < 1e9) {
                return Err(Error::Format(format!("invalid extent {d} on axis {k}")));
            }
            dims.push(d as usize);
        }
        let steps = (0..rank).map(|k| word(1 + rank + k)).collect::<Result<Vec<_>>>()?;
        let extents = (0..rank).map(|k| word(1 + 2 * rank + k)).collect::<Result<Vec<_>>>()?;
        let start = 8 + 8 * (1 + 3 * rank);
        let count: usize = dims.iter().product();
        if bytes.len() != start + 16 * count {
            return Err(Error::Format(format!(
                "payload holds {} bytes, header promises {}",
                bytes.len().saturating_sub(start),
                16 * count
            )));
        }
        let values = bytes[start..]
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                    f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
                )
            })
            .collect();
        Ok(BinaryDump { dims, steps, extents, values })
    }
}

impl From<&STFTTable> for BinaryDump {
    fn from(t: &STFTTable) -> Self {
        let d = t.lattice.dim;
        let lat = &t.lattice;
        BinaryDump {
            dims: t.shape(),
            steps: std::iter::repeat_n(lat.x_step, d).chain(std::iter::repeat_n(lat.y_step, d)).collect(),
            extents: std::iter::repeat_n(lat.x_extent, d).chain(std::iter::repeat_n(lat.y_extent, d)).collect(),
            values: t.values.clone(),
        }
    }
}

/// CSV with header `x1..xd, y1..yd, re, im`, one row per lattice point.
pub fn write_table_csv(t: &STFTTable, w: &mut impl Write) -> Result<()> {
    let d = t.lattice.dim;
    let xs = t.lattice.x_coords();
    let ys = t.lattice.y_coords();
    let mut header: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    header.extend((1..=d).map(|j| format!("y{j}")));
    header.extend(["re".to_string(), "im".to_string()]);
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    let mut k = 0;
    crate::tensor::for_each_index(&t.shape(), |idx| {
        for j in 0..d {
            out.push_str(&format!("{},", xs[idx[j]]));
        }
        for j in 0..d {
            out.push_str(&format!("{},", ys[idx[d + j]]));
        }
        let v = t.values[k];
        out.push_str(&format!("{:e},{:e}\n", v.re, v.im));
        k += 1;
    });
    w.write_all(out.as_bytes())?;
    Ok(())
}
