//! Run artifacts: the JSON-lines trace (a header line, then one
//! [`TraceRecord`] per snapshot), coefficient dumps, and a plot CSV.
//! Each file has exactly one writer.

use crate::error::{Error, Result};
use crate::hermite_basis::HermiteField;
use crate::solver::{Snapshot, TraceRecord};
use crate::tf_analysis::{BinaryDump, MAGIC};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

pub const TRACE_FILE: &str = "trace.jsonl";
pub const PLOT_FILE: &str = "monitors.csv";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// First line of every trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceHeader {
    pub format: String,
    pub version: String,
    pub config_hash: String,
    pub dimension: usize,
    pub cutoff: usize,
}

impl TraceHeader {
    pub fn new(version: &str, config_hash: &str, dimension: usize, cutoff: usize) -> Self {
        TraceHeader {
            format: String::from_utf8_lossy(MAGIC).into_owned(),
            version: version.into(),
            config_hash: config_hash.into(),
            dimension,
            cutoff,
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

/// Streams snapshots into a run directory as they arrive.
pub struct TraceWriter {
    trace: BufWriter<File>,
    plot: BufWriter<File>,
    plot_columns: Option<Vec<String>>,
    snapshot_dir: Option<PathBuf>,
    count: usize,
}

impl TraceWriter {
    pub fn create(dir: &Path, header: &TraceHeader, snapshots: bool) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", dir.display())))?;
        let mut trace = create(&dir.join(TRACE_FILE))?;
        writeln!(trace, "{}", serde_json::to_string(header).map_err(|e| Error::Format(e.to_string()))?)?;
        let snapshot_dir = if snapshots {
            let d = dir.join(SNAPSHOT_DIR);
            std::fs::create_dir_all(&d)?;
            Some(d)
        } else {
            None
        };
        Ok(TraceWriter { trace, plot: create(&dir.join(PLOT_FILE))?, plot_columns: None, snapshot_dir, count: 0 })
    }

    pub fn push(&mut self, s: &Snapshot) -> Result<()> {
        let record = s.record();
        writeln!(self.trace, "{}", serde_json::to_string(&record).map_err(|e| Error::Format(e.to_string()))?)?;
        let columns = self.plot_columns.get_or_insert_with(|| {
            let mut c = vec!["t".to_string(), "l2".to_string()];
            c.extend(record.mpp.keys().cloned());
            c.push("energy".into());
            c
        });
        if self.count == 0 {
            writeln!(self.plot, "{}", columns.join(","))?;
        }
        let row: Vec<String> = columns
            .iter()
            .map(|c| match c.as_str() {
                "t" => format!("{:e}", record.t),
                "l2" => format!("{:e}", record.l2),
                "energy" => format!("{:e}", record.energy),
                key => record.mpp.get(key).map_or_else(String::new, |v| format!("{v:e}")),
            })
            .collect();
        writeln!(self.plot, "{}", row.join(","))?;
        if let Some(dir) = &self.snapshot_dir {
            write_coefficients(&dir.join(format!("snapshot_{:05}.bin", self.count)), &s.field)?;
        }
        self.count += 1;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn finish(mut self) -> Result<()> {
        self.trace.flush()?;
        self.plot.flush()?;
        Ok(())
    }
}

/// Coefficient dump: `dims = shape`, zero steps and extents.
pub fn write_coefficients(path: &Path, f: &HermiteField) -> Result<()> {
    let dump = BinaryDump {
        dims: f.shape(),
        steps: vec![0.0; f.dim()],
        extents: vec![0.0; f.dim()],
        values: f.coeffs().to_vec(),
    };
    let mut w = create(path)?;
    dump.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_trace(path: &Path) -> Result<(TraceHeader, Vec<TraceRecord>)> {
    let f = File::open(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    let mut lines = BufReader::new(f).lines();
    let first = lines.next().ok_or_else(|| Error::Format("empty trace".into()))??;
    let header: TraceHeader =
        serde_json::from_str(&first).map_err(|e| Error::Format(format!("trace header: {e}")))?;
    if header.format.as_bytes() != MAGIC {
        return Err(Error::Format(format!("unknown trace format {:?}", header.format)));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line).map_err(|e| Error::Format(format!("trace line {}: {e}", i + 2)))?);
    }
    Ok((header, records))
}
