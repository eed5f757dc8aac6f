//! Report envelopes and atomic output files.
//!
//! Reports carry a config echo, a deterministic results payload, versions,
//! seed and wall time. Payloads are JSON values with sorted keys (serde_json
//! maps are BTree-backed), so identical config and seed reproduce the payload
//! bit for bit; wall time lives outside the payload.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct Report {
    pub config: Value,
    pub payload: Value,
    pub seed: Option<u64>,
    pub wall_seconds: f64,
    pub notes: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "notes": self.notes,
            "payload": self.payload,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "wall_seconds": self.wall_seconds,
        })
    }
}

/// Runs `f`, timing it into a report envelope.
pub fn run_reported<F>(config: Value, seed: Option<u64>, f: F) -> Result<Report>
where
    F: FnOnce() -> Result<(Value, Vec<String>)>,
{
    let start = Instant::now();
    let (payload, notes) = f()?;
    Ok(Report {
        config,
        payload,
        seed,
        wall_seconds: start.elapsed().as_secs_f64(),
        notes,
    })
}

/// Writes bytes atomically: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
        )),
        None => std::path::PathBuf::from(format!(".{}.tmp", path.display())),
    };
    {
        let mut f = std::fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all().ok();
    }
    std::fs::rename(&tmp, path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Writes RFC-4180 CSV rows atomically.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    wtr.write_record(header)?;
    for row in rows {
        wtr.write_record(row)?;
    }
    let bytes = wtr.into_inner().context("flushing csv")?;
    write_atomic(path, &bytes)
}
