//! Deterministic result serialization: the diagnostics CSV, snapshot JSON
//! files, and the run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::diagnostics::DiagnosticsRecord;
use crate::state::State;

pub const CSV_HEADER: &str = "t,energy,dissipation_rate,dissipation_cum,bd_entropy,v_min,v_max,\
sup_eff_pressure,decay_sup,decay_grad,gl_ratio_a2,gl_ratio_a3,gl_ratio_a4";

/// Render records as CSV text. f64 Display is shortest-round-trip, so
/// re-parsing reproduces every value bitwise.
pub fn diagnostics_csv(records: &[DiagnosticsRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Argument("no diagnostics records to write".into()));
    }
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.energy,
            r.dissipation_rate,
            r.dissipation_cum,
            r.bd_entropy,
            r.v_min,
            r.v_max,
            r.sup_eff_pressure,
            r.decay_sup,
            r.decay_grad,
            r.gl_ratio_a2,
            r.gl_ratio_a3,
            r.gl_ratio_a4
        )
        .expect("string write");
    }
    Ok(out)
}

pub fn write_diagnostics_csv(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    std::fs::write(path, diagnostics_csv(records)?)?;
    Ok(())
}

/// Parse a diagnostics CSV produced by `write_diagnostics_csv`.
pub fn read_diagnostics_csv(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::Argument(format!(
                "unexpected CSV header: {other:?}"
            )))
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Argument(format!(
                    "bad number '{f}' in CSV data row {}",
                    idx + 1
                )))
            })
            .collect::<Result<_>>()?;
        if fields.len() != 13 {
            return Err(Error::Argument(format!(
                "CSV row {} has {} fields, expected 13",
                idx + 1,
                fields.len()
            )));
        }
        records.push(DiagnosticsRecord {
            t: fields[0],
            energy: fields[1],
            dissipation_rate: fields[2],
            dissipation_cum: fields[3],
            bd_entropy: fields[4],
            v_min: fields[5],
            v_max: fields[6],
            sup_eff_pressure: fields[7],
            decay_sup: fields[8],
            decay_grad: fields[9],
            gl_ratio_a2: fields[10],
            gl_ratio_a3: fields[11],
            gl_ratio_a4: fields[12],
        });
    }
    Ok(records)
}

/// Self-describing single-snapshot file: {t, L, N, v, u}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotJson {
    pub t: f64,
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub n_cells: usize,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
}

pub fn write_snapshot_json(
    t: f64,
    state: &State,
    half_width: f64,
    n_cells: usize,
    path: &Path,
) -> Result<()> {
    let doc = SnapshotJson {
        t,
        half_width,
        n_cells,
        v: state.v.clone(),
        u: state.u.clone(),
    };
    std::fs::write(path, serde_json::to_string(&doc).expect("serializable"))?;
    Ok(())
}

/// What a CLI invocation did: config echo, build version, wall time,
/// warnings, and the files it produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: String,
    pub config_echo: String,
    pub version: String,
    pub wall_seconds: f64,
    pub warnings: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, config_path: &Path, config_echo: String) -> Self {
        Self {
            command: command.to_string(),
            config_path: config_path.display().to_string(),
            config_echo,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_seconds: 0.0,
            warnings: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        for out in &self.outputs {
            if !out.exists() {
                return Err(Error::Argument(format!(
                    "manifest lists missing output {}",
                    out.display()
                )));
            }
        }
        std::fs::write(path, serde_json::to_string_pretty(self).expect("serializable"))?;
        Ok(())
    }
}
