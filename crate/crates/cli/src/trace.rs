//! JSON-lines traces: one header object, then one [`RoundTrace`] per round.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use maboost::{AlphaMode, MadaEta, RoundTrace};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub schema: u32,
    pub algorithm: String,
    pub geometry: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_mode: Option<AlphaMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mada_eta: Option<MadaEta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_b: Option<usize>,
}

pub fn write_trace(
    path: &Path,
    header: &TraceHeader,
    rounds: &[RoundTrace],
) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", serde_json::to_string(header)?)?;
    for r in rounds {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a trace. A file with no lines at all yields `None` for the header.
pub fn read_trace(path: &Path) -> Result<(Option<TraceHeader>, Vec<RoundTrace>), CliError> {
    let reader = BufReader::new(File::open(path)?);
    let mut header = None;
    let mut rounds: Vec<RoundTrace> = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err =
            |e: serde_json::Error| CliError::Parse(format!("{}:{}: {e}", path.display(), k + 1));
        if header.is_none() {
            let h: TraceHeader = serde_json::from_str(&line).map_err(parse_err)?;
            if h.schema != SCHEMA {
                return Err(CliError::Parse(format!(
                    "unsupported trace schema {}",
                    h.schema
                )));
            }
            header = Some(h);
            continue;
        }
        let r: RoundTrace = serde_json::from_str(&line).map_err(parse_err)?;
        let expected = rounds.last().map_or(1, |p| p.t + 1);
        if r.t != expected {
            return Err(CliError::Parse(format!(
                "{}:{}: round {} follows round {}",
                path.display(),
                k + 1,
                r.t,
                expected - 1
            )));
        }
        rounds.push(r);
    }
    Ok((header, rounds))
}
