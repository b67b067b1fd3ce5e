//! Instance and report file schemas.
//!
//! Instances are JSON objects `{"d", "k", "n", "norm", "entries"}` with
//! entries indexed `[row][column][coordinate]`. Reports embed the
//! rearrangement result plus a content digest of the instance they certify,
//! so verification detects mismatched files. Doubles round-trip exactly
//! (shortest round-trip decimal encoding).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use steinitz::{NormSpec, RearrangementReport, SignMatrix, VectorMatrix};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub norm: NormSpec,
    pub entries: Vec<Vec<Vec<f64>>>,
}

impl Instance {
    pub fn from_parts(matrix: &VectorMatrix, norm: NormSpec) -> Self {
        Self {
            d: matrix.d(),
            k: matrix.k(),
            n: matrix.n(),
            norm,
            entries: matrix.to_entries(),
        }
    }

    /// Validates shapes and coordinates and returns the value matrix.
    pub fn matrix(&self) -> Result<VectorMatrix, CliError> {
        self.norm
            .validate(self.d)
            .map_err(|e| CliError::validation(format!("invalid norm: {e}")))?;
        VectorMatrix::new(self.d, self.k, self.n, self.entries.clone())
            .map_err(|e| CliError::validation(format!("invalid instance: {e}")))
    }

    /// Content hash over the canonical (compact) JSON encoding.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("instance serializes");
        let hash = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(7 + 64);
        out.push_str("sha256:");
        for byte in hash {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("cannot parse {}: {e}", path.display())))
    }
}

/// Options echoed into the report so a verifier can recheck the claims.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportOptions {
    pub method: String,
    pub max_iters: usize,
    pub target_slack: f64,
    pub zero_tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub instance_digest: String,
    pub options: ReportOptions,
    pub report: RearrangementReport,
}

impl ReportFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("cannot parse {}: {e}", path.display())))
    }
}

/// Output of the `signs` subcommand: the assignment and its achieved bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignsFile {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub max_prefix_norm: f64,
    pub bound: f64,
    pub within_bound: bool,
    pub signs: SignMatrix,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::validation(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))
}
