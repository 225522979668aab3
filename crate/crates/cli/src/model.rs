//! On-disk model files.
//!
//! A model file is a JSON document describing one experiment: a Hilbert
//! space dimension, a set of named binary measurements, an initial state,
//! and optional convention and tolerance overrides:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "measurements": {
//!     "A": { "yes": [[0.5, 0.1], [0.1, 0.5]], "no": [[0.5, -0.1], [-0.1, 0.5]] },
//!     "B": { "yes": [[1.0, 0.0], [0.0, 0.0]], "no": [[0.0, 0.0], [0.0, 1.0]] }
//!   },
//!   "state": { "amplitudes": [1.0, [0.0, 1.0]] },
//!   "convention": "sqrt",
//!   "tolerance": 1e-10
//! }
//! ```
//!
//! Matrix entries are either a bare number (real) or a two-element array
//! `[re, im]`. The state is given as `{"rho": matrix}` or as
//! `{"amplitudes": vector}`; amplitudes are normalized on load. Measurement
//! names are kept in lexicographic order, so in a two-measurement model the
//! first name plays the role of question A.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use quorder_core::{
    BinaryMeasurement, Complex64, ComplexMatrix, Convention, QuantumState, Tolerance,
};
use serde::{Deserialize, Serialize};

/// Why a model file could not be turned into a usable model.
#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Structure(String),
    #[error("{0}")]
    Core(#[from] quorder_core::Error),
}

fn structure(msg: String) -> ModelError {
    ModelError::Structure(msg)
}

/// One matrix entry: a real number or an explicit `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> Complex64 {
        match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    /// Canonical form: drop the imaginary slot when it is exactly zero.
    pub fn from_value(z: Complex64) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    pub yes: Vec<Vec<Entry>>,
    pub no: Vec<Vec<Entry>>,
}

/// Initial state: a density matrix or a pure-state amplitude vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Rho(Vec<Vec<Entry>>),
    Amplitudes(Vec<Entry>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub dimension: usize,
    pub measurements: BTreeMap<String, MeasurementSpec>,
    pub state: StateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// A model file checked for shape and turned into core types.
///
/// Construction enforces the structural contract (every matrix is
/// `dimension x dimension`, the state is a valid density matrix); whether
/// the measurements satisfy the POVM axioms is a separate question answered
/// by `validate_measurement`.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub dimension: usize,
    pub measurements: Vec<BinaryMeasurement>,
    pub state: QuantumState,
    pub convention: Option<Convention>,
    pub tolerance: Tolerance,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, ModelError> {
        let text = fs::read_to_string(path).map_err(|source| ModelError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Canonical serialization used by `--emit-model`. Numeric values pass
    /// through `f64` unchanged, so emitted files re-parse to bitwise equal
    /// matrices.
    pub fn emit(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("model serialization");
        text.push('\n');
        text
    }

    pub fn build(&self) -> Result<LoadedModel, ModelError> {
        let dim = self.dimension;
        if dim == 0 {
            return Err(structure("dimension must be at least 1".into()));
        }
        if self.measurements.is_empty() {
            return Err(structure("model defines no measurements".into()));
        }

        let tolerance = match self.tolerance {
            Some(eps) => Tolerance::new(eps)
                .map_err(|_| structure(format!("invalid tolerance {eps}")))?,
            None => Tolerance::default(),
        };

        let convention = match self.convention.as_deref() {
            None => None,
            Some("literal") => Some(Convention::Literal),
            Some("sqrt") => Some(Convention::Sqrt),
            Some(other) => {
                return Err(structure(format!(
                    "unknown convention {other:?} (expected \"literal\" or \"sqrt\")"
                )))
            }
        };

        let mut measurements = Vec::with_capacity(self.measurements.len());
        for (name, spec) in &self.measurements {
            let yes = matrix_from_entries(&spec.yes, dim)
                .map_err(|e| structure(format!("measurement {name:?}, \"yes\" effect: {e}")))?;
            let no = matrix_from_entries(&spec.no, dim)
                .map_err(|e| structure(format!("measurement {name:?}, \"no\" effect: {e}")))?;
            measurements.push(BinaryMeasurement::from_matrices(name.clone(), yes, no)?);
        }

        let state = match &self.state {
            StateSpec::Rho(rows) => {
                let rho = matrix_from_entries(rows, dim)
                    .map_err(|e| structure(format!("state \"rho\": {e}")))?;
                QuantumState::from_density(rho, tolerance)?
            }
            StateSpec::Amplitudes(entries) => {
                if entries.len() != dim {
                    return Err(structure(format!(
                        "state \"amplitudes\" has {} entries, expected {dim}",
                        entries.len()
                    )));
                }
                let psi: Vec<Complex64> = entries.iter().map(|e| e.value()).collect();
                QuantumState::from_amplitudes(&psi)?
            }
        };

        Ok(LoadedModel {
            dimension: dim,
            measurements,
            state,
            convention,
            tolerance,
        })
    }
}

impl LoadedModel {
    /// The (A, B) measurement pair for two-question commands.
    pub fn pair(&self) -> Result<(&BinaryMeasurement, &BinaryMeasurement), ModelError> {
        if self.measurements.len() != 2 {
            return Err(structure(format!(
                "this command needs a model with exactly 2 measurements, found {}",
                self.measurements.len()
            )));
        }
        Ok((&self.measurements[0], &self.measurements[1]))
    }
}

fn matrix_from_entries(rows: &[Vec<Entry>], dim: usize) -> Result<ComplexMatrix, String> {
    if rows.len() != dim {
        return Err(format!("matrix has {} rows, expected {dim}", rows.len()));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(format!("row {i} has {} entries, expected {dim}", row.len()));
        }
        data.extend(row.iter().map(|e| e.value()));
    }
    ComplexMatrix::new(dim, dim, data).map_err(|e| e.to_string())
}

/// Entry rows for `--emit-model` and JSON reports.
pub fn matrix_to_entries(m: &ComplexMatrix) -> Vec<Vec<Entry>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Entry::from_value(m.get(i, j))).collect())
        .collect()
}

/// Parses one complex literal: `0.5`, `-1`, `i`, `-i`, `2i`, `1+2i`, `1.5-0.5i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = || format!("cannot parse {text:?} as a complex number");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split "a+bi" / "a-bi" at the last sign that is neither leading nor an
    // exponent sign; no split means a purely imaginary literal.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in 1..bytes.len() {
        if matches!(bytes[idx], b'+' | b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
        }
    }
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("0", body),
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re_str.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Parses the `--state-override` argument: two complex amplitudes joined by
/// a comma, normalized into a pure state.
pub fn parse_state_override(text: &str, dim: usize) -> Result<QuantumState, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != dim {
        return Err(format!(
            "state override has {} amplitudes, model needs {dim}",
            parts.len()
        ));
    }
    let mut psi = Vec::with_capacity(dim);
    for part in parts {
        psi.push(parse_complex(part)?);
    }
    QuantumState::from_amplitudes(&psi).map_err(|e| e.to_string())
}
