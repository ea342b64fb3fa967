//! JSON Hamiltonian files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "molecule": "H2 STO-3G",
//!   "n_qubits": 4,
//!   "n_electrons": 2,
//!   "constant": -0.097,
//!   "hf_energy": -1.1168,
//!   "fci_energy": -1.1373,
//!   "terms": [{ "coeff": 0.174, "paulis": "IIZZ" }]
//! }
//! ```
//!
//! Character `p` of `paulis` acts on qubit `p`. The energies are optional.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub coeff: f64,
    pub paulis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub format_version: u32,
    pub molecule: String,
    pub n_qubits: usize,
    pub n_electrons: usize,
    pub constant: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hf_energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fci_energy: Option<f64>,
    pub terms: Vec<TermRecord>,
}

fn invalid(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: message.into(),
    }
}

impl HamiltonianFile {
    /// Parses and validates. Syntax errors carry the JSON line and column;
    /// schema violations are reported at line 0.
    pub fn parse(text: &str) -> Result<Self> {
        let file: HamiltonianFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(invalid(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.n_qubits == 0 {
            return Err(invalid("n_qubits must be positive"));
        }
        if self.n_electrons > self.n_qubits {
            return Err(invalid(format!(
                "{} electrons do not fit in {} qubits",
                self.n_electrons, self.n_qubits
            )));
        }
        let energies = [
            ("constant", Some(self.constant)),
            ("hf_energy", self.hf_energy),
            ("fci_energy", self.fci_energy),
        ];
        for (name, value) in energies {
            if let Some(v) = value {
                if !v.is_finite() {
                    return Err(invalid(format!("{name} is not finite")));
                }
            }
        }
        for (k, t) in self.terms.iter().enumerate() {
            if !t.coeff.is_finite() {
                return Err(invalid(format!("term {k}: coefficient is not finite")));
            }
            if t.paulis.chars().count() != self.n_qubits {
                return Err(invalid(format!(
                    "term {k}: '{}' has length {}, expected {}",
                    t.paulis,
                    t.paulis.chars().count(),
                    self.n_qubits
                )));
            }
            if let Some(c) = t.paulis.chars().find(|c| !"IXYZ".contains(*c)) {
                return Err(invalid(format!("term {k}: invalid Pauli letter '{c}'")));
            }
        }
        Ok(())
    }

    /// Canonical operator: duplicates merged, identity folded into the
    /// constant, negligible terms dropped.
    pub fn to_pauli_sum(&self) -> Result<PauliSum> {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm::parse(t.coeff, &t.paulis))
            .collect::<Result<Vec<_>>>()?;
        PauliSum::new(self.n_qubits, self.constant, terms)
    }

    pub fn from_pauli_sum(molecule: &str, n_electrons: usize, h: &PauliSum) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            molecule: molecule.to_string(),
            n_qubits: h.n_qubits(),
            n_electrons,
            constant: h.constant(),
            hf_energy: None,
            fci_energy: None,
            terms: h
                .terms()
                .iter()
                .map(|t| TermRecord {
                    coeff: t.coeff(),
                    paulis: t.label(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}
