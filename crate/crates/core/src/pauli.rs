//! Pauli strings and real-weighted Pauli sums.
//!
//! Qubit `p` corresponds to bit `p` of a basis-state index (qubit 0 is the
//! least significant bit). A string is stored both as its letters and as a
//! pair of bit masks: `x_mask` marks X/Y positions and `z_mask` marks Z/Y
//! positions, so that for a basis state `b`
//!
//! ```text
//! P|b⟩ = i^{#Y} · (-1)^{popcount(b & z_mask)} |b ^ x_mask⟩
//! ```
//!
//! using `Y = iXZ` on every site.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Coefficients below this magnitude are dropped when a sum is canonicalized.
pub const DROP_TOLERANCE: f64 = 1e-12;

/// Imaginary residue of an expectation value that is silently discarded.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// Allowed deviation of `‖ψ‖` from one before an expectation is refused.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Largest register a mask-encoded string can address.
pub const MAX_STRING_QUBITS: usize = 64;

/// A single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// `i^k` for a non-negative integer `k`.
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[inline]
fn parity_sign(bits: u64) -> f64 {
    if bits.count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A real coefficient times a tensor product of Pauli operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    coeff: f64,
    paulis: Vec<Pauli>,
    x_mask: u64,
    z_mask: u64,
    y_count: u32,
}

impl PauliTerm {
    /// Builds a term; position `p` of `paulis` acts on qubit `p`.
    pub fn new(coeff: f64, paulis: Vec<Pauli>) -> Result<Self> {
        if !coeff.is_finite() {
            return Err(Error::NonFiniteCoefficient(coeff));
        }
        if paulis.is_empty() || paulis.len() > MAX_STRING_QUBITS {
            return Err(Error::InvalidPauliString(format!(
                "length {} outside 1..={MAX_STRING_QUBITS}",
                paulis.len()
            )));
        }
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        let mut y_count = 0;
        for (q, p) in paulis.iter().enumerate() {
            let bit = 1u64 << q;
            match p {
                Pauli::I => {}
                Pauli::X => x_mask |= bit,
                Pauli::Z => z_mask |= bit,
                Pauli::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
            }
        }
        Ok(Self {
            coeff,
            paulis,
            x_mask,
            z_mask,
            y_count,
        })
    }

    /// Parses a string such as `"XIZY"`; character `p` acts on qubit `p`.
    pub fn parse(coeff: f64, label: &str) -> Result<Self> {
        let paulis = label
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::InvalidPauliString(format!("unexpected character '{c}' in \"{label}\"")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeff, paulis)
    }

    /// Builds a term from its non-identity factors.
    pub fn from_sparse(coeff: f64, n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut paulis = vec![Pauli::I; n_qubits];
        for &(q, p) in factors {
            if q >= n_qubits {
                return Err(Error::InvalidIndices {
                    indices: vec![q],
                    reason: format!("qubit out of range for {n_qubits} qubits"),
                });
            }
            paulis[q] = p;
        }
        Self::new(coeff, paulis)
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.paulis
    }

    pub fn n_qubits(&self) -> usize {
        self.paulis.len()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    pub fn y_count(&self) -> u32 {
        self.y_count
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// The Pauli letters as a string, qubit 0 first.
    pub fn label(&self) -> String {
        self.paulis.iter().map(|p| p.as_char()).collect()
    }

    pub fn with_coeff(&self, coeff: f64) -> Result<Self> {
        if !coeff.is_finite() {
            return Err(Error::NonFiniteCoefficient(coeff));
        }
        Ok(Self { coeff, ..self.clone() })
    }

    fn check_dim(&self, state: &StateVector) -> Result<()> {
        if self.n_qubits() != state.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: state.n_qubits(),
                found: self.n_qubits(),
            });
        }
        Ok(())
    }

    /// Returns `coeff · P|ψ⟩`. The input is left untouched.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check_dim(state)?;
        let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
        self.accumulate(self.coeff, state.amplitudes(), &mut out);
        Ok(StateVector::from_raw(state.n_qubits(), out))
    }

    /// `dst += scale · P src` with the coefficient ignored.
    pub(crate) fn accumulate(&self, scale: f64, src: &[Complex64], dst: &mut [Complex64]) {
        let phase = i_pow(self.y_count) * scale;
        for (b, amp) in src.iter().enumerate() {
            let sign = parity_sign(b as u64 & self.z_mask);
            dst[b ^ self.x_mask as usize] += phase * sign * amp;
        }
    }

    /// `⟨ψ|P|ψ⟩` with the coefficient ignored; real up to rounding when
    /// `P` is Hermitian, which every Pauli string is.
    pub(crate) fn unit_expectation(&self, amps: &[Complex64]) -> Complex64 {
        let x = self.x_mask as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        if x == 0 {
            for (b, amp) in amps.iter().enumerate() {
                acc.re += parity_sign(b as u64 & self.z_mask) * amp.norm_sqr();
            }
            return acc;
        }
        for (b, amp) in amps.iter().enumerate() {
            let sign = parity_sign(b as u64 & self.z_mask);
            acc += amps[b ^ x].conj() * amp * sign;
        }
        acc * i_pow(self.y_count)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+} {}", self.coeff, self.label())
    }
}

/// A qubit Hamiltonian `constant + Σ coeff · P` with real coefficients.
///
/// Construction canonicalizes the terms: identity strings fold into the
/// constant, duplicate strings are merged by adding coefficients, and terms
/// whose merged coefficient is below [`DROP_TOLERANCE`] are removed. Terms
/// are kept in lexicographic order of their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    constant: f64,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(n_qubits: usize, constant: f64, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STRING_QUBITS {
            return Err(Error::InvalidPauliString(format!(
                "qubit count {n_qubits} outside 1..={MAX_STRING_QUBITS}"
            )));
        }
        if !constant.is_finite() {
            return Err(Error::NonFiniteCoefficient(constant));
        }
        let mut constant = constant;
        let mut merged: BTreeMap<Vec<Pauli>, f64> = BTreeMap::new();
        for term in terms {
            if term.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    found: term.n_qubits(),
                });
            }
            if term.is_identity() {
                constant += term.coeff;
            } else {
                *merged.entry(term.paulis).or_insert(0.0) += term.coeff;
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.abs() >= DROP_TOLERANCE)
            .map(|(p, c)| PauliTerm::new(c, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_qubits,
            constant,
            terms,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    fn check_dim(&self, state: &StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        Ok(())
    }

    /// `⟨ψ|H|ψ⟩` for a normalized state.
    ///
    /// Imaginary residue up to [`IMAGINARY_TOLERANCE`] is dropped; anything
    /// larger means the sum was built from a non-Hermitian source.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        self.check_dim(state)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        let amps = state.amplitudes();
        let mut total = Complex64::new(self.constant, 0.0);
        for term in &self.terms {
            total += term.unit_expectation(amps) * term.coeff;
        }
        if total.im.abs() > IMAGINARY_TOLERANCE {
            return Err(Error::ImaginaryExpectation { imag: total.im });
        }
        Ok(total.re)
    }

    /// `dst = H src` on raw amplitude slices of length `2^n`.
    pub(crate) fn apply_into(&self, src: &[Complex64], dst: &mut [Complex64]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = s * self.constant;
        }
        for term in &self.terms {
            term.accumulate(term.coeff, src, dst);
        }
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.constant)?;
        for t in &self.terms {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}
