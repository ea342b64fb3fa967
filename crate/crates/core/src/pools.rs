//! Excitation pools.
//!
//! All three pools range over occupied → virtual index sets of the
//! Hartree–Fock reference (occupied qubits `0..n_electrons`) and keep only
//! spin-conserving excitations: spin-down orbitals sit on even qubits and
//! spin-up orbitals on odd ones.
//!
//! | pool               | single (i, k)             | double (i, j, k, l)          |
//! |--------------------|---------------------------|------------------------------|
//! | `uccsd`            | 2 strings with Z chain    | 8 strings with Z chains      |
//! | `qubit-adapt`      | 2 separate strings        | 8 separate strings           |
//! | `qubit-excitation` | rotation, 2 CNOTs         | rotation, 13 CNOTs           |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliTerm};

/// CNOTs in the compiled single Qubit-Excitation circuit.
pub const QE_SINGLE_CNOTS: u32 = 2;
/// CNOTs in the compiled double Qubit-Excitation circuit.
pub const QE_DOUBLE_CNOTS: u32 = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExcitationKind {
    UccsdSingle,
    UccsdDouble,
    QubitAdaptString,
    QeSingle,
    QeDouble,
}

impl ExcitationKind {
    pub fn name(self) -> &'static str {
        match self {
            ExcitationKind::UccsdSingle => "uccsd-single",
            ExcitationKind::UccsdDouble => "uccsd-double",
            ExcitationKind::QubitAdaptString => "qadapt",
            ExcitationKind::QeSingle => "qe-single",
            ExcitationKind::QeDouble => "qe-double",
        }
    }
}

/// The three pools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoolKind {
    Uccsd,
    QubitAdapt,
    QubitExcitation,
}

impl PoolKind {
    pub const ALL: [PoolKind; 3] = [PoolKind::Uccsd, PoolKind::QubitAdapt, PoolKind::QubitExcitation];

    pub fn name(self) -> &'static str {
        match self {
            PoolKind::Uccsd => "uccsd",
            PoolKind::QubitAdapt => "qubit-adapt",
            PoolKind::QubitExcitation => "qubit-excitation",
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uccsd" => Ok(PoolKind::Uccsd),
            "qubit-adapt" => Ok(PoolKind::QubitAdapt),
            "qubit-excitation" => Ok(PoolKind::QubitExcitation),
            _ => Err(Error::UnknownName {
                what: "pool",
                name: s.to_string(),
            }),
        }
    }
}

/// One element of a pool.
#[derive(Debug, Clone, PartialEq)]
pub struct Excitation {
    kind: ExcitationKind,
    indices: Vec<usize>,
    generator: Vec<PauliTerm>,
    cnot_cost: u32,
    pool_id: usize,
}

impl Excitation {
    pub fn kind(&self) -> ExcitationKind {
        self.kind
    }

    /// `(i, k)` or `(i, j, k, l)`: occupied indices first.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Signed generator strings `c_m P_m`; the excitation is `Π exp(iθ c_m P_m)`.
    pub fn generator(&self) -> &[PauliTerm] {
        &self.generator
    }

    pub fn cnot_cost(&self) -> u32 {
        self.cnot_cost
    }

    /// Position in the pool; used for tie-breaking.
    pub fn pool_id(&self) -> usize {
        self.pool_id
    }

    /// Compact label without commas, e.g. `qe-double[0 1 2 3]` or
    /// `qadapt[0 2]:XY`.
    pub fn label(&self) -> String {
        let idx = self.indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        match self.kind {
            ExcitationKind::QubitAdaptString => {
                let letters: String = self
                    .indices
                    .iter()
                    .map(|&q| self.generator[0].paulis()[q].as_char())
                    .collect();
                format!("{}[{idx}]:{letters}", self.kind.name())
            }
            _ => format!("{}[{idx}]", self.kind.name()),
        }
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Spin-conservation filter for `(i, k)` or `(i, j, k, l)`.
pub fn spin_conserving(indices: &[usize]) -> Result<bool> {
    match *indices {
        [i, k] => Ok(i % 2 == k % 2),
        [i, j, k, l] => Ok(i % 2 + j % 2 == k % 2 + l % 2),
        _ => Err(Error::InvalidIndices {
            indices: indices.to_vec(),
            reason: "spin filter takes 2 or 4 indices".to_string(),
        }),
    }
}

/// Staircase CNOT count of one string exponential: `2·(weight − 1)`.
pub fn staircase_cnots(term: &PauliTerm) -> u32 {
    2 * (term.weight().max(1) as u32 - 1)
}

/// CNOT cost of an excitation's compiled circuit.
pub fn cnot_cost(kind: ExcitationKind, generator: &[PauliTerm]) -> u32 {
    match kind {
        ExcitationKind::QeSingle => QE_SINGLE_CNOTS,
        ExcitationKind::QeDouble => QE_DOUBLE_CNOTS,
        ExcitationKind::QubitAdaptString | ExcitationKind::UccsdSingle | ExcitationKind::UccsdDouble => {
            generator.iter().map(staircase_cnots).sum()
        }
    }
}

fn z_chain(factors: &mut Vec<(usize, Pauli)>, lo: usize, hi: usize) {
    factors.extend((lo + 1..hi).map(|r| (r, Pauli::Z)));
}

/// `½(X_i Y_k − Y_i X_k)`, with `Z_r` for `i < r < k` when `z_chain`.
pub fn single_generator(n_qubits: usize, [i, k]: [usize; 2], with_chain: bool) -> Result<Vec<PauliTerm>> {
    use Pauli::{X, Y};
    let mut out = Vec::with_capacity(2);
    for (sign, a, b) in [(0.5, X, Y), (-0.5, Y, X)] {
        let mut f = vec![(i, a), (k, b)];
        if with_chain {
            z_chain(&mut f, i.min(k), i.max(k));
        }
        out.push(PauliTerm::from_sparse(sign, n_qubits, &f)?);
    }
    Ok(out)
}

/// Letters on `(i, j, k, l)` and signs of the eight double-excitation
/// strings, in their conventional textual order.
pub const DOUBLE_STRINGS: [(f64, [Pauli; 4]); 8] = {
    use Pauli::{X, Y};
    [
        (1.0, [X, Y, X, X]),
        (1.0, [Y, X, X, X]),
        (1.0, [Y, Y, Y, X]),
        (1.0, [Y, Y, X, Y]),
        (-1.0, [X, X, Y, X]),
        (-1.0, [X, X, X, Y]),
        (-1.0, [Y, X, Y, Y]),
        (-1.0, [X, Y, Y, Y]),
    ]
};

/// `⅛ Σ ±σ_i σ_j σ_k σ_l`, with Z chains between `i, j` and between `k, l`
/// when `with_chain`.
pub fn double_generator(n_qubits: usize, [i, j, k, l]: [usize; 4], with_chain: bool) -> Result<Vec<PauliTerm>> {
    DOUBLE_STRINGS
        .iter()
        .map(|(sign, p)| {
            let mut f = vec![(i, p[0]), (j, p[1]), (k, p[2]), (l, p[3])];
            if with_chain {
                z_chain(&mut f, i, j);
                z_chain(&mut f, k, l);
            }
            PauliTerm::from_sparse(sign / 8.0, n_qubits, &f)
        })
        .collect()
}

fn push(pool: &mut Vec<Excitation>, kind: ExcitationKind, indices: Vec<usize>, generator: Vec<PauliTerm>) {
    let cnot_cost = cnot_cost(kind, &generator);
    let pool_id = pool.len();
    pool.push(Excitation {
        kind,
        indices,
        generator,
        cnot_cost,
        pool_id,
    });
}

/// Occupied → virtual spin-conserving `(i, k)` pairs.
pub fn single_index_sets(n_qubits: usize, n_electrons: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for i in 0..n_electrons {
        for k in n_electrons..n_qubits {
            if i % 2 == k % 2 {
                out.push([i, k]);
            }
        }
    }
    out
}

/// Occupied pairs `i < j` → virtual pairs `k < l`, spin-conserving.
pub fn double_index_sets(n_qubits: usize, n_electrons: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..n_electrons {
        for j in i + 1..n_electrons {
            for k in n_electrons..n_qubits {
                for l in k + 1..n_qubits {
                    if i % 2 + j % 2 == k % 2 + l % 2 {
                        out.push([i, j, k, l]);
                    }
                }
            }
        }
    }
    out
}

/// Builds a pool. Singles come first, then doubles, each in lexicographic
/// index order; Qubit-ADAPT strings of one index set keep the textual order
/// of the corresponding UCCSD terms.
pub fn build_pool(kind: PoolKind, n_qubits: usize, n_electrons: usize) -> Result<Vec<Excitation>> {
    if n_electrons > n_qubits {
        return Err(Error::TooManyElectrons { n_electrons, n_qubits });
    }
    let singles = single_index_sets(n_qubits, n_electrons);
    let doubles = double_index_sets(n_qubits, n_electrons);
    let mut pool = Vec::new();
    match kind {
        PoolKind::Uccsd => {
            for s in &singles {
                push(
                    &mut pool,
                    ExcitationKind::UccsdSingle,
                    s.to_vec(),
                    single_generator(n_qubits, *s, true)?,
                );
            }
            for d in &doubles {
                push(
                    &mut pool,
                    ExcitationKind::UccsdDouble,
                    d.to_vec(),
                    double_generator(n_qubits, *d, true)?,
                );
            }
        }
        PoolKind::QubitExcitation => {
            for s in &singles {
                push(
                    &mut pool,
                    ExcitationKind::QeSingle,
                    s.to_vec(),
                    single_generator(n_qubits, *s, false)?,
                );
            }
            for d in &doubles {
                push(
                    &mut pool,
                    ExcitationKind::QeDouble,
                    d.to_vec(),
                    double_generator(n_qubits, *d, false)?,
                );
            }
        }
        PoolKind::QubitAdapt => {
            let unit = |t: PauliTerm| t.with_coeff(1.0);
            for s in &singles {
                for t in single_generator(n_qubits, *s, false)? {
                    push(&mut pool, ExcitationKind::QubitAdaptString, s.to_vec(), vec![unit(t)?]);
                }
            }
            for d in &doubles {
                for t in double_generator(n_qubits, *d, false)? {
                    push(&mut pool, ExcitationKind::QubitAdaptString, d.to_vec(), vec![unit(t)?]);
                }
            }
        }
    }
    Ok(pool)
}
