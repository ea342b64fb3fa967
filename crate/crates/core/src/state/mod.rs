//! The simulated register.
//!
//! Amplitude `b` of a [`StateVector`] belongs to the basis state whose bit
//! `p` is the occupation of qubit (spin-orbital) `p`; an occupied orbital is
//! a qubit in `|1⟩`.
//!
//! Qubit-Excitations are applied as direct rotations of paired amplitudes.
//! The single rotation on `(i, k)` acts on the local basis `|q_i q_k⟩` and
//! the double rotation on `(i, j, k, l)` on `|q_l q_k q_j q_i⟩`. In both
//! cases these are the orderings under which the 4×4 and 16×16 rotation
//! matrices coincide with the exponentials of their generator strings
//! `(X_i Y_k − Y_i X_k)/2` and the eight-term double generator, so the
//! matrix and exponential routes are interchangeable at equal angle.

pub mod circuits;

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm};
use crate::pools::{Excitation, ExcitationKind};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 26;

/// `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidIndices {
                indices: vec![index],
                reason: format!("basis index out of range for {n_qubits} qubits"),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Hartree–Fock reference: qubits `0..n_electrons` occupied.
    pub fn hartree_fock(n_qubits: usize, n_electrons: usize) -> Result<Self> {
        if n_electrons > n_qubits {
            return Err(Error::TooManyElectrons { n_electrons, n_qubits });
        }
        Self::basis(n_qubits, (1usize << n_electrons) - 1)
    }

    /// Wraps caller-supplied amplitudes. The vector is not renormalized.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        if amps.len() != 1usize << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: amps.len().max(1).ilog2() as usize,
            });
        }
        Ok(Self { n_qubits, amps })
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n_qubits);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same(other.n_qubits)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Largest amplitude-wise distance to another state.
    pub fn max_distance(&self, other: &StateVector) -> Result<f64> {
        self.check_same(other.n_qubits)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: n,
            });
        }
        Ok(())
    }

    fn check_index(&self, indices: &[usize]) -> Result<()> {
        let bad = |reason: &str| Error::InvalidIndices {
            indices: indices.to_vec(),
            reason: reason.to_string(),
        };
        if indices.iter().any(|&q| q >= self.n_qubits) {
            return Err(bad(&format!("qubit out of range for {} qubits", self.n_qubits)));
        }
        for (a, &p) in indices.iter().enumerate() {
            if indices[a + 1..].contains(&p) {
                return Err(bad("indices must be distinct"));
            }
        }
        Ok(())
    }

    /// Rotation of matrix form
    ///
    /// ```text
    /// 1   0    0   0
    /// 0  cos -sin  0
    /// 0  sin  cos  0
    /// 0   0    0   1
    /// ```
    ///
    /// on the local basis `|q_i q_k⟩`; it mixes `|01⟩` and `|10⟩` of the pair.
    pub fn apply_single_qubit_excitation(&self, i: usize, k: usize, theta: f64) -> Result<Self> {
        let mut out = self.clone();
        out.single_qubit_excitation_in_place(i, k, theta)?;
        Ok(out)
    }

    pub fn single_qubit_excitation_in_place(&mut self, i: usize, k: usize, theta: f64) -> Result<()> {
        self.check_index(&[i, k])?;
        rotate_pair(&mut self.amps, 1 << k, 1 << i, theta);
        Ok(())
    }

    /// Rotation mixing local basis states 3 and 12 of `|q_l q_k q_j q_i⟩`:
    /// column 3 (`i`, `j` occupied) maps to `cos|3⟩ + sin|12⟩` and column 12
    /// (`k`, `l` occupied) to `−sin|3⟩ + cos|12⟩`. All other states are fixed.
    pub fn apply_double_qubit_excitation(&self, i: usize, j: usize, k: usize, l: usize, theta: f64) -> Result<Self> {
        let mut out = self.clone();
        out.double_qubit_excitation_in_place(i, j, k, l, theta)?;
        Ok(out)
    }

    pub fn double_qubit_excitation_in_place(
        &mut self,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        theta: f64,
    ) -> Result<()> {
        self.check_index(&[i, j, k, l])?;
        rotate_pair(&mut self.amps, (1 << i) | (1 << j), (1 << k) | (1 << l), theta);
        Ok(())
    }

    /// `exp(iθP)|ψ⟩ = cos θ |ψ⟩ + i sin θ P|ψ⟩` for a string with coefficient ±1;
    /// the sign is folded into the angle.
    pub fn apply_string_exponential(&self, theta: f64, term: &PauliTerm) -> Result<Self> {
        let mut out = self.clone();
        out.string_exponential_in_place(theta, term)?;
        Ok(out)
    }

    pub fn string_exponential_in_place(&mut self, theta: f64, term: &PauliTerm) -> Result<()> {
        if term.coeff().abs() != 1.0 {
            return Err(Error::NonUnitCoefficient(term.coeff()));
        }
        self.check_same(term.n_qubits())?;
        unit_string_exponential(&mut self.amps, theta * term.coeff(), term);
        Ok(())
    }

    /// Applies a pool excitation at angle `theta`.
    ///
    /// Qubit-Excitations use the direct rotations; every other kind applies
    /// the ordered product of its (mutually commuting) generator exponentials
    /// `exp(iθ c_m P_m)`.
    pub fn apply_excitation(&self, exc: &Excitation, theta: f64) -> Result<Self> {
        let mut out = self.clone();
        out.excitation_in_place(exc, theta)?;
        Ok(out)
    }

    pub fn excitation_in_place(&mut self, exc: &Excitation, theta: f64) -> Result<()> {
        let idx = exc.indices();
        match exc.kind() {
            ExcitationKind::QeSingle => self.single_qubit_excitation_in_place(idx[0], idx[1], theta),
            ExcitationKind::QeDouble => self.double_qubit_excitation_in_place(idx[0], idx[1], idx[2], idx[3], theta),
            ExcitationKind::UccsdSingle | ExcitationKind::UccsdDouble | ExcitationKind::QubitAdaptString => {
                self.apply_generator_product(exc.generator(), theta)
            }
        }
    }

    /// `Π_m exp(iθ c_m P_m)` in the listed order.
    pub fn apply_generator_product(&mut self, generator: &[PauliTerm], theta: f64) -> Result<()> {
        for term in generator {
            self.check_same(term.n_qubits())?;
            unit_string_exponential(&mut self.amps, theta * term.coeff(), term);
        }
        Ok(())
    }
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n_qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

/// For every basis state `b` matching `src` on the `src | dst` support,
/// rotates `(ψ[b], ψ[b'])` with `b' = b ^ src ^ dst` so that `|b⟩` maps to
/// `cos|b⟩ + sin|b'⟩`.
fn rotate_pair(amps: &mut [Complex64], src: usize, dst: usize, theta: f64) {
    let support = src | dst;
    let flip = src ^ dst;
    let (s, c) = theta.sin_cos();
    for b in 0..amps.len() {
        if b & support != src {
            continue;
        }
        let u = amps[b];
        let v = amps[b ^ flip];
        amps[b] = u * c - v * s;
        amps[b ^ flip] = u * s + v * c;
    }
}

/// `ψ ← cos(angle) ψ + i sin(angle) P ψ`, treating `P` as a unit string.
fn unit_string_exponential(amps: &mut [Complex64], angle: f64, term: &PauliTerm) {
    let (s, c) = angle.sin_cos();
    let x = term.x_mask() as usize;
    let z = term.z_mask();
    // i · i^{#Y}
    let base = match (term.y_count() + 1) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    } * s;
    let sign = |b: usize| {
        if (b as u64 & z).count_ones() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    if x == 0 {
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= base * sign(b) + c;
        }
        return;
    }
    for b in 0..amps.len() {
        let partner = b ^ x;
        if partner < b {
            continue;
        }
        let u = amps[b];
        let v = amps[partner];
        amps[b] = u * c + base * sign(partner) * v;
        amps[partner] = v * c + base * sign(b) * u;
    }
}

/// Number of Hamiltonian expectation values measured so far.
///
/// Increments are atomic so parallel evaluators can share one counter; the
/// final count does not depend on the schedule.
#[derive(Debug, Default)]
pub struct ExperimentCounter {
    count: AtomicU64,
}

impl ExperimentCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self) {
        self.count.fetch_add(1, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

/// One quantum experiment: `⟨ψ|H|ψ⟩`, counted.
pub fn counted_expectation(hamiltonian: &PauliSum, state: &StateVector, counter: &ExperimentCounter) -> Result<f64> {
    let energy = hamiltonian.expectation(state)?;
    counter.record();
    Ok(energy)
}
