//! Independent reference implementations for the integration tests.
//!
//! Everything here works on dense matrices built from Kronecker products, so
//! it shares no code path with the sparse bit-twiddling kernels under test.

#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parabolic_vqe::cli::HamiltonianFile;
use parabolic_vqe::pauli::{Pauli, PauliSum, PauliTerm};
use parabolic_vqe::state::StateVector;

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_matrix(p: Pauli) -> CMatrix {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => CMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        Pauli::X => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        Pauli::Y => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        Pauli::Z => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    }
}

/// Dense matrix of `coeff · P`. Qubit 0 is the least significant bit, so
/// the Kronecker product runs from the highest qubit down.
pub fn term_matrix(term: &PauliTerm) -> CMatrix {
    let mut m = CMatrix::identity(1, 1);
    for &p in term.paulis().iter().rev() {
        m = m.kronecker(&pauli_matrix(p));
    }
    m * c(term.coeff(), 0.0)
}

pub fn sum_matrix(h: &PauliSum) -> CMatrix {
    let dim = 1 << h.n_qubits();
    let mut m = CMatrix::identity(dim, dim) * c(h.constant(), 0.0);
    for t in h.terms() {
        m += term_matrix(t);
    }
    m
}

pub fn generator_matrix(n_qubits: usize, generator: &[PauliTerm]) -> CMatrix {
    let dim = 1 << n_qubits;
    generator
        .iter()
        .fold(CMatrix::zeros(dim, dim), |acc, t| acc + term_matrix(t))
}

/// `exp(iθ G)` by nalgebra's dense matrix exponential.
pub fn expm_i(theta: f64, g: &CMatrix) -> CMatrix {
    (g * c(0.0, theta)).exp()
}

pub fn as_vector(state: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(state.amplitudes())
}

pub fn max_dev(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn quadratic_form(m: &CMatrix, state: &StateVector) -> Complex64 {
    let v = as_vector(state);
    (v.adjoint() * m * &v)[(0, 0)]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

pub fn random_term(rng: &mut impl Rng, n: usize, coeff: f64) -> PauliTerm {
    let paulis = (0..n)
        .map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)])
        .collect();
    PauliTerm::new(coeff, paulis).unwrap()
}

pub fn random_hamiltonian(rng: &mut impl Rng, n: usize, n_terms: usize) -> PauliSum {
    let terms: Vec<_> = (0..n_terms)
        .map(|_| {
            let coeff = rng.gen_range(-1.0..1.0);
            random_term(rng, n, coeff)
        })
        .collect();
    PauliSum::new(n, rng.gen_range(-1.0..1.0), terms).unwrap()
}

/// Lowest eigenvalue of a Hermitian matrix, optionally restricted to basis
/// states of Hamming weight `sector`.
pub fn dense_lowest(m: &CMatrix, sector: Option<usize>) -> f64 {
    let basis: Vec<usize> = (0..m.nrows())
        .filter(|b| sector.is_none_or(|ne| b.count_ones() as usize == ne))
        .collect();
    let sub = CMatrix::from_fn(basis.len(), basis.len(), |r, col| m[(basis[r], basis[col])]);
    sub.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> (HamiltonianFile, PauliSum) {
    let file = HamiltonianFile::load(&fixture_path(name)).unwrap();
    let h = file.to_pauli_sum().unwrap();
    (file, h)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > tol {
        let x1 = b - r * (b - a);
        let x2 = a + r * (b - a);
        if f(x1) < f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    0.5 * (a + b)
}
