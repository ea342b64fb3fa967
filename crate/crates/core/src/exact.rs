//! Exact ground energies.
//!
//! Small registers are diagonalized densely; larger ones use a restarted
//! Lanczos iteration that only ever applies the Hamiltonian term by term.
//! Either path can be restricted to a fixed particle number (Hamming weight
//! of the basis index), which is exact for number-conserving Hamiltonians.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::state::StateVector;

/// Registers up to this size are diagonalized densely by default.
pub const DENSE_MAX_QUBITS: usize = 10;
/// Largest register the oracle accepts.
pub const EXACT_MAX_QUBITS: usize = 16;
/// Matrix elements leaving the requested sector larger than this mean the
/// Hamiltonian does not conserve particle number; smaller ones are rounding.
pub const SECTOR_LEAK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    Dense,
    Iterative,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub ground_energy: f64,
    pub ground_state: Option<StateVector>,
    pub method: SolverMethod,
}

/// Knobs of the Lanczos solver.
#[derive(Debug, Clone, PartialEq)]
pub struct LanczosOptions {
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Converged once `‖Hx − λx‖ < tol · max(1, |λ|)`.
    pub tol: f64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 80,
            max_restarts: 40,
            tol: 1e-9,
        }
    }
}

fn check_size(h: &PauliSum, sector: Option<usize>) -> Result<()> {
    let n = h.n_qubits();
    if n > EXACT_MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n_qubits: n,
            limit: EXACT_MAX_QUBITS,
        });
    }
    if let Some(ne) = sector {
        if ne > n {
            return Err(Error::TooManyElectrons {
                n_electrons: ne,
                n_qubits: n,
            });
        }
    }
    Ok(())
}

fn in_sector(b: usize, sector: Option<usize>) -> bool {
    sector.is_none_or(|ne| b.count_ones() as usize == ne)
}

/// Smallest eigenvalue of `h`, optionally within the `n_electrons` sector.
/// Dense up to [`DENSE_MAX_QUBITS`], Lanczos beyond.
pub fn exact_ground_energy(h: &PauliSum, sector: Option<usize>) -> Result<SpectrumResult> {
    if h.n_qubits() <= DENSE_MAX_QUBITS {
        dense_ground_state(h, sector)
    } else {
        lanczos_ground_state(h, sector, &LanczosOptions::default())
    }
}

/// Dense diagonalization over the selected basis states.
pub fn dense_ground_state(h: &PauliSum, sector: Option<usize>) -> Result<SpectrumResult> {
    check_size(h, sector)?;
    let n = h.n_qubits();
    let full = 1usize << n;
    let basis: Vec<usize> = (0..full).filter(|&b| in_sector(b, sector)).collect();
    let mut position = vec![usize::MAX; full];
    for (p, &b) in basis.iter().enumerate() {
        position[b] = p;
    }
    let dim = basis.len();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut column = vec![Complex64::new(0.0, 0.0); full];
    let mut unit = vec![Complex64::new(0.0, 0.0); full];
    for (col, &b) in basis.iter().enumerate() {
        unit[b] = Complex64::new(1.0, 0.0);
        h.apply_into(&unit, &mut column);
        unit[b] = Complex64::new(0.0, 0.0);
        for (row, v) in column.iter().enumerate() {
            let p = position[row];
            if p == usize::MAX {
                if v.norm() <= SECTOR_LEAK_TOLERANCE {
                    continue;
                }
                return Err(Error::InvalidConfig(format!(
                    "Hamiltonian does not conserve particle number {sector:?}"
                )));
            }
            m[(p, col)] = *v;
        }
    }
    let eig = m.symmetric_eigen();
    let (imin, &e0) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty basis");
    let vec = eig.eigenvectors.column(imin);
    let mut amps = vec![Complex64::new(0.0, 0.0); full];
    for (p, &b) in basis.iter().enumerate() {
        amps[b] = vec[p];
    }
    Ok(SpectrumResult {
        ground_energy: e0,
        ground_state: Some(StateVector::from_amplitudes(n, amps)?),
        method: SolverMethod::Dense,
    })
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Restarted Lanczos with full reorthogonalization.
///
/// The start vector is a fixed, deterministic superposition over the
/// selected basis states; each restart continues from the current Ritz
/// vector.
pub fn lanczos_ground_state(h: &PauliSum, sector: Option<usize>, opts: &LanczosOptions) -> Result<SpectrumResult> {
    check_size(h, sector)?;
    let n = h.n_qubits();
    let full = 1usize << n;
    let project = |v: &mut [Complex64]| {
        if sector.is_some() {
            for (b, a) in v.iter_mut().enumerate() {
                if !in_sector(b, sector) {
                    *a = Complex64::new(0.0, 0.0);
                }
            }
        }
    };
    let matvec = |v: &[Complex64], out: &mut [Complex64]| {
        h.apply_into(v, out);
        project(out);
    };

    let mut start: Vec<Complex64> = (0..full)
        .map(|b| {
            if in_sector(b, sector) {
                // irrational phases keep every eigenvector overlapping
                let t = b as f64 * 0.618_033_988_749_895 + 0.1;
                Complex64::new(1.0 + 0.5 * t.fract(), 0.25 * (2.0 * t).fract())
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let s = norm(&start);
    start.iter_mut().for_each(|a| *a /= s);

    let mut residual = f64::INFINITY;
    let mut w = vec![Complex64::new(0.0, 0.0); full];
    for _ in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alphas = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        for j in 0..opts.krylov_dim {
            matvec(&basis[j], &mut w);
            let alpha = dot(&basis[j], &w).re;
            alphas.push(alpha);
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
                }
            }
            let beta = norm(&w);
            if beta < 1e-12 || j + 1 == opts.krylov_dim {
                break;
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }
        let k = alphas.len();
        let t = DMatrix::<f64>::from_fn(k, k, |r, c| {
            if r == c {
                alphas[r]
            } else if r + 1 == c {
                betas[r]
            } else if c + 1 == r {
                betas[c]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let (imin, &theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty Krylov space");
        let y: DVector<f64> = eig.eigenvectors.column(imin).into_owned();
        let mut ritz = vec![Complex64::new(0.0, 0.0); full];
        for (coef, v) in y.iter().zip(&basis) {
            ritz.iter_mut().zip(v).for_each(|(r, x)| *r += x * *coef);
        }
        let rn = norm(&ritz);
        ritz.iter_mut().for_each(|a| *a /= rn);
        matvec(&ritz, &mut w);
        residual = w
            .iter()
            .zip(&ritz)
            .map(|(hx, x)| (hx - x * theta).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual < opts.tol * theta.abs().max(1.0) {
            let energy = h.expectation(&StateVector::from_amplitudes(n, ritz.clone())?)?;
            return Ok(SpectrumResult {
                ground_energy: energy,
                ground_state: Some(StateVector::from_amplitudes(n, ritz)?),
                method: SolverMethod::Iterative,
            });
        }
        start = ritz;
    }
    Err(Error::EigenNotConverged { residual })
}
