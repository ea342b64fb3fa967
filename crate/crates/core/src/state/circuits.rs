//! Gate-level verification of the Qubit-Excitation rotations.
//!
//! The simulator never executes gates; this module exists to check that the
//! published single- and double-excitation circuits compose to the 4×4 and
//! 16×16 rotation matrices, and that those matrices equal the exponentials of
//! their generator strings.
//!
//! A circuit names its qubits by slot (`0 = i`, `1 = k` for the single
//! circuit; `0..4 = i, j, k, l` for the double). How slots map onto the bits
//! of the matrix index is not fixed by the drawings, so every composition is
//! tried under both [`QubitOrder`]s and both time directions.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::pools::{double_generator, single_generator};
use crate::state::StateVector;

/// Maximum entry of `U†V − e^{iφ}I` accepted as "equal up to global phase".
pub const GLOBAL_PHASE_TOLERANCE: f64 = 1e-9;

/// Maximum entry-wise difference accepted between the rotation matrices and
/// the generator exponentials.
pub const EXPONENTIAL_TOLERANCE: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    H(usize),
    X(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    fn is_entangling(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

/// Which end of the slot list is the most significant bit of a matrix index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitOrder {
    /// Slot 0 is the most significant bit (`|q_i q_k⟩` reading).
    FirstMostSignificant,
    /// Slot 0 is the least significant bit.
    FirstLeastSignificant,
}

impl QubitOrder {
    pub const ALL: [QubitOrder; 2] = [QubitOrder::FirstMostSignificant, QubitOrder::FirstLeastSignificant];

    fn bit(self, slot: usize, n: usize) -> usize {
        match self {
            QubitOrder::FirstMostSignificant => n - 1 - slot,
            QubitOrder::FirstLeastSignificant => slot,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QubitOrder::FirstMostSignificant => "first-qubit-most-significant",
            QubitOrder::FirstLeastSignificant => "first-qubit-least-significant",
        }
    }
}

/// Order in which the drawn gate columns are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeDirection {
    LeftToRight,
    RightToLeft,
}

impl TimeDirection {
    pub const ALL: [TimeDirection; 2] = [TimeDirection::LeftToRight, TimeDirection::RightToLeft];

    pub fn name(self) -> &'static str {
        match self {
            TimeDirection::LeftToRight => "left-to-right",
            TimeDirection::RightToLeft => "right-to-left",
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_qubit_matrix(gate: &Gate) -> [[Complex64; 2]; 2] {
    let rot = |theta: f64| (theta / 2.0).sin_cos();
    match *gate {
        Gate::Rx(_, t) => {
            let (s, co) = rot(t);
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        Gate::Ry(_, t) => {
            let (s, co) = rot(t);
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        Gate::Rz(_, t) => {
            let (s, co) = rot(t);
            [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
        }
        Gate::H(_) => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
        }
        Gate::X(_) => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Gate::Cnot { .. } => unreachable!("not a single-qubit gate"),
    }
}

fn apply_gate(amps: &mut [Complex64], gate: &Gate, n: usize, order: QubitOrder) {
    match *gate {
        Gate::Cnot { control, target } => {
            let cb = 1usize << order.bit(control, n);
            let tb = 1usize << order.bit(target, n);
            for b in 0..amps.len() {
                if b & cb != 0 && b & tb == 0 {
                    amps.swap(b, b | tb);
                }
            }
        }
        Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) | Gate::H(q) | Gate::X(q) => {
            let m = single_qubit_matrix(gate);
            let qb = 1usize << order.bit(q, n);
            for b in 0..amps.len() {
                if b & qb != 0 {
                    continue;
                }
                let a0 = amps[b];
                let a1 = amps[b | qb];
                amps[b] = m[0][0] * a0 + m[0][1] * a1;
                amps[b | qb] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
}

/// Unitary of a gate list on `n` slots.
pub fn compose(gates: &[Gate], n: usize, order: QubitOrder, direction: TimeDirection) -> CMatrix {
    let dim = 1usize << n;
    let mut u = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut amps = vec![c(0.0, 0.0); dim];
        amps[col] = c(1.0, 0.0);
        match direction {
            TimeDirection::LeftToRight => gates.iter().for_each(|g| apply_gate(&mut amps, g, n, order)),
            TimeDirection::RightToLeft => gates.iter().rev().for_each(|g| apply_gate(&mut amps, g, n, order)),
        }
        for (row, a) in amps.into_iter().enumerate() {
            u[(row, col)] = a;
        }
    }
    u
}

pub fn cnot_count(gates: &[Gate]) -> usize {
    gates.iter().filter(|g| g.is_entangling()).count()
}

/// The two-qubit single-excitation circuit, slots `(i, k)`.
pub fn single_excitation_circuit(theta: f64) -> Vec<Gate> {
    use Gate::*;
    let (i, k) = (0, 1);
    vec![
        Rz(k, FRAC_PI_2),
        Rx(k, FRAC_PI_2),
        Rx(i, FRAC_PI_2),
        Cnot { control: k, target: i },
        Rx(k, theta),
        Rz(i, theta),
        Cnot { control: k, target: i },
        Rx(k, -FRAC_PI_2),
        Rx(i, -FRAC_PI_2),
        Rz(k, -FRAC_PI_2),
    ]
}

/// The 13-CNOT double-excitation circuit as drawn, slots `(i, j, k, l)`.
pub fn double_excitation_circuit(theta: f64) -> Vec<Gate> {
    use Gate::*;
    let (i, j, k, l) = (0, 1, 2, 3);
    let t = theta / 8.0;
    let cx = |control, target| Cnot { control, target };
    vec![
        cx(l, k),
        cx(j, i),
        X(k),
        X(i),
        cx(l, j),
        Ry(l, t),
        H(k),
        cx(l, k),
        Ry(l, -t),
        H(i),
        cx(l, i),
        Ry(l, t),
        cx(l, k),
        Ry(l, -t),
        H(j),
        cx(l, j),
        Ry(l, t),
        cx(l, k),
        Ry(l, -t),
        cx(l, i),
        Ry(l, t),
        H(i),
        cx(l, k),
        Ry(l, -t),
        H(k),
        Rz(j, -FRAC_PI_2),
        cx(l, j),
        Rz(l, FRAC_PI_2),
        Rz(j, -FRAC_PI_2),
        X(k),
        Ry(j, -FRAC_PI_2),
        X(i),
        cx(l, k),
        cx(j, i),
    ]
}

/// The 4×4 rotation in the `|q_i q_k⟩` basis.
pub fn single_rotation_matrix(theta: f64) -> CMatrix {
    let (s, co) = theta.sin_cos();
    let mut m = CMatrix::identity(4, 4);
    m[(1, 1)] = c(co, 0.0);
    m[(1, 2)] = c(-s, 0.0);
    m[(2, 1)] = c(s, 0.0);
    m[(2, 2)] = c(co, 0.0);
    m
}

/// The 16×16 rotation mixing basis states 3 and 12.
pub fn double_rotation_matrix(theta: f64) -> CMatrix {
    let (s, co) = theta.sin_cos();
    let mut m = CMatrix::identity(16, 16);
    m[(3, 3)] = c(co, 0.0);
    m[(3, 12)] = c(-s, 0.0);
    m[(12, 3)] = c(s, 0.0);
    m[(12, 12)] = c(co, 0.0);
    m
}

/// Distance of `U†V` from the nearest `e^{iφ}I`.
pub fn global_phase_deviation(u: &CMatrix, v: &CMatrix) -> f64 {
    let w = u.adjoint() * v;
    let (pivot, _) = (0..w.nrows())
        .map(|d| (d, w[(d, d)].norm()))
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let p = w[(pivot, pivot)];
    let phase = if p.norm() > 0.0 { p / p.norm() } else { c(1.0, 0.0) };
    let mut dev: f64 = 0.0;
    for r in 0..w.nrows() {
        for col in 0..w.ncols() {
            let expect = if r == col { phase } else { c(0.0, 0.0) };
            dev = dev.max((w[(r, col)] - expect).norm());
        }
    }
    dev
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Collects the columns `f(|b⟩)` for every basis state of `n` qubits.
fn matrix_of<F>(n: usize, mut f: F) -> Result<CMatrix>
where
    F: FnMut(StateVector) -> Result<StateVector>,
{
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let out = f(StateVector::basis(n, col)?)?;
        for (row, a) in out.amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    Ok(m)
}

/// Deterministic test angles spread over `(−π, π]`, starting at 0.
pub fn probe_angles(count: usize) -> Vec<f64> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    (0..count)
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                2.0 * PI * ((m as f64 * golden).fract()) - PI
            }
        })
        .collect()
}

/// Worst disagreement, over `angles`, between the literal rotation matrix,
/// the simulator's direct rotation and the product of generator
/// exponentials, for the single (`double = false`) or double excitation on
/// the first 2 or 4 qubits.
pub fn rotation_vs_exponential(double: bool, angles: &[f64]) -> Result<f64> {
    let n = if double { 4 } else { 2 };
    let generator = if double {
        double_generator(n, [0, 1, 2, 3], false)?
    } else {
        single_generator(n, [0, 1], false)?
    };
    let mut worst: f64 = 0.0;
    for &theta in angles {
        // Simulator bit p is qubit p: for the single pair (0, 1) the local
        // index 2·q_i + q_k is the bit-reversed global index; for the double
        // the local index q_i + 2q_j + 4q_k + 8q_l is the global index.
        let literal = if double {
            double_rotation_matrix(theta)
        } else {
            let m = single_rotation_matrix(theta);
            let rev = [0usize, 2, 1, 3];
            CMatrix::from_fn(4, 4, |r, col| m[(rev[r], rev[col])])
        };
        let direct = matrix_of(n, |psi| {
            if double {
                psi.apply_double_qubit_excitation(0, 1, 2, 3, theta)
            } else {
                psi.apply_single_qubit_excitation(0, 1, theta)
            }
        })?;
        let expo = matrix_of(n, |mut psi| {
            psi.apply_generator_product(&generator, theta)?;
            Ok(psi)
        })?;
        worst = worst
            .max(max_abs_diff(&literal, &direct))
            .max(max_abs_diff(&literal, &expo))
            .max(max_abs_diff(&direct, &expo));
    }
    Ok(worst)
}

/// Result of composing one drawn circuit under one convention.
#[derive(Debug, Clone)]
pub struct ConventionMatch {
    pub order: QubitOrder,
    pub direction: TimeDirection,
    pub max_deviation: f64,
}

impl ConventionMatch {
    pub fn matches(&self) -> bool {
        self.max_deviation < GLOBAL_PHASE_TOLERANCE
    }
}

/// Compares a drawn circuit against its target matrix under every
/// convention, over the given angles.
pub fn circuit_vs_matrix<C, M>(n: usize, circuit: C, target: M, angles: &[f64]) -> Vec<ConventionMatch>
where
    C: Fn(f64) -> Vec<Gate>,
    M: Fn(f64) -> CMatrix,
{
    let mut out = Vec::new();
    for order in QubitOrder::ALL {
        for direction in TimeDirection::ALL {
            let max_deviation = angles
                .iter()
                .map(|&t| global_phase_deviation(&compose(&circuit(t), n, order, direction), &target(t)))
                .fold(0.0, f64::max);
            out.push(ConventionMatch {
                order,
                direction,
                max_deviation,
            });
        }
    }
    out
}

/// One line of the verification report.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    pub detail: String,
}

/// Runs every circuit check.
///
/// Exponential checks use `n_angles` probe angles; the gate-composition
/// checks reuse the same angles.
pub fn verify_all(n_angles: usize) -> Result<Vec<CheckResult>> {
    let angles = probe_angles(n_angles);
    let mut checks = Vec::new();

    for (double, name) in [
        (false, "single-rotation-vs-exponential"),
        (true, "double-rotation-vs-exponential"),
    ] {
        let dev = rotation_vs_exponential(double, &angles)?;
        checks.push(CheckResult {
            name: name.to_string(),
            passed: dev < EXPONENTIAL_TOLERANCE,
            max_deviation: dev,
            detail: format!("{} angles", angles.len()),
        });
    }

    type CircuitCheck = (&'static str, usize, fn(f64) -> Vec<Gate>, fn(f64) -> CMatrix);
    let circuits: [CircuitCheck; 2] = [
        (
            "single-circuit-vs-matrix",
            2,
            single_excitation_circuit,
            single_rotation_matrix,
        ),
        (
            "double-circuit-vs-matrix",
            4,
            double_excitation_circuit,
            double_rotation_matrix,
        ),
    ];
    for (name, n, circuit, target) in circuits {
        let results = circuit_vs_matrix(n, circuit, target, &angles);
        let matching: Vec<_> = results.iter().filter(|r| r.matches()).collect();
        let best = results.iter().map(|r| r.max_deviation).fold(f64::INFINITY, f64::min);
        let detail = if matching.is_empty() {
            "no match".to_string()
        } else {
            matching
                .iter()
                .map(|r| format!("{} {}", r.order.name(), r.direction.name()))
                .collect::<Vec<_>>()
                .join("; ")
        };
        checks.push(CheckResult {
            name: format!("{name} ({} CNOTs)", cnot_count(&circuit(0.0))),
            passed: !matching.is_empty(),
            max_deviation: best,
            detail,
        });
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_cnot_counts() {
        assert_eq!(cnot_count(&single_excitation_circuit(0.3)), 2);
        assert_eq!(cnot_count(&double_excitation_circuit(0.3)), 13);
    }

    #[test]
    fn compose_is_unitary() {
        let u = compose(
            &double_excitation_circuit(0.7),
            4,
            QubitOrder::FirstMostSignificant,
            TimeDirection::LeftToRight,
        );
        let id = CMatrix::identity(16, 16);
        assert!(max_abs_diff(&(u.adjoint() * &u), &id) < 1e-12);
    }

    #[test]
    fn phase_deviation_ignores_global_phase() {
        let m = single_rotation_matrix(0.4);
        let shifted = &m * c(0.6, 0.8);
        assert!(global_phase_deviation(&m, &shifted) < 1e-15);
        assert!(global_phase_deviation(&m, &single_rotation_matrix(-0.4)) > 0.1);
    }

    #[test]
    fn zero_angle_exponential_check() {
        assert_eq!(rotation_vs_exponential(false, &[0.0]).unwrap(), 0.0);
        assert_eq!(rotation_vs_exponential(true, &[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn single_circuit_matches_most_significant_first() {
        let res = circuit_vs_matrix(2, single_excitation_circuit, single_rotation_matrix, &probe_angles(8));
        let hit = res
            .iter()
            .find(|r| r.order == QubitOrder::FirstMostSignificant && r.direction == TimeDirection::LeftToRight)
            .unwrap();
        assert!(hit.matches(), "deviation {}", hit.max_deviation);
    }
}
