//! Adaptive VQE driver.
//!
//! Starting from the Hartree–Fock state, each iteration picks one excitation
//! from the pool, appends it to the ansatz as a new parameter and runs a
//! single global optimization pass over all parameters. Every Hamiltonian
//! expectation value goes through one [`ExperimentCounter`], and each
//! iteration logs the counter and the cumulative CNOT count of the ansatz.
//!
//! The Hartree–Fock energy itself is not counted: it is known classically.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimize::{
    nelder_mead, parabolic_1d, parabolic_nd, FnObjective, NelderMeadOptions, NelderMeadStatus, ParabolicConfig,
};
use crate::pauli::PauliSum;
use crate::pools::Excitation;
use crate::state::{counted_expectation, ExperimentCounter, StateVector};

/// Below this largest |gradient| the gradient selector reports a stall.
pub const GRADIENT_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzElement {
    pub excitation: Excitation,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizerKind {
    Parabolic,
    NelderMead,
}

impl OptimizerKind {
    pub const ALL: [OptimizerKind; 2] = [OptimizerKind::Parabolic, OptimizerKind::NelderMead];

    pub fn name(self) -> &'static str {
        match self {
            OptimizerKind::Parabolic => "parabolic",
            OptimizerKind::NelderMead => "nelder-mead",
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName {
                what: "optimizer",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorKind {
    Energy,
    Gradient,
}

impl SelectorKind {
    pub const ALL: [SelectorKind; 2] = [SelectorKind::Energy, SelectorKind::Gradient];

    pub fn name(self) -> &'static str {
        match self {
            SelectorKind::Energy => "energy",
            SelectorKind::Gradient => "gradient",
        }
    }
}

impl fmt::Display for SelectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SelectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName {
                what: "selector",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptConfig {
    pub optimizer: OptimizerKind,
    pub selector: SelectorKind,
    /// Stop once an iteration lowers the energy by less than this (Hartree).
    pub conv_threshold: f64,
    pub max_iterations: usize,
    pub parabolic: ParabolicConfig,
    /// Nelder–Mead budget per global step is `nm_evals_per_param · (n + 1)`.
    pub nm_evals_per_param: usize,
    /// Exact ground energy, for the error column.
    pub exact_energy: Option<f64>,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimizerKind::Parabolic,
            selector: SelectorKind::Energy,
            conv_threshold: 1e-9,
            max_iterations: 50,
            parabolic: ParabolicConfig::default(),
            nm_evals_per_param: 200,
            exact_energy: None,
        }
    }
}

impl AdaptConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.conv_threshold.is_finite() && self.conv_threshold > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "conv_threshold must be positive, got {}",
                self.conv_threshold
            )));
        }
        if self.nm_evals_per_param == 0 {
            return Err(Error::InvalidConfig("nm_evals_per_param must be positive".to_string()));
        }
        if let Some(e) = self.exact_energy {
            if !e.is_finite() {
                return Err(Error::NonFiniteCoefficient(e));
            }
        }
        self.parabolic.validate()
    }
}

/// Outcome of a selection step.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Index into the pool.
    pub index: usize,
    /// Starting value of the new parameter.
    pub theta: f64,
    /// Energy reached by the 1-D search (energy selector only).
    pub energy: Option<f64>,
    /// Forward-difference derivative at zero (gradient selector only).
    pub gradient: Option<f64>,
    pub evals: usize,
    /// Line searches that needed a second fit.
    pub refinements: usize,
    /// No candidate offers any descent.
    pub stalled: bool,
}

/// Energy-based selection: a 1-D parabolic search per candidate, centered
/// at zero with `energy` as the known center value. Returns the candidate
/// with the lowest optimized energy, ties going to the lowest pool id.
pub fn select_by_energy(
    pool: &[Excitation],
    state: &StateVector,
    hamiltonian: &PauliSum,
    energy: f64,
    cfg: &ParabolicConfig,
    counter: &ExperimentCounter,
) -> Result<Selection> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let lines = pool
        .par_iter()
        .map(|exc| {
            parabolic_1d(
                |x| counted_expectation(hamiltonian, &state.apply_excitation(exc, x)?, counter),
                0.0,
                energy,
                cfg,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let evals = lines.iter().map(|l| l.evals).sum();
    let (index, best) = lines
        .iter()
        .enumerate()
        .min_by(|a, b| {
            a.1.value
                .total_cmp(&b.1.value)
                .then(pool[a.0].pool_id().cmp(&pool[b.0].pool_id()))
        })
        .expect("non-empty pool");
    Ok(Selection {
        index,
        theta: best.x,
        energy: Some(best.value),
        gradient: None,
        evals,
        refinements: lines.iter().filter(|l| l.passes > 1).count(),
        stalled: best.value >= energy && lines.iter().all(|l| l.no_curvature),
    })
}

/// Gradient-based selection: one forward difference per candidate, largest
/// magnitude wins, ties going to the lowest pool id.
pub fn select_by_gradient(
    pool: &[Excitation],
    state: &StateVector,
    hamiltonian: &PauliSum,
    energy: f64,
    dx: f64,
    counter: &ExperimentCounter,
) -> Result<Selection> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let grads = pool
        .par_iter()
        .map(|exc| Ok((counted_expectation(hamiltonian, &state.apply_excitation(exc, dx)?, counter)? - energy) / dx))
        .collect::<Result<Vec<f64>>>()?;
    let (index, &g) = grads
        .iter()
        .enumerate()
        .max_by(|a, b| {
            a.1.abs()
                .total_cmp(&b.1.abs())
                .then(pool[b.0].pool_id().cmp(&pool[a.0].pool_id()))
        })
        .expect("non-empty pool");
    Ok(Selection {
        index,
        theta: 0.0,
        energy: None,
        gradient: Some(g),
        evals: pool.len(),
        refinements: 0,
        stalled: g.abs() < GRADIENT_FLOOR,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxIterations,
    Stalled,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::MaxIterations => "max-iterations",
            RunStatus::Stalled => "stalled",
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One ledger row. Row 0 is the Hartree–Fock reference.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationEntry {
    pub iteration: usize,
    /// Chosen excitation; `None` for the reference row.
    pub excitation: Option<Excitation>,
    pub theta_at_selection: f64,
    pub energy: f64,
    pub error: Option<f64>,
    /// Evaluations reported by the selector and the global optimizer.
    pub selection_experiments: u64,
    pub optimizer_experiments: u64,
    /// Line searches of this iteration that needed a second fit.
    pub refinements: usize,
    /// Counter readings after this iteration.
    pub cum_experiments: u64,
    pub cum_cnots: u64,
}

impl IterationEntry {
    pub fn label(&self) -> String {
        self.excitation
            .as_ref()
            .map_or_else(|| "hf".to_string(), Excitation::label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub entries: Vec<IterationEntry>,
    pub ansatz: Vec<AnsatzElement>,
    pub status: RunStatus,
    /// Experiments of a final selection that did not extend the ansatz.
    pub trailing_experiments: u64,
}

impl RunRecord {
    pub fn final_energy(&self) -> f64 {
        self.entries.last().expect("reference row").energy
    }

    pub fn total_experiments(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.cum_experiments) + self.trailing_experiments
    }

    pub fn total_cnots(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.cum_cnots)
    }

    /// Iterations after the reference row.
    pub fn iterations(&self) -> usize {
        self.entries.len() - 1
    }
}

/// Prepares `Π_k U_k(θ_k) |reference⟩`, first element applied first.
pub fn prepare_state(reference: &StateVector, ansatz: &[Excitation], thetas: &[f64]) -> Result<StateVector> {
    let mut state = reference.clone();
    for (exc, &theta) in ansatz.iter().zip(thetas) {
        state.excitation_in_place(exc, theta)?;
    }
    Ok(state)
}

/// Runs the adaptive loop from the Hartree–Fock state with `n_electrons`.
pub fn run_adapt(
    hamiltonian: &PauliSum,
    n_electrons: usize,
    pool: &[Excitation],
    cfg: &AdaptConfig,
) -> Result<RunRecord> {
    cfg.validate()?;
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let reference = StateVector::hartree_fock(hamiltonian.n_qubits(), n_electrons)?;
    let counter = ExperimentCounter::new();
    let error = |e: f64| cfg.exact_energy.map(|x| e - x);

    let mut energy = hamiltonian.expectation(&reference)?;
    let mut entries = vec![IterationEntry {
        iteration: 0,
        excitation: None,
        theta_at_selection: 0.0,
        energy,
        error: error(energy),
        selection_experiments: 0,
        optimizer_experiments: 0,
        refinements: 0,
        cum_experiments: 0,
        cum_cnots: 0,
    }];
    let mut ansatz: Vec<Excitation> = Vec::new();
    let mut thetas: Vec<f64> = Vec::new();
    let mut state = reference.clone();
    let mut cnots = 0u64;
    let mut trailing = 0u64;

    let status = loop {
        if ansatz.len() >= cfg.max_iterations {
            break RunStatus::MaxIterations;
        }
        let before = counter.get();
        let sel = match cfg.selector {
            SelectorKind::Energy => select_by_energy(pool, &state, hamiltonian, energy, &cfg.parabolic, &counter)?,
            SelectorKind::Gradient => {
                select_by_gradient(pool, &state, hamiltonian, energy, cfg.parabolic.delta_x_grad, &counter)?
            }
        };
        if sel.stalled {
            trailing = counter.get() - before;
            break RunStatus::Stalled;
        }
        if let Some(e_sel) = sel.energy {
            if energy - e_sel < cfg.conv_threshold {
                trailing = counter.get() - before;
                break RunStatus::Converged;
            }
        }

        let chosen = pool[sel.index].clone();
        ansatz.push(chosen.clone());
        thetas.push(sel.theta);
        // the new parameter's starting energy is already known
        let f_start = sel.energy.unwrap_or(energy);

        let objective = FnObjective::new(thetas.len(), |x: &[f64]| {
            counted_expectation(hamiltonian, &prepare_state(&reference, &ansatz, x)?, &counter)
        });
        let mut refinements = sel.refinements;
        let (new_thetas, new_energy, opt_evals) = match cfg.optimizer {
            OptimizerKind::Parabolic => {
                let step = parabolic_nd(&objective, &thetas, f_start, &cfg.parabolic)?;
                refinements += step.refinements;
                (step.x, step.value, step.evals)
            }
            OptimizerKind::NelderMead => {
                let opts = NelderMeadOptions {
                    max_evals: cfg.nm_evals_per_param * (thetas.len() + 1),
                    ..NelderMeadOptions::default()
                };
                let res = nelder_mead(&objective, &thetas, Some(f_start), &opts)?;
                debug_assert!(res.status == NelderMeadStatus::Converged || res.evals == opts.max_evals);
                // the simplex may end above its starting vertex only through
                // float noise; keep the known point in that case
                if res.value <= f_start {
                    (res.x, res.value, res.evals)
                } else {
                    (thetas.clone(), f_start, res.evals)
                }
            }
        };
        thetas = new_thetas;
        state = prepare_state(&reference, &ansatz, &thetas)?;
        cnots += u64::from(chosen.cnot_cost());
        let improvement = energy - new_energy;
        energy = new_energy;
        entries.push(IterationEntry {
            iteration: ansatz.len(),
            excitation: Some(chosen),
            theta_at_selection: sel.theta,
            energy,
            error: error(energy),
            selection_experiments: sel.evals as u64,
            optimizer_experiments: opt_evals as u64,
            refinements,
            cum_experiments: counter.get(),
            cum_cnots: cnots,
        });
        if improvement < cfg.conv_threshold {
            break RunStatus::Converged;
        }
    };

    Ok(RunRecord {
        entries,
        ansatz: ansatz
            .into_iter()
            .zip(thetas)
            .map(|(excitation, theta)| AnsatzElement { excitation, theta })
            .collect(),
        status,
        trailing_experiments: trailing,
    })
}
