//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 unreadable or malformed input,
//! 3 numerical failure.

pub mod hamfile;
pub mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::adapt::{run_adapt, AdaptConfig, OptimizerKind, RunRecord, SelectorKind};
use crate::error::Error;
use crate::exact::{exact_ground_energy, EXACT_MAX_QUBITS};
use crate::pauli::PauliSum;
use crate::pools::{build_pool, PoolKind};
use crate::state::circuits::verify_all;

pub use hamfile::HamiltonianFile;
pub use output::{format_energy, write_run_csv, BenchCell, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Error threshold at which bench summaries read off experiment and CNOT counts.
pub const BENCH_ERROR_THRESHOLD: f64 = 1e-6;
/// Angles probed by `verify-circuits`.
pub const VERIFY_ANGLES: usize = 20;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, err: impl std::fmt::Display) -> Self {
        Self {
            code,
            message: err.to_string(),
        }
    }

    fn input(path: &Path, err: Error) -> Self {
        Self::new(EXIT_INPUT, format!("{}: {err}", path.display()))
    }

    fn numerical(err: Error) -> Self {
        let code = match err {
            Error::InvalidConfig(_) | Error::UnknownName { .. } => EXIT_USAGE,
            Error::Io(_) => EXIT_INPUT,
            _ => EXIT_NUMERICAL,
        };
        Self::new(code, err)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "parabolic-vqe", version, about = "Adaptive VQE statevector simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one adaptive VQE and write its convergence CSV.
    Run {
        #[arg(long)]
        hamiltonian: PathBuf,
        /// uccsd, qubit-adapt or qubit-excitation
        #[arg(long)]
        pool: PoolKind,
        /// parabolic or nelder-mead
        #[arg(long)]
        optimizer: OptimizerKind,
        /// energy or gradient
        #[arg(long, default_value = "energy")]
        selector: SelectorKind,
        #[arg(long, default_value_t = 1e-9)]
        conv_threshold: f64,
        #[arg(long, default_value_t = 50)]
        max_iterations: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the exact ground energy in the file's particle sector.
    Exact {
        #[arg(long)]
        hamiltonian: PathBuf,
    },
    /// Check the excitation rotations against their exponentials and gate circuits.
    VerifyCircuits,
    /// Run every pool and optimizer on each fixture with the energy selector.
    Bench {
        #[arg(long)]
        fixtures: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fixture file stems to run (default: every *.json in the directory).
        #[arg(long, value_delimiter = ',')]
        molecules: Option<Vec<String>>,
        #[arg(long, default_value_t = 1e-9)]
        conv_threshold: f64,
        #[arg(long, default_value_t = 50)]
        max_iterations: usize,
    },
}

/// Settings of one `run`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub hamiltonian: PathBuf,
    pub pool: PoolKind,
    pub optimizer: OptimizerKind,
    pub selector: SelectorKind,
    pub conv_threshold: f64,
    pub max_iterations: usize,
    pub out: PathBuf,
}

/// A loaded Hamiltonian file with its canonical operator.
pub struct Problem {
    pub file: HamiltonianFile,
    pub hamiltonian: PauliSum,
}

impl Problem {
    pub fn load(path: &Path) -> CliResult<Self> {
        let file = HamiltonianFile::load(path).map_err(|e| CliError::input(path, e))?;
        let hamiltonian = file.to_pauli_sum().map_err(|e| CliError::input(path, e))?;
        Ok(Self { file, hamiltonian })
    }

    /// Exact sector ground energy when the register is small enough for the
    /// oracle, the file's `fci_energy` otherwise.
    pub fn reference_energy(&self) -> CliResult<Option<f64>> {
        if self.hamiltonian.n_qubits() <= EXACT_MAX_QUBITS {
            let spectrum =
                exact_ground_energy(&self.hamiltonian, Some(self.file.n_electrons)).map_err(CliError::numerical)?;
            Ok(Some(spectrum.ground_energy))
        } else {
            Ok(self.file.fci_energy)
        }
    }

    pub fn run(&self, pool: PoolKind, cfg: &AdaptConfig) -> CliResult<RunRecord> {
        let excitations = build_pool(pool, self.file.n_qubits, self.file.n_electrons).map_err(CliError::numerical)?;
        run_adapt(&self.hamiltonian, self.file.n_electrons, &excitations, cfg).map_err(CliError::numerical)
    }
}

fn write_csv_file(path: &Path, record: &RunRecord) -> CliResult<()> {
    let mut buf = Vec::new();
    write_run_csv(&mut buf, record).map_err(|e| CliError::new(EXIT_INPUT, e))?;
    fs::write(path, buf).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

pub fn cmd_run(cfg: &RunConfig) -> CliResult<RunRecord> {
    let problem = Problem::load(&cfg.hamiltonian)?;
    let adapt = AdaptConfig {
        optimizer: cfg.optimizer,
        selector: cfg.selector,
        conv_threshold: cfg.conv_threshold,
        max_iterations: cfg.max_iterations,
        exact_energy: problem.reference_energy()?,
        ..AdaptConfig::default()
    };
    adapt.validate().map_err(CliError::numerical)?;
    let record = problem.run(cfg.pool, &adapt)?;
    write_csv_file(&cfg.out, &record)?;
    Ok(record)
}

pub fn cmd_exact(path: &Path) -> CliResult<f64> {
    let problem = Problem::load(path)?;
    let spectrum =
        exact_ground_energy(&problem.hamiltonian, Some(problem.file.n_electrons)).map_err(CliError::numerical)?;
    Ok(spectrum.ground_energy)
}

/// Runs the pool × optimizer grid on each molecule; a failing cell is
/// recorded and the others still run.
pub fn cmd_bench(
    fixtures: &Path,
    out: &Path,
    molecules: Option<&[String]>,
    conv_threshold: f64,
    max_iterations: usize,
) -> CliResult<Vec<BenchCell>> {
    let stems: Vec<String> = match molecules {
        Some(list) => list.to_vec(),
        None => {
            let mut stems: Vec<String> = fs::read_dir(fixtures)
                .map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", fixtures.display())))?
                .filter_map(|entry| {
                    let path = entry.ok()?.path();
                    (path.extension()? == "json").then(|| path.file_stem()?.to_str().map(String::from))?
                })
                .collect();
            stems.sort();
            stems
        }
    };
    fs::create_dir_all(out).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", out.display())))?;

    let mut jobs = Vec::new();
    for stem in &stems {
        for pool in PoolKind::ALL {
            for optimizer in OptimizerKind::ALL {
                jobs.push((stem.clone(), pool, optimizer));
            }
        }
    }
    let cells = jobs
        .into_par_iter()
        .map(|(stem, pool, optimizer)| {
            let csv = out.join(format!("{stem}_{pool}_{optimizer}.csv"));
            let outcome = (|| {
                let problem = Problem::load(&fixtures.join(format!("{stem}.json")))?;
                let cfg = AdaptConfig {
                    optimizer,
                    selector: SelectorKind::Energy,
                    conv_threshold,
                    max_iterations,
                    exact_energy: problem.reference_energy()?,
                    ..AdaptConfig::default()
                };
                let record = problem.run(pool, &cfg)?;
                write_csv_file(&csv, &record)?;
                Ok(record)
            })();
            BenchCell {
                molecule: stem,
                pool,
                optimizer,
                outcome: outcome.map_err(|e: CliError| e.message),
            }
        })
        .collect::<Vec<_>>();

    let summary = out.join("summary.csv");
    let mut buf = Vec::new();
    output::write_bench_summary(&mut buf, &cells, BENCH_ERROR_THRESHOLD).map_err(|e| CliError::new(EXIT_INPUT, e))?;
    fs::write(&summary, buf).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", summary.display())))?;
    Ok(cells)
}

fn dispatch(command: Command) -> CliResult<()> {
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    let print =
        |out: &mut io::StdoutLock<'_>, line: String| writeln!(out, "{line}").map_err(|e| CliError::new(EXIT_INPUT, e));
    match command {
        Command::Run {
            hamiltonian,
            pool,
            optimizer,
            selector,
            conv_threshold,
            max_iterations,
            out,
        } => {
            let record = cmd_run(&RunConfig {
                hamiltonian,
                pool,
                optimizer,
                selector,
                conv_threshold,
                max_iterations,
                out,
            })?;
            print(&mut stdout, output::run_summary(&record))
        }
        Command::Exact { hamiltonian } => print(&mut stdout, format_energy(cmd_exact(&hamiltonian)?)),
        Command::VerifyCircuits => {
            for check in verify_all(VERIFY_ANGLES).map_err(CliError::numerical)? {
                let verdict = if check.passed { "PASS" } else { "FAIL" };
                print(
                    &mut stdout,
                    format!(
                        "{verdict} {} max_deviation={:.3e} {}",
                        check.name, check.max_deviation, check.detail
                    ),
                )?;
            }
            Ok(())
        }
        Command::Bench {
            fixtures,
            out,
            molecules,
            conv_threshold,
            max_iterations,
        } => {
            let cells = cmd_bench(&fixtures, &out, molecules.as_deref(), conv_threshold, max_iterations)?;
            let mut failed = 0;
            for cell in &cells {
                match &cell.outcome {
                    Ok(record) => print(
                        &mut stdout,
                        format!(
                            "{} {} {}: {}",
                            cell.molecule,
                            cell.pool,
                            cell.optimizer,
                            output::run_summary(record)
                        ),
                    )?,
                    Err(message) => {
                        failed += 1;
                        print(
                            &mut stdout,
                            format!("{} {} {}: failed: {message}", cell.molecule, cell.pool, cell.optimizer),
                        )?;
                    }
                }
            }
            if failed > 0 {
                return Err(CliError::new(
                    EXIT_NUMERICAL,
                    format!("{failed} of {} bench cells failed", cells.len()),
                ));
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}
