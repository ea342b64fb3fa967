//! Number formatting and CSV emission.

use std::io::{self, Write};

use crate::adapt::{OptimizerKind, RunRecord};
use crate::pools::PoolKind;

pub const CSV_HEADER: &str = "iteration,energy,error,cum_experiments,cum_cnots,excitation";
pub const SUMMARY_HEADER: &str = "molecule,pool,optimizer,status,iterations,final_energy,final_error,\
total_experiments,total_cnots,experiments_at_threshold,cnots_at_threshold";

/// Significant digits of printed energies.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats with [`SIGNIFICANT_DIGITS`] significant digits: positional
/// notation for moderate magnitudes, exponent notation otherwise.
pub fn format_energy(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn write_run_csv<W: Write>(mut w: W, record: &RunRecord) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for e in &record.entries {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            e.iteration,
            format_energy(e.energy),
            e.error.map(format_energy).unwrap_or_default(),
            e.cum_experiments,
            e.cum_cnots,
            e.label()
        )?;
    }
    Ok(())
}

/// One-line description printed after a run.
pub fn run_summary(record: &RunRecord) -> String {
    let last = record.entries.last().expect("reference row");
    let error = last.error.map(format_energy).unwrap_or_else(|| "n/a".to_string());
    format!(
        "status={} iterations={} energy={} error={} experiments={} cnots={}",
        record.status,
        record.iterations(),
        format_energy(last.energy),
        error,
        record.total_experiments(),
        record.total_cnots()
    )
}

/// First logged `(cum_experiments, cum_cnots)` whose error is below `threshold`.
pub fn counts_at_threshold(record: &RunRecord, threshold: f64) -> Option<(u64, u64)> {
    record
        .entries
        .iter()
        .find(|e| e.error.is_some_and(|err| err < threshold))
        .map(|e| (e.cum_experiments, e.cum_cnots))
}

#[derive(Debug)]
pub struct BenchCell {
    pub molecule: String,
    pub pool: PoolKind,
    pub optimizer: OptimizerKind,
    pub outcome: Result<RunRecord, String>,
}

pub fn write_bench_summary<W: Write>(mut w: W, cells: &[BenchCell], threshold: f64) -> io::Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for c in cells {
        match &c.outcome {
            Ok(r) => {
                let last = r.entries.last().expect("reference row");
                let (exp, cnot) = counts_at_threshold(r, threshold)
                    .map(|(e, c)| (e.to_string(), c.to_string()))
                    .unwrap_or_default();
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    c.molecule,
                    c.pool,
                    c.optimizer,
                    r.status,
                    r.iterations(),
                    format_energy(last.energy),
                    last.error.map(format_energy).unwrap_or_default(),
                    r.total_experiments(),
                    r.total_cnots(),
                    exp,
                    cnot
                )?;
            }
            Err(_) => writeln!(w, "{},{},{},failed,,,,,,,", c.molecule, c.pool, c.optimizer)?,
        }
    }
    Ok(())
}
