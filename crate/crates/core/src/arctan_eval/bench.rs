use std::io::Write;

use super::{arctan_reciprocal_report, SeriesKernel, SeriesReport};
use crate::error::{Error, Result};
use crate::exact_arith::BigRational;

/// One `(beta, kernel)` cell of a benchmark run.
#[derive(Clone, Debug)]
pub struct BenchEntry {
    pub kernel: SeriesKernel,
    pub beta: BigRational,
    pub precision: u32,
    pub outcome: std::result::Result<SeriesReport, Error>,
}

/// Runs every kernel on every `beta`. Failures (domain, budget) are kept
/// in the entry instead of aborting the run.
pub fn convergence_benchmark(betas: &[BigRational], precision: u32) -> Vec<BenchEntry> {
    let mut out = Vec::with_capacity(betas.len() * SeriesKernel::ALL.len());
    for beta in betas {
        for kernel in SeriesKernel::ALL {
            let outcome = arctan_reciprocal_report(beta, precision, kernel).map(|(_, r)| r);
            out.push(BenchEntry {
                kernel,
                beta: beta.clone(),
                precision,
                outcome,
            });
        }
    }
    out
}

/// CSV with header `kernel,beta,precision,terms_used,certified_error,wall_time_ms`.
///
/// Failed entries leave the numeric columns empty and put the error in
/// `certified_error`. With `timing = false` the wall-time column is left
/// empty so the output is reproducible byte for byte.
pub fn write_reports_csv<W: Write>(entries: &[BenchEntry], out: W, timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "kernel",
        "beta",
        "precision",
        "terms_used",
        "certified_error",
        "wall_time_ms",
    ])
    .map_err(io)?;
    for e in entries {
        let row = match &e.outcome {
            Ok(r) => [
                e.kernel.name().to_string(),
                e.beta.to_string(),
                e.precision.to_string(),
                r.terms_used.to_string(),
                r.certified_error.to_string(),
                if timing {
                    format!("{:.3}", r.wall_time.as_secs_f64() * 1e3)
                } else {
                    String::new()
                },
            ],
            Err(err) => [
                e.kernel.name().to_string(),
                e.beta.to_string(),
                e.precision.to_string(),
                String::new(),
                format!("error: {err}"),
                String::new(),
            ],
        };
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}
