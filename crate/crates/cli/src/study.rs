//! `montecarlo` subcommand: parallel trials via rayon, records CSV plus
//! a CDF companion for the improvement ratios X and Y.
//!
//! The per-trial RNG streams make the record list independent of the
//! worker count, so the CSVs are byte-identical for any `--threads`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use mimo_crlb::design::DesignBounds;
use mimo_crlb::montecarlo::{cdf, run_trial, StudyParams, StudyRecord};

use crate::error::CliError;
use crate::MontecarloArgs;

fn params_of(args: &MontecarloArgs) -> Result<StudyParams, CliError> {
    let mut params = StudyParams::new(args.trials, args.seed);
    params.sigma0 = args.sigma0;
    params.bounds = DesignBounds::new(args.bounds.0, args.bounds.1)?;
    params.w_values = args.w.clone();
    params.validate()?;
    Ok(params)
}

fn run_parallel(params: &StudyParams, threads: usize) -> Result<Vec<StudyRecord>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    let done = AtomicUsize::new(0);
    let total = params.trials;
    let per_trial: Vec<Vec<StudyRecord>> = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|trial| {
                let records = run_trial(params, trial);
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                eprint!("\r{finished}/{total} trials");
                records
            })
            .collect::<Result<_, _>>()
    })?;
    eprintln!();
    Ok(per_trial.into_iter().flatten().collect())
}

fn write_records(path: &Path, records: &[StudyRecord]) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "# schema=1")?;
    writeln!(out, "trial,w,f_alpha0,f_local,f_opt,X_local,Y_local,X_opt,Y_opt,cluster,evals_pso")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.trial,
            r.w,
            r.f_alpha0,
            r.f_local,
            r.f_opt,
            r.x_local,
            r.y_local,
            r.x_opt,
            r.y_opt,
            r.cluster.label,
            r.evals_pso
        )?;
    }
    Ok(())
}

fn cdf_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("study");
    out.with_file_name(format!("{stem}_cdf.csv"))
}

fn write_cdfs(path: &Path, records: &[StudyRecord], w_values: &[f64]) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "# schema=1")?;
    writeln!(out, "w,variable,value,fraction")?;
    for &w in w_values {
        let of = |pick: fn(&StudyRecord) -> f64| -> Vec<f64> {
            records.iter().filter(|r| r.w == w).map(pick).collect()
        };
        for (variable, values) in [("X", of(|r| r.x_opt)), ("Y", of(|r| r.y_opt))] {
            for (value, fraction) in cdf(&values)? {
                writeln!(out, "{w},{variable},{value},{fraction}")?;
            }
        }
    }
    Ok(())
}

pub fn cmd_montecarlo(args: &MontecarloArgs) -> Result<(), CliError> {
    let params = params_of(args)?;
    let records = run_parallel(&params, args.threads)?;
    write_records(&args.out, &records)?;
    write_cdfs(&cdf_path(&args.out), &records, &params.w_values)?;
    Ok(())
}
