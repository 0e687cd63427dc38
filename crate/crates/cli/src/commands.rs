//! Single-shot subcommands: `crlb` prints the bound for one design
//! point, `optimize` runs the solvers and prints where the minimum sits.

use nalgebra::Matrix6;
use serde::Serialize;

use mimo_crlb::design::{budget_from_noise_model, DesignBounds, DesignVector};
use mimo_crlb::fisher::{crlb, decompose, fim, objective, pair_jacobians, WeightMatrix};
use mimo_crlb::optimizer::{
    classify_cluster, solve_local, solve_pso, solve_vertex, CrlbProblem, LocalConfig, Method,
    PsoConfig, SolveResult, CLUSTER_TOL,
};
use mimo_crlb::{FisherDecomposition, Scenario};

use crate::error::CliError;
use crate::{scenario, CrlbArgs, MethodArg, OptimizeArgs};

fn bounds_of(pair: (f64, f64)) -> Result<DesignBounds, CliError> {
    Ok(DesignBounds::new(pair.0, pair.1)?)
}

/// Resolves the design vector: explicit values must sit inside the box,
/// otherwise the balanced point is used.
fn alpha_of(
    values: &Option<Vec<f64>>,
    bounds: &DesignBounds,
    n_t: usize,
) -> Result<DesignVector, CliError> {
    match values {
        Some(v) => {
            let alpha = DesignVector::new(v.clone())?;
            if alpha.len() != n_t {
                return Err(CliError::Validation(format!(
                    "alpha has {} components, scenario has {n_t} transmitters",
                    alpha.len()
                )));
            }
            if !bounds.contains(&alpha) {
                return Err(CliError::Validation(format!(
                    "alpha outside bounds [{}, {}]",
                    bounds.lower(),
                    bounds.upper()
                )));
            }
            Ok(alpha)
        }
        None => Ok(DesignVector::balanced(bounds, n_t)),
    }
}

fn decomposition(scenario: &Scenario) -> Result<FisherDecomposition, CliError> {
    let jacobians = pair_jacobians(scenario)?;
    let budget = budget_from_noise_model(scenario)?;
    Ok(decompose(&jacobians, &budget, scenario.n_t(), scenario.n_r())?)
}

fn matrix_rows(m: &Matrix6<f64>) -> Vec<Vec<f64>> {
    (0..6).map(|i| (0..6).map(|j| m[(i, j)]).collect()).collect()
}

#[derive(Serialize)]
struct CrlbReport {
    alpha: Vec<f64>,
    w: f64,
    crlb: Vec<Vec<f64>>,
    position_variance_sum: f64,
    velocity_variance_sum: f64,
    f: f64,
}

pub fn cmd_crlb(args: &CrlbArgs) -> Result<(), CliError> {
    let scenario = scenario::load(&args.scenario, args.sigma0)?;
    let bounds = bounds_of(args.bounds)?;
    let alpha = alpha_of(&args.alpha, &bounds, scenario.n_t())?;
    let weight = WeightMatrix::position_velocity(args.w)?;
    let decomp = decomposition(&scenario)?;
    let bound = crlb(&fim(&decomp, &alpha)?)?;
    let report = CrlbReport {
        alpha: alpha.values().to_vec(),
        w: args.w,
        crlb: matrix_rows(&bound),
        position_variance_sum: (0..3).map(|i| bound[(i, i)]).sum(),
        velocity_variance_sum: (3..6).map(|i| bound[(i, i)]).sum(),
        f: objective(&decomp, &weight, &alpha)?,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serialization"));
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    method: &'static str,
    f: f64,
    alpha: Vec<f64>,
    cluster: &'static str,
    n_at_lower: usize,
    n_at_upper: usize,
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

fn solve_report(result: &SolveResult, bounds: &DesignBounds) -> SolveReport {
    let cluster = classify_cluster(&result.alpha_star, bounds, CLUSTER_TOL);
    let method = match result.method {
        Method::Local => "local",
        Method::Pso => "pso",
        Method::Vertex => "vertex",
    };
    SolveReport {
        method,
        f: result.f_value,
        alpha: result.alpha_star.values().to_vec(),
        cluster: cluster.label.name(),
        n_at_lower: cluster.n_at_lower,
        n_at_upper: cluster.n_at_upper,
        iterations: result.iterations,
        evaluations: result.evaluations,
        converged: result.converged,
    }
}

pub fn cmd_optimize(args: &OptimizeArgs) -> Result<(), CliError> {
    let scenario = scenario::load(&args.scenario, args.sigma0)?;
    let bounds = bounds_of(args.bounds)?;
    let alpha0 = alpha_of(&args.alpha, &bounds, scenario.n_t())?;
    let weight = WeightMatrix::position_velocity(args.w)?;
    let decomp = decomposition(&scenario)?;
    let problem = CrlbProblem::new(&decomp, &weight);
    let local_config = LocalConfig::default();
    let pso_config = PsoConfig::default();

    let results = match args.method {
        MethodArg::Local => vec![solve_local(&problem, &bounds, &alpha0, &local_config)?],
        MethodArg::Vertex => vec![solve_vertex(&problem, &bounds)?],
        MethodArg::Pso => vec![solve_pso(&problem, &bounds, &pso_config, args.seed, &[&alpha0])?],
        MethodArg::All => {
            let local = solve_local(&problem, &bounds, &alpha0, &local_config)?;
            let vertex = solve_vertex(&problem, &bounds)?;
            let pso = solve_pso(
                &problem,
                &bounds,
                &pso_config,
                args.seed,
                &[&alpha0, &local.alpha_star],
            )?;
            let mut all = vec![local, vertex, pso];
            all.sort_by(|a, b| a.f_value.partial_cmp(&b.f_value).expect("finite objectives"));
            all
        }
    };

    let reports: Vec<SolveReport> = results.iter().map(|r| solve_report(r, &bounds)).collect();
    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(&reports)
    };
    println!("{}", json.expect("report serialization"));
    Ok(())
}
