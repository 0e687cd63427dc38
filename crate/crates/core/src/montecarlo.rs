//! Randomized constellation study: draw scenarios, run the three solvers
//! per velocity weight, and record the CRLB improvement ratios and
//! cluster labels.
//!
//! Reproducibility contract: each trial derives its own RNG stream from
//! the master seed and the trial index, so the record list is identical
//! for any execution order or worker count.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::design::{budget_from_noise_model, DesignBounds, DesignVector};
use crate::error::{Error, Result};
use crate::fisher::{
    crlb, decompose, fim, pair_jacobians, FisherDecomposition, WeightMatrix,
};
use crate::geometry::{PlatformState, Scenario};
use crate::optimizer::{
    classify_cluster, solve_local, solve_pso, solve_vertex, ClusterLabel, CrlbProblem,
    LocalConfig, PsoConfig, CLUSTER_TOL,
};
use nalgebra::{Matrix6, Vector3};

/// Maximum consecutive rejections before sampling is declared
/// misconfigured.
const MAX_REJECTIONS: usize = 100;

/// Everything a study needs: constellation sizes, sampling region,
/// noise constant, box bounds, velocity weights, solver settings, seed.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyParams {
    pub trials: usize,
    pub n_t: usize,
    pub n_r: usize,
    /// Surveillance radius R, meters.
    pub radius: f64,
    pub sigma0: f64,
    pub bounds: DesignBounds,
    /// Velocity-block weights `w`; one full solver pass per value.
    pub w_values: Vec<f64>,
    pub seed: u64,
    pub local: LocalConfig,
    pub pso: PsoConfig,
}

impl StudyParams {
    /// Four Txs, six Rxs, R = 6000 m, bounds [1, 100], weights
    /// {0.1, 1, 10}.
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            n_t: 4,
            n_r: 6,
            radius: 6000.0,
            sigma0: 1.0,
            bounds: DesignBounds::default(),
            w_values: alloc::vec![0.1, 1.0, 10.0],
            seed,
            local: LocalConfig::default(),
            pso: PsoConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Invalid("need at least one trial"));
        }
        if self.n_t < 1 || self.n_r < 1 {
            return Err(Error::Invalid("need at least one Tx and one Rx"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Invalid("surveillance radius must be positive"));
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(Error::Invalid("sigma0 must be positive"));
        }
        if self.w_values.is_empty()
            || !self.w_values.iter().all(|&w| w > 0.0 && w.is_finite())
        {
            return Err(Error::Invalid("velocity weights must be positive"));
        }
        Ok(())
    }
}

/// One (trial, w) row of the study output.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRecord {
    pub trial: usize,
    pub w: f64,
    pub f_alpha0: f64,
    pub f_local: f64,
    pub f_opt: f64,
    pub x_local: f64,
    pub y_local: f64,
    pub x_opt: f64,
    pub y_opt: f64,
    pub cluster: ClusterLabel,
    pub alpha_local: DesignVector,
    pub alpha_opt: DesignVector,
    pub evals_local: usize,
    pub evals_vertex: usize,
    pub evals_pso: usize,
}

/// RNG stream of one trial, independent of every other trial.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Swarm seed of one (trial, w) cell.
fn pso_seed(seed: u64, trial: usize, w_index: usize) -> u64 {
    splitmix64(seed ^ splitmix64((trial as u64) << 8 | w_index as u64))
}

fn cylindrical(rng: &mut ChaCha8Rng, rho_range: (f64, f64), z_range: (f64, f64)) -> Vector3<f64> {
    let rho = rng.random_range(rho_range.0..=rho_range.1);
    let phi = rng.random_range(0.0..core::f64::consts::TAU);
    let z = rng.random_range(z_range.0..=z_range.1);
    Vector3::new(rho * libm::cos(phi), rho * libm::sin(phi), z)
}

/// Uniform direction on the unit sphere times a uniform magnitude in
/// [0, 100] m/s.
fn random_velocity(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let sin_theta = libm::sqrt((1.0 - cos_theta * cos_theta).max(0.0));
    let phi = rng.random_range(0.0..core::f64::consts::TAU);
    let magnitude = rng.random_range(0.0..=100.0);
    Vector3::new(
        sin_theta * libm::cos(phi),
        sin_theta * libm::sin(phi),
        cos_theta,
    ) * magnitude
}

/// Draws one constellation: platforms at cylindrical radius in [R/2, R]
/// and height [200, 300] m, target at radius [0, 2R] and height
/// [300, 600] m, all speeds at most 100 m/s. Geometrically degenerate
/// draws are rejected and retried.
pub fn sample_scenario(params: &StudyParams, rng: &mut ChaCha8Rng) -> Result<Scenario> {
    let r = params.radius;
    for _ in 0..MAX_REJECTIONS {
        let platform = |rng: &mut ChaCha8Rng| -> Result<PlatformState> {
            PlatformState::new(
                cylindrical(rng, (r / 2.0, r), (200.0, 300.0)),
                random_velocity(rng),
            )
        };
        let txs: Result<Vec<_>> = (0..params.n_t).map(|_| platform(rng)).collect();
        let rxs: Result<Vec<_>> = (0..params.n_r).map(|_| platform(rng)).collect();
        let target = PlatformState::new(
            cylindrical(rng, (0.0, 2.0 * r), (300.0, 600.0)),
            random_velocity(rng),
        )?;
        if let Ok(scenario) = Scenario::new(txs?, rxs?, target, params.sigma0, r) {
            return Ok(scenario);
        }
    }
    Err(Error::SamplingFailed)
}

/// Position-block and velocity-block trace ratios `(X, Y)` of a CRLB
/// against the reference CRLB at the balanced design.
pub fn improvement_ratios(
    crlb_at_alpha: &Matrix6<f64>,
    crlb_at_alpha0: &Matrix6<f64>,
) -> Result<(f64, f64)> {
    for m in [crlb_at_alpha, crlb_at_alpha0] {
        if !(0..6).all(|k| m[(k, k)] > 0.0 && m[(k, k)].is_finite()) {
            return Err(Error::Invalid("CRLB matrices must be positive definite"));
        }
    }
    let block = |m: &Matrix6<f64>, range: core::ops::Range<usize>| -> f64 {
        range.map(|k| m[(k, k)]).sum()
    };
    let x = block(crlb_at_alpha, 0..3) / block(crlb_at_alpha0, 0..3);
    let y = block(crlb_at_alpha, 3..6) / block(crlb_at_alpha0, 3..6);
    Ok((x, y))
}

/// Draws the trial's scenario (re-drawing until the balanced design has
/// an invertible FIM) and returns its Fisher decomposition.
fn trial_decomposition(
    params: &StudyParams,
    rng: &mut ChaCha8Rng,
    alpha0: &DesignVector,
) -> Result<FisherDecomposition> {
    for _ in 0..MAX_REJECTIONS {
        let scenario = sample_scenario(params, rng)?;
        let jacobians = pair_jacobians(&scenario)?;
        // The objective is linear in sigma0, so the solvers run on the
        // sigma0-free problem; `run_trial` rescales the reported f values.
        // Folding sigma0 back in here would break exact scale invariance:
        // the rounding of `sigma0 * c` perturbs the iterates, and the
        // quasi-Newton recursion amplifies last-ulp differences into
        // different basins of attraction.
        let unit = Scenario::new(
            scenario.txs().to_vec(),
            scenario.rxs().to_vec(),
            *scenario.target(),
            1.0,
            scenario.surveillance_radius(),
        )?;
        let budget = budget_from_noise_model(&unit)?;
        let decomp = decompose(&jacobians, &budget, params.n_t, params.n_r)?;
        if crlb(&fim(&decomp, alpha0)?).is_ok() {
            return Ok(decomp);
        }
    }
    Err(Error::SamplingFailed)
}

/// Runs one trial: one scenario, all weights, all three solvers.
///
/// Deterministic in `(params, trial)` alone, which makes the study
/// embarrassingly parallel.
pub fn run_trial(params: &StudyParams, trial: usize) -> Result<Vec<StudyRecord>> {
    params.validate()?;
    let mut rng = trial_rng(params.seed, trial);
    let alpha0 = DesignVector::balanced(&params.bounds, params.n_t);
    let decomp = trial_decomposition(params, &mut rng, &alpha0)?;

    let crlb_of = |alpha: &DesignVector| -> Result<Matrix6<f64>> {
        crlb(&fim(&decomp, alpha)?)
    };
    let crlb0 = crlb_of(&alpha0)?;

    let mut records = Vec::with_capacity(params.w_values.len());
    for (w_index, &w) in params.w_values.iter().enumerate() {
        let weight = WeightMatrix::position_velocity(w)?;
        let problem = CrlbProblem::new(&decomp, &weight);
        // `decomp` carries unit sigma0; the true objective is sigma0 times
        // the unit one, and the ratios X, Y are sigma0-free.
        let f_alpha0 = params.sigma0 * crate::fisher::objective(&decomp, &weight, &alpha0)?;

        let local = solve_local(&problem, &params.bounds, &alpha0, &params.local)?;
        let vertex = solve_vertex(&problem, &params.bounds)?;
        let pso = solve_pso(
            &problem,
            &params.bounds,
            &params.pso,
            pso_seed(params.seed, trial, w_index),
            &[&alpha0, &local.alpha_star],
        )?;

        let (x_local, y_local) = improvement_ratios(&crlb_of(&local.alpha_star)?, &crlb0)?;
        let (x_opt, y_opt) = improvement_ratios(&crlb_of(&pso.alpha_star)?, &crlb0)?;
        let cluster = classify_cluster(&pso.alpha_star, &params.bounds, CLUSTER_TOL);

        records.push(StudyRecord {
            trial,
            w,
            f_alpha0,
            f_local: params.sigma0 * local.f_value,
            f_opt: params.sigma0 * pso.f_value,
            x_local,
            y_local,
            x_opt,
            y_opt,
            cluster,
            alpha_local: local.alpha_star,
            alpha_opt: pso.alpha_star,
            evals_local: local.evaluations,
            evals_vertex: vertex.evaluations,
            evals_pso: pso.evaluations,
        });
    }
    Ok(records)
}

/// Sequential study over all trials; records are ordered by
/// (trial, weight index).
pub fn run_study(params: &StudyParams) -> Result<Vec<StudyRecord>> {
    params.validate()?;
    let mut records = Vec::with_capacity(params.trials * params.w_values.len());
    for trial in 0..params.trials {
        records.extend(run_trial(params, trial)?);
    }
    Ok(records)
}

/// Empirical CDF: sorted values paired with cumulative fractions `k/n`.
pub fn cdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::Invalid("cdf of an empty sample"));
    }
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Error::Invalid("cdf input must be finite"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len() as f64;
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(k, v)| (v, (k + 1) as f64 / n))
        .collect())
}
