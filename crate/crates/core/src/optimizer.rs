//! Solvers for minimizing the weighted CRLB trace over the box
//! `[l, u]^{N_t}`: a projected quasi-Newton local search, an exhaustive
//! vertex enumeration, and a particle swarm seeded with all box vertices
//! (so its result never loses to the enumeration or the local search).
//!
//! The problem is non-convex; none of the solvers certify global
//! optimality. Points where the Fisher information is singular are
//! treated as infeasible: infinite fitness for the swarm, rejected steps
//! for the line search.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::design::{DesignBounds, DesignVector};
use crate::error::{Error, Result};
use crate::fisher::{self, FisherDecomposition, WeightMatrix};

/// A box-constrained objective. `value` and `gradient` fail (typically
/// with [`Error::SingularFim`]) at infeasible points.
pub trait BoundedProblem {
    fn dim(&self) -> usize;
    fn value(&self, alpha: &[f64]) -> Result<f64>;
    fn gradient(&self, alpha: &[f64]) -> Result<Vec<f64>>;
}

/// The weighted CRLB trace `f(alpha) = tr(W J(alpha)^-1)` with its
/// analytic gradient.
pub struct CrlbProblem<'a> {
    decomp: &'a FisherDecomposition,
    weight: &'a WeightMatrix,
}

impl<'a> CrlbProblem<'a> {
    pub fn new(decomp: &'a FisherDecomposition, weight: &'a WeightMatrix) -> Self {
        Self { decomp, weight }
    }
}

impl BoundedProblem for CrlbProblem<'_> {
    fn dim(&self) -> usize {
        self.decomp.n_t()
    }

    fn value(&self, alpha: &[f64]) -> Result<f64> {
        let alpha = DesignVector::new(alpha.to_vec())?;
        fisher::objective(self.decomp, self.weight, &alpha)
    }

    fn gradient(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        let alpha = DesignVector::new(alpha.to_vec())?;
        fisher::gradient(self.decomp, self.weight, &alpha)
    }
}

/// Which solver produced a [`SolveResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Local,
    Pso,
    Vertex,
}

/// Outcome of one solver run. `alpha_star` is always inside the box and
/// `f_value` is the objective evaluated there.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub alpha_star: DesignVector,
    pub f_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub method: Method,
}

/// Settings of the projected quasi-Newton search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalConfig {
    /// Stop when the projected-gradient infinity norm, measured with the
    /// gradient normalized by its magnitude at the start point, drops
    /// below this. The normalization makes the stopping point invariant
    /// to a uniform rescaling of the objective.
    pub kkt_tol: f64,
    pub max_iterations: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo_c1: f64,
}

impl Default for LocalConfig {
    fn default() -> Self {
        Self {
            kkt_tol: 1e-8,
            max_iterations: 200,
            armijo_c1: 1e-4,
        }
    }
}

/// Particle swarm settings. Constriction-style coefficients; the swarm
/// moves in `log(alpha)` space, where the `1/alpha` and `alpha` terms of
/// the objective are symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoConfig {
    pub particles: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity clamp as a fraction of the (log-space) box width.
    pub velocity_clamp: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            particles: 64,
            iterations: 300,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            velocity_clamp: 0.5,
        }
    }
}

/// Vertex-proximity tolerance used by [`classify_cluster`], relative to
/// the box width.
pub const CLUSTER_TOL: f64 = 1e-3;

/// Cluster taxonomy of a solution: C1..C5 are the vertex classes ordered
/// by how many components sit at the lower bound, C6 is everything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cluster {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
}

impl Cluster {
    pub const ALL: [Cluster; 6] = [
        Cluster::C1,
        Cluster::C2,
        Cluster::C3,
        Cluster::C4,
        Cluster::C5,
        Cluster::C6,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Cluster::C1 => "C1",
            Cluster::C2 => "C2",
            Cluster::C3 => "C3",
            Cluster::C4 => "C4",
            Cluster::C5 => "C5",
            Cluster::C6 => "C6",
        }
    }
}

impl core::fmt::Display for Cluster {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Cluster label of a design vector plus the bound-contact counts it was
/// derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterLabel {
    pub label: Cluster,
    pub n_at_upper: usize,
    pub n_at_lower: usize,
}

/// Classifies `alpha` into C1..C6. A component counts as "at a bound"
/// when within `tol * (u - l)` of it.
pub fn classify_cluster(alpha: &DesignVector, bounds: &DesignBounds, tol: f64) -> ClusterLabel {
    let slack = tol * bounds.width();
    let mut n_at_lower = 0;
    let mut n_at_upper = 0;
    let mut interior = false;
    for &a in alpha.values() {
        if (a - bounds.lower()).abs() <= slack {
            n_at_lower += 1;
        } else if (a - bounds.upper()).abs() <= slack {
            n_at_upper += 1;
        } else {
            interior = true;
        }
    }
    let n = alpha.len();
    let label = if interior {
        Cluster::C6
    } else if n_at_lower == 0 {
        Cluster::C1
    } else if n_at_lower == n {
        Cluster::C5
    } else {
        match n_at_lower {
            1 => Cluster::C2,
            2 => Cluster::C3,
            _ => Cluster::C4,
        }
    };
    ClusterLabel {
        label,
        n_at_upper,
        n_at_lower,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Dense symmetric inverse-Hessian approximation for the BFGS recursion.
struct InverseHessian {
    n: usize,
    h: Vec<f64>,
}

impl InverseHessian {
    /// `gamma I`. Seeding with `1 / |g0|` makes the first step, and with
    /// it the whole search path, invariant to a uniform rescaling of the
    /// objective.
    fn scaled_identity(n: usize, gamma: f64) -> Self {
        let mut h = alloc::vec![0.0; n * n];
        for i in 0..n {
            h[i * n + i] = gamma;
        }
        Self { n, h }
    }

    fn reset(&mut self, gamma: f64) {
        let n = self.n;
        for (idx, v) in self.h.iter_mut().enumerate() {
            *v = if idx % (n + 1) == 0 { gamma } else { 0.0 };
        }
    }

    fn apply_neg(&self, g: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| -(0..n).map(|j| self.h[i * n + j] * g[j]).sum::<f64>())
            .collect()
    }

    /// `H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T`.
    fn update(&mut self, s: &[f64], y: &[f64]) {
        let n = self.n;
        let rho = 1.0 / dot(s, y);
        let hy: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| self.h[i * n + j] * y[j]).sum())
            .collect();
        let yhy = dot(y, &hy);
        for i in 0..n {
            for j in 0..n {
                self.h[i * n + j] += -rho * (s[i] * hy[j] + hy[i] * s[j])
                    + rho * rho * yhy * s[i] * s[j]
                    + rho * s[i] * s[j];
            }
        }
    }
}

fn project(x: &[f64], bounds: &DesignBounds) -> Vec<f64> {
    x.iter().map(|&v| bounds.clamp(v)).collect()
}

fn projected_gradient_norm(x: &[f64], g: &[f64], bounds: &DesignBounds, scale: f64) -> f64 {
    x.iter()
        .zip(g)
        .map(|(&xi, &gi)| (bounds.clamp(xi - gi * scale) - xi).abs())
        .fold(0.0, f64::max)
}

/// Projected quasi-Newton descent from `alpha0`, with BFGS curvature and
/// a backtracking Armijo line search along the projected path.
///
/// Monotone by construction: the result never exceeds `f(alpha0)`.
/// A singular FIM at `alpha0` is [`Error::Unsolvable`]; mid-search
/// singularities only shorten the step.
pub fn solve_local<P: BoundedProblem>(
    problem: &P,
    bounds: &DesignBounds,
    alpha0: &DesignVector,
    config: &LocalConfig,
) -> Result<SolveResult> {
    let n = problem.dim();
    if alpha0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: alpha0.len(),
        });
    }
    if !bounds.contains(alpha0) {
        return Err(Error::Invalid("start point outside bounds"));
    }

    let mut x = project(alpha0.values(), bounds);
    let mut evaluations = 1usize;
    let mut f = problem.value(&x).map_err(|_| Error::Unsolvable)?;
    let mut g = problem.gradient(&x).map_err(|_| Error::Unsolvable)?;

    let gradient_scale = norm(&g).max(f64::MIN_POSITIVE);
    let kkt_scale = 1.0 / gradient_scale;
    let mut hessian = InverseHessian::scaled_identity(n, 1.0 / gradient_scale);
    let mut scaled_by_curvature = false;
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..config.max_iterations {
        if projected_gradient_norm(&x, &g, bounds, kkt_scale) <= config.kkt_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut direction = hessian.apply_neg(&g);
        if dot(&direction, &g) >= 0.0 {
            let gamma = 1.0 / norm(&g).max(f64::MIN_POSITIVE);
            hessian.reset(gamma);
            scaled_by_curvature = false;
            direction = g.iter().map(|&v| -gamma * v).collect();
        }

        let mut accepted: Option<(Vec<f64>, f64)> = None;
        let mut step = 1.0;
        while step >= 1e-16 {
            let candidate: Vec<f64> = x
                .iter()
                .zip(&direction)
                .map(|(&xi, &di)| bounds.clamp(xi + step * di))
                .collect();
            let displacement: Vec<f64> =
                candidate.iter().zip(&x).map(|(c, xi)| c - xi).collect();
            if norm(&displacement) == 0.0 {
                break;
            }
            evaluations += 1;
            if let Ok(f_new) = problem.value(&candidate) {
                let predicted = dot(&g, &displacement);
                let sufficient = if predicted < 0.0 {
                    f_new <= f + config.armijo_c1 * predicted
                } else {
                    f_new < f
                };
                if sufficient {
                    accepted = Some((candidate, f_new));
                    break;
                }
            }
            step *= 0.5;
        }

        let Some((x_new, f_new)) = accepted else {
            // No descent along this direction at any step length; the
            // projected-gradient norm is the caller-visible verdict.
            converged = projected_gradient_norm(&x, &g, bounds, kkt_scale) <= config.kkt_tol;
            break;
        };

        let g_new = problem.gradient(&x_new).map_err(|_| Error::Unsolvable)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if !scaled_by_curvature {
                // Standard H0 rescale from the first curvature pair.
                hessian.reset(sy / dot(&y, &y));
                scaled_by_curvature = true;
            }
            hessian.update(&s, &y);
        }
        x = x_new;
        f = f_new;
        g = g_new;
    }

    if !converged && projected_gradient_norm(&x, &g, bounds, kkt_scale) <= config.kkt_tol {
        converged = true;
    }

    Ok(SolveResult {
        alpha_star: DesignVector::new(x)?,
        f_value: f,
        iterations,
        evaluations,
        converged,
        method: Method::Local,
    })
}

/// Relative tie tolerance for the vertex enumeration: the lowest vertex
/// index wins ties within this band.
const VERTEX_TIE_RTOL: f64 = 1e-12;

fn vertex_alpha(mask: usize, n: usize, bounds: &DesignBounds) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if (mask >> i) & 1 == 1 {
                bounds.upper()
            } else {
                bounds.lower()
            }
        })
        .collect()
}

/// Evaluates the objective at all `2^n` box vertices and returns the
/// minimizer; the only exact solver over the vertex set.
pub fn solve_vertex<P: BoundedProblem>(problem: &P, bounds: &DesignBounds) -> Result<SolveResult> {
    let n = problem.dim();
    if n > 20 {
        return Err(Error::Invalid("vertex enumeration limited to 20 transmitters"));
    }
    let total = 1usize << n;
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 0..total {
        let alpha = vertex_alpha(mask, n, bounds);
        let Ok(f) = problem.value(&alpha) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((_, f_best)) => f < f_best - VERTEX_TIE_RTOL * f_best.abs(),
        };
        if better {
            best = Some((alpha, f));
        }
    }
    let (alpha, f) = best.ok_or(Error::Unsolvable)?;
    Ok(SolveResult {
        alpha_star: DesignVector::new(alpha)?,
        f_value: f,
        iterations: 1,
        evaluations: total,
        converged: true,
        method: Method::Vertex,
    })
}

/// Particle swarm over `log(alpha)`, seeded with every box vertex plus
/// the caller-provided hint points (the balanced start and the local
/// solution, in the study). Because the seeds are evaluated exactly, the
/// returned best never loses to the vertex enumeration or to any hint.
/// Deterministic for a fixed seed.
pub fn solve_pso<P: BoundedProblem>(
    problem: &P,
    bounds: &DesignBounds,
    config: &PsoConfig,
    seed: u64,
    hints: &[&DesignVector],
) -> Result<SolveResult> {
    let n = problem.dim();
    if n > 16 {
        return Err(Error::Invalid("particle swarm vertex seeding limited to 16 transmitters"));
    }
    let n_vertices = 1usize << n;
    if config.particles < n_vertices + 2 {
        return Err(Error::Invalid("swarm too small for vertex seeding"));
    }
    for hint in hints {
        if hint.len() != n || !bounds.contains(hint) {
            return Err(Error::Invalid("hint point outside bounds"));
        }
    }

    let z_lo = libm::log(bounds.lower());
    let z_hi = libm::log(bounds.upper());
    let v_max = config.velocity_clamp * (z_hi - z_lo);

    // Positions at exactly z_lo/z_hi map back to the exact bounds, so the
    // vertex seeds are evaluated at the true vertices.
    let alpha_of = |z: &[f64]| -> Vec<f64> {
        z.iter()
            .map(|&zi| {
                if zi <= z_lo {
                    bounds.lower()
                } else if zi >= z_hi {
                    bounds.upper()
                } else {
                    libm::exp(zi)
                }
            })
            .collect()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = 0usize;
    let evaluate = |alpha: &[f64], evaluations: &mut usize| -> f64 {
        *evaluations += 1;
        problem.value(alpha).unwrap_or(f64::INFINITY)
    };

    struct Particle {
        z: Vec<f64>,
        v: Vec<f64>,
        best_z: Vec<f64>,
        best_f: f64,
    }

    let mut particles = Vec::with_capacity(config.particles);
    let mut global_best_alpha: Option<Vec<f64>> = None;
    let mut global_best_f = f64::INFINITY;
    let mut global_best_z = alloc::vec![0.0; n];

    let push_particle = |z: Vec<f64>,
                             particles: &mut Vec<Particle>,
                             rng: &mut ChaCha8Rng,
                             evaluations: &mut usize,
                             global_best_alpha: &mut Option<Vec<f64>>,
                             global_best_f: &mut f64,
                             global_best_z: &mut Vec<f64>| {
        let alpha = alpha_of(&z);
        let f = evaluate(&alpha, evaluations);
        if f < *global_best_f {
            *global_best_f = f;
            *global_best_alpha = Some(alpha);
            *global_best_z = z.clone();
        }
        let v = (0..n).map(|_| rng.random_range(-v_max..v_max)).collect();
        particles.push(Particle {
            best_z: z.clone(),
            best_f: f,
            z,
            v,
        });
    };

    for mask in 0..n_vertices {
        let z = (0..n)
            .map(|i| if (mask >> i) & 1 == 1 { z_hi } else { z_lo })
            .collect();
        push_particle(
            z,
            &mut particles,
            &mut rng,
            &mut evaluations,
            &mut global_best_alpha,
            &mut global_best_f,
            &mut global_best_z,
        );
    }
    for hint in hints {
        let z = hint.values().iter().map(|&a| libm::log(a)).collect();
        push_particle(
            z,
            &mut particles,
            &mut rng,
            &mut evaluations,
            &mut global_best_alpha,
            &mut global_best_f,
            &mut global_best_z,
        );
    }
    while particles.len() < config.particles {
        let z = (0..n).map(|_| rng.random_range(z_lo..z_hi)).collect();
        push_particle(
            z,
            &mut particles,
            &mut rng,
            &mut evaluations,
            &mut global_best_alpha,
            &mut global_best_f,
            &mut global_best_z,
        );
    }

    for _ in 0..config.iterations {
        for particle in &mut particles {
            for i in 0..n {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let v = config.inertia * particle.v[i]
                    + config.cognitive * r1 * (particle.best_z[i] - particle.z[i])
                    + config.social * r2 * (global_best_z[i] - particle.z[i]);
                particle.v[i] = v.clamp(-v_max, v_max);
                let mut z = particle.z[i] + particle.v[i];
                // Reflecting walls.
                if z < z_lo {
                    z = (2.0 * z_lo - z).min(z_hi);
                    particle.v[i] = -particle.v[i];
                } else if z > z_hi {
                    z = (2.0 * z_hi - z).max(z_lo);
                    particle.v[i] = -particle.v[i];
                }
                particle.z[i] = z;
            }
            let alpha = alpha_of(&particle.z);
            let f = evaluate(&alpha, &mut evaluations);
            if f < particle.best_f {
                particle.best_f = f;
                particle.best_z = particle.z.clone();
            }
            if f < global_best_f {
                global_best_f = f;
                global_best_z = particle.z.clone();
                global_best_alpha = Some(alpha);
            }
        }
    }

    let alpha = global_best_alpha.ok_or(Error::Unsolvable)?;
    if !global_best_f.is_finite() {
        return Err(Error::Unsolvable);
    }
    Ok(SolveResult {
        alpha_star: DesignVector::new(alpha)?,
        f_value: global_best_f,
        iterations: config.iterations,
        evaluations,
        converged: true,
        method: Method::Pso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::budget_from_noise_model;
    use crate::fisher::{decompose, pair_jacobians};
    use crate::testutil::random_scenario;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;

    fn crlb_setup(seed: u64, n_t: usize, n_r: usize) -> (FisherDecomposition, WeightMatrix) {
        let mut rng = StdRng::seed_from_u64(seed);
        let scenario = random_scenario(&mut rng, n_t, n_r);
        let jac = pair_jacobians(&scenario).unwrap();
        let budget = budget_from_noise_model(&scenario).unwrap();
        let decomp = decompose(&jac, &budget, n_t, n_r).unwrap();
        let weight = WeightMatrix::position_velocity(1.0).unwrap();
        (decomp, weight)
    }

    /// Separable synthetic objective with a known interior minimum,
    /// used to validate the swarm without the radar pipeline.
    struct Quadratic {
        center: Vec<f64>,
    }

    impl BoundedProblem for Quadratic {
        fn dim(&self) -> usize {
            self.center.len()
        }
        fn value(&self, alpha: &[f64]) -> Result<f64> {
            Ok(alpha
                .iter()
                .zip(&self.center)
                .map(|(a, c)| (a.ln() - c.ln()).powi(2))
                .sum())
        }
        fn gradient(&self, alpha: &[f64]) -> Result<Vec<f64>> {
            Ok(alpha
                .iter()
                .zip(&self.center)
                .map(|(a, c)| 2.0 * (a.ln() - c.ln()) / a)
                .collect())
        }
    }

    #[test]
    fn local_descends_on_random_scenarios() {
        let bounds = DesignBounds::default();
        for seed in 0..20 {
            let (decomp, weight) = crlb_setup(seed, 4, 6);
            let problem = CrlbProblem::new(&decomp, &weight);
            let alpha0 = DesignVector::balanced(&bounds, 4);
            let f0 = problem.value(alpha0.values()).unwrap();
            let result = solve_local(&problem, &bounds, &alpha0, &LocalConfig::default()).unwrap();
            assert!(result.f_value <= f0);
            assert!(bounds.contains(&result.alpha_star));
            assert_relative_eq!(
                result.f_value,
                problem.value(result.alpha_star.values()).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn local_fixed_point_at_kkt() {
        // Start the search at its own answer: it must stay put.
        let bounds = DesignBounds::default();
        let (decomp, weight) = crlb_setup(3, 4, 6);
        let problem = CrlbProblem::new(&decomp, &weight);
        let alpha0 = DesignVector::balanced(&bounds, 4);
        let first = solve_local(&problem, &bounds, &alpha0, &LocalConfig::default()).unwrap();
        let again =
            solve_local(&problem, &bounds, &first.alpha_star, &LocalConfig::default()).unwrap();
        assert!(again.f_value <= first.f_value);
        for (a, b) in again
            .alpha_star
            .values()
            .iter()
            .zip(first.alpha_star.values())
        {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0));
        }
    }

    #[test]
    fn local_matches_golden_section_in_one_dimension() {
        let bounds = DesignBounds::default();
        let mut checked = 0;
        for seed in 0..40 {
            let (decomp, weight) = crlb_setup(100 + seed, 1, 6);
            let problem = CrlbProblem::new(&decomp, &weight);
            let f = |a: f64| problem.value(&[a]).unwrap();

            // Only score scenarios whose 1-D objective is unimodal on the
            // box (golden section assumes no more than one valley).
            let grid: Vec<f64> = (0..400)
                .map(|k| bounds.lower() + bounds.width() * k as f64 / 399.0)
                .collect();
            let vals: Vec<f64> = grid.iter().map(|&a| f(a)).collect();
            let argmin = vals
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            let tol = |v: f64| 1e-10 * v.abs();
            let unimodal = vals[..=argmin]
                .windows(2)
                .all(|w| w[1] <= w[0] + tol(w[0]))
                && vals[argmin..].windows(2).all(|w| w[1] >= w[0] - tol(w[0]));
            if !unimodal {
                continue;
            }
            checked += 1;

            // Golden-section oracle.
            let phi = (5.0f64.sqrt() - 1.0) / 2.0;
            let (mut lo, mut hi) = (bounds.lower(), bounds.upper());
            let mut c = hi - phi * (hi - lo);
            let mut d = lo + phi * (hi - lo);
            let (mut fc, mut fd) = (f(c), f(d));
            while hi - lo > 1e-6 {
                if fc < fd {
                    hi = d;
                    d = c;
                    fd = fc;
                    c = hi - phi * (hi - lo);
                    fc = f(c);
                } else {
                    lo = c;
                    c = d;
                    fc = fd;
                    d = lo + phi * (hi - lo);
                    fd = f(d);
                }
            }
            let oracle = 0.5 * (lo + hi);

            let alpha0 = DesignVector::balanced(&bounds, 1);
            let result = solve_local(&problem, &bounds, &alpha0, &LocalConfig::default()).unwrap();
            assert!(
                (result.alpha_star.values()[0] - oracle).abs() <= 1e-4,
                "seed {seed}: local {} vs oracle {oracle}",
                result.alpha_star.values()[0]
            );
        }
        assert!(checked >= 5, "too few convex 1-D instances: {checked}");
    }

    #[test]
    fn vertex_evaluation_count_and_brute_force() {
        let bounds = DesignBounds::default();
        let (decomp, weight) = crlb_setup(7, 4, 6);
        let problem = CrlbProblem::new(&decomp, &weight);
        let result = solve_vertex(&problem, &bounds).unwrap();
        assert_eq!(result.evaluations, 16);

        // Independent enumeration in the reverse order.
        let mut best = f64::INFINITY;
        let mut best_alpha = vec![];
        for mask in (0..16usize).rev() {
            let alpha: Vec<f64> = (0..4)
                .map(|i| {
                    if (mask >> i) & 1 == 1 {
                        bounds.upper()
                    } else {
                        bounds.lower()
                    }
                })
                .collect();
            let f = problem.value(&alpha).unwrap();
            if f < best {
                best = f;
                best_alpha = alpha;
            }
        }
        assert_relative_eq!(result.f_value, best, max_relative = 1e-12);
        assert_eq!(result.alpha_star.values(), &best_alpha[..]);
    }

    #[test]
    fn vertex_monotone_one_dimension() {
        // f decreasing in alpha: minimum at the upper bound.
        let bounds = DesignBounds::default();
        struct Decreasing;
        impl BoundedProblem for Decreasing {
            fn dim(&self) -> usize {
                1
            }
            fn value(&self, alpha: &[f64]) -> Result<f64> {
                Ok(1.0 / alpha[0])
            }
            fn gradient(&self, alpha: &[f64]) -> Result<Vec<f64>> {
                Ok(vec![-1.0 / (alpha[0] * alpha[0])])
            }
        }
        let result = solve_vertex(&Decreasing, &bounds).unwrap();
        assert_eq!(result.alpha_star.values(), &[100.0]);
        assert_eq!(result.evaluations, 2);
    }

    #[test]
    fn pso_finds_synthetic_interior_minimum() {
        let bounds = DesignBounds::default();
        let problem = Quadratic {
            center: vec![7.0, 23.0, 3.0, 55.0],
        };
        let result = solve_pso(&problem, &bounds, &PsoConfig::default(), 1234, &[]).unwrap();
        for (a, c) in result.alpha_star.values().iter().zip(&problem.center) {
            assert!((a - c).abs() <= 1e-2 * c, "found {a}, expected {c}");
        }
    }

    #[test]
    fn pso_deterministic_for_fixed_seed() {
        let bounds = DesignBounds::default();
        let (decomp, weight) = crlb_setup(11, 4, 6);
        let problem = CrlbProblem::new(&decomp, &weight);
        let alpha0 = DesignVector::balanced(&bounds, 4);
        let a = solve_pso(&problem, &bounds, &PsoConfig::default(), 42, &[&alpha0]).unwrap();
        let b = solve_pso(&problem, &bounds, &PsoConfig::default(), 42, &[&alpha0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pso_dominates_vertex_and_local() {
        let bounds = DesignBounds::default();
        for seed in 0..10 {
            let (decomp, weight) = crlb_setup(500 + seed, 4, 6);
            let problem = CrlbProblem::new(&decomp, &weight);
            let alpha0 = DesignVector::balanced(&bounds, 4);
            let local = solve_local(&problem, &bounds, &alpha0, &LocalConfig::default()).unwrap();
            let vertex = solve_vertex(&problem, &bounds).unwrap();
            let pso = solve_pso(
                &problem,
                &bounds,
                &PsoConfig::default(),
                seed,
                &[&alpha0, &local.alpha_star],
            )
            .unwrap();
            assert!(pso.f_value <= vertex.f_value);
            assert!(pso.f_value <= local.f_value);
        }
    }

    #[test]
    fn pso_rejects_small_swarm() {
        let bounds = DesignBounds::default();
        let problem = Quadratic {
            center: vec![10.0; 4],
        };
        let config = PsoConfig {
            particles: 10, // < 2^4 + 2
            ..PsoConfig::default()
        };
        assert!(solve_pso(&problem, &bounds, &config, 1, &[]).is_err());
    }

    #[test]
    fn cluster_examples() {
        let bounds = DesignBounds::default();
        let classify = |vals: &[f64]| {
            classify_cluster(&DesignVector::new(vals.to_vec()).unwrap(), &bounds, CLUSTER_TOL)
                .label
        };
        assert_eq!(classify(&[100.0, 100.0, 100.0, 100.0]), Cluster::C1);
        assert_eq!(classify(&[1.0, 100.0, 100.0, 100.0]), Cluster::C2);
        assert_eq!(classify(&[1.0, 100.0, 100.0, 1.0]), Cluster::C3);
        assert_eq!(classify(&[1.0, 1.0, 1.0, 100.0]), Cluster::C4);
        assert_eq!(classify(&[1.0, 1.0, 1.0, 1.0]), Cluster::C5);
        assert_eq!(classify(&[50.0, 100.0, 100.0, 100.0]), Cluster::C6);
    }

    #[test]
    fn cluster_permutation_invariant() {
        let bounds = DesignBounds::default();
        let base = [1.0, 1.0, 100.0, 100.0];
        let permutations = [
            [1.0, 100.0, 1.0, 100.0],
            [100.0, 1.0, 100.0, 1.0],
            [100.0, 100.0, 1.0, 1.0],
        ];
        let label = |vals: &[f64]| {
            classify_cluster(&DesignVector::new(vals.to_vec()).unwrap(), &bounds, CLUSTER_TOL)
                .label
        };
        for p in permutations {
            assert_eq!(label(&p), label(&base));
        }
    }

    #[test]
    fn cluster_tolerance_band() {
        let bounds = DesignBounds::default();
        // Within 1e-3 * (u - l) = 0.099 of a bound counts as that bound.
        let near = DesignVector::new(vec![1.05, 99.95, 100.0, 100.0]).unwrap();
        let label = classify_cluster(&near, &bounds, CLUSTER_TOL);
        assert_eq!(label.label, Cluster::C2);
        assert_eq!(label.n_at_lower, 1);
        assert_eq!(label.n_at_upper, 3);
    }
}
