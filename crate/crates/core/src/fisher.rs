//! Fisher information of the bistatic measurement set and the weighted
//! CRLB-trace objective.
//!
//! The information matrix for the 6-vector `[position; velocity]` is
//! available through two algebraically equivalent routes:
//!
//! * the direct route `J = G^T diag(var)^-1 G`, where `G` stacks one row
//!   `[rho_k^T, 0^T]` per bistatic range and one row
//!   `[rho_dot_k^T, rho_k^T]` per bistatic range rate, and
//! * the decomposed route `J(alpha) = sum_i (P_i / alpha_i + alpha_i V_i)`,
//!   where `P_i`, `V_i` absorb the per-pair noise budget `c_k` and `alpha_i`
//!   is the i-th transmitter's delay/Doppler accuracy trade-off.
//!
//! Agreement of the two routes is asserted heavily in the tests; the
//! decomposed route is the one the optimizers evaluate.

use alloc::vec::Vec;
use nalgebra::{Matrix6, Vector3, Vector6};

use crate::design::DesignVector;
use crate::error::{Error, PlatformKind, Result};
use crate::geometry::{range, range_rate, Scenario};
use crate::linalg;

/// Gradient rows of one bistatic pair: `rho` is the derivative of the
/// bistatic range w.r.t. target position, `rho_dot` the derivative of the
/// bistatic range rate w.r.t. target position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairJacobian {
    pub rho: Vector3<f64>,
    pub rho_dot: Vector3<f64>,
}

impl PairJacobian {
    /// Row `[rho^T, 0^T]`: sensitivity of the bistatic range.
    pub fn range_row(&self) -> Vector6<f64> {
        stack(&self.rho, &Vector3::zeros())
    }

    /// Row `[rho_dot^T, rho^T]`: sensitivity of the bistatic range rate.
    pub fn rate_row(&self) -> Vector6<f64> {
        stack(&self.rho_dot, &self.rho)
    }
}

fn stack(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector6<f64> {
    Vector6::new(a.x, a.y, a.z, b.x, b.y, b.z)
}

/// Per-transmitter split of the Fisher information:
/// `J(alpha) = sum_i (P_i / alpha_i + alpha_i V_i)`.
///
/// `P_i` carries the range information (zero velocity and cross blocks),
/// `V_i` the range-rate information.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherDecomposition {
    p: Vec<Matrix6<f64>>,
    v: Vec<Matrix6<f64>>,
}

impl FisherDecomposition {
    pub fn n_t(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[Matrix6<f64>] {
        &self.p
    }

    pub fn v(&self) -> &[Matrix6<f64>] {
        &self.v
    }
}

/// Symmetric positive definite 6x6 weight; block form `diag(I3, w I3)` in
/// every experiment, but any SPD matrix is accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    w: Matrix6<f64>,
}

impl WeightMatrix {
    pub fn new(w: Matrix6<f64>) -> Result<Self> {
        if (w - w.transpose()).abs().max() > 1e-12 * w.abs().max().max(1.0) {
            return Err(Error::Invalid("weight matrix must be symmetric"));
        }
        // SPD check doubles as the eigenvalue-positivity check.
        linalg::cholesky(&w).map_err(|_| Error::Invalid("weight matrix must be positive definite"))?;
        Ok(Self { w })
    }

    /// `diag(I3, w I3)`: unit position weight, `w` on the velocity block.
    pub fn position_velocity(w: f64) -> Result<Self> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Invalid("velocity weight must be positive"));
        }
        let mut m = Matrix6::identity();
        for k in 3..6 {
            m[(k, k)] = w;
        }
        Ok(Self { w: m })
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.w
    }
}

/// Per-pair noise budget `c_k`, the invariant scale with
/// `var_BR,k * var_BRR,k = c_k^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBudget {
    c: Vec<f64>,
}

impl NoiseBudget {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() || !c.iter().all(|&x| x > 0.0 && x.is_finite()) {
            return Err(Error::Invalid("noise budget entries must be positive and finite"));
        }
        Ok(Self { c })
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}

/// Gradient rows of every Tx-Rx pair, ordered by pair index.
///
/// For the Tx side, `rho_t = (x0 - x_t) / d_t` and
/// `rho_dot_t = (v0 - v_t - d_dot_t rho_t) / d_t`; the Rx side is the same
/// with `(t, i)` replaced by `(r, j)`, and the pair rows are the sums.
pub fn pair_jacobians(scenario: &Scenario) -> Result<Vec<PairJacobian>> {
    let target = scenario.target();

    let half = |platform: &crate::geometry::PlatformState,
                kind: PlatformKind,
                index: usize|
     -> Result<(Vector3<f64>, Vector3<f64>)> {
        let d = range(&platform.position, &target.position);
        if d <= 0.0 {
            return Err(Error::SingularGeometry { kind, index });
        }
        let d_dot = range_rate(platform, target)?;
        let rho = (target.position - platform.position) / d;
        let rho_dot = (target.velocity - platform.velocity - rho * d_dot) / d;
        Ok((rho, rho_dot))
    };

    let tx_half: Vec<_> = scenario
        .txs()
        .iter()
        .enumerate()
        .map(|(i, tx)| half(tx, PlatformKind::Tx, i + 1))
        .collect::<Result<_>>()?;
    let rx_half: Vec<_> = scenario
        .rxs()
        .iter()
        .enumerate()
        .map(|(j, rx)| half(rx, PlatformKind::Rx, j + 1))
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(scenario.n_pairs());
    for &(rho_t, rho_dot_t) in &tx_half {
        for &(rho_r, rho_dot_r) in &rx_half {
            out.push(PairJacobian {
                rho: rho_t + rho_r,
                rho_dot: rho_dot_t + rho_dot_r,
            });
        }
    }
    Ok(out)
}

/// Builds `P_i = sum_j c_k^-1 [rho_k; 0][rho_k; 0]^T` and
/// `V_i = sum_j c_k^-1 [rho_dot_k; rho_k][rho_dot_k; rho_k]^T`.
pub fn decompose(
    jacobians: &[PairJacobian],
    budget: &NoiseBudget,
    n_t: usize,
    n_r: usize,
) -> Result<FisherDecomposition> {
    let m = n_t * n_r;
    if jacobians.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: jacobians.len(),
        });
    }
    if budget.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: budget.len(),
        });
    }

    let c = budget.values();
    let mut p = Vec::with_capacity(n_t);
    let mut v = Vec::with_capacity(n_t);
    for i in 0..n_t {
        let mut pi = Matrix6::zeros();
        let mut vi = Matrix6::zeros();
        for j in 0..n_r {
            let k = i * n_r + j;
            let weight = 1.0 / c[k];
            let a = jacobians[k].range_row();
            let b = jacobians[k].rate_row();
            pi += a * a.transpose() * weight;
            vi += b * b.transpose() * weight;
        }
        p.push(linalg::symmetrize(&pi));
        v.push(linalg::symmetrize(&vi));
    }
    Ok(FisherDecomposition { p, v })
}

/// The stacked Jacobian `G` of all measurements w.r.t. `[x0; v0]`:
/// one range row per pair followed by one rate row per pair.
pub fn stacked_jacobian(jacobians: &[PairJacobian]) -> Vec<Vector6<f64>> {
    let mut rows = Vec::with_capacity(2 * jacobians.len());
    rows.extend(jacobians.iter().map(PairJacobian::range_row));
    rows.extend(jacobians.iter().map(PairJacobian::rate_row));
    rows
}

/// Fisher information through the direct route `G^T diag(var)^-1 G`.
///
/// `sigma` holds the bistatic-range variances, `sigma_dot` the
/// bistatic-range-rate variances, both ordered by pair index.
pub fn fim_direct(
    jacobians: &[PairJacobian],
    sigma: &[f64],
    sigma_dot: &[f64],
) -> Result<Matrix6<f64>> {
    let m = jacobians.len();
    if sigma.len() != m || sigma_dot.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: sigma.len().min(sigma_dot.len()),
        });
    }
    if !sigma
        .iter()
        .chain(sigma_dot)
        .all(|&s| s > 0.0 && s.is_finite())
    {
        return Err(Error::Invalid("measurement variances must be positive"));
    }

    let rows = stacked_jacobian(jacobians);
    let mut j = Matrix6::zeros();
    for (row, &var) in rows.iter().zip(sigma.iter().chain(sigma_dot)) {
        j += row * row.transpose() / var;
    }
    Ok(linalg::symmetrize(&j))
}

/// Fisher information through the decomposed route
/// `sum_i (P_i / alpha_i + alpha_i V_i)`.
pub fn fim(decomp: &FisherDecomposition, alpha: &DesignVector) -> Result<Matrix6<f64>> {
    if alpha.len() != decomp.n_t() {
        return Err(Error::DimensionMismatch {
            expected: decomp.n_t(),
            got: alpha.len(),
        });
    }
    let mut j = Matrix6::zeros();
    for (i, &a) in alpha.values().iter().enumerate() {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Invalid("design vector entries must be positive"));
        }
        j += decomp.p[i] / a + decomp.v[i] * a;
    }
    Ok(linalg::symmetrize(&j))
}

/// CRLB matrix: inverse of the Fisher information via SPD factorization.
pub fn crlb(fim: &Matrix6<f64>) -> Result<Matrix6<f64>> {
    linalg::spd_inverse(fim)
}

/// Weighted CRLB trace `f(alpha) = tr(W J(alpha)^-1)`.
pub fn objective(
    decomp: &FisherDecomposition,
    weight: &WeightMatrix,
    alpha: &DesignVector,
) -> Result<f64> {
    let inv = crlb(&fim(decomp, alpha)?)?;
    Ok((weight.matrix() * inv).trace())
}

/// Analytic gradient of the weighted CRLB trace:
/// `g_i = tr(-J^-1 W J^-1 (V_i - P_i / alpha_i^2))`.
pub fn gradient(
    decomp: &FisherDecomposition,
    weight: &WeightMatrix,
    alpha: &DesignVector,
) -> Result<Vec<f64>> {
    let inv = crlb(&fim(decomp, alpha)?)?;
    let sensitivity = -(inv * weight.matrix() * inv); // symmetric
    Ok(alpha
        .values()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let dj = decomp.v[i] - decomp.p[i] / (a * a);
            (sensitivity * dj).trace()
        })
        .collect())
}
