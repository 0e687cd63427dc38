//! The accuracy trade-off layer: per-transmitter design vector, bounds,
//! the `alpha -> (var_BR, var_BRR)` mapping, and the surveillance-area
//! noise budget.
//!
//! For a fixed time-bandwidth product the product of the delay and
//! Doppler accuracies of a waveform is invariant; `alpha_i` slides the
//! i-th transmitter along that trade-off, scaling every bistatic-range
//! variance of Tx `i` by `alpha_i` and every range-rate variance by
//! `1 / alpha_i`, so that `var_BR,k * var_BRR,k = c_k^2` stays fixed.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fisher::NoiseBudget;
use crate::geometry::{range, Scenario};

/// Box bounds `[l, u]` common to every design component by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignBounds {
    lower: f64,
    upper: f64,
}

impl DesignBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0 && lower.is_finite() && upper.is_finite() && upper > lower) {
            return Err(Error::Invalid("design bounds require 0 < l < u"));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Geometric midpoint `sqrt(l u)`, the balanced start point.
    pub fn balanced(&self) -> f64 {
        libm::sqrt(self.lower * self.upper)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lower, self.upper)
    }

    pub fn contains(&self, alpha: &DesignVector) -> bool {
        alpha
            .values()
            .iter()
            .all(|&a| a >= self.lower && a <= self.upper)
    }
}

impl Default for DesignBounds {
    /// `[1, 100]`, the bounds used throughout the experiments.
    fn default() -> Self {
        Self {
            lower: 1.0,
            upper: 100.0,
        }
    }
}

/// Per-transmitter trade-off vector `alpha`, strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignVector {
    alpha: Vec<f64>,
}

impl DesignVector {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() || !alpha.iter().all(|&a| a > 0.0 && a.is_finite()) {
            return Err(Error::Invalid("design vector entries must be positive and finite"));
        }
        Ok(Self { alpha })
    }

    /// The balanced vector `sqrt(l u) * 1`.
    pub fn balanced(bounds: &DesignBounds, n_t: usize) -> Self {
        Self {
            alpha: alloc::vec![bounds.balanced(); n_t],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

/// Delay and Doppler accuracy of a waveform from its effective bandwidth,
/// effective duration and energy-to-noise ratio `2E/N0`:
/// `delta_tau = 1 / (B_eff sqrt(2E/N0))`, `delta_f = 1 / (T_eff sqrt(2E/N0))`.
///
/// Illustrates the invariant product; not part of the optimization path.
pub fn accuracy_from_waveform(
    energy_ratio: f64,
    b_eff: f64,
    t_eff: f64,
) -> Result<(f64, f64)> {
    if !(energy_ratio > 0.0 && b_eff > 0.0 && t_eff > 0.0)
        || !(energy_ratio.is_finite() && b_eff.is_finite() && t_eff.is_finite())
    {
        return Err(Error::Invalid("waveform parameters must be positive and finite"));
    }
    let root = libm::sqrt(energy_ratio);
    Ok((1.0 / (b_eff * root), 1.0 / (t_eff * root)))
}

/// Expands `alpha` to the per-pair variances: `var_BR,k = c_k alpha_i`,
/// `var_BRR,k = c_k / alpha_i`, ordered by pair index.
pub fn map_alpha(
    budget: &NoiseBudget,
    alpha: &DesignVector,
    n_t: usize,
    n_r: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if alpha.len() != n_t {
        return Err(Error::DimensionMismatch {
            expected: n_t,
            got: alpha.len(),
        });
    }
    if budget.len() != n_t * n_r {
        return Err(Error::DimensionMismatch {
            expected: n_t * n_r,
            got: budget.len(),
        });
    }
    let c = budget.values();
    let mut sigma = Vec::with_capacity(c.len());
    let mut sigma_dot = Vec::with_capacity(c.len());
    for i in 0..n_t {
        let a = alpha.values()[i];
        for j in 0..n_r {
            let ck = c[i * n_r + j];
            sigma.push(ck * a);
            sigma_dot.push(ck / a);
        }
    }
    Ok((sigma, sigma_dot))
}

/// Surveillance-area noise budget: `c_k = sigma0 d_t,i d_r,j / R^2`.
pub fn budget_from_noise_model(scenario: &Scenario) -> Result<NoiseBudget> {
    let target = scenario.target();
    let r2 = scenario.surveillance_radius() * scenario.surveillance_radius();
    let sigma0 = scenario.sigma0();
    let mut c = Vec::with_capacity(scenario.n_pairs());
    for tx in scenario.txs() {
        let d_t = range(&tx.position, &target.position);
        for rx in scenario.rxs() {
            let d_r = range(&rx.position, &target.position);
            c.push(sigma0 * d_t * d_r / r2);
        }
    }
    NoiseBudget::new(c)
}
