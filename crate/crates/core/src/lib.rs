//! Joint position/velocity estimation bounds for a distributed MIMO
//! radar, and optimization of each transmitter's delay/Doppler accuracy
//! trade-off.
//!
//! The crate computes the Fisher information and CRLB of a moving
//! target observed through bistatic range and range-rate measurements,
//! then minimizes a weighted CRLB trace over the per-transmitter
//! trade-off box `[l, u]^{N_t}` with three solvers (projected
//! quasi-Newton, particle swarm, vertex enumeration), and wraps the
//! whole pipeline in a reproducible Monte Carlo study.
//!
//! `no_std` compatible (requires `alloc`); all IO lives in the
//! companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod design;
pub mod error;
pub mod fisher;
pub mod geometry;
pub mod linalg;
pub mod montecarlo;
pub mod optimizer;

#[cfg(test)]
pub(crate) mod testutil;

pub use design::{DesignBounds, DesignVector};
pub use error::{Error, Result};
pub use fisher::{FisherDecomposition, NoiseBudget, PairJacobian, WeightMatrix};
pub use geometry::{PlatformState, Scenario};
pub use montecarlo::{StudyParams, StudyRecord};
pub use optimizer::{Cluster, ClusterLabel, Method, SolveResult};
