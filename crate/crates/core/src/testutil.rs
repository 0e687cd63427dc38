//! Shared helpers for unit and integration tests.

use nalgebra::Vector3;
use rand::Rng;

use crate::geometry::{PlatformState, Scenario};

pub fn state(p: [f64; 3], v: [f64; 3]) -> PlatformState {
    PlatformState::new(Vector3::from(p), Vector3::from(v)).unwrap()
}

fn rand_state<R: Rng>(rng: &mut R) -> PlatformState {
    state(
        [
            rng.random_range(-9000.0..9000.0),
            rng.random_range(-9000.0..9000.0),
            rng.random_range(200.0..600.0),
        ],
        [
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        ],
    )
}

/// A well-separated random constellation for exercising the numerical paths.
pub fn random_scenario<R: Rng>(rng: &mut R, n_t: usize, n_r: usize) -> Scenario {
    let txs = (0..n_t).map(|_| rand_state(rng)).collect();
    let rxs = (0..n_r).map(|_| rand_state(rng)).collect();
    let target = state(
        [
            rng.random_range(-12000.0..12000.0),
            rng.random_range(-12000.0..12000.0),
            rng.random_range(1000.0..2000.0),
        ],
        [
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        ],
    );
    Scenario::new(txs, rxs, target, 1.0, 6000.0).unwrap()
}
