//! Kinematic primitives of an `N_t x N_r` bistatic constellation.
//!
//! A scenario is a snapshot at a single common reference time: known
//! transmitter and receiver states plus the (true) target state. The
//! observables are bistatic ranges `r_k = d_t,i + d_r,j` and bistatic
//! range rates, flattened row-major in the Tx index with
//! `k = (i - 1) N_r + j` (one-based).

use alloc::vec::Vec;
use nalgebra::Vector3;

use crate::error::{Error, PlatformKind, Result};

/// Minimum target-to-platform separation in meters; closer geometries are
/// rejected because range-normalized quantities become ill-conditioned.
pub const MIN_SEPARATION: f64 = 1.0;

/// Position and velocity of one platform (Tx, Rx, or target) in 3-D
/// Cartesian coordinates, meters and meters/second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlatformState {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

impl PlatformState {
    pub fn new(position: Vector3<f64>, velocity: Vector3<f64>) -> Result<Self> {
        if !(position.iter().all(|x| x.is_finite()) && velocity.iter().all(|x| x.is_finite())) {
            return Err(Error::Invalid("platform state must be finite"));
        }
        Ok(Self { position, velocity })
    }

    /// Stationary platform at `position`.
    pub fn fixed(position: Vector3<f64>) -> Result<Self> {
        Self::new(position, Vector3::zeros())
    }
}

/// Full radar constellation: Tx list, Rx list, target state and the
/// constants of the noise model.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    txs: Vec<PlatformState>,
    rxs: Vec<PlatformState>,
    target: PlatformState,
    sigma0: f64,
    surveillance_radius: f64,
}

impl Scenario {
    pub fn new(
        txs: Vec<PlatformState>,
        rxs: Vec<PlatformState>,
        target: PlatformState,
        sigma0: f64,
        surveillance_radius: f64,
    ) -> Result<Self> {
        if txs.is_empty() || rxs.is_empty() {
            return Err(Error::Invalid("need at least one Tx and one Rx"));
        }
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(Error::Invalid("sigma0 must be positive and finite"));
        }
        if !(surveillance_radius > 0.0 && surveillance_radius.is_finite()) {
            return Err(Error::Invalid("surveillance radius must be positive and finite"));
        }
        for (index, tx) in txs.iter().enumerate() {
            if (tx.position - target.position).norm() <= MIN_SEPARATION {
                return Err(Error::SingularGeometry {
                    kind: PlatformKind::Tx,
                    index: index + 1,
                });
            }
        }
        for (index, rx) in rxs.iter().enumerate() {
            if (rx.position - target.position).norm() <= MIN_SEPARATION {
                return Err(Error::SingularGeometry {
                    kind: PlatformKind::Rx,
                    index: index + 1,
                });
            }
        }
        Ok(Self {
            txs,
            rxs,
            target,
            sigma0,
            surveillance_radius,
        })
    }

    pub fn txs(&self) -> &[PlatformState] {
        &self.txs
    }

    pub fn rxs(&self) -> &[PlatformState] {
        &self.rxs
    }

    pub fn target(&self) -> &PlatformState {
        &self.target
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn surveillance_radius(&self) -> f64 {
        self.surveillance_radius
    }

    pub fn n_t(&self) -> usize {
        self.txs.len()
    }

    pub fn n_r(&self) -> usize {
        self.rxs.len()
    }

    pub fn n_pairs(&self) -> usize {
        self.txs.len() * self.rxs.len()
    }
}

/// One-based pair index `k = (i - 1) N_r + j` for Tx `i` and Rx `j`.
pub fn pair_index(i: usize, j: usize, n_t: usize, n_r: usize) -> Result<usize> {
    if i < 1 || i > n_t || j < 1 || j > n_r {
        return Err(Error::IndexOutOfRange { i, j, n_t, n_r });
    }
    Ok((i - 1) * n_r + j)
}

/// Euclidean distance between a platform and the target, meters.
pub fn range(platform_pos: &Vector3<f64>, target_pos: &Vector3<f64>) -> f64 {
    (platform_pos - target_pos).norm()
}

/// Range rate between a platform and the target: projection of the relative
/// velocity onto the line of sight, meters/second. Negative when closing.
pub fn range_rate(platform: &PlatformState, target: &PlatformState) -> Result<f64> {
    let d = range(&platform.position, &target.position);
    if d <= 0.0 {
        return Err(Error::Invalid("zero range in range_rate"));
    }
    Ok((platform.position - target.position).dot(&(platform.velocity - target.velocity)) / d)
}

/// Bistatic ranges and range rates for every Tx-Rx pair, ordered by
/// [`pair_index`].
pub fn bistatic_measurements(scenario: &Scenario) -> Result<(Vec<f64>, Vec<f64>)> {
    let target = scenario.target();
    let mut d_t = Vec::with_capacity(scenario.n_t());
    for (index, tx) in scenario.txs().iter().enumerate() {
        let d = range(&tx.position, &target.position);
        if d <= 0.0 {
            return Err(Error::SingularGeometry {
                kind: PlatformKind::Tx,
                index: index + 1,
            });
        }
        d_t.push((d, range_rate(tx, target)?));
    }
    let mut d_r = Vec::with_capacity(scenario.n_r());
    for (index, rx) in scenario.rxs().iter().enumerate() {
        let d = range(&rx.position, &target.position);
        if d <= 0.0 {
            return Err(Error::SingularGeometry {
                kind: PlatformKind::Rx,
                index: index + 1,
            });
        }
        d_r.push((d, range_rate(rx, target)?));
    }

    let m = scenario.n_pairs();
    let mut r = Vec::with_capacity(m);
    let mut r_dot = Vec::with_capacity(m);
    for &(dt, dt_dot) in &d_t {
        for &(dr, dr_dot) in &d_r {
            r.push(dt + dr);
            r_dot.push(dt_dot + dr_dot);
        }
    }
    Ok((r, r_dot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn state(p: [f64; 3], v: [f64; 3]) -> PlatformState {
        PlatformState::new(Vector3::from(p), Vector3::from(v)).unwrap()
    }

    #[test]
    fn pair_index_grid() {
        assert_eq!(pair_index(1, 1, 4, 6).unwrap(), 1);
        assert_eq!(pair_index(2, 3, 4, 6).unwrap(), 9);
        assert_eq!(pair_index(4, 6, 4, 6).unwrap(), 24);
        assert!(matches!(
            pair_index(5, 1, 4, 6),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            pair_index(1, 0, 4, 6),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn pair_index_bijective() {
        let (n_t, n_r) = (4, 6);
        let mut seen = [false; 24];
        for i in 1..=n_t {
            for j in 1..=n_r {
                let k = pair_index(i, j, n_t, n_r).unwrap();
                assert!(!seen[k - 1]);
                seen[k - 1] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn range_345_triangle() {
        let d = range(&Vector3::new(3000.0, 4000.0, 0.0), &Vector3::zeros());
        assert_relative_eq!(d, 5000.0);
        assert_eq!(range(&Vector3::zeros(), &Vector3::zeros()), 0.0);
    }

    #[test]
    fn range_rate_collinear_approach() {
        let tx = state([100.0, 0.0, 0.0], [-10.0, 0.0, 0.0]);
        let target = state([0.0; 3], [0.0; 3]);
        assert_relative_eq!(range_rate(&tx, &target).unwrap(), -10.0);
    }

    #[test]
    fn range_rate_stationary_is_zero() {
        let tx = state([1234.0, -567.0, 89.0], [0.0; 3]);
        let target = state([10.0, 20.0, 30.0], [0.0; 3]);
        assert_relative_eq!(range_rate(&tx, &target).unwrap(), 0.0);
    }

    #[test]
    fn single_pair_bistatic_sum() {
        let scenario = Scenario::new(
            alloc::vec![state([5000.0, 0.0, 0.0], [0.0; 3])],
            alloc::vec![state([0.0, 5000.0, 0.0], [0.0; 3])],
            state([0.0; 3], [0.0; 3]),
            1.0,
            6000.0,
        )
        .unwrap();
        let (r, r_dot) = bistatic_measurements(&scenario).unwrap();
        assert_relative_eq!(r[0], 10000.0);
        assert_relative_eq!(r_dot[0], 0.0);
    }

    #[test]
    fn monostatic_doubles_range() {
        let pos = [3000.0, 1000.0, 200.0];
        let scenario = Scenario::new(
            alloc::vec![state(pos, [0.0; 3])],
            alloc::vec![state(pos, [0.0; 3])],
            state([0.0; 3], [0.0; 3]),
            1.0,
            6000.0,
        )
        .unwrap();
        let (r, _) = bistatic_measurements(&scenario).unwrap();
        let d = range(&Vector3::from(pos), &Vector3::zeros());
        assert_relative_eq!(r[0], 2.0 * d, max_relative = 1e-14);
    }

    #[test]
    fn coincident_target_rejected() {
        let err = Scenario::new(
            alloc::vec![state([0.0, 0.0, 0.5], [0.0; 3])],
            alloc::vec![state([5000.0, 0.0, 0.0], [0.0; 3])],
            state([0.0; 3], [0.0; 3]),
            1.0,
            6000.0,
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::SingularGeometry {
                kind: PlatformKind::Tx,
                index: 1
            }
        );
    }

    prop_compose! {
        fn arb_state()(p in prop::array::uniform3(-10_000.0..10_000.0f64),
                       v in prop::array::uniform3(-100.0..100.0f64))
                      -> PlatformState {
            state(p, v)
        }
    }

    prop_compose! {
        fn arb_scenario()(txs in prop::collection::vec(arb_state(), 1..5),
                          rxs in prop::collection::vec(arb_state(), 1..7),
                          target in arb_state())
                         -> Option<Scenario> {
            Scenario::new(txs, rxs, target, 1.0, 6000.0).ok()
        }
    }

    proptest! {
        #[test]
        fn range_matches_sum_of_squares(a in prop::array::uniform3(-1e4..1e4f64),
                                        b in prop::array::uniform3(-1e4..1e4f64)) {
            let expected = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
                + (a[2] - b[2]).powi(2)).sqrt();
            prop_assert!((range(&Vector3::from(a), &Vector3::from(b)) - expected).abs()
                <= 1e-9 * expected.max(1.0));
        }

        #[test]
        fn range_rate_matches_central_difference(platform in arb_state(), target in arb_state()) {
            let d0 = range(&platform.position, &target.position);
            prop_assume!(d0 > 10.0);
            let rate = range_rate(&platform, &target).unwrap();
            // March both trajectories by +-h seconds and difference the range.
            let h = 1e-6;
            let d = |t: f64| {
                range(&(platform.position + platform.velocity * t),
                      &(target.position + target.velocity * t))
            };
            // The differenced ranges are ~1e4 m, so the quotient carries
            // ~1e-6 m/s of rounding noise; the floor absorbs it.
            let fd = (d(h) - d(-h)) / (2.0 * h);
            prop_assert!((rate - fd).abs() <= 1e-6 * rate.abs() + 1e-4);
        }

        #[test]
        fn bistatic_invariants(scenario in arb_scenario()) {
            let Some(scenario) = scenario else { return Ok(()); };
            let (r, r_dot) = bistatic_measurements(&scenario).unwrap();
            let target = scenario.target();
            for (i, tx) in scenario.txs().iter().enumerate() {
                for (j, rx) in scenario.rxs().iter().enumerate() {
                    let k = pair_index(i + 1, j + 1, scenario.n_t(), scenario.n_r()).unwrap();
                    // Per-element oracle.
                    let expected = range(&tx.position, &target.position)
                        + range(&rx.position, &target.position);
                    prop_assert!((r[k - 1] - expected).abs() <= 1e-9 * expected);
                    // Triangle inequality against the baseline.
                    let baseline = (tx.position - rx.position).norm();
                    prop_assert!(r[k - 1] >= baseline - 1e-9 * expected);
                    // Rate bound.
                    let bound = (tx.velocity - target.velocity).norm()
                        + (rx.velocity - target.velocity).norm();
                    prop_assert!(r_dot[k - 1].abs() <= bound + 1e-9);
                }
            }
        }

        #[test]
        fn translation_invariance(scenario in arb_scenario(),
                                  shift in prop::array::uniform3(-5e3..5e3f64)) {
            let Some(scenario) = scenario else { return Ok(()); };
            let shift = Vector3::from(shift);
            let moved = |s: &PlatformState| PlatformState {
                position: s.position + shift,
                velocity: s.velocity,
            };
            let shifted = Scenario::new(
                scenario.txs().iter().map(moved).collect(),
                scenario.rxs().iter().map(moved).collect(),
                moved(scenario.target()),
                scenario.sigma0(),
                scenario.surveillance_radius(),
            ).unwrap();
            let (r0, rd0) = bistatic_measurements(&scenario).unwrap();
            let (r1, rd1) = bistatic_measurements(&shifted).unwrap();
            for k in 0..r0.len() {
                prop_assert!((r0[k] - r1[k]).abs() <= 1e-7 * r0[k].max(1.0));
                prop_assert!((rd0[k] - rd1[k]).abs() <= 1e-7 * rd0[k].abs().max(1.0));
            }
        }
    }
}
