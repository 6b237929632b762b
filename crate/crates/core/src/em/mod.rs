//! Electromagnetic and link-budget primitives for collaborative beamforming.
//!
//! Elements are isotropic and perfectly synchronized. Phases are referenced
//! to the array centroid, and link budgets use the centroid-to-receiver
//! distance (far-field approximation).

mod array;
mod geometry;
mod link;

use thiserror::Error;

pub use array::{
    array_factor, generate_baseline_geometry, max_sidelobe_db, pattern_db, steering_phases, ArrayElement,
    BaselineKind, SidelobeScan, VirtualArray, PATTERN_FLOOR_DB,
};
pub(crate) use array::{PatternScanner, ScanGrid};
pub use geometry::{Direction, Vec3};
pub use link::{
    link_rate_bps, path_loss_linear, received_power_w, shannon_rate_bps, snr_linear, wavelength, ChannelParams,
    SPEED_OF_LIGHT,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate array: mainlobe magnitude is zero")]
    DegenerateArray,
    #[error("configuration error: {0}")]
    Config(String),
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_array() -> impl Strategy<Value = (Vec<Vec3>, Vec<f64>, f64, f64)> {
        (1usize..8)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec((-30.0..30.0f64, -30.0..30.0f64, 90.0..110.0f64), n),
                    prop::collection::vec(0.05..1.0f64, n),
                    0.0..std::f64::consts::PI,
                    0.0..std::f64::consts::TAU,
                )
            })
            .prop_map(|(p, w, t, f)| (p.into_iter().map(|(x, y, z)| Vec3::new(x, y, z)).collect(), w, t, f))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn af_bounded_by_weight_sum_and_tight_at_steer(
            (pos, w, t, f) in arb_array(),
            probe_t in 0.0..std::f64::consts::PI,
            probe_f in 0.0..std::f64::consts::TAU,
        ) {
            let steer = Direction::new(t, f).unwrap();
            let arr = VirtualArray::steered(&pos, &w, steer, 900e6).unwrap();
            let total: f64 = w.iter().sum();
            let probe = Direction::new(probe_t, probe_f).unwrap();
            prop_assert!(array_factor(&arr, probe, 900e6).unwrap().norm() <= total * (1.0 + 1e-12));
            prop_assert!((array_factor(&arr, steer, 900e6).unwrap().norm() - total).abs() <= 1e-9 * total);
            prop_assert_eq!(pattern_db(&arr, steer, 900e6).unwrap(), 0.0);
        }

        #[test]
        fn translation_and_weight_scaling_leave_pattern_unchanged(
            (pos, w, t, f) in arb_array(),
            shift in (-500.0..500.0f64, -500.0..500.0f64, -50.0..50.0f64),
            scale in 0.1..1.0f64,
            probe_t in 0.0..std::f64::consts::PI,
            probe_f in 0.0..std::f64::consts::TAU,
        ) {
            let steer = Direction::new(t, f).unwrap();
            let probe = Direction::new(probe_t, probe_f).unwrap();
            let base = VirtualArray::steered(&pos, &w, steer, 900e6).unwrap();
            let moved: Vec<Vec3> = pos.iter().map(|p| *p + Vec3::new(shift.0, shift.1, shift.2)).collect();
            let moved = VirtualArray::steered(&moved, &w, steer, 900e6).unwrap();
            let a = array_factor(&base, probe, 900e6).unwrap();
            let b = array_factor(&moved, probe, 900e6).unwrap();
            prop_assert!((a - b).norm() <= 1e-6 * (1.0 + a.norm()));
            let scaled: Vec<f64> = w.iter().map(|x| x * scale).collect();
            let scaled = VirtualArray::steered(&pos, &scaled, steer, 900e6).unwrap();
            let pa = pattern_db(&base, probe, 900e6).unwrap();
            let pb = pattern_db(&scaled, probe, 900e6).unwrap();
            prop_assert!((pa - pb).abs() <= 1e-6 || (pa <= PATTERN_FLOOR_DB + 1e-6 && pb <= PATTERN_FLOOR_DB + 1e-6));
        }

        #[test]
        fn finer_grid_never_finds_less((pos, w, t, f) in arb_array()) {
            // a 2 deg grid is a subset of the 1 deg grid
            let steer = Direction::new(t, f).unwrap();
            let arr = VirtualArray::steered(&pos, &w, steer, 900e6).unwrap();
            let coarse = max_sidelobe_db(&arr, 900e6, SidelobeScan { grid_deg: 2.0, exclusion_deg: 10.0 });
            let fine = max_sidelobe_db(&arr, 900e6, SidelobeScan { grid_deg: 1.0, exclusion_deg: 10.0 });
            if let (Ok(c), Ok(fi)) = (coarse, fine) {
                prop_assert!(fi >= c - 1e-9);
            }
        }

        #[test]
        fn received_power_follows_distance_power_law(
            (pos, w, t, f) in arb_array(),
            dir_t in 0.2..2.9f64,
            dir_f in 0.0..std::f64::consts::TAU,
            d in 100.0..5000.0f64,
            alpha in 2.0..4.0f64,
        ) {
            let ch = ChannelParams { pathloss_exponent: alpha, ..ChannelParams::RELAY };
            let arr = VirtualArray::steered(&pos, &w, Direction::new(t, f).unwrap(), 900e6).unwrap();
            let u = Direction::new(dir_t, dir_f).unwrap().unit();
            let c = arr.centroid();
            let p1 = received_power_w(&arr, c + u * d, &ch).unwrap();
            let p2 = received_power_w(&arr, c + u * (2.0 * d), &ch).unwrap();
            if p1 > 0.0 {
                prop_assert!(((p2 / p1) / 2f64.powf(-alpha) - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn shannon_strictly_increasing(a in 0.0..1e6f64, delta in 1e-6..1e3f64) {
            prop_assert!(shannon_rate_bps(a + delta, 20e6) > shannon_rate_bps(a, 20e6));
        }
    }

    #[test]
    fn coherent_gain_of_sixteen_uavs() {
        let pos = generate_baseline_geometry(BaselineKind::Raa, 16, 7.0, Vec3::new(0.0, 0.0, 100.0)).unwrap();
        let steer = Direction::from_degrees(91.5, 40.0).unwrap();
        let arr = VirtualArray::steered(&pos, &[1.0; 16], steer, 900e6).unwrap();
        assert!((array_factor(&arr, steer, 900e6).unwrap().norm() - 16.0).abs() < 1e-9);
        let rx = arr.centroid() + steer.unit() * 3000.0;
        let single = VirtualArray::steered(&[arr.centroid()], &[1.0], steer, 900e6).unwrap();
        let ch = ChannelParams::RELAY;
        let ratio = received_power_w(&arr, rx, &ch).unwrap() / received_power_w(&single, rx, &ch).unwrap();
        assert!((ratio - 256.0).abs() < 1e-6, "{ratio}");
        let silent = VirtualArray::steered(&pos, &[0.0; 16], steer, 900e6).unwrap();
        assert_eq!(received_power_w(&silent, rx, &ch).unwrap(), 0.0);
    }
}
