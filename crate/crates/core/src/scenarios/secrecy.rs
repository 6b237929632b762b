use serde::{Deserialize, Serialize};

use super::{Cluster, Eavesdropper, ScenarioError};
use crate::em::{received_power_w, shannon_rate_bps, snr_linear, ChannelParams, EmError, Vec3, VirtualArray};

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653_3;

/// How an eavesdropper's uncertainty disc is probed.
///
/// Sample points lie on `rays` golden-angle rays at absolute radial steps of
/// `radial_step_m`, plus the nominal position. A larger disc or more rays
/// only ever adds points, so the worst case is monotone in both.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UncertaintySampling {
    pub rays: usize,
    pub radial_step_m: f64,
}

impl Default for UncertaintySampling {
    fn default() -> Self {
        Self { rays: 16, radial_step_m: 5.0 }
    }
}

impl UncertaintySampling {
    pub fn validate(&self) -> Result<(), EmError> {
        if self.rays < 1 {
            return Err(EmError::Config("uncertainty sampling needs at least one ray".into()));
        }
        if !(self.radial_step_m > 0.0 && self.radial_step_m.is_finite()) {
            return Err(EmError::Config("radial_step_m must be positive".into()));
        }
        Ok(())
    }

    /// Horizontal sample points in the disc of `radius` around `center`.
    pub fn points(&self, center: Vec3, radius: f64) -> Vec<Vec3> {
        let mut pts = vec![center];
        if radius <= 0.0 {
            return pts;
        }
        let rungs = (radius / self.radial_step_m + 1e-9).floor() as usize;
        for ray in 0..self.rays {
            let (s, c) = (ray as f64 * GOLDEN_ANGLE).sin_cos();
            for j in 1..=rungs {
                let r = j as f64 * self.radial_step_m;
                pts.push(center + Vec3::new(r * c, r * s, 0.0));
            }
        }
        pts
    }
}

/// Highest SNR the array delivers anywhere in the eavesdropper's uncertainty disc.
pub fn worst_case_eve_snr(
    array: &VirtualArray,
    eve: &Eavesdropper,
    channel: &ChannelParams,
    sampling: &UncertaintySampling,
) -> Result<f64, ScenarioError> {
    sampling.validate()?;
    if !(eve.uncertainty_radius_m >= 0.0) {
        return Err(ScenarioError::Config(format!("eavesdropper {} has a negative radius", eve.id)));
    }
    let mut worst: f64 = 0.0;
    for p in sampling.points(eve.position, eve.uncertainty_radius_m) {
        let snr = snr_linear(received_power_w(array, p, channel)?, channel);
        worst = worst.max(snr);
    }
    Ok(worst)
}

/// Worst-case wiretap rate over the uncertainty disc, bit/s.
pub fn worst_case_eve_rate(
    array: &VirtualArray,
    eve: &Eavesdropper,
    channel: &ChannelParams,
    sampling: &UncertaintySampling,
) -> Result<f64, ScenarioError> {
    Ok(shannon_rate_bps(worst_case_eve_snr(array, eve, channel, sampling)?, channel.bandwidth_hz))
}

/// `[R_terminal - max_e R_e]^+` for the selected terminal of a cluster.
pub fn secrecy_rate_relay(
    array: &VirtualArray,
    cluster: &Cluster,
    receiver_idx: usize,
    known_eves: &[Eavesdropper],
    channel: &ChannelParams,
    sampling: &UncertaintySampling,
) -> Result<f64, ScenarioError> {
    let terminal = cluster.terminals.get(receiver_idx).ok_or_else(|| {
        ScenarioError::Config(format!(
            "receiver index {receiver_idx} out of range for cluster {} ({} terminals)",
            cluster.id,
            cluster.terminals.len()
        ))
    })?;
    let legit = snr_linear(received_power_w(array, terminal.position, channel)?, channel);
    let mut eve_max: f64 = 0.0;
    for e in known_eves {
        eve_max = eve_max.max(worst_case_eve_snr(array, e, channel, sampling)?);
    }
    Ok(secrecy_gap(legit, eve_max, channel.bandwidth_hz))
}

/// Rate of colluding eavesdroppers combining their signals: `B·log2(1 + Σ snr)`.
pub fn mrc_combined_rate(snrs: &[f64], bandwidth_hz: f64) -> f64 {
    shannon_rate_bps(snrs.iter().sum(), bandwidth_hz)
}

/// `[R_receiver - R_MRC(known eves)]^+` for one direction of a two-way exchange.
pub fn secrecy_rate_twoway(
    array_tx: &VirtualArray,
    receiver_uav: Vec3,
    known_eves: &[Eavesdropper],
    channel: &ChannelParams,
    sampling: &UncertaintySampling,
) -> Result<f64, ScenarioError> {
    let legit = snr_linear(received_power_w(array_tx, receiver_uav, channel)?, channel);
    let snrs = known_eves
        .iter()
        .map(|e| worst_case_eve_snr(array_tx, e, channel, sampling))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(secrecy_gap(legit, snrs.iter().sum(), channel.bandwidth_hz))
}

fn secrecy_gap(legit_snr: f64, eve_snr: f64, bandwidth_hz: f64) -> f64 {
    if eve_snr >= legit_snr {
        return 0.0;
    }
    (shannon_rate_bps(legit_snr, bandwidth_hz) - shannon_rate_bps(eve_snr, bandwidth_hz)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::{generate_baseline_geometry, BaselineKind, Direction};
    use crate::scenarios::Terminal;
    use approx::assert_relative_eq;

    fn boresight_array(n: usize) -> (VirtualArray, Direction) {
        let pos = generate_baseline_geometry(BaselineKind::Raa, n, 0.5, Vec3::new(0.0, 0.0, 100.0)).unwrap();
        let steer = Direction::from_vector(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        (VirtualArray::steered(&pos, &vec![1.0; n], steer, 900e6).unwrap(), steer)
    }

    fn eve(id: u32, position: Vec3, radius: f64) -> Eavesdropper {
        Eavesdropper { id, position, known: true, uncertainty_radius_m: radius }
    }

    #[test]
    fn colocated_eavesdropper_cancels_secrecy() {
        let (arr, _) = boresight_array(16);
        let t = Vec3::new(3000.0, 0.0, 100.0);
        let cluster = Cluster { id: 0, terminals: vec![Terminal { id: 0, position: t }] };
        let ch = ChannelParams::RELAY;
        let s = UncertaintySampling::default();
        assert_eq!(secrecy_rate_relay(&arr, &cluster, 0, &[eve(0, t, 0.0)], &ch, &s).unwrap(), 0.0);
        let alone = secrecy_rate_relay(&arr, &cluster, 0, &[], &ch, &s).unwrap();
        let direct = crate::em::link_rate_bps(&arr, t, &ch).unwrap();
        assert_relative_eq!(alone, direct, max_relative = 1e-12);
        assert!(secrecy_rate_relay(&arr, &cluster, 1, &[], &ch, &s).is_err());
    }

    #[test]
    fn boresight_terminal_and_farther_eve() {
        // both on boresight: gains are equal, only path loss differs
        let (arr, _) = boresight_array(16);
        let c = arr.centroid();
        let t = c + Vec3::new(3000.0, 0.0, 0.0);
        let e = c + Vec3::new(6000.0, 0.0, 0.0);
        let ch = ChannelParams::RELAY;
        let cluster = Cluster { id: 0, terminals: vec![Terminal { id: 0, position: t }] };
        let s = UncertaintySampling::default();
        let got = secrecy_rate_relay(&arr, &cluster, 0, &[eve(1, e, 0.0)], &ch, &s).unwrap();
        let lam = crate::em::SPEED_OF_LIGHT / 900e6;
        let snr = |d: f64| {
            let loss = (4.0 * std::f64::consts::PI / lam).powi(2) * d.powf(2.7);
            0.1 * 256.0 / loss / ch.noise_power_w()
        };
        let expected = 20e6 * ((1.0 + snr(3000.0)).log2() - (1.0 + snr(6000.0)).log2());
        assert!(got > 0.0);
        assert_relative_eq!(got, expected, max_relative = 1e-9);
    }

    #[test]
    fn mrc_rate_examples() {
        assert_eq!(mrc_combined_rate(&[], 20e6), 0.0);
        assert_relative_eq!(mrc_combined_rate(&[1.0, 3.0], 1.0), 5f64.log2(), epsilon = 1e-12);
        assert_relative_eq!(mrc_combined_rate(&[2.5], 20e6), shannon_rate_bps(2.5, 20e6), epsilon = 1e-9);
    }

    #[test]
    fn twoway_secrecy_cases() {
        let (arr, _) = boresight_array(4);
        let c = arr.centroid();
        let rx = c + Vec3::new(3000.0, 0.0, 0.0);
        let ch = ChannelParams::TWO_WAY;
        let s = UncertaintySampling::default();
        let alone = secrecy_rate_twoway(&arr, rx, &[], &ch, &s).unwrap();
        assert_relative_eq!(alone, crate::em::link_rate_bps(&arr, rx, &ch).unwrap(), max_relative = 1e-12);
        assert_eq!(secrecy_rate_twoway(&arr, rx, &[eve(0, rx, 0.0)], &ch, &s).unwrap(), 0.0);
        // two boresight eves at sqrt(2)·d each get half the receiver SNR under alpha = 2
        let far = c + Vec3::new(3000.0 * 2f64.sqrt(), 0.0, 0.0);
        let pair = [eve(1, far, 0.0), eve(2, far, 0.0)];
        let sec = secrecy_rate_twoway(&arr, rx, &pair, &ch, &s).unwrap();
        assert!(sec.abs() < 1e-6 * alone, "{sec}");
    }

    #[test]
    fn sampling_points_are_nested() {
        let s = UncertaintySampling { rays: 8, radial_step_m: 5.0 };
        let center = Vec3::new(10.0, 20.0, 0.0);
        assert_eq!(s.points(center, 0.0), vec![center]);
        assert_eq!(s.points(center, 4.9), vec![center]);
        let small = s.points(center, 12.0);
        let big = s.points(center, 30.0);
        assert_eq!(small.len(), 1 + 8 * 2);
        assert!(small.iter().all(|p| big.contains(p)));
        assert!(big.iter().all(|p| p.distance(center) <= 30.0 + 1e-9));
        let finer = UncertaintySampling { rays: 64, ..s }.points(center, 30.0);
        assert!(big.iter().all(|p| finer.contains(p)));
        assert!(UncertaintySampling { rays: 0, radial_step_m: 1.0 }.validate().is_err());
    }

    #[test]
    fn worst_case_dominates_point_rate() {
        let (arr, steer) = boresight_array(16);
        let c = arr.centroid();
        // park the eve at a pattern null-ish off-axis point and widen the disc
        let off = Direction::from_degrees(steer.theta().to_degrees(), 20.0).unwrap();
        let p = c + off.unit() * 4000.0;
        let ch = ChannelParams::RELAY;
        let s = UncertaintySampling::default();
        let point = worst_case_eve_rate(&arr, &eve(0, p, 0.0), &ch, &s).unwrap();
        assert_relative_eq!(point, crate::em::link_rate_bps(&arr, p, &ch).unwrap(), max_relative = 1e-12);
        let disc = worst_case_eve_rate(&arr, &eve(0, p, 80.0), &ch, &s).unwrap();
        assert!(disc >= point);
        let coarse = UncertaintySampling { rays: 8, radial_step_m: 5.0 };
        let fine = UncertaintySampling { rays: 1024, radial_step_m: 5.0 };
        let a = worst_case_eve_rate(&arr, &eve(0, p, 80.0), &ch, &coarse).unwrap();
        let b = worst_case_eve_rate(&arr, &eve(0, p, 80.0), &ch, &fine).unwrap();
        assert!(a <= b);
    }
}
