use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::array::VirtualArray;
use super::geometry::{Direction, Vec3};
use super::EmError;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Radio link constants shared by every UAV in a scenario.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub carrier_hz: f64,
    pub pathloss_exponent: f64,
    pub noise_density_dbm_hz: f64,
    pub bandwidth_hz: f64,
    pub element_tx_power_w: f64,
}

impl ChannelParams {
    /// 900 MHz relay link: -155 dBm/Hz, exponent 2.7, 20 MHz, 0.1 W per UAV.
    pub const RELAY: ChannelParams = ChannelParams {
        carrier_hz: 900e6,
        pathloss_exponent: 2.7,
        noise_density_dbm_hz: -155.0,
        bandwidth_hz: 20e6,
        element_tx_power_w: 0.1,
    };

    /// 2.4 GHz swarm-to-swarm link with free-space exponent and 0.1 W per UAV.
    /// Noise density and bandwidth reuse the relay values.
    pub const TWO_WAY: ChannelParams = ChannelParams {
        carrier_hz: 2.4e9,
        pathloss_exponent: 2.0,
        noise_density_dbm_hz: -155.0,
        bandwidth_hz: 20e6,
        element_tx_power_w: 0.1,
    };

    pub fn validate(&self) -> Result<(), EmError> {
        let bad = |what: &str| Err(EmError::Domain(what.to_string()));
        if !(self.carrier_hz > 0.0 && self.carrier_hz.is_finite()) {
            return bad("carrier_hz must be positive");
        }
        if !(self.pathloss_exponent >= 2.0 && self.pathloss_exponent.is_finite()) {
            return bad("pathloss_exponent must be at least 2");
        }
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return bad("bandwidth_hz must be positive");
        }
        if !(self.element_tx_power_w > 0.0 && self.element_tx_power_w.is_finite()) {
            return bad("element_tx_power_w must be positive");
        }
        if !self.noise_density_dbm_hz.is_finite() {
            return bad("noise_density_dbm_hz must be finite");
        }
        Ok(())
    }

    /// Thermal noise power over the channel bandwidth, watts.
    pub fn noise_power_w(&self) -> f64 {
        10f64.powf((self.noise_density_dbm_hz - 30.0) / 10.0) * self.bandwidth_hz
    }
}

pub fn wavelength(carrier_hz: f64) -> Result<f64, EmError> {
    if !(carrier_hz > 0.0 && carrier_hz.is_finite()) {
        return Err(EmError::Domain(format!("carrier frequency {carrier_hz} Hz must be positive")));
    }
    Ok(SPEED_OF_LIGHT / carrier_hz)
}

pub(crate) fn wavenumber(carrier_hz: f64) -> Result<f64, EmError> {
    Ok(2.0 * PI / wavelength(carrier_hz)?)
}

/// Log-distance path loss with a 1 m free-space reference: `(4π/λ)² · d^α`.
pub fn path_loss_linear(distance_m: f64, carrier_hz: f64, alpha: f64) -> Result<f64, EmError> {
    if !(distance_m >= 1.0) {
        return Err(EmError::Domain(format!(
            "distance {distance_m} m is inside the 1 m reference distance"
        )));
    }
    let lam = wavelength(carrier_hz)?;
    let reference = (4.0 * PI / lam).powi(2);
    Ok(reference * distance_m.powf(alpha))
}

/// Power delivered to `rx` by the array, using the far-field direction and
/// distance from the array centroid.
pub fn received_power_w(array: &VirtualArray, rx: Vec3, channel: &ChannelParams) -> Result<f64, EmError> {
    let offset = rx - array.centroid();
    let d = offset.norm();
    let loss = path_loss_linear(d, channel.carrier_hz, channel.pathloss_exponent)?;
    let dir = Direction::from_vector(offset)?;
    let af = super::array::array_factor(array, dir, channel.carrier_hz)?;
    Ok(channel.element_tx_power_w * af.norm_sqr() / loss)
}

pub fn snr_linear(p_rx_w: f64, channel: &ChannelParams) -> f64 {
    p_rx_w / channel.noise_power_w()
}

/// Shannon capacity `B · log2(1 + snr)`.
pub fn shannon_rate_bps(snr: f64, bandwidth_hz: f64) -> f64 {
    bandwidth_hz * snr.ln_1p() / std::f64::consts::LN_2
}

/// Convenience: Shannon rate of the link from `array` to `rx`.
pub fn link_rate_bps(array: &VirtualArray, rx: Vec3, channel: &ChannelParams) -> Result<f64, EmError> {
    let snr = snr_linear(received_power_w(array, rx, channel)?, channel);
    Ok(shannon_rate_bps(snr, channel.bandwidth_hz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wavelength_values() {
        assert_relative_eq!(wavelength(900e6).unwrap(), 0.3331, epsilon = 5e-5);
        assert_relative_eq!(wavelength(2.4e9).unwrap(), 0.1249, epsilon = 5e-5);
        assert_eq!(wavelength(SPEED_OF_LIGHT).unwrap(), 1.0);
        assert!(wavelength(0.0).is_err());
        assert!(wavelength(-5.0).is_err());
    }

    #[test]
    fn path_loss_reference_and_power_law() {
        let lam = wavelength(900e6).unwrap();
        let at_ref = (4.0 * PI / lam).powi(2);
        assert_relative_eq!(path_loss_linear(1.0, 900e6, 2.7).unwrap(), at_ref, max_relative = 1e-15);
        let km = path_loss_linear(1000.0, 900e6, 2.7).unwrap();
        assert_relative_eq!(km, at_ref * 1000f64.powf(2.7), max_relative = 1e-12);
        let ratio = path_loss_linear(2000.0, 900e6, 2.7).unwrap() / km;
        assert_relative_eq!(ratio, 2f64.powf(2.7), max_relative = 1e-12);
        assert!(path_loss_linear(0.99, 900e6, 2.0).is_err());
    }

    #[test]
    fn noise_floor_of_relay_channel() {
        let n = ChannelParams::RELAY.noise_power_w();
        let dbm = 10.0 * (n * 1e3).log10();
        assert!((dbm - -81.99).abs() < 0.01, "{dbm}");
        assert_relative_eq!(n, 6.32e-12, max_relative = 1e-3);
    }

    #[test]
    fn snr_and_rate_trivia() {
        let ch = ChannelParams::RELAY;
        assert_eq!(snr_linear(0.0, &ch), 0.0);
        assert_relative_eq!(snr_linear(ch.noise_power_w(), &ch), 1.0, epsilon = 1e-12);
        assert_eq!(shannon_rate_bps(0.0, 20e6), 0.0);
        assert_relative_eq!(shannon_rate_bps(1.0, 20e6), 20e6, max_relative = 1e-15);
        assert_relative_eq!(shannon_rate_bps(3.0, 1.0), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn channel_validation() {
        assert!(ChannelParams::RELAY.validate().is_ok());
        assert!(ChannelParams::TWO_WAY.validate().is_ok());
        let bad = ChannelParams { pathloss_exponent: 1.5, ..ChannelParams::RELAY };
        assert!(bad.validate().is_err());
    }
}
