//! Channel models for the two uplinks.
//!
//! Ground-to-satellite: free-space path gain times an *excess* path gain
//! whose dB value follows a two-component (LoS/NLoS) Gaussian mixture, with
//! an elevation-dependent LoS probability. Ground-to-BS: log-distance path
//! loss with unit-mean exponential (Rayleigh power) fading.
//!
//! Analytic moments/CDFs and samplers share one sign convention: mixture
//! components are centered at `-mu` in dB (a loss), which pairs with the
//! `+mu` inside the CDF's erf arguments. The Monte Carlo vs CDF tests pin
//! the convention down.

use crate::error::{Error, Result};
use crate::geomodel::{slant_range, EarthGeometry};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `ln(10)/10`: scales dB-domain normal moments into natural-log space.
pub const RHO: f64 = std::f64::consts::LN_10 / 10.0;

/// Ground-to-satellite channel parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatChannelModel {
    /// Carrier frequency in Hz.
    pub carrier_frequency: f64,
    /// Air absorption as a linear power gain in (0, 1]; 1.0 means none.
    pub air_absorption_gain: f64,
    /// LoS probability decay parameter (beta).
    pub los_beta: f64,
    /// Mean excess path *loss* of the LoS component, dB.
    pub mu_los: f64,
    /// Standard deviation of the LoS component, dB.
    pub sigma_los: f64,
    /// Mean excess path loss of the NLoS component, dB.
    pub mu_nlos: f64,
    /// Standard deviation of the NLoS component, dB.
    pub sigma_nlos: f64,
}

impl SatChannelModel {
    pub fn new(
        carrier_frequency: f64,
        air_absorption_gain: f64,
        los_beta: f64,
        mu_los: f64,
        sigma_los: f64,
        mu_nlos: f64,
        sigma_nlos: f64,
    ) -> Result<Self> {
        if !(carrier_frequency > 0.0) {
            return Err(Error::invalid(
                "carrier_frequency",
                carrier_frequency,
                "must be > 0",
            ));
        }
        if !(air_absorption_gain > 0.0 && air_absorption_gain <= 1.0) {
            return Err(Error::invalid(
                "air_absorption_gain",
                air_absorption_gain,
                "must be in (0, 1]",
            ));
        }
        if !(los_beta >= 0.0) {
            return Err(Error::invalid("los_beta", los_beta, "must be >= 0"));
        }
        if !(sigma_los >= 0.0) {
            return Err(Error::invalid("sigma_los", sigma_los, "must be >= 0"));
        }
        if !(sigma_nlos >= 0.0) {
            return Err(Error::invalid("sigma_nlos", sigma_nlos, "must be >= 0"));
        }
        Ok(Self {
            carrier_frequency,
            air_absorption_gain,
            los_beta,
            mu_los,
            sigma_los,
            mu_nlos,
            sigma_nlos,
        })
    }

    /// Free-space path-gain constant `(c / (4 pi f))^2` in m^2. Derived from
    /// the carrier frequency, never set directly.
    pub fn path_gain_constant(&self) -> f64 {
        let x = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * self.carrier_frequency);
        x * x
    }
}

impl Default for SatChannelModel {
    fn default() -> Self {
        // Suburban S-band measurement fit: beta 2.3, LoS N(0, 2.8^2) dB,
        // NLoS N(-12, 9^2) dB, no air absorption at 2 GHz.
        Self {
            carrier_frequency: 2e9,
            air_absorption_gain: 1.0,
            los_beta: 2.3,
            mu_los: 0.0,
            sigma_los: 2.8,
            mu_nlos: 12.0,
            sigma_nlos: 9.0,
        }
    }
}

/// Ground-to-BS log-distance channel parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerrChannelModel {
    /// Path-loss exponent `a`; must exceed 2 for the interference Laplace
    /// transform to converge.
    pub path_loss_exponent: f64,
    /// Dimensionless model constant `b` (linear).
    pub model_constant: f64,
    /// Free-space path-gain constant, same definition as the satellite
    /// model's; wired from the shared carrier frequency.
    pub path_gain_constant: f64,
}

impl TerrChannelModel {
    pub fn new(path_loss_exponent: f64, model_constant: f64, carrier_frequency: f64) -> Result<Self> {
        if !(path_loss_exponent > 2.0) {
            return Err(Error::invalid(
                "path_loss_exponent",
                path_loss_exponent,
                "must be > 2",
            ));
        }
        if !(model_constant > 0.0) {
            return Err(Error::invalid(
                "model_constant",
                model_constant,
                "must be > 0",
            ));
        }
        if !(carrier_frequency > 0.0) {
            return Err(Error::invalid(
                "carrier_frequency",
                carrier_frequency,
                "must be > 0",
            ));
        }
        let x = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * carrier_frequency);
        Ok(Self {
            path_loss_exponent,
            model_constant,
            path_gain_constant: x * x,
        })
    }
}

impl Default for TerrChannelModel {
    fn default() -> Self {
        Self::new(3.68, 1.0, 2e9).unwrap()
    }
}

/// Transmit power, SINR threshold, and receiver noise floors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Device EIRP in watts.
    pub eirp: f64,
    /// Target SINR threshold, linear.
    pub target_sinr: f64,
    /// Satellite receiver noise power in watts. Zero is allowed for
    /// noise-free reductions.
    pub sat_noise: f64,
    /// BS receiver noise power in watts. Zero is allowed for noise-free
    /// reductions.
    pub bs_noise: f64,
}

impl RadioParams {
    pub fn new(eirp: f64, target_sinr: f64, sat_noise: f64, bs_noise: f64) -> Result<Self> {
        if !(eirp > 0.0) {
            return Err(Error::invalid("eirp", eirp, "must be > 0"));
        }
        if !(target_sinr > 0.0) {
            return Err(Error::invalid("target_sinr", target_sinr, "must be > 0"));
        }
        if !(sat_noise >= 0.0) {
            return Err(Error::invalid("sat_noise", sat_noise, "must be >= 0"));
        }
        if !(bs_noise >= 0.0) {
            return Err(Error::invalid("bs_noise", bs_noise, "must be >= 0"));
        }
        Ok(Self {
            eirp,
            target_sinr,
            sat_noise,
            bs_noise,
        })
    }
}

impl Default for RadioParams {
    fn default() -> Self {
        // 23 dBm EIRP, -20 dB threshold, -130 dBm / -117 dBm noise floors.
        Self {
            eirp: crate::units::dbm_to_watts(23.0),
            target_sinr: crate::units::db_to_linear(-20.0),
            sat_noise: crate::units::dbm_to_watts(-130.0),
            bs_noise: crate::units::dbm_to_watts(-117.0),
        }
    }
}

/// Free-space path gain to a shell point at Earth-centered zenith angle
/// `phi`: `l_o * l_air / d(phi)^2`.
pub fn freespace_gain(phi: f64, geo: &EarthGeometry, sat: &SatChannelModel) -> f64 {
    let d = slant_range(phi, geo);
    sat.path_gain_constant() * sat.air_absorption_gain / (d * d)
}

/// LoS probability toward a shell point at Earth-centered zenith angle
/// `phi`: `exp(-beta * sin phi / (cos phi - alpha))`, clamped to 0 at and
/// beyond the horizon where the geometric elevation is non-positive.
pub fn los_probability(phi: f64, geo: &EarthGeometry, sat: &SatChannelModel) -> f64 {
    let denom = phi.cos() - geo.alpha();
    if denom <= 0.0 {
        return 0.0;
    }
    (-sat.los_beta * phi.sin() / denom).exp()
}

fn component_mean(mu: f64, sigma: f64) -> f64 {
    (0.5 * RHO * RHO * sigma * sigma - RHO * mu).exp()
}

/// Mean linear excess path gain at Earth-centered zenith angle `phi`:
/// the LoS-probability-weighted lognormal means of the two components.
pub fn excess_gain_mean(phi: f64, geo: &EarthGeometry, sat: &SatChannelModel) -> f64 {
    let p_los = los_probability(phi, geo, sat);
    p_los * component_mean(sat.mu_los, sat.sigma_los)
        + (1.0 - p_los) * component_mean(sat.mu_nlos, sat.sigma_nlos)
}

fn component_cdf(x_db: f64, mu: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        // Degenerate component: all mass at -mu dB.
        return if x_db + mu >= 0.0 { 1.0 } else { 0.0 };
    }
    0.5 + 0.5 * libm::erf((x_db + mu) / (std::f64::consts::SQRT_2 * sigma))
}

/// CDF of the linear excess path gain at `x > 0` for the mixture at
/// Earth-centered zenith angle `phi`.
pub fn excess_gain_cdf(x: f64, phi: f64, geo: &EarthGeometry, sat: &SatChannelModel) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain("excess_gain_cdf requires x > 0"));
    }
    Ok(excess_gain_cdf_unchecked(x, phi, geo, sat))
}

/// [`excess_gain_cdf`] without the domain guard; returns 0 for `x <= 0`
/// (the limit from above). Used inside integrands where the threshold can
/// legitimately reach zero.
pub(crate) fn excess_gain_cdf_unchecked(
    x: f64,
    phi: f64,
    geo: &EarthGeometry,
    sat: &SatChannelModel,
) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let x_db = 10.0 * x.log10();
    let p_los = los_probability(phi, geo, sat);
    p_los * component_cdf(x_db, sat.mu_los, sat.sigma_los)
        + (1.0 - p_los) * component_cdf(x_db, sat.mu_nlos, sat.sigma_nlos)
}

/// Draw one linear excess path gain at Earth-centered zenith angle `phi`.
pub fn sample_excess_gain<R: Rng + ?Sized>(
    phi: f64,
    geo: &EarthGeometry,
    sat: &SatChannelModel,
    rng: &mut R,
) -> f64 {
    let p_los = los_probability(phi, geo, sat);
    let (mu, sigma) = if rng.random::<f64>() < p_los {
        (sat.mu_los, sat.sigma_los)
    } else {
        (sat.mu_nlos, sat.sigma_nlos)
    };
    let z: f64 = StandardNormal.sample(rng);
    let gain_db = -mu + sigma * z;
    10f64.powf(gain_db / 10.0)
}

/// Log-distance path gain at planar distance `r > 0` meters:
/// `b * l_o * r^-a`. Errors at `r = 0`, where the model is singular.
pub fn terrestrial_gain(r: f64, terr: &TerrChannelModel) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain("terrestrial_gain requires r > 0"));
    }
    Ok(terr.model_constant * terr.path_gain_constant * r.powf(-terr.path_loss_exponent))
}

/// Draw one Rayleigh power fading coefficient: Exp(1), unit mean.
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}
