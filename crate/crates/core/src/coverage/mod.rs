//! Analytic coverage probabilities for the satellite, terrestrial, and
//! hybrid uplinks, plus the quadrature engine they run on.
//!
//! The satellite link averages the excess-gain tail probability over the
//! contact-angle law inside the footprint, treating interference at the
//! satellite by its mean. The terrestrial link averages the interference
//! Laplace transform and the noise factor over the nearest-BS distance law.
//! A transmission succeeds if either link succeeds, and the two links are
//! independent, so the hybrid coverage composes as
//! `p_c = 1 - (1 - p_s)(1 - p_b)`.

pub mod quad;

pub use quad::{integrate, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};

use crate::channel::{
    excess_gain_cdf_unchecked, freespace_gain, RadioParams, SatChannelModel, TerrChannelModel,
};
use crate::error::{Error, Result};
use crate::geomodel::{
    contact_angle_pdf_with, max_earth_zenith, ConstellationConfig, EarthGeometry, GroundDensities,
};
use crate::linkstats::{mean_sat_interference, terr_interference_laplace, AccessModel};

/// Complete parameter bundle for one hybrid-network study.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geo: EarthGeometry,
    pub cfg: ConstellationConfig,
    pub dens: GroundDensities,
    pub sat: SatChannelModel,
    pub terr: TerrChannelModel,
    pub radio: RadioParams,
    pub access: AccessModel,
}

impl Scenario {
    pub fn new(
        geo: EarthGeometry,
        cfg: ConstellationConfig,
        dens: GroundDensities,
        sat: SatChannelModel,
        terr: TerrChannelModel,
        radio: RadioParams,
        access: AccessModel,
    ) -> Result<Self> {
        let scn = Self {
            geo,
            cfg,
            dens,
            sat,
            terr,
            radio,
            access,
        };
        scn.validate()?;
        Ok(scn)
    }

    /// Re-checks every component invariant. Useful after mutating fields
    /// directly, e.g. inside parameter sweeps.
    pub fn validate(&self) -> Result<()> {
        EarthGeometry::new(self.geo.earth_radius, self.geo.orbit_height)?;
        ConstellationConfig::new(self.cfg.num_satellites, self.cfg.beamwidth)?;
        GroundDensities::new(self.dens.bs_density, self.dens.device_density)?;
        SatChannelModel::new(
            self.sat.carrier_frequency,
            self.sat.air_absorption_gain,
            self.sat.los_beta,
            self.sat.mu_los,
            self.sat.sigma_los,
            self.sat.mu_nlos,
            self.sat.sigma_nlos,
        )?;
        TerrChannelModel::new(
            self.terr.path_loss_exponent,
            self.terr.model_constant,
            self.sat.carrier_frequency,
        )?;
        RadioParams::new(
            self.radio.eirp,
            self.radio.target_sinr,
            self.radio.sat_noise,
            self.radio.bs_noise,
        )?;
        AccessModel::new(
            self.access.kappa_sat,
            self.access.kappa_bs,
            self.access.duty_cycle,
        )?;
        // Both channel models must share one path-gain constant.
        let expected = self.sat.path_gain_constant();
        if (self.terr.path_gain_constant - expected).abs() > 1e-12 * expected {
            return Err(Error::invalid(
                "terr.path_gain_constant",
                self.terr.path_gain_constant,
                "must match the constant derived from the carrier frequency",
            ));
        }
        Ok(())
    }
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            geo: EarthGeometry::default(),
            cfg: ConstellationConfig::default(),
            dens: GroundDensities {
                bs_density: crate::units::per_km2_to_per_m2(0.01),
                device_density: crate::units::per_km2_to_per_m2(1.0),
            },
            sat: SatChannelModel::default(),
            terr: TerrChannelModel::default(),
            radio: RadioParams::default(),
            access: AccessModel::default(),
        }
    }
}

/// How a [`CoverageResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    MonteCarlo,
}

/// Per-link and hybrid coverage probabilities with provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub p_sat: f64,
    pub p_terr: f64,
    pub p_hybrid: f64,
    pub method: Method,
    /// 95% confidence half-width; 0 for analytic results.
    pub ci_halfwidth: f64,
}

/// Precomputed satellite-link state shared across evaluations at different
/// constellation sizes: the mean interference does not depend on the count,
/// so design solvers reuse it.
pub(crate) struct SatLinkContext<'a> {
    scn: &'a Scenario,
    phi_max: f64,
    /// `gamma_o (I_bar + W_s) / P`: the excess-gain threshold times `l(phi)`.
    threshold_scale: f64,
}

impl<'a> SatLinkContext<'a> {
    pub(crate) fn new(scn: &'a Scenario) -> Result<Self> {
        let mean_interference = mean_sat_interference(scn)?;
        Ok(Self {
            scn,
            phi_max: max_earth_zenith(&scn.cfg, &scn.geo),
            threshold_scale: scn.radio.target_sinr * (mean_interference + scn.radio.sat_noise)
                / scn.radio.eirp,
        })
    }

    /// Coverage given a (possibly fractional) satellite count.
    pub(crate) fn coverage(&self, n_sats: f64) -> Result<f64> {
        if n_sats <= 0.0 {
            return Ok(0.0);
        }
        // The contact-angle mass lives below 1 - cos(phi) = 74 / n; capping
        // the domain there keeps the integrand visible to the adaptive rule
        // at large counts. The discarded tail mass is under exp(-37).
        let mut hi = self.phi_max;
        let tail = 74.0 / n_sats;
        if tail < 1.0 - self.phi_max.cos() {
            hi = (1.0 - tail).acos();
        }
        let scn = self.scn;
        integrate(
            |phi| {
                let threshold = self.threshold_scale / freespace_gain(phi, &scn.geo, &scn.sat);
                let tail_prob =
                    1.0 - excess_gain_cdf_unchecked(threshold, phi, &scn.geo, &scn.sat);
                tail_prob * contact_angle_pdf_with(phi, n_sats)
            },
            0.0,
            hi,
            DEFAULT_REL_TOL,
            DEFAULT_ABS_TOL,
        )
    }

    /// Limit of [`Self::coverage`] as the count grows without bound: the
    /// serving satellite sits at zenith and only the excess gain decides.
    pub(crate) fn coverage_ceiling(&self) -> f64 {
        let threshold = self.threshold_scale / freespace_gain(0.0, &self.scn.geo, &self.scn.sat);
        1.0 - excess_gain_cdf_unchecked(threshold, 0.0, &self.scn.geo, &self.scn.sat)
    }
}

/// Satellite-uplink coverage probability of the scenario's constellation.
pub fn sat_coverage(scn: &Scenario) -> Result<f64> {
    sat_coverage_with_count(scn, scn.cfg.num_satellites as f64)
}

/// Satellite-uplink coverage with an explicit, possibly fractional,
/// satellite count (the scenario's count is ignored). Used by design
/// solvers that relax the integer constraint.
pub fn sat_coverage_with_count(scn: &Scenario, n_sats: f64) -> Result<f64> {
    SatLinkContext::new(scn)?.coverage(n_sats)
}

/// Terrestrial-uplink coverage probability.
pub fn terr_coverage(scn: &Scenario) -> Result<f64> {
    terr_coverage_with_density(scn, scn.dens.bs_density)
}

/// Terrestrial-uplink coverage with an explicit BS density (the scenario's
/// density is ignored). Used by design solvers.
///
/// The semi-infinite distance integral is mapped through `u = pi lambda r^2`
/// so the nearest-BS weight becomes exactly `exp(-u)`. In `u` the integrand
/// is a product of three decaying factors with scales 1 (contact law),
/// `u_noise` (noise), and `u_int` (interference); integrating out to 40
/// times the smallest of them keeps the discarded tail below `exp(-40)`
/// relative while keeping the mass visible to the adaptive rule even at
/// extreme densities.
pub fn terr_coverage_with_density(scn: &Scenario, bs_density: f64) -> Result<f64> {
    if !(bs_density > 0.0) {
        return Err(Error::invalid("bs_density", bs_density, "must be > 0"));
    }
    let a = scn.terr.path_loss_exponent;
    let p_b_lo = scn.radio.eirp * scn.terr.model_constant * scn.terr.path_gain_constant;
    let noise_scale = scn.radio.target_sinr * scn.radio.bs_noise / p_b_lo;
    let s_scale = scn.radio.target_sinr / p_b_lo;
    let pi_lambda = std::f64::consts::PI * bs_density;

    let u_noise = if noise_scale > 0.0 {
        pi_lambda * noise_scale.powf(-2.0 / a)
    } else {
        f64::INFINITY
    };
    let interference_rate = scn.access.duty_cycle
        * scn.dens.device_density
        * (scn.access.kappa_bs * scn.radio.target_sinr).powf(2.0 / a);
    let u_int = if interference_rate > 0.0 {
        bs_density * crate::linkstats::sinc(2.0 / a) / interference_rate
    } else {
        f64::INFINITY
    };
    let upper = 40.0 * 1f64.min(u_noise).min(u_int);

    integrate(
        |u| {
            let r_pow_a = (u / pi_lambda).powf(0.5 * a);
            terr_interference_laplace(s_scale * r_pow_a, scn)
                * (-noise_scale * r_pow_a).exp()
                * (-u).exp()
        },
        0.0,
        upper,
        DEFAULT_REL_TOL,
        DEFAULT_ABS_TOL,
    )
}

/// Coverage of the hybrid uplink: succeeds when either link succeeds.
pub fn hybrid_coverage(scn: &Scenario) -> Result<CoverageResult> {
    let p_sat = sat_coverage(scn)?;
    let p_terr = terr_coverage(scn)?;
    Ok(CoverageResult {
        p_sat,
        p_terr,
        p_hybrid: 1.0 - (1.0 - p_sat) * (1.0 - p_terr),
        method: Method::Analytic,
        ci_halfwidth: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::per_km2_to_per_m2;
    use std::f64::consts::PI;

    #[test]
    fn scenario_default_is_valid() {
        Scenario::default().validate().unwrap();
    }

    #[test]
    fn scenario_validate_catches_field_tampering() {
        let mut scn = Scenario::default();
        scn.access.duty_cycle = 1.5;
        assert!(scn.validate().is_err());

        let mut scn = Scenario::default();
        scn.sat.carrier_frequency = 4e9; // terr constant now stale
        assert!(scn.validate().is_err());
    }

    #[test]
    fn sat_coverage_noise_and_interference_free_reduces_to_visibility() {
        // With zero threshold the integral is the contact-angle mass inside
        // the footprint, 1 - exp(-(n/2)(1 - cos phi_m)).
        let mut scn = Scenario::default();
        scn.cfg.num_satellites = 1000;
        scn.access.kappa_sat = 0.0;
        scn.radio.sat_noise = 0.0;
        let p = sat_coverage(&scn).unwrap();
        let phi_m = max_earth_zenith(&scn.cfg, &scn.geo);
        let expect = -(-0.5 * 1000.0 * (1.0 - phi_m.cos())).exp_m1();
        assert!((p - expect).abs() < 1e-8, "{p} vs {expect}");
        assert!(p > 0.999_999);
    }

    #[test]
    fn sat_coverage_vanishes_with_the_constellation() {
        let scn = Scenario::default();
        let p = sat_coverage_with_count(&scn, 1e-9).unwrap();
        assert!(p >= 0.0 && p < 1e-9, "got {p}");
    }

    #[test]
    fn sat_coverage_monotone_in_count() {
        let scn = Scenario::default();
        let mut last = 0.0;
        for n in [10.0, 50.0, 200.0, 1000.0, 5000.0, 50_000.0] {
            let p = sat_coverage_with_count(&scn, n).unwrap();
            assert!(p >= last, "count {n}: {p} < {last}");
            last = p;
        }
    }

    #[test]
    fn terr_coverage_noise_free_matches_closed_form() {
        let mut scn = Scenario::default();
        scn.radio.bs_noise = 0.0;
        scn.dens.bs_density = per_km2_to_per_m2(0.01);
        scn.dens.device_density = per_km2_to_per_m2(1.0);
        let p = terr_coverage(&scn).unwrap();

        let a = scn.terr.path_loss_exponent;
        let x = 2.0 / a;
        let sinc = (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x);
        let kg = scn.access.kappa_bs * scn.radio.target_sinr;
        let expect = scn.dens.bs_density
            / (scn.dens.bs_density
                + scn.access.duty_cycle * scn.dens.device_density * kg.powf(x) / sinc);
        assert!((p - expect).abs() < 1e-6, "{p} vs {expect}");
        // Spot value for these densities (device = 100x BS).
        assert!((p - 0.988588).abs() < 1e-4, "got {p}");
    }

    #[test]
    fn terr_coverage_idle_noise_free_is_certain() {
        let mut scn = Scenario::default();
        scn.radio.bs_noise = 0.0;
        scn.dens.device_density = 0.0;
        let p = terr_coverage(&scn).unwrap();
        assert!((p - 1.0).abs() < 1e-9, "got {p}");
    }

    #[test]
    fn hybrid_composition_arithmetic() {
        // 0.6 and 0.5 compose to 0.8; degenerate ends behave.
        let compose = |s: f64, b: f64| 1.0 - (1.0 - s) * (1.0 - b);
        assert!((compose(0.6, 0.5) - 0.8).abs() < 1e-15);
        assert_eq!(compose(0.0, 0.37), 0.37);
        assert_eq!(compose(1.0, 0.37), 1.0);

        let scn = Scenario::default();
        let result = hybrid_coverage(&scn).unwrap();
        assert_eq!(result.method, Method::Analytic);
        assert_eq!(result.ci_halfwidth, 0.0);
        assert!(
            (result.p_hybrid - compose(result.p_sat, result.p_terr)).abs() < 1e-15
        );
        assert!(result.p_hybrid >= result.p_sat.max(result.p_terr));
        assert!(result.p_hybrid <= (result.p_sat + result.p_terr).min(1.0));
    }

    #[test]
    fn terr_coverage_at_extreme_densities_matches_r_domain_quadrature() {
        // Cross-check the u-substituted integral against the raw distance
        // integral on [0, inf); at low densities almost all of the contact
        // law's mass lies where noise has already killed the link, which is
        // exactly where a fixed-domain rule would lose the integrand.
        let scn = Scenario::default();
        for (bs_per_km2, dev_per_km2) in
            [(1e-6, 0.0), (1e-4, 0.0), (0.01, 1.0), (1.0, 10.0), (100.0, 0.1)]
        {
            let bs = per_km2_to_per_m2(bs_per_km2);
            let mut s = scn.clone();
            s.dens.device_density = per_km2_to_per_m2(dev_per_km2);
            let fast = terr_coverage_with_density(&s, bs).unwrap();

            let p_b_lo = s.radio.eirp * s.terr.model_constant * s.terr.path_gain_constant;
            let noise_scale = s.radio.target_sinr * s.radio.bs_noise / p_b_lo;
            let s_scale = s.radio.target_sinr / p_b_lo;
            let direct = integrate(
                |r: f64| {
                    let r_pow_a = r.powf(s.terr.path_loss_exponent);
                    crate::linkstats::terr_interference_laplace(s_scale * r_pow_a, &s)
                        * (-noise_scale * r_pow_a).exp()
                        * 2.0
                        * PI
                        * bs
                        * r
                        * (-PI * bs * r * r).exp()
                },
                0.0,
                f64::INFINITY,
                1e-10,
                0.0,
            )
            .unwrap();
            assert!(
                (fast - direct).abs() <= 1e-6 * direct.max(1e-12),
                "bs {bs_per_km2}/km2 dev {dev_per_km2}/km2: {fast:e} vs {direct:e}"
            );
        }
    }

    #[test]
    fn hybrid_tracks_satellite_when_bs_density_vanishes() {
        let mut scn = Scenario::default();
        scn.dens.bs_density = 1e-12;
        scn.dens.device_density = 0.0;
        scn.cfg.num_satellites = 200_000;
        let r = hybrid_coverage(&scn).unwrap();
        assert!(
            (r.p_hybrid - r.p_sat).abs() < 1e-6,
            "p_c {} vs p_s {}",
            r.p_hybrid,
            r.p_sat
        );
    }
}
