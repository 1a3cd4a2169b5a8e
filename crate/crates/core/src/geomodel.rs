//! Geometry of the Earth-constellation system.
//!
//! Pure functions of immutable inputs: satellite density on the orbital
//! shell, zenith-angle conversions between the Earth-centered and
//! user-centered frames, contact distributions for the nearest satellite and
//! nearest base station, footprint limits, and slant ranges. The Earth is an
//! ideal sphere; no orbital mechanics, only the stationary spatial law.

use crate::error::{Error, Result};

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Spherical Earth plus a constellation shell at fixed altitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarthGeometry {
    /// Earth radius in meters.
    pub earth_radius: f64,
    /// Shell altitude above the surface in meters.
    pub orbit_height: f64,
}

impl EarthGeometry {
    pub fn new(earth_radius: f64, orbit_height: f64) -> Result<Self> {
        if !(earth_radius > 0.0) {
            return Err(Error::invalid("earth_radius", earth_radius, "must be > 0"));
        }
        if !(orbit_height > 0.0) {
            return Err(Error::invalid("orbit_height", orbit_height, "must be > 0"));
        }
        Ok(Self {
            earth_radius,
            orbit_height,
        })
    }

    /// Radius of the constellation sphere, `R + h`.
    pub fn orbit_radius(&self) -> f64 {
        self.earth_radius + self.orbit_height
    }

    /// `alpha = R / (R + h)`, always in (0, 1).
    pub fn alpha(&self) -> f64 {
        self.earth_radius / self.orbit_radius()
    }

    /// Earth-centered angle at which a shell point sits on the user's
    /// horizon, `acos(alpha)`.
    pub fn horizon_angle(&self) -> f64 {
        self.alpha().acos()
    }
}

impl Default for EarthGeometry {
    fn default() -> Self {
        Self {
            earth_radius: EARTH_RADIUS_M,
            orbit_height: 500_000.0,
        }
    }
}

/// Constellation size and the per-satellite beamwidth limiting its footprint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstellationConfig {
    /// Number of satellites on the shell.
    pub num_satellites: u32,
    /// Full beamwidth in radians, in (0, 2*pi]. `2*pi` means isotropic, so
    /// the footprint is limited by the horizon only.
    pub beamwidth: f64,
}

impl ConstellationConfig {
    pub fn new(num_satellites: u32, beamwidth: f64) -> Result<Self> {
        if num_satellites < 1 {
            return Err(Error::invalid(
                "num_satellites",
                num_satellites as f64,
                "must be >= 1",
            ));
        }
        if !(beamwidth > 0.0 && beamwidth <= std::f64::consts::TAU) {
            return Err(Error::invalid(
                "beamwidth",
                beamwidth,
                "must be in (0, 2*pi]",
            ));
        }
        Ok(Self {
            num_satellites,
            beamwidth,
        })
    }
}

impl Default for ConstellationConfig {
    fn default() -> Self {
        Self {
            num_satellites: 500,
            beamwidth: std::f64::consts::TAU,
        }
    }
}

/// Areal densities of the two ground processes, per square meter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundDensities {
    /// Base stations per square meter.
    pub bs_density: f64,
    /// Devices per square meter. Zero is allowed for no-interference studies.
    pub device_density: f64,
}

impl GroundDensities {
    pub fn new(bs_density: f64, device_density: f64) -> Result<Self> {
        if !(bs_density > 0.0) {
            return Err(Error::invalid("bs_density", bs_density, "must be > 0"));
        }
        if !(device_density >= 0.0) {
            return Err(Error::invalid(
                "device_density",
                device_density,
                "must be >= 0",
            ));
        }
        Ok(Self {
            bs_density,
            device_density,
        })
    }
}

/// Average satellite density on the orbital shell, `N_s / (4 pi (R + h)^2)`,
/// per square meter.
pub fn satellite_density(cfg: &ConstellationConfig, geo: &EarthGeometry) -> f64 {
    let r = geo.orbit_radius();
    cfg.num_satellites as f64 / (4.0 * std::f64::consts::PI * r * r)
}

/// User-centered zenith angle of a shell point at Earth-centered zenith
/// angle `phi`.
///
/// Evaluates `acot((cos phi - alpha) / sin phi)` through `atan2`, which
/// carries the continuous extension `phi' = 0` at `phi = 0` and lands in
/// `[0, pi)` for `phi` in `[0, pi)`.
pub fn user_zenith_from_earth_angle(phi: f64, geo: &EarthGeometry) -> f64 {
    phi.sin().atan2(phi.cos() - geo.alpha())
}

/// Ground-user elevation angle of a shell point at Earth-centered zenith
/// angle `phi`: the complement of [`user_zenith_from_earth_angle`].
pub fn elevation_from_earth_angle(phi: f64, geo: &EarthGeometry) -> f64 {
    std::f64::consts::FRAC_PI_2 - user_zenith_from_earth_angle(phi, geo)
}

/// Density of the contact angle (Earth-centered angle to the nearest
/// satellite) at `phi`, per radian.
pub fn contact_angle_pdf(phi: f64, cfg: &ConstellationConfig) -> f64 {
    contact_angle_pdf_with(phi, cfg.num_satellites as f64)
}

/// [`contact_angle_pdf`] with a real-valued satellite count, for solvers
/// that relax the integer constraint.
///
/// The density is defective: it integrates to `1 - exp(-n)` over `[0, pi]`,
/// the missing mass being the probability that the shell is empty.
pub fn contact_angle_pdf_with(phi: f64, n_sats: f64) -> f64 {
    0.5 * n_sats * phi.sin() * (-0.5 * n_sats * (1.0 - phi.cos())).exp()
}

/// CDF of the contact angle at `phi` for a real-valued satellite count.
pub fn contact_angle_cdf_with(phi: f64, n_sats: f64) -> f64 {
    -(-0.5 * n_sats * (1.0 - phi.cos())).exp_m1()
}

/// Density of the contact distance (planar distance to the nearest base
/// station) at `r` meters, per meter.
pub fn contact_distance_pdf(r: f64, dens: &GroundDensities) -> f64 {
    let lambda = dens.bs_density;
    2.0 * std::f64::consts::PI * lambda * r * (-std::f64::consts::PI * lambda * r * r).exp()
}

/// CDF of the contact distance at `r` meters.
pub fn contact_distance_cdf(r: f64, dens: &GroundDensities) -> f64 {
    -(-std::f64::consts::PI * dens.bs_density * r * r).exp_m1()
}

/// Maximum Earth-centered zenith angle a satellite can serve, set by the
/// beamwidth when it is narrow and by the horizon otherwise.
pub fn max_earth_zenith(cfg: &ConstellationConfig, geo: &EarthGeometry) -> f64 {
    let alpha = geo.alpha();
    let half = 0.5 * cfg.beamwidth;
    if cfg.beamwidth < 2.0 * alpha.asin() {
        (half.sin() / alpha).asin() - half
    } else {
        alpha.acos()
    }
}

/// Straight-line distance in meters from a ground user to a shell point at
/// Earth-centered zenith angle `phi` (law of cosines).
pub fn slant_range(phi: f64, geo: &EarthGeometry) -> f64 {
    let r = geo.earth_radius;
    let s = geo.orbit_radius();
    (r * r + s * s - 2.0 * r * s * phi.cos()).sqrt()
}

/// Area in square meters of the spherical cap of angular radius `phi_m`
/// on the Earth's surface.
pub fn cap_area(phi_m: f64, geo: &EarthGeometry) -> f64 {
    let r = geo.earth_radius;
    2.0 * std::f64::consts::PI * r * r * (1.0 - phi_m.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn geo500() -> EarthGeometry {
        EarthGeometry::default()
    }

    #[test]
    fn density_of_1000_sats_at_500_km() {
        let cfg = ConstellationConfig::new(1000, TAU).unwrap();
        let d = satellite_density(&cfg, &geo500());
        // Hand evaluation: 1000 / (4 pi * 6_871_000^2) = 1.6857e-12 per m^2.
        assert!((d - 1.6857e-12).abs() / 1.6857e-12 < 1e-4, "got {d:e}");
    }

    #[test]
    fn density_times_shell_area_recovers_count() {
        // Identity case: a count equal to the shell area in m^2 would give
        // exactly 1 per m^2, i.e. density * shell area = N_s.
        let geo = geo500();
        let shell = 4.0 * PI * geo.orbit_radius() * geo.orbit_radius();
        let cfg = ConstellationConfig::new(1000, TAU).unwrap();
        assert!((satellite_density(&cfg, &geo) * shell - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn constructors_reject_degenerate_inputs() {
        assert!(EarthGeometry::new(6.371e6, 0.0).is_err());
        assert!(EarthGeometry::new(0.0, 5e5).is_err());
        assert!(ConstellationConfig::new(0, TAU).is_err());
        assert!(ConstellationConfig::new(10, 0.0).is_err());
        assert!(ConstellationConfig::new(10, TAU + 0.1).is_err());
        assert!(GroundDensities::new(0.0, 1e-6).is_err());
        assert!(GroundDensities::new(1e-8, -1.0).is_err());
        assert!(GroundDensities::new(1e-8, 0.0).is_ok());
    }

    #[test]
    fn user_zenith_limits() {
        let geo = geo500();
        assert_eq!(user_zenith_from_earth_angle(0.0, &geo), 0.0);
        let horizon = geo.horizon_angle();
        let z = user_zenith_from_earth_angle(horizon, &geo);
        assert!((z - FRAC_PI_2).abs() < 1e-12, "horizon maps to pi/2, got {z}");
    }

    #[test]
    fn user_zenith_matches_planar_triangle_construction() {
        // Independent oracle: place the user at (0, R) and the satellite at
        // ((R+h) sin phi, (R+h) cos phi); the user-centered zenith angle is
        // the angle of the user->satellite vector from the local vertical.
        let geo = geo500();
        for phi in [1e-6f64, 0.05, 0.2, 0.5, 1.0, 2.0, 3.0] {
            let (r, s) = (geo.earth_radius, geo.orbit_radius());
            let dx = s * phi.sin();
            let dy = s * phi.cos() - r;
            let oracle = dx.atan2(dy);
            let got = user_zenith_from_earth_angle(phi, &geo);
            assert!((got - oracle).abs() < 1e-12, "phi={phi}: {got} vs {oracle}");
        }
    }

    #[test]
    fn elevation_is_complement_of_user_zenith() {
        let geo = geo500();
        assert!((elevation_from_earth_angle(0.0, &geo) - FRAC_PI_2).abs() < 1e-15);
        assert!(elevation_from_earth_angle(geo.horizon_angle(), &geo).abs() < 1e-12);
        let phi = 0.2;
        let theta = elevation_from_earth_angle(phi, &geo);
        assert!((theta - (FRAC_PI_2 - user_zenith_from_earth_angle(phi, &geo))).abs() < 1e-15);
    }

    #[test]
    fn contact_angle_pdf_values() {
        let cfg = ConstellationConfig::new(2, TAU).unwrap();
        assert_eq!(contact_angle_pdf(0.0, &cfg), 0.0);
        // n=2, phi=pi/2: (2/2) * 1 * exp(-1).
        let v = contact_angle_pdf(FRAC_PI_2, &cfg);
        assert!((v - (-1.0f64).exp()).abs() < 1e-15, "got {v}");
    }

    #[test]
    fn contact_angle_cdf_matches_pdf_by_finite_differences() {
        for n in [1.0, 10.0, 250.0] {
            for phi in [0.01, 0.1, 0.5, 1.5, 3.0] {
                let h = 1e-6;
                let num =
                    (contact_angle_cdf_with(phi + h, n) - contact_angle_cdf_with(phi - h, n))
                        / (2.0 * h);
                let pdf = contact_angle_pdf_with(phi, n);
                assert!(
                    (num - pdf).abs() < 1e-5 * (1.0 + pdf),
                    "n={n} phi={phi}: {num} vs {pdf}"
                );
            }
        }
    }

    #[test]
    fn contact_distance_pdf_and_cdf() {
        let dens = GroundDensities::new(1e-8, 0.0).unwrap();
        assert_eq!(contact_distance_pdf(0.0, &dens), 0.0);
        // CDF at r = 1/sqrt(pi lambda) is 1 - 1/e.
        let r = 1.0 / (PI * dens.bs_density).sqrt();
        let c = contact_distance_cdf(r, &dens);
        assert!((c - (1.0 - (-1.0f64).exp())).abs() < 1e-12, "got {c}");
    }

    #[test]
    fn max_zenith_isotropic_is_horizon() {
        let geo = geo500();
        let cfg = ConstellationConfig::new(1000, TAU).unwrap();
        let phi_m = max_earth_zenith(&cfg, &geo);
        // acos(6371/6871), evaluated independently from 1 - alpha^2.
        let oracle = (1.0 - geo.alpha() * geo.alpha()).sqrt().asin();
        assert!((phi_m - oracle).abs() < 1e-12);
        assert!((phi_m - 0.383_847_5).abs() < 1e-6, "got {phi_m}");
    }

    #[test]
    fn max_zenith_narrow_beam_shrinks_to_zero() {
        let geo = geo500();
        for psi in [1e-3, 1e-5, 1e-7] {
            let cfg = ConstellationConfig::new(10, psi).unwrap();
            let phi_m = max_earth_zenith(&cfg, &geo);
            assert!(phi_m > 0.0 && phi_m < psi, "psi={psi} phi_m={phi_m}");
        }
    }

    #[test]
    fn max_zenith_branches_agree_at_switch_point() {
        // The beam-limited branch approaches the horizon branch at the
        // switch with square-root order, so the gap scales like sqrt(eps).
        let geo = geo500();
        let switch = 2.0 * geo.alpha().asin();
        let horizon = geo.horizon_angle();
        let above = ConstellationConfig::new(10, switch + 1e-9).unwrap();
        assert!((max_earth_zenith(&above, &geo) - horizon).abs() < 1e-12);
        let mut last_gap = f64::INFINITY;
        for eps in [1e-7, 1e-9, 1e-11, 1e-13] {
            let below = ConstellationConfig::new(10, switch - eps).unwrap();
            let gap = (max_earth_zenith(&below, &geo) - horizon).abs();
            assert!(gap < 5.0 * eps.sqrt(), "eps={eps}: gap {gap}");
            assert!(gap < last_gap, "gap did not shrink at eps={eps}");
            last_gap = gap;
        }
    }

    #[test]
    fn slant_range_landmarks() {
        let geo = geo500();
        assert!((slant_range(0.0, &geo) - geo.orbit_height).abs() < 1e-6);
        let horizon = slant_range(geo.horizon_angle(), &geo);
        let chord = (geo.orbit_radius() * geo.orbit_radius()
            - geo.earth_radius * geo.earth_radius)
            .sqrt();
        assert!((horizon - chord).abs() < 1e-6);
        assert!((horizon - 2.5731e6).abs() < 1e2, "got {horizon}");
        let antipode = slant_range(PI, &geo);
        assert!((antipode - (2.0 * geo.earth_radius + geo.orbit_height)).abs() < 1e-6);
    }

    #[test]
    fn cap_area_landmarks() {
        let geo = geo500();
        assert_eq!(cap_area(0.0, &geo), 0.0);
        let full = cap_area(PI, &geo);
        let sphere = 4.0 * PI * geo.earth_radius * geo.earth_radius;
        assert!((full - sphere).abs() / sphere < 1e-15);
        // Footprint of an isotropic satellite at 500 km.
        let a = cap_area(geo.horizon_angle(), &geo);
        assert!((a - 1.856e13).abs() / 1.856e13 < 1e-3, "got {a:e}");
    }
}
