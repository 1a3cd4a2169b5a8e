//! Interference statistics at the two receivers.
//!
//! The satellite sees the aggregate of every active device in its footprint;
//! that aggregate concentrates around its mean for footprints this large, so
//! it is represented by its Campbell-sum average alone. The BS-side
//! interference keeps its full distribution through its Laplace transform.

use crate::channel::{excess_gain_mean, freespace_gain};
use crate::coverage::quad::integrate;
use crate::coverage::Scenario;
use crate::error::{Error, Result};
use crate::geomodel::max_earth_zenith;

/// Access-system parameters: residual-interference factors and the spatial
/// duty cycle thinning the device field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessModel {
    /// Fraction of co-channel interference surviving at the satellite, [0, 1].
    pub kappa_sat: f64,
    /// Fraction surviving at the BS, [0, 1].
    pub kappa_bs: f64,
    /// Fraction of devices transmitting at any instant, [0, 1].
    pub duty_cycle: f64,
}

impl AccessModel {
    pub fn new(kappa_sat: f64, kappa_bs: f64, duty_cycle: f64) -> Result<Self> {
        for (name, v) in [
            ("kappa_sat", kappa_sat),
            ("kappa_bs", kappa_bs),
            ("duty_cycle", duty_cycle),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(name, v, "must be in [0, 1]"));
            }
        }
        Ok(Self {
            kappa_sat,
            kappa_bs,
            duty_cycle,
        })
    }
}

impl Default for AccessModel {
    fn default() -> Self {
        // -20 dB mitigation on both links, 1% duty cycle.
        Self {
            kappa_sat: 0.01,
            kappa_bs: 0.01,
            duty_cycle: 0.01,
        }
    }
}

/// Mean interference power in watts at the serving satellite: the Campbell
/// sum over active devices in the footprint,
/// `2 pi R^2 D lambda_d P int_0^phi_m kappa_s l(phi) zeta_bar(phi) sin phi dphi`.
pub fn mean_sat_interference(scn: &Scenario) -> Result<f64> {
    let prefactor = 2.0
        * std::f64::consts::PI
        * scn.geo.earth_radius
        * scn.geo.earth_radius
        * scn.access.duty_cycle
        * scn.dens.device_density
        * scn.radio.eirp
        * scn.access.kappa_sat;
    if prefactor == 0.0 {
        return Ok(0.0);
    }
    let phi_m = max_earth_zenith(&scn.cfg, &scn.geo);
    let integral = integrate(
        |phi| freespace_gain(phi, &scn.geo, &scn.sat) * excess_gain_mean(phi, &scn.geo, &scn.sat) * phi.sin(),
        0.0,
        phi_m,
        1e-8,
        0.0,
    )?;
    Ok(prefactor * integral)
}

/// Normalized sinc, `sin(pi x) / (pi x)`.
pub(crate) fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let px = std::f64::consts::PI * x;
    px.sin() / px
}

/// Laplace transform of the BS-side interference at `s >= 0` (per watt):
/// `exp(-pi D lambda_d (kappa_b P b l_o s)^(2/a) / sinc(2/a))`.
pub fn terr_interference_laplace(s: f64, scn: &Scenario) -> f64 {
    debug_assert!(s >= 0.0, "Laplace transform argument must be >= 0");
    let a = scn.terr.path_loss_exponent;
    let scale = scn.access.kappa_bs
        * scn.radio.eirp
        * scn.terr.model_constant
        * scn.terr.path_gain_constant
        * s;
    let exponent = std::f64::consts::PI
        * scn.access.duty_cycle
        * scn.dens.device_density
        * scale.powf(2.0 / a)
        / sinc(2.0 / a);
    (-exponent).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::Scenario;
    use crate::units::per_km2_to_per_m2;

    #[test]
    fn access_model_rejects_out_of_range() {
        assert!(AccessModel::new(-0.1, 0.0, 0.0).is_err());
        assert!(AccessModel::new(0.0, 1.1, 0.0).is_err());
        assert!(AccessModel::new(0.0, 0.0, 1.5).is_err());
        assert!(AccessModel::new(1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn mean_interference_vanishes_without_sources() {
        let mut scn = Scenario::default();
        scn.access.kappa_sat = 0.0;
        assert_eq!(mean_sat_interference(&scn).unwrap(), 0.0);

        let mut scn = Scenario::default();
        scn.access.duty_cycle = 0.0;
        assert_eq!(mean_sat_interference(&scn).unwrap(), 0.0);

        let mut scn = Scenario::default();
        scn.dens.device_density = 0.0;
        assert_eq!(mean_sat_interference(&scn).unwrap(), 0.0);
    }

    #[test]
    fn mean_interference_is_linear_in_each_factor() {
        let mut scn = Scenario::default();
        scn.dens.device_density = per_km2_to_per_m2(1.0);
        let base = mean_sat_interference(&scn).unwrap();
        assert!(base > 0.0);

        let mut s2 = scn.clone();
        s2.access.duty_cycle *= 2.0;
        assert!((mean_sat_interference(&s2).unwrap() / base - 2.0).abs() < 1e-9);

        let mut s3 = scn.clone();
        s3.dens.device_density *= 3.0;
        assert!((mean_sat_interference(&s3).unwrap() / base - 3.0).abs() < 1e-9);

        let mut s4 = scn.clone();
        s4.access.kappa_sat *= 0.5;
        assert!((mean_sat_interference(&s4).unwrap() / base - 0.5).abs() < 1e-9);

        let mut s5 = scn.clone();
        s5.radio.eirp *= 4.0;
        assert!((mean_sat_interference(&s5).unwrap() / base - 4.0).abs() < 1e-9);
    }

    #[test]
    fn mean_interference_grows_with_footprint() {
        let mut narrow = Scenario::default();
        narrow.cfg.beamwidth = 0.02;
        let mut wide = Scenario::default();
        wide.cfg.beamwidth = 0.06;
        let full = Scenario::default();
        let a = mean_sat_interference(&narrow).unwrap();
        let b = mean_sat_interference(&wide).unwrap();
        let c = mean_sat_interference(&full).unwrap();
        assert!(a < b && b < c, "{a:e} {b:e} {c:e}");
    }

    #[test]
    fn laplace_transform_at_origin_and_no_activity() {
        let scn = Scenario::default();
        assert_eq!(terr_interference_laplace(0.0, &scn), 1.0);

        let mut quiet = Scenario::default();
        quiet.access.duty_cycle = 0.0;
        for s in [0.0, 1.0, 1e12] {
            assert_eq!(terr_interference_laplace(s, &quiet), 1.0);
        }
    }

    #[test]
    fn laplace_transform_power_law_homogeneity() {
        // With a = 4 the exponent scales as s^(1/2): scaling s by 4 doubles
        // the exponent magnitude, by 16 quadruples it.
        let mut scn = Scenario::default();
        scn.terr = crate::channel::TerrChannelModel::new(4.0, 1.0, 2e9).unwrap();
        let s = 1e10;
        let e1 = -terr_interference_laplace(s, &scn).ln();
        let e4 = -terr_interference_laplace(4.0 * s, &scn).ln();
        let e16 = -terr_interference_laplace(16.0 * s, &scn).ln();
        assert!((e4 / e1 - 2.0).abs() < 1e-9, "ratio {}", e4 / e1);
        assert!((e16 / e1 - 4.0).abs() < 1e-9, "ratio {}", e16 / e1);
    }

    #[test]
    fn laplace_transform_monotonicities() {
        let base = Scenario::default();
        let s = 1e12;
        let l0 = terr_interference_laplace(s, &base);
        assert!(terr_interference_laplace(2.0 * s, &base) < l0);

        let mut denser = base.clone();
        denser.dens.device_density *= 10.0;
        assert!(terr_interference_laplace(s, &denser) < l0);

        let mut busier = base.clone();
        busier.access.duty_cycle *= 5.0;
        assert!(terr_interference_laplace(s, &busier) < l0);

        let mut leakier = base.clone();
        leakier.access.kappa_bs *= 10.0;
        assert!(terr_interference_laplace(s, &leakier) < l0);
    }
}
