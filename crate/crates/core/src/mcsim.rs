//! Monte Carlo estimation of the per-link and hybrid coverage
//! probabilities; the independent check on every analytic result.
//!
//! Each trial realizes the satellite layout, the serving geometry, the
//! channels, and the interferer fields from scratch. The test user sits at
//! the north pole: for uniform-random constellations every process is
//! rotation invariant, so nothing is lost; Walker layouts are not, so those
//! trials instead draw a uniform user direction and a uniform spin of the
//! layout about the polar axis.
//!
//! Determinism: trial `i` consumes ChaCha streams `2i` (satellite link) and
//! `2i + 1` (terrestrial link) derived from the master seed, and results are
//! reduced by counting, so estimates do not depend on how trials are
//! scheduled across threads.

use crate::constellation::{
    default_planes, sample_sphere_point, walker, ConstellationModel, ConstellationSnapshot,
};
use crate::coverage::Scenario;
use crate::error::{Error, Result};
use crate::geomodel::{cap_area, max_earth_zenith};
use crate::channel::{freespace_gain, sample_excess_gain, sample_fading};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

/// A Monte Carlo probability estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    /// 95% normal-approximation confidence half-width.
    pub ci_halfwidth: f64,
    pub trials: u64,
    pub seed: u64,
}

impl MCEstimate {
    fn from_counts(successes: u64, trials: u64, seed: u64) -> Self {
        let mean = successes as f64 / trials as f64;
        Self {
            mean,
            ci_halfwidth: 1.96 * (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }
}

/// Satellite, terrestrial, and hybrid estimates from one joint run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEstimate {
    pub sat: MCEstimate,
    pub terr: MCEstimate,
    pub hybrid: MCEstimate,
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Per-device channel draws in the cos-angle domain. The footprint holds
/// up to a few hundred thousand active devices per trial, so this inner
/// loop avoids `acos`/`powf` entirely; a unit test pins it to the public
/// channel functions.
struct CapDeviceSampler {
    /// `R^2 + S^2` and `2 R S` of the slant-range law.
    range_const: f64,
    range_cos: f64,
    /// `l_o * l_air`.
    gain_num: f64,
    alpha: f64,
    beta: f64,
    neg_rho_mu_los: f64,
    rho_sigma_los: f64,
    neg_rho_mu_nlos: f64,
    rho_sigma_nlos: f64,
}

impl CapDeviceSampler {
    fn new(scn: &Scenario) -> Self {
        let r = scn.geo.earth_radius;
        let s = scn.geo.orbit_radius();
        Self {
            range_const: r * r + s * s,
            range_cos: 2.0 * r * s,
            gain_num: scn.sat.path_gain_constant() * scn.sat.air_absorption_gain,
            alpha: scn.geo.alpha(),
            beta: scn.sat.los_beta,
            neg_rho_mu_los: -crate::channel::RHO * scn.sat.mu_los,
            rho_sigma_los: crate::channel::RHO * scn.sat.sigma_los,
            neg_rho_mu_nlos: -crate::channel::RHO * scn.sat.mu_nlos,
            rho_sigma_nlos: crate::channel::RHO * scn.sat.sigma_nlos,
        }
    }

    #[inline]
    fn freespace_at_cos(&self, cos_phi: f64) -> f64 {
        self.gain_num / (self.range_const - self.range_cos * cos_phi)
    }

    /// One excess-gain draw at the given polar cosine; `10^(dB/10)` done as
    /// `exp(rho * dB)`.
    #[inline]
    fn excess_at_cos<R: Rng + ?Sized>(&self, cos_phi: f64, rng: &mut R) -> f64 {
        let denom = cos_phi - self.alpha;
        let p_los = if denom <= 0.0 {
            0.0
        } else {
            let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
            (-self.beta * sin_phi / denom).exp()
        };
        let (center, spread) = if rng.random::<f64>() < p_los {
            (self.neg_rho_mu_los, self.rho_sigma_los)
        } else {
            (self.neg_rho_mu_nlos, self.rho_sigma_nlos)
        };
        let z: f64 = StandardNormal.sample(rng);
        (center + spread * z).exp()
    }
}

struct SatSetup<'a> {
    scn: &'a Scenario,
    /// Walker layout, fixed for the run; `None` means uniform-random.
    snapshot: Option<ConstellationSnapshot>,
    cos_phi_max: f64,
    one_minus_cos_phi_max: f64,
    interferers: Option<Poisson<f64>>,
    cap: CapDeviceSampler,
}

impl<'a> SatSetup<'a> {
    fn new(scn: &'a Scenario, model: &ConstellationModel) -> Result<Self> {
        let snapshot = match *model {
            ConstellationModel::UniformRandom => None,
            ConstellationModel::Walker {
                pattern,
                inclination,
                planes,
                phasing,
            } => {
                let n = scn.cfg.num_satellites;
                let planes = planes.unwrap_or_else(|| default_planes(n));
                Some(walker(
                    pattern,
                    n,
                    inclination,
                    planes,
                    phasing,
                    scn.geo.orbit_radius(),
                )?)
            }
        };
        let phi_max = max_earth_zenith(&scn.cfg, &scn.geo);
        let mean = scn.access.duty_cycle * scn.dens.device_density * cap_area(phi_max, &scn.geo);
        let interferers = if scn.access.kappa_sat > 0.0 && mean > 0.0 {
            Some(Poisson::new(mean).expect("positive finite mean"))
        } else {
            None
        };
        Ok(Self {
            scn,
            snapshot,
            cos_phi_max: phi_max.cos(),
            one_minus_cos_phi_max: 1.0 - phi_max.cos(),
            interferers,
            cap: CapDeviceSampler::new(scn),
        })
    }

    fn trial(&self, rng: &mut ChaCha8Rng) -> bool {
        let scn = self.scn;
        let cos_contact = match &self.snapshot {
            None => {
                // User at the pole: only each satellite's polar coordinate
                // matters, and those are iid U(-1, 1), so the serving
                // cosine is their maximum, drawn exactly by inverse CDF.
                2.0 * rng.random::<f64>().powf(1.0 / scn.cfg.num_satellites as f64) - 1.0
            }
            Some(snap) => {
                let user = sample_sphere_point(rng);
                let spin = std::f64::consts::TAU * rng.random::<f64>();
                let user = user.rotate_z(-spin);
                let mut best = f64::NEG_INFINITY;
                for p in &snap.positions {
                    let d = p.dot(user);
                    if d > best {
                        best = d;
                    }
                }
                best
            }
        };
        if cos_contact < self.cos_phi_max {
            // No satellite inside the footprint limit.
            return false;
        }
        let phi_o = cos_contact.clamp(-1.0, 1.0).acos();
        let signal = scn.radio.eirp
            * freespace_gain(phi_o, &scn.geo, &scn.sat)
            * sample_excess_gain(phi_o, &scn.geo, &scn.sat, rng);

        let mut interference = 0.0;
        if let Some(poisson) = &self.interferers {
            // Active devices on the footprint cap around the serving
            // satellite's nadir; uniform on the cap means cos(angle) is
            // uniform. The test user's own transmission is not part of the
            // field.
            let count = poisson.sample(rng) as u64;
            for _ in 0..count {
                let cos_phi = 1.0 - rng.random::<f64>() * self.one_minus_cos_phi_max;
                interference +=
                    self.cap.freespace_at_cos(cos_phi) * self.cap.excess_at_cos(cos_phi, rng);
            }
            interference *= scn.access.kappa_sat * scn.radio.eirp;
        }

        signal >= scn.radio.target_sinr * (interference + scn.radio.sat_noise)
    }
}

struct TerrSetup<'a> {
    scn: &'a Scenario,
    pi_lambda_b: f64,
    r_max: f64,
    interferers: Option<Poisson<f64>>,
    /// `b * l_o`, shared by signal and interferers.
    gain_scale: f64,
}

impl<'a> TerrSetup<'a> {
    fn new(scn: &'a Scenario) -> Self {
        let r_max = truncation_radius(scn);
        let mean = scn.access.duty_cycle
            * scn.dens.device_density
            * std::f64::consts::PI
            * r_max
            * r_max;
        let interferers = if mean > 0.0 {
            Some(Poisson::new(mean).expect("positive finite mean"))
        } else {
            None
        };
        Self {
            scn,
            pi_lambda_b: std::f64::consts::PI * scn.dens.bs_density,
            r_max,
            interferers,
            gain_scale: scn.terr.model_constant * scn.terr.path_gain_constant,
        }
    }

    fn trial(&self, rng: &mut ChaCha8Rng) -> bool {
        let scn = self.scn;
        let a = scn.terr.path_loss_exponent;
        // Nearest-BS distance by inverting its Rayleigh-form CDF.
        let r = (-(1.0 - rng.random::<f64>()).ln() / self.pi_lambda_b).sqrt();
        let signal = scn.radio.eirp * sample_fading(rng) * self.gain_scale * r.powf(-a);

        let mut interference = 0.0;
        if let Some(poisson) = &self.interferers {
            // Active devices as a planar field around the serving BS, no
            // exclusion zone; positions uniform in the truncation disc.
            let count = poisson.sample(rng) as u64;
            for _ in 0..count {
                let ri = self.r_max * rng.random::<f64>().sqrt();
                interference += sample_fading(rng) * ri.powf(-a);
            }
            interference *= scn.access.kappa_bs * scn.radio.eirp * self.gain_scale;
        }

        signal >= scn.radio.target_sinr * (interference + scn.radio.bs_noise)
    }
}

/// Truncation radius for the planar interferer field.
///
/// Dropping interferers beyond radius `R` removes an expected power of
/// `E[I_tail] = 2 pi D lambda_d kappa_b P b l_o R^(2-a) / (a - 2)`. The
/// radius is the smaller of the two values that make the resulting bias on
/// the coverage estimate negligible:
///
/// - noise rule: `E[I_tail] <= 1e-3 * W_b` (success probabilities respond
///   to interference at most at rate `1/(e W_b)` when noise is present);
/// - threshold rule: `E[s(R_o)] * E[I_tail] <= 1e-3`, using
///   `E[R_o^a] = Gamma(1 + a/2) (pi lambda_b)^(-a/2)`, which also covers
///   the noise-free case.
fn truncation_radius(scn: &Scenario) -> f64 {
    let a = scn.terr.path_loss_exponent;
    let active = scn.access.duty_cycle * scn.dens.device_density;
    let unit_power = scn.access.kappa_bs
        * scn.radio.eirp
        * scn.terr.model_constant
        * scn.terr.path_gain_constant;
    if active == 0.0 || unit_power == 0.0 {
        return 0.0;
    }
    let q = std::f64::consts::TAU * active * unit_power / (a - 2.0);
    let inv_exp = 1.0 / (a - 2.0);

    let noise_rule = if scn.radio.bs_noise > 0.0 {
        (q / (1e-3 * scn.radio.bs_noise)).powf(inv_exp)
    } else {
        f64::INFINITY
    };

    let mean_r_pow_a = libm::tgamma(1.0 + 0.5 * a)
        * (std::f64::consts::PI * scn.dens.bs_density).powf(-0.5 * a);
    let s_mean = scn.radio.target_sinr * mean_r_pow_a
        / (scn.radio.eirp * scn.terr.model_constant * scn.terr.path_gain_constant);
    let threshold_rule = (q * s_mean / 1e-3).powf(inv_exp);

    noise_rule.min(threshold_rule)
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    SatOnly,
    TerrOnly,
    Both,
}

fn run(
    scn: &Scenario,
    model: &ConstellationModel,
    trials: u64,
    seed: u64,
    mode: Mode,
) -> Result<(u64, u64, u64)> {
    if trials < 1 {
        return Err(Error::invalid("trials", trials as f64, "must be >= 1"));
    }
    scn.validate()?;
    let sat_setup = if mode != Mode::TerrOnly {
        Some(SatSetup::new(scn, model)?)
    } else {
        None
    };
    let terr_setup = if mode != Mode::SatOnly {
        Some(TerrSetup::new(scn))
    } else {
        None
    };

    let counts = (0..trials)
        .into_par_iter()
        .map(|i| {
            let sat_ok = sat_setup
                .as_ref()
                .map(|s| s.trial(&mut trial_rng(seed, 2 * i)))
                .unwrap_or(false);
            let terr_ok = terr_setup
                .as_ref()
                .map(|t| t.trial(&mut trial_rng(seed, 2 * i + 1)))
                .unwrap_or(false);
            (
                u64::from(sat_ok),
                u64::from(terr_ok),
                u64::from(sat_ok || terr_ok),
            )
        })
        .reduce(
            || (0, 0, 0),
            |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2),
        );
    Ok(counts)
}

/// Estimate the satellite-uplink coverage probability.
pub fn simulate_sat_link(
    scn: &Scenario,
    model: &ConstellationModel,
    trials: u64,
    seed: u64,
) -> Result<MCEstimate> {
    let (sat, _, _) = run(scn, model, trials, seed, Mode::SatOnly)?;
    Ok(MCEstimate::from_counts(sat, trials, seed))
}

/// Estimate the terrestrial-uplink coverage probability.
pub fn simulate_terr_link(scn: &Scenario, trials: u64, seed: u64) -> Result<MCEstimate> {
    let (_, terr, _) = run(
        scn,
        &ConstellationModel::UniformRandom,
        trials,
        seed,
        Mode::TerrOnly,
    )?;
    Ok(MCEstimate::from_counts(terr, trials, seed))
}

/// Estimate the hybrid coverage probability: each trial simulates both
/// links with independent randomness and succeeds when either does.
pub fn simulate_hybrid(
    scn: &Scenario,
    model: &ConstellationModel,
    trials: u64,
    seed: u64,
) -> Result<MCEstimate> {
    let (_, _, hybrid) = run(scn, model, trials, seed, Mode::Both)?;
    Ok(MCEstimate::from_counts(hybrid, trials, seed))
}

/// All three estimates from one pass over the trials. Per-trial streams
/// match the single-link runs, so the marginals agree exactly with
/// [`simulate_sat_link`] and [`simulate_terr_link`] at the same seed.
pub fn simulate_joint(
    scn: &Scenario,
    model: &ConstellationModel,
    trials: u64,
    seed: u64,
) -> Result<JointEstimate> {
    let (sat, terr, hybrid) = run(scn, model, trials, seed, Mode::Both)?;
    Ok(JointEstimate {
        sat: MCEstimate::from_counts(sat, trials, seed),
        terr: MCEstimate::from_counts(terr, trials, seed),
        hybrid: MCEstimate::from_counts(hybrid, trials, seed),
    })
}
