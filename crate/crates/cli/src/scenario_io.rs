//! Scenario files: flat `key = value unit` text, one parameter per line,
//! `#` comments. Densities are per km^2, powers dBm, gains dB, angles
//! degrees, lengths km; everything is converted to SI on load and back on
//! save. Missing keys take the built-in defaults, unknown keys are errors.

use hybridcov::channel::{RadioParams, SatChannelModel, TerrChannelModel};
use hybridcov::constellation::{ConstellationModel, WalkerPattern};
use hybridcov::geomodel::{ConstellationConfig, EarthGeometry, GroundDensities};
use hybridcov::linkstats::AccessModel;
use hybridcov::units;
use hybridcov::Scenario;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] hybridcov::Error),
}

/// Deterministic Walker layout settings carried next to the scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkerSettings {
    /// Inclination of the delta layout, radians.
    pub inclination_delta: f64,
    /// Inclination of the star layout, radians.
    pub inclination_star: f64,
    /// Plane count; `None` derives it from the satellite count.
    pub planes: Option<u32>,
    /// Inter-plane phasing factor.
    pub phasing: f64,
}

impl Default for WalkerSettings {
    fn default() -> Self {
        Self {
            inclination_delta: 86.4f64.to_radians(),
            inclination_star: 53f64.to_radians(),
            planes: None,
            phasing: 0.0,
        }
    }
}

impl WalkerSettings {
    pub fn delta_model(&self) -> ConstellationModel {
        ConstellationModel::Walker {
            pattern: WalkerPattern::Delta,
            inclination: self.inclination_delta,
            planes: self.planes,
            phasing: self.phasing,
        }
    }

    pub fn star_model(&self) -> ConstellationModel {
        ConstellationModel::Walker {
            pattern: WalkerPattern::Star,
            inclination: self.inclination_star,
            planes: self.planes,
            phasing: self.phasing,
        }
    }
}

/// Everything a scenario file configures.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioFile {
    pub scenario: Scenario,
    pub walker: WalkerSettings,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Unit {
    Km,
    GHz,
    Db,
    Dbm,
    Percent,
    Degrees,
    PerKm2,
    Bare,
}

impl Unit {
    fn accepts(self, token: &str) -> bool {
        match self {
            Unit::Km => token == "km",
            Unit::GHz => token == "GHz",
            Unit::Db => token == "dB",
            Unit::Dbm => token == "dBm",
            Unit::Percent => token == "%",
            Unit::Degrees => token == "deg" || token == "degrees",
            Unit::PerKm2 => token == "per_km2",
            Unit::Bare => false,
        }
    }

    fn canonical(self) -> &'static str {
        match self {
            Unit::Km => "km",
            Unit::GHz => "GHz",
            Unit::Db => "dB",
            Unit::Dbm => "dBm",
            Unit::Percent => "%",
            Unit::Degrees => "deg",
            Unit::PerKm2 => "per_km2",
            Unit::Bare => "",
        }
    }
}

struct KeySpec {
    name: &'static str,
    aliases: &'static [&'static str],
    unit: Unit,
}

const KEYS: &[KeySpec] = &[
    KeySpec { name: "earth_radius", aliases: &["R_earth"], unit: Unit::Km },
    KeySpec { name: "orbit_height", aliases: &["h"], unit: Unit::Km },
    KeySpec { name: "num_satellites", aliases: &["N_s"], unit: Unit::Bare },
    KeySpec { name: "beamwidth", aliases: &["psi"], unit: Unit::Degrees },
    KeySpec { name: "bs_density", aliases: &["lambda_b"], unit: Unit::PerKm2 },
    KeySpec { name: "device_density", aliases: &["lambda_d"], unit: Unit::PerKm2 },
    KeySpec { name: "carrier_frequency", aliases: &["f"], unit: Unit::GHz },
    KeySpec { name: "air_absorption", aliases: &["l_air"], unit: Unit::Db },
    KeySpec { name: "los_beta", aliases: &["beta"], unit: Unit::Bare },
    KeySpec { name: "mu_los", aliases: &[], unit: Unit::Db },
    KeySpec { name: "sigma_los", aliases: &[], unit: Unit::Db },
    KeySpec { name: "mu_nlos", aliases: &[], unit: Unit::Db },
    KeySpec { name: "sigma_nlos", aliases: &[], unit: Unit::Db },
    KeySpec { name: "path_loss_exponent", aliases: &["a"], unit: Unit::Bare },
    KeySpec { name: "model_constant", aliases: &["b"], unit: Unit::Db },
    KeySpec { name: "eirp", aliases: &["P"], unit: Unit::Dbm },
    KeySpec { name: "target_sinr", aliases: &["gamma_o"], unit: Unit::Db },
    KeySpec { name: "bs_noise", aliases: &["W_b"], unit: Unit::Dbm },
    KeySpec { name: "sat_noise", aliases: &["W_s"], unit: Unit::Dbm },
    KeySpec { name: "kappa_bs", aliases: &["kappa_b"], unit: Unit::Db },
    KeySpec { name: "kappa_sat", aliases: &["kappa_s"], unit: Unit::Db },
    KeySpec { name: "duty_cycle", aliases: &["D"], unit: Unit::Percent },
    KeySpec { name: "walker_inclination_delta", aliases: &[], unit: Unit::Degrees },
    KeySpec { name: "walker_inclination_star", aliases: &[], unit: Unit::Degrees },
    KeySpec { name: "walker_planes", aliases: &[], unit: Unit::Bare },
    KeySpec { name: "walker_phasing", aliases: &[], unit: Unit::Bare },
];

fn lookup(key: &str) -> Option<&'static KeySpec> {
    KEYS.iter()
        .find(|spec| spec.name == key || spec.aliases.contains(&key))
}

pub fn load_scenario(path: &Path) -> Result<ScenarioFile, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile, ScenarioError> {
    let mut raw: HashMap<&'static str, f64> = HashMap::new();
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = full_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| ScenarioError::Parse {
            line: line_no,
            message,
        };
        let (key, rhs) = line
            .split_once('=')
            .ok_or_else(|| parse_err("expected `key = value unit`".into()))?;
        let key = key.trim();
        let spec = lookup(key).ok_or_else(|| parse_err(format!("unknown key `{key}`")))?;

        let mut tokens = rhs.split_whitespace();
        let mut value_token = tokens
            .next()
            .ok_or_else(|| parse_err(format!("`{key}` has no value")))?
            .to_string();
        let mut unit_token = tokens.next().map(str::to_string);
        if let Some(extra) = tokens.next() {
            return Err(parse_err(format!("unexpected trailing token `{extra}`")));
        }
        // Percentages may be glued to the number, e.g. `150%`.
        if unit_token.is_none() && value_token.ends_with('%') {
            value_token.pop();
            unit_token = Some("%".into());
        }

        let value: f64 = value_token
            .parse()
            .map_err(|_| parse_err(format!("`{value_token}` is not a number")))?;

        match (&unit_token, spec.unit) {
            (None, Unit::Bare) => {}
            (None, unit) => {
                return Err(parse_err(format!(
                    "`{key}` requires its unit `{}`",
                    unit.canonical()
                )))
            }
            (Some(tok), unit) if unit.accepts(tok) => {}
            (Some(tok), _) => {
                return Err(parse_err(format!("wrong unit `{tok}` for `{key}`")))
            }
        }

        if raw.insert(spec.name, value).is_some() {
            return Err(parse_err(format!("duplicate key `{}`", spec.name)));
        }
    }
    build(&raw)
}

fn get(raw: &HashMap<&'static str, f64>, key: &str, default: f64) -> f64 {
    raw.get(key).copied().unwrap_or(default)
}

fn count_value(value: f64, name: &'static str) -> Result<u32, ScenarioError> {
    if value < 0.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
        return Err(ScenarioError::Parse {
            line: 0,
            message: format!("`{name}` must be a nonnegative integer, got {value}"),
        });
    }
    Ok(value as u32)
}

fn build(raw: &HashMap<&'static str, f64>) -> Result<ScenarioFile, ScenarioError> {
    let geo = EarthGeometry::new(
        1e3 * get(raw, "earth_radius", 6371.0),
        1e3 * get(raw, "orbit_height", 500.0),
    )?;
    let cfg = ConstellationConfig::new(
        count_value(get(raw, "num_satellites", 500.0), "num_satellites")?,
        get(raw, "beamwidth", 360.0).to_radians(),
    )?;
    let dens = GroundDensities::new(
        units::per_km2_to_per_m2(get(raw, "bs_density", 0.01)),
        units::per_km2_to_per_m2(get(raw, "device_density", 1.0)),
    )?;
    let carrier_frequency = 1e9 * get(raw, "carrier_frequency", 2.0);
    let sat = SatChannelModel::new(
        carrier_frequency,
        units::db_to_linear(-get(raw, "air_absorption", 0.0)),
        get(raw, "los_beta", 2.3),
        get(raw, "mu_los", 0.0),
        get(raw, "sigma_los", 2.8),
        get(raw, "mu_nlos", 12.0),
        get(raw, "sigma_nlos", 9.0),
    )?;
    let terr = TerrChannelModel::new(
        get(raw, "path_loss_exponent", 3.68),
        units::db_to_linear(get(raw, "model_constant", 0.0)),
        carrier_frequency,
    )?;
    let radio = RadioParams::new(
        units::dbm_to_watts(get(raw, "eirp", 23.0)),
        units::db_to_linear(get(raw, "target_sinr", -20.0)),
        units::dbm_to_watts(get(raw, "sat_noise", -130.0)),
        units::dbm_to_watts(get(raw, "bs_noise", -117.0)),
    )?;
    let access = AccessModel::new(
        units::db_to_linear(get(raw, "kappa_sat", -20.0)),
        units::db_to_linear(get(raw, "kappa_bs", -20.0)),
        get(raw, "duty_cycle", 1.0) / 100.0,
    )?;
    let scenario = Scenario::new(geo, cfg, dens, sat, terr, radio, access)?;

    let planes = count_value(get(raw, "walker_planes", 0.0), "walker_planes")?;
    let walker = WalkerSettings {
        inclination_delta: get(raw, "walker_inclination_delta", 86.4).to_radians(),
        inclination_star: get(raw, "walker_inclination_star", 53.0).to_radians(),
        planes: (planes > 0).then_some(planes),
        phasing: get(raw, "walker_phasing", 0.0),
    };
    Ok(ScenarioFile { scenario, walker })
}

/// Renders the scenario back to the file format, all keys in canonical
/// order and units. `parse_scenario(save_scenario(x))` reproduces `x` to
/// floating-point round-off.
pub fn save_scenario(file: &ScenarioFile) -> String {
    let s = &file.scenario;
    let w = &file.walker;
    let rows: Vec<(&str, f64)> = vec![
        ("earth_radius", s.geo.earth_radius / 1e3),
        ("orbit_height", s.geo.orbit_height / 1e3),
        ("num_satellites", s.cfg.num_satellites as f64),
        ("beamwidth", s.cfg.beamwidth.to_degrees()),
        ("bs_density", units::per_m2_to_per_km2(s.dens.bs_density)),
        ("device_density", units::per_m2_to_per_km2(s.dens.device_density)),
        ("carrier_frequency", s.sat.carrier_frequency / 1e9),
        ("air_absorption", -units::linear_to_db(s.sat.air_absorption_gain)),
        ("los_beta", s.sat.los_beta),
        ("mu_los", s.sat.mu_los),
        ("sigma_los", s.sat.sigma_los),
        ("mu_nlos", s.sat.mu_nlos),
        ("sigma_nlos", s.sat.sigma_nlos),
        ("path_loss_exponent", s.terr.path_loss_exponent),
        ("model_constant", units::linear_to_db(s.terr.model_constant)),
        ("eirp", units::watts_to_dbm(s.radio.eirp)),
        ("target_sinr", units::linear_to_db(s.radio.target_sinr)),
        ("bs_noise", units::watts_to_dbm(s.radio.bs_noise)),
        ("sat_noise", units::watts_to_dbm(s.radio.sat_noise)),
        ("kappa_bs", units::linear_to_db(s.access.kappa_bs)),
        ("kappa_sat", units::linear_to_db(s.access.kappa_sat)),
        ("duty_cycle", 100.0 * s.access.duty_cycle),
        ("walker_inclination_delta", w.inclination_delta.to_degrees()),
        ("walker_inclination_star", w.inclination_star.to_degrees()),
        ("walker_planes", w.planes.unwrap_or(0) as f64),
        ("walker_phasing", w.phasing),
    ];
    let mut out = String::new();
    for (key, value) in rows {
        let unit = lookup(key).expect("every saved key is known").unit;
        match unit {
            Unit::Bare => writeln!(out, "{key} = {value}").unwrap(),
            u => writeln!(out, "{key} = {value} {}", u.canonical()).unwrap(),
        }
    }
    out
}

/// Short content hash of the canonical scenario text, for output metadata.
pub fn scenario_hash(file: &ScenarioFile) -> String {
    let digest = Sha256::digest(save_scenario(file).as_bytes());
    let mut hex = String::with_capacity(16);
    for byte in &digest[..8] {
        write!(hex, "{byte:02x}").unwrap();
    }
    hex
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_all_defaults() {
        let file = parse_scenario("").unwrap();
        let s = &file.scenario;
        assert_eq!(s.geo.earth_radius, 6_371_000.0);
        assert_eq!(s.geo.orbit_height, 500_000.0);
        assert_eq!(s.cfg.num_satellites, 500);
        assert!((s.cfg.beamwidth - std::f64::consts::TAU).abs() < 1e-12);
        assert!((s.sat.carrier_frequency - 2e9).abs() < 1.0);
        assert_eq!(s.sat.air_absorption_gain, 1.0);
        assert!((s.sat.los_beta - 2.3).abs() < 1e-12);
        assert_eq!(s.sat.mu_los, 0.0);
        assert!((s.sat.sigma_los - 2.8).abs() < 1e-12);
        assert!((s.sat.mu_nlos - 12.0).abs() < 1e-12);
        assert!((s.sat.sigma_nlos - 9.0).abs() < 1e-12);
        assert!((s.terr.path_loss_exponent - 3.68).abs() < 1e-12);
        assert_eq!(s.terr.model_constant, 1.0);
        assert!((s.radio.eirp - 0.1995262314968879).abs() < 1e-12);
        assert!((s.radio.target_sinr - 0.01).abs() < 1e-15);
        assert!((s.radio.bs_noise - units::dbm_to_watts(-117.0)).abs() < 1e-25);
        assert!((s.radio.sat_noise - 1e-16).abs() < 1e-25);
        assert!((s.access.kappa_sat - 0.01).abs() < 1e-15);
        assert!((s.access.kappa_bs - 0.01).abs() < 1e-15);
        assert!((s.access.duty_cycle - 0.01).abs() < 1e-15);
        assert!((s.dens.bs_density - 1e-8).abs() < 1e-20);
        assert!((s.dens.device_density - 1e-6).abs() < 1e-18);
        assert_eq!(file.walker, WalkerSettings::default());
    }

    #[test]
    fn dbm_conversion_example() {
        let file = parse_scenario("P = 23 dBm\n").unwrap();
        assert!((file.scenario.radio.eirp - 0.1995).abs() < 1e-4);
    }

    #[test]
    fn out_of_range_duty_cycle_is_rejected() {
        let err = parse_scenario("duty_cycle = 150%\n").unwrap_err();
        assert!(err.to_string().contains("duty_cycle"), "{err}");
    }

    #[test]
    fn junk_lines_are_diagnosed_with_line_numbers() {
        let err = parse_scenario("# fine\nnot_a_key = 3\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Parse { line: 2, .. }), "{err}");

        let err = parse_scenario("eirp = 23\n").unwrap_err();
        assert!(err.to_string().contains("requires its unit"), "{err}");

        let err = parse_scenario("eirp = 23 dB\n").unwrap_err();
        assert!(err.to_string().contains("wrong unit"), "{err}");

        let err = parse_scenario("h = 500 km\norbit_height = 550 km\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");

        let err = parse_scenario("h = fast km\n").unwrap_err();
        assert!(err.to_string().contains("not a number"), "{err}");
    }

    #[test]
    fn comments_blanks_and_aliases_parse() {
        let text = "
# A denser study
N_s = 1000          # alias for num_satellites
lambda_b = 0.1 per_km2
D = 10 %
gamma_o = -10 dB
";
        let file = parse_scenario(text).unwrap();
        assert_eq!(file.scenario.cfg.num_satellites, 1000);
        assert!((file.scenario.dens.bs_density - 1e-7).abs() < 1e-19);
        assert!((file.scenario.access.duty_cycle - 0.1).abs() < 1e-15);
        assert!((file.scenario.radio.target_sinr - 0.1).abs() < 1e-15);
    }

    #[test]
    fn save_then_load_is_identity() {
        let text = "
num_satellites = 744
beamwidth = 97.5 deg
lambda_b = 0.035 per_km2
lambda_d = 2.5 per_km2
orbit_height = 615 km
f = 1.8 GHz
l_air = 0.4 dB
beta = 2.1
mu_los = 0.5 dB
sigma_los = 3.1 dB
mu_nlos = 11 dB
sigma_nlos = 8.5 dB
a = 3.2
b = -2 dB
P = 20 dBm
gamma_o = -15 dB
W_b = -110 dBm
W_s = -126 dBm
kappa_b = -15 dB
kappa_s = -25 dB
D = 5 %
walker_inclination_delta = 70 deg
walker_inclination_star = 87 deg
walker_planes = 12
walker_phasing = 0.5
";
        let original = parse_scenario(text).unwrap();
        let round_tripped = parse_scenario(&save_scenario(&original)).unwrap();

        let a = &original.scenario;
        let b = &round_tripped.scenario;
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300);
        assert!(close(a.geo.earth_radius, b.geo.earth_radius));
        assert!(close(a.geo.orbit_height, b.geo.orbit_height));
        assert_eq!(a.cfg.num_satellites, b.cfg.num_satellites);
        assert!(close(a.cfg.beamwidth, b.cfg.beamwidth));
        assert!(close(a.dens.bs_density, b.dens.bs_density));
        assert!(close(a.dens.device_density, b.dens.device_density));
        assert!(close(a.sat.carrier_frequency, b.sat.carrier_frequency));
        assert!(close(a.sat.air_absorption_gain, b.sat.air_absorption_gain));
        assert!(close(a.sat.los_beta, b.sat.los_beta));
        assert!(close(a.sat.mu_los, b.sat.mu_los));
        assert!(close(a.sat.sigma_los, b.sat.sigma_los));
        assert!(close(a.sat.mu_nlos, b.sat.mu_nlos));
        assert!(close(a.sat.sigma_nlos, b.sat.sigma_nlos));
        assert!(close(a.terr.path_loss_exponent, b.terr.path_loss_exponent));
        assert!(close(a.terr.model_constant, b.terr.model_constant));
        assert!(close(a.radio.eirp, b.radio.eirp));
        assert!(close(a.radio.target_sinr, b.radio.target_sinr));
        assert!(close(a.radio.bs_noise, b.radio.bs_noise));
        assert!(close(a.radio.sat_noise, b.radio.sat_noise));
        assert!(close(a.access.kappa_bs, b.access.kappa_bs));
        assert!(close(a.access.kappa_sat, b.access.kappa_sat));
        assert!(close(a.access.duty_cycle, b.access.duty_cycle));
        let (wa, wb) = (&original.walker, &round_tripped.walker);
        assert!(close(wa.inclination_delta, wb.inclination_delta));
        assert!(close(wa.inclination_star, wb.inclination_star));
        assert_eq!(wa.planes, wb.planes);
        assert!(close(wa.phasing, wb.phasing));
    }

    #[test]
    fn hash_tracks_content() {
        let a = parse_scenario("").unwrap();
        let b = parse_scenario("N_s = 1000\n").unwrap();
        assert_eq!(scenario_hash(&a).len(), 16);
        assert_eq!(scenario_hash(&a), scenario_hash(&a));
        assert_ne!(scenario_hash(&a), scenario_hash(&b));
    }
}
