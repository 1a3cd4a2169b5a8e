//! Command implementations: each produces a [`Table`] ready to render.

use crate::output::{Cell, Table};
use crate::scenario_io::{scenario_hash, ScenarioFile};
use crate::{AxisArg, CliError};
use hybridcov::constellation::ConstellationModel;
use hybridcov::coverage::hybrid_coverage;
use hybridcov::designer::{operating_curve as solve_curve, SweepAxis};
use hybridcov::mcsim::simulate_joint;
use hybridcov::units::{per_km2_to_per_m2, per_m2_to_per_km2};
use hybridcov::Scenario;

const VERSION: &str = env!("CARGO_PKG_VERSION");

impl AxisArg {
    fn label(self) -> &'static str {
        match self {
            AxisArg::BsDensity => "bs_density_per_km2",
            AxisArg::DeviceDensity => "device_density_per_km2",
            AxisArg::NumSatellites => "num_satellites",
        }
    }

    /// Returns the scenario with this axis set to `value` (config units).
    fn apply(self, base: &Scenario, value: f64) -> Result<Scenario, CliError> {
        let mut scn = base.clone();
        match self {
            AxisArg::BsDensity => scn.dens.bs_density = per_km2_to_per_m2(value),
            AxisArg::DeviceDensity => scn.dens.device_density = per_km2_to_per_m2(value),
            AxisArg::NumSatellites => {
                if value < 1.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                    return Err(CliError::Config(format!(
                        "num-satellites sweep values must be positive integers, got {value}"
                    )));
                }
                scn.cfg.num_satellites = value as u32;
            }
        }
        scn.validate()?;
        Ok(scn)
    }
}

fn base_table(
    file: &ScenarioFile,
    command: &'static str,
    axis: Option<AxisArg>,
    columns: Vec<&'static str>,
) -> Table {
    let mut table = Table::new(columns);
    table.meta("tool_version", VERSION);
    table.meta("scenario_hash", scenario_hash(file));
    table.meta("command", command);
    if let Some(axis) = axis {
        table.meta("axis", axis.label());
    }
    table
}

pub fn coverage_sweep(
    file: &ScenarioFile,
    axis: AxisArg,
    values: &[f64],
) -> Result<Table, CliError> {
    let mut table = base_table(
        file,
        "coverage-sweep",
        Some(axis),
        vec!["axis", "value", "p_sat", "p_terr", "p_hybrid"],
    );
    for &value in values {
        let scn = axis.apply(&file.scenario, value)?;
        let cov = hybrid_coverage(&scn)?;
        table.push_row(vec![
            Cell::Text(axis.label()),
            Cell::Float(value),
            Cell::Float(cov.p_sat),
            Cell::Float(cov.p_terr),
            Cell::Float(cov.p_hybrid),
        ]);
    }
    Ok(table)
}

pub fn simulate(
    file: &ScenarioFile,
    axis: AxisArg,
    values: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Table, CliError> {
    let mut table = base_table(
        file,
        "simulate",
        Some(axis),
        vec![
            "axis",
            "value",
            "p_sat",
            "p_terr",
            "p_hybrid",
            "mc_p_sat",
            "mc_ci_sat",
            "mc_p_terr",
            "mc_ci_terr",
            "mc_p_hybrid",
            "mc_ci_hybrid",
            "trials",
            "seed",
        ],
    );
    table.meta("trials", trials);
    table.meta("seed", seed);
    table.meta("constellation", "uniform_random");
    for &value in values {
        let scn = axis.apply(&file.scenario, value)?;
        let cov = hybrid_coverage(&scn)?;
        let mc = simulate_joint(&scn, &ConstellationModel::UniformRandom, trials, seed)?;
        table.push_row(vec![
            Cell::Text(axis.label()),
            Cell::Float(value),
            Cell::Float(cov.p_sat),
            Cell::Float(cov.p_terr),
            Cell::Float(cov.p_hybrid),
            Cell::Float(mc.sat.mean),
            Cell::Float(mc.sat.ci_halfwidth),
            Cell::Float(mc.terr.mean),
            Cell::Float(mc.terr.ci_halfwidth),
            Cell::Float(mc.hybrid.mean),
            Cell::Float(mc.hybrid.ci_halfwidth),
            Cell::Int(trials),
            Cell::Int(seed),
        ]);
    }
    Ok(table)
}

pub fn operating_curve(
    file: &ScenarioFile,
    axis: AxisArg,
    values: &[f64],
    target: f64,
) -> Result<Table, CliError> {
    let (sweep_axis, solver_values): (SweepAxis, Vec<f64>) = match axis {
        AxisArg::BsDensity => (
            SweepAxis::BsDensity,
            values.iter().map(|v| per_km2_to_per_m2(*v)).collect(),
        ),
        AxisArg::NumSatellites => (SweepAxis::NumSatellites, values.to_vec()),
        AxisArg::DeviceDensity => {
            return Err(CliError::Config(
                "operating-curve sweeps bs-density or num-satellites".into(),
            ))
        }
    };
    let mut table = base_table(
        file,
        "operating-curve",
        Some(axis),
        vec![
            "axis",
            "value",
            "target",
            "n_sats",
            "bs_density_per_km2",
            "achieved",
            "feasible",
            "ceiling",
        ],
    );
    table.meta("target", target);
    let curve = solve_curve(target, sweep_axis, &solver_values, &file.scenario)?;
    for (point, &value) in curve.iter().zip(values) {
        match &point.point {
            Some(op) => table.push_row(vec![
                Cell::Text(axis.label()),
                Cell::Float(value),
                Cell::Float(target),
                Cell::Int(op.n_sats),
                Cell::Float(per_m2_to_per_km2(op.bs_density)),
                Cell::Float(op.achieved),
                Cell::Bool(true),
                Cell::Empty,
            ]),
            None => table.push_row(vec![
                Cell::Text(axis.label()),
                Cell::Float(value),
                Cell::Float(target),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Bool(false),
                Cell::Float(point.ceiling.unwrap_or(f64::NAN)),
            ]),
        }
    }
    Ok(table)
}

pub fn compare_constellations(
    file: &ScenarioFile,
    values: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Table, CliError> {
    let mut table = base_table(
        file,
        "compare-constellations",
        None,
        vec![
            "n_sats",
            "kind",
            "p_sat_analytic",
            "p_hybrid_analytic",
            "mc_p_sat",
            "mc_ci_sat",
            "mc_p_hybrid",
            "mc_ci_hybrid",
            "trials",
            "seed",
        ],
    );
    table.meta("trials", trials);
    table.meta("seed", seed);
    for &value in values {
        let scn = AxisArg::NumSatellites.apply(&file.scenario, value)?;
        let analytic = hybrid_coverage(&scn)?;
        let models = [
            ConstellationModel::UniformRandom,
            file.walker.delta_model(),
            file.walker.star_model(),
        ];
        for model in models {
            let mc = simulate_joint(&scn, &model, trials, seed)?;
            table.push_row(vec![
                Cell::Int(value as u64),
                Cell::Text(model.kind().as_str()),
                Cell::Float(analytic.p_sat),
                Cell::Float(analytic.p_hybrid),
                Cell::Float(mc.sat.mean),
                Cell::Float(mc.sat.ci_halfwidth),
                Cell::Float(mc.hybrid.mean),
                Cell::Float(mc.hybrid.ci_halfwidth),
                Cell::Int(trials),
                Cell::Int(seed),
            ]);
        }
    }
    Ok(table)
}
