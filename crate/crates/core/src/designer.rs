//! Inverse network design: the smallest constellation for a given BS
//! density, the smallest BS density for a given constellation, and the
//! operating curves tracing a fixed quality-of-service target.
//!
//! Both solvers reduce the hybrid target to a per-link target
//! `t = (p_c - p_other) / (1 - p_other)` and then root-find on a provably
//! monotone single-link coverage. Monotone bisection is used instead of a
//! derivative-based method: it is globally convergent and needs no gradient
//! estimates; the contract is the root, not the algorithm.

use crate::coverage::{terr_coverage_with_density, SatLinkContext, Scenario};
use crate::error::{Error, Result};

/// A `(satellite count, BS density)` pair meeting a coverage target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub n_sats: u64,
    /// BS density in per square meter.
    pub bs_density: f64,
    pub target_qos: f64,
    /// Hybrid coverage actually delivered at this point.
    pub achieved: f64,
}

/// Result of [`required_satellites`]: the count plus the hybrid coverage on
/// both sides of the integer step, so callers can see the granularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatSolution {
    pub n_sats: u64,
    /// Hybrid coverage at `n_sats`.
    pub achieved: f64,
    /// Hybrid coverage at `n_sats - 1` (equals `achieved` when no
    /// satellites are needed).
    pub achieved_below: f64,
}

/// Result of [`required_bs_density`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsSolution {
    /// BS density in per square meter; 0 when satellites alone suffice.
    pub bs_density: f64,
    /// Hybrid coverage at the returned density.
    pub achieved: f64,
}

/// Lower end of the density bracket, returned as-is when any positive
/// density meets the target (e.g. no interference and no noise).
pub const BS_DENSITY_BRACKET_LO: f64 = 1e-18;
/// Upper end of the density bracket; coverage this deep into the network is
/// within rounding of the interference-limited ceiling.
pub const BS_DENSITY_BRACKET_HI: f64 = 1e-2;

/// Satellite-count search cap; coverage has flattened to its ceiling many
/// octaves earlier in any feasible case.
const MAX_SATELLITES: u64 = 1 << 40;

fn hybrid_of(p_a: f64, p_b: f64) -> f64 {
    1.0 - (1.0 - p_a) * (1.0 - p_b)
}

fn check_target(target: f64) -> Result<()> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::invalid("target", target, "must be in (0, 1)"));
    }
    Ok(())
}

/// Minimum satellite count so that the hybrid coverage at the given BS
/// density reaches `target`. The scenario's own count and BS density are
/// ignored in favor of the arguments.
///
/// Returns 0 when the terrestrial link alone suffices. Errors with
/// [`Error::Infeasible`] when the required satellite-side coverage is at or
/// above the large-constellation ceiling set by interference and noise.
pub fn required_satellites(
    target: f64,
    bs_density: f64,
    scn: &Scenario,
) -> Result<SatSolution> {
    check_target(target)?;
    let p_terr = terr_coverage_with_density(scn, bs_density)?;
    if p_terr >= target {
        return Ok(SatSolution {
            n_sats: 0,
            achieved: p_terr,
            achieved_below: p_terr,
        });
    }
    let per_link_target = (target - p_terr) / (1.0 - p_terr);

    let ctx = SatLinkContext::new(scn)?;
    let ceiling = ctx.coverage_ceiling();
    if per_link_target >= ceiling {
        return Err(Error::Infeasible {
            required: per_link_target,
            ceiling,
        });
    }

    // Bracket by doubling, then integer bisection on the monotone count.
    let mut hi: u64 = 1;
    while ctx.coverage(hi as f64)? < per_link_target {
        if hi >= MAX_SATELLITES {
            return Err(Error::Infeasible {
                required: per_link_target,
                ceiling: ctx.coverage(hi as f64)?,
            });
        }
        hi *= 2;
    }
    let mut lo = hi / 2; // coverage(lo) < target (lo = 0 gives coverage 0)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ctx.coverage(mid as f64)? >= per_link_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let p_sat = ctx.coverage(hi as f64)?;
    let p_sat_below = ctx.coverage((hi - 1) as f64)?;
    Ok(SatSolution {
        n_sats: hi,
        achieved: hybrid_of(p_sat, p_terr),
        achieved_below: hybrid_of(p_sat_below, p_terr),
    })
}

/// Minimum BS density so that the hybrid coverage with `n_sats` satellites
/// reaches `target`, to relative tolerance 1e-6. The scenario's own count
/// and BS density are ignored in favor of the arguments.
///
/// Returns density 0 when the constellation alone suffices, and the lower
/// bracket [`BS_DENSITY_BRACKET_LO`] when any positive density works.
/// Errors with [`Error::Infeasible`] when even [`BS_DENSITY_BRACKET_HI`]
/// falls short (the link is interference-limited below the target).
pub fn required_bs_density(target: f64, n_sats: u64, scn: &Scenario) -> Result<BsSolution> {
    check_target(target)?;
    let ctx = SatLinkContext::new(scn)?;
    let p_sat = ctx.coverage(n_sats as f64)?;
    if p_sat >= target {
        return Ok(BsSolution {
            bs_density: 0.0,
            achieved: p_sat,
        });
    }
    let per_link_target = (target - p_sat) / (1.0 - p_sat);

    let (mut lo, mut hi) = (BS_DENSITY_BRACKET_LO, BS_DENSITY_BRACKET_HI);
    if terr_coverage_with_density(scn, lo)? >= per_link_target {
        return Ok(BsSolution {
            bs_density: lo,
            achieved: hybrid_of(p_sat, terr_coverage_with_density(scn, lo)?),
        });
    }
    let p_hi = terr_coverage_with_density(scn, hi)?;
    if p_hi < per_link_target {
        return Err(Error::Infeasible {
            required: per_link_target,
            ceiling: p_hi,
        });
    }

    // Geometric bisection keeps the bracket well conditioned across the
    // sixteen decades between the ends.
    while hi - lo > 1e-6 * hi {
        let mid = (lo * hi).sqrt();
        if terr_coverage_with_density(scn, mid)? >= per_link_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(BsSolution {
        bs_density: hi,
        achieved: hybrid_of(p_sat, terr_coverage_with_density(scn, hi)?),
    })
}

/// Which parameter an operating-curve sweep varies; the other is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Sweep BS density (per m^2), solve the satellite count.
    BsDensity,
    /// Sweep the satellite count, solve the BS density.
    NumSatellites,
}

/// One sweep entry: either a solved operating point or the attainable
/// ceiling that made the target unreachable there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub sweep_value: f64,
    pub point: Option<OperatingPoint>,
    /// Per-link coverage ceiling reported for infeasible entries.
    pub ceiling: Option<f64>,
}

impl CurvePoint {
    pub fn feasible(&self) -> bool {
        self.point.is_some()
    }
}

/// Trace the operating curve for one QoS target over a sweep. Infeasible
/// sweep values are flagged in place, never dropped; genuine numerical
/// failures abort the sweep.
pub fn operating_curve(
    target: f64,
    axis: SweepAxis,
    values: &[f64],
    scn: &Scenario,
) -> Result<Vec<CurvePoint>> {
    check_target(target)?;
    if values.is_empty() {
        return Err(Error::invalid("values", 0.0, "sweep must be nonempty"));
    }
    let mut curve = Vec::with_capacity(values.len());
    for &v in values {
        let solved = match axis {
            SweepAxis::BsDensity => required_satellites(target, v, scn).map(|s| OperatingPoint {
                n_sats: s.n_sats,
                bs_density: v,
                target_qos: target,
                achieved: s.achieved,
            }),
            SweepAxis::NumSatellites => {
                if !(v >= 0.0 && v.fract() == 0.0) {
                    return Err(Error::invalid(
                        "values",
                        v,
                        "satellite counts must be nonnegative integers",
                    ));
                }
                required_bs_density(target, v as u64, scn).map(|s| OperatingPoint {
                    n_sats: v as u64,
                    bs_density: s.bs_density,
                    target_qos: target,
                    achieved: s.achieved,
                })
            }
        };
        match solved {
            Ok(point) => curve.push(CurvePoint {
                sweep_value: v,
                point: Some(point),
                ceiling: None,
            }),
            Err(Error::Infeasible { ceiling, .. }) => curve.push(CurvePoint {
                sweep_value: v,
                point: None,
                ceiling: Some(ceiling),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(curve)
}
