//! Satellite layout generators on the constellation sphere.
//!
//! Uniform random layouts realize the stochastic model; Walker-delta and
//! Walker-star are the deterministic comparisons. Positions are unit vectors
//! from the Earth center; the shell radius rides along as metadata.

use crate::error::{Error, Result};
use rand::Rng;
use std::io::{self, Write};

/// A direction from the Earth center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Rotation about the polar (z) axis by `angle` radians.
    pub fn rotate_z(self, angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        Self {
            x: cos * self.x - sin * self.y,
            y: sin * self.x + cos * self.y,
            z: self.z,
        }
    }
}

/// Which generator produced a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstellationKind {
    UniformRandom,
    WalkerDelta,
    WalkerStar,
}

impl ConstellationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstellationKind::UniformRandom => "uniform_random",
            ConstellationKind::WalkerDelta => "walker_delta",
            ConstellationKind::WalkerStar => "walker_star",
        }
    }
}

/// Walker plane-spacing family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkerPattern {
    /// Ascending nodes spread over the full 360 degrees.
    Delta,
    /// Ascending nodes spread over 180 degrees.
    Star,
}

/// A constellation layout plus the parameters needed to realize it per
/// Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstellationModel {
    /// Fresh uniform positions on the sphere each trial.
    UniformRandom,
    /// A fixed Walker layout, randomly rotated per trial.
    Walker {
        pattern: WalkerPattern,
        /// Orbital inclination in radians.
        inclination: f64,
        /// Number of orbital planes; `None` picks `default_planes`.
        planes: Option<u32>,
        /// Inter-plane phasing factor in Walker notation; 0 disables it.
        phasing: f64,
    },
}

impl ConstellationModel {
    /// Walker-delta defaults: 86.4 degree inclination, square plane count.
    pub fn walker_delta() -> Self {
        ConstellationModel::Walker {
            pattern: WalkerPattern::Delta,
            inclination: 86.4f64.to_radians(),
            planes: None,
            phasing: 0.0,
        }
    }

    /// Walker-star defaults: 53 degree inclination, square plane count.
    pub fn walker_star() -> Self {
        ConstellationModel::Walker {
            pattern: WalkerPattern::Star,
            inclination: 53f64.to_radians(),
            planes: None,
            phasing: 0.0,
        }
    }

    pub fn kind(&self) -> ConstellationKind {
        match self {
            ConstellationModel::UniformRandom => ConstellationKind::UniformRandom,
            ConstellationModel::Walker {
                pattern: WalkerPattern::Delta,
                ..
            } => ConstellationKind::WalkerDelta,
            ConstellationModel::Walker {
                pattern: WalkerPattern::Star,
                ..
            } => ConstellationKind::WalkerStar,
        }
    }
}

/// A realized set of satellite directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationSnapshot {
    pub positions: Vec<Vec3>,
    /// Shell radius `R + h` in meters.
    pub orbit_radius: f64,
    pub kind: ConstellationKind,
}

impl ConstellationSnapshot {
    /// Writes one `x,y,z` row per satellite (unit vectors).
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,z")?;
        for p in &self.positions {
            writeln!(out, "{},{},{}", p.x, p.y, p.z)?;
        }
        Ok(())
    }
}

/// One uniform point on the unit sphere, generated as longitude
/// `U(0, 2 pi)` and latitude `asin(U(-1, 1))`.
pub fn sample_sphere_point<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let lon = std::f64::consts::TAU * rng.random::<f64>();
    let lat = (2.0 * rng.random::<f64>() - 1.0).asin();
    let (sin_lat, cos_lat) = lat.sin_cos();
    let (sin_lon, cos_lon) = lon.sin_cos();
    Vec3::new(cos_lat * cos_lon, cos_lat * sin_lon, sin_lat)
}

/// `n` independent uniform points on the unit sphere.
pub fn sample_uniform_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec3> {
    (0..n).map(|_| sample_sphere_point(rng)).collect()
}

/// A uniform-random snapshot of `n` satellites.
pub fn uniform_snapshot<R: Rng + ?Sized>(
    n: u32,
    orbit_radius: f64,
    rng: &mut R,
) -> ConstellationSnapshot {
    ConstellationSnapshot {
        positions: sample_uniform_sphere(n as usize, rng),
        orbit_radius,
        kind: ConstellationKind::UniformRandom,
    }
}

/// Deterministic Walker layout: `n_planes` circular planes at the given
/// inclination, ascending nodes evenly spaced over 360 degrees (delta) or
/// 180 degrees (star), satellites evenly spaced in argument of latitude
/// within each plane, adjacent planes offset by the phasing factor.
pub fn walker(
    pattern: WalkerPattern,
    n_sats: u32,
    inclination: f64,
    n_planes: u32,
    phasing: f64,
    orbit_radius: f64,
) -> Result<ConstellationSnapshot> {
    if n_planes == 0 || n_sats % n_planes != 0 {
        return Err(Error::invalid(
            "n_planes",
            n_planes as f64,
            "must divide the satellite count",
        ));
    }
    let per_plane = n_sats / n_planes;
    let raan_step = match pattern {
        WalkerPattern::Delta => std::f64::consts::TAU / n_planes as f64,
        WalkerPattern::Star => std::f64::consts::PI / n_planes as f64,
    };
    let (sin_inc, cos_inc) = inclination.sin_cos();
    let mut positions = Vec::with_capacity(n_sats as usize);
    for plane in 0..n_planes {
        let raan = raan_step * plane as f64;
        let (sin_raan, cos_raan) = raan.sin_cos();
        let phase = phasing * std::f64::consts::TAU * plane as f64 / n_sats as f64;
        for slot in 0..per_plane {
            let u = std::f64::consts::TAU * slot as f64 / per_plane as f64 + phase;
            let (sin_u, cos_u) = u.sin_cos();
            positions.push(Vec3::new(
                cos_raan * cos_u - sin_raan * sin_u * cos_inc,
                sin_raan * cos_u + cos_raan * sin_u * cos_inc,
                sin_u * sin_inc,
            ));
        }
    }
    Ok(ConstellationSnapshot {
        positions,
        orbit_radius,
        kind: match pattern {
            WalkerPattern::Delta => ConstellationKind::WalkerDelta,
            WalkerPattern::Star => ConstellationKind::WalkerStar,
        },
    })
}

/// Plane count for a Walker layout of `n_sats` satellites: the divisor of
/// `n_sats` nearest to `sqrt(n_sats)`, ties toward fewer planes.
pub fn default_planes(n_sats: u32) -> u32 {
    let target = (n_sats as f64).sqrt();
    let mut best = 1u32;
    let mut best_dist = f64::INFINITY;
    for d in 1..=n_sats {
        if n_sats % d != 0 {
            continue;
        }
        let dist = (d as f64 - target).abs();
        if dist < best_dist {
            best = d;
            best_dist = dist;
        }
    }
    best
}
