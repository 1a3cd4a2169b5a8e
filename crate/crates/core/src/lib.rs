//! Uplink coverage analysis for hybrid satellite-terrestrial networks.
//!
//! A ground device transmits upward; its frame is received if *either* a
//! satellite of a LEO constellation *or* a terrestrial base station decodes
//! it above a target SINR. This crate evaluates the coverage probability of
//! that hybrid uplink three ways:
//!
//! - **analytically**, by integrating the closed-form coverage expressions
//!   for each link over the serving-node contact distributions
//!   ([`coverage`]),
//! - **by Monte Carlo**, realizing constellations, base stations, devices,
//!   and channels trial by trial ([`mcsim`]), and
//! - **inversely**, solving for the constellation size or base-station
//!   density that meets a target quality of service ([`designer`]).
//!
//! The spatial model treats satellites as uniformly distributed on a sphere
//! at fixed altitude (with deterministic Walker layouts as an alternative,
//! see [`constellation`]), base stations and devices as planar/spherical
//! Poisson fields, the ground-to-satellite channel as free space plus a
//! two-component Gaussian mixture excess gain in dB, and the ground-to-BS
//! channel as log-distance path loss with Rayleigh fading ([`channel`]).
//!
//! All quantities are SI base units internally (meters, watts, hertz,
//! radians); dB/dBm/km conversions belong at the configuration and output
//! boundaries ([`units`]).

pub mod channel;
pub mod constellation;
pub mod coverage;
pub mod designer;
pub mod error;
pub mod geomodel;
pub mod linkstats;
pub mod mcsim;
pub mod units;

pub use coverage::{CoverageResult, Method, Scenario};
pub use error::{Error, Result};
