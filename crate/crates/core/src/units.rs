//! Conversions between configuration-facing units and internal SI units.

/// Power ratio in dB to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}

/// Watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts / 1e-3)
}

/// Areal density per square kilometer to per square meter.
pub fn per_km2_to_per_m2(per_km2: f64) -> f64 {
    per_km2 * 1e-6
}

/// Areal density per square meter to per square kilometer.
pub fn per_m2_to_per_km2(per_m2: f64) -> f64 {
    per_m2 * 1e6
}
