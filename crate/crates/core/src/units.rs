//! Conversion between kelvin and the natural a-units.

use crate::error::{Error, Result};

/// hbar c / k_B in metre kelvin.
pub const HBAR_C_OVER_KB: f64 = 2.289_9e-3;

/// Temperature in units of 1/a for a gap of `gap_meters`.
pub fn kelvin_to_natural(t_kelvin: f64, gap_meters: f64) -> Result<f64> {
    if !(t_kelvin > 0.0) || !(gap_meters > 0.0) {
        return Err(Error::InvalidParameter("kelvin conversion needs T > 0 and gap_meters > 0".into()));
    }
    Ok(t_kelvin * gap_meters / HBAR_C_OVER_KB)
}

pub fn kelvin_to_beta(t_kelvin: f64, gap_meters: f64) -> Result<f64> {
    Ok(1.0 / kelvin_to_natural(t_kelvin, gap_meters)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn room_temperature_at_100nm() {
        let t = kelvin_to_natural(300.0, 100e-9).unwrap();
        assert!((t - 0.013102).abs() < 1e-6);
        assert!((kelvin_to_beta(300.0, 100e-9).unwrap() - 76.33).abs() < 0.01);
    }
}
