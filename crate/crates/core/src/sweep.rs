//! Squeezing-bandwidth sweep: thermal versus squeezed-band field states with
//! both baths at the same temperature.

use crate::error::Result;
use crate::forces::{force_ic_difference, force_total, ForceBreakdown};
use crate::quadrature::QuadratureSpec;
use crate::scattering::CavityConfig;
use crate::states::FieldState;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub sigma: f64,
    pub omega_center: f64,
    /// f_ic(thermal) / f_ic(squeezed band).
    pub ratio_ic: f64,
    /// f_total(thermal) / f_total(squeezed band).
    pub ratio_total: f64,
    pub f_ic: f64,
    pub f_total: f64,
    /// Quadrature error of the squeezed-minus-thermal difference.
    pub err_delta: f64,
    pub flag: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSweep {
    pub thermal: ForceBreakdown,
    pub beta: f64,
    /// One row per omega_center, cells in sigma order.
    pub rows: Vec<Vec<SweepCell>>,
}

/// The squeezed forces are the thermal ones plus the integral of the weight
/// difference, which only differs from zero near k = 0 and inside the band.
pub fn sigma_sweep(cfg: &CavityConfig, beta: f64, sigmas: &[f64], omega_centers: &[f64], spec: &QuadratureSpec) -> Result<SigmaSweep> {
    let thermal_state = FieldState::thermal(beta)?;
    let thermal = force_total(cfg, &thermal_state, beta, beta, spec)?;
    let cells: Vec<(f64, f64)> = omega_centers.iter().flat_map(|&o| sigmas.iter().map(move |&s| (o, s))).collect();
    let results: Vec<SweepCell> = cells
        .par_iter()
        .map(|&(omega_center, sigma)| sweep_cell(cfg, &thermal, &thermal_state, sigma, omega_center, spec))
        .collect();
    let rows = results.chunks(sigmas.len().max(1)).map(|c| c.to_vec()).collect();
    Ok(SigmaSweep { thermal, beta, rows })
}

fn sweep_cell(cfg: &CavityConfig, thermal: &ForceBreakdown, base: &FieldState, sigma: f64, omega_center: f64, spec: &QuadratureSpec) -> SweepCell {
    let nan_cell = |msg: String| SweepCell {
        sigma,
        omega_center,
        ratio_ic: f64::NAN,
        ratio_total: f64::NAN,
        f_ic: f64::NAN,
        f_total: f64::NAN,
        err_delta: f64::NAN,
        flag: Some(msg),
    };
    let state = match FieldState::squeezed_band(sigma, omega_center) {
        Ok(s) => s,
        Err(e) => return nan_cell(e.to_string()),
    };
    match force_ic_difference(cfg, &state, base, spec) {
        Ok(delta) => {
            let f_ic = thermal.f_ic + delta.value;
            let f_total = thermal.f_total + delta.value;
            SweepCell {
                sigma,
                omega_center,
                ratio_ic: thermal.f_ic / f_ic,
                ratio_total: thermal.f_total / f_total,
                f_ic,
                f_total,
                err_delta: delta.error,
                flag: None,
            }
        }
        Err(e) => nan_cell(e.to_string()),
    }
}
