//! Initial field states and their spectral weight.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldState {
    Vacuum,
    /// Thermal state at inverse temperature beta (a-units).
    Thermal { beta: f64 },
    /// Squeezing `scale / sigma` for modes with |k - omega_center| <= sigma/2.
    SqueezedBand { sigma: f64, omega_center: f64, scale: f64 },
    /// Squeezing concentrated at one frequency; no pointwise weight.
    SqueezedDelta { omega_center: f64 },
    /// Same squeezing parameter for every mode.
    SqueezedConst { xi: f64 },
}

impl FieldState {
    pub fn thermal(beta: f64) -> Result<Self> {
        Self::Thermal { beta }.validated()
    }

    pub fn squeezed_band(sigma: f64, omega_center: f64) -> Result<Self> {
        Self::SqueezedBand { sigma, omega_center, scale: 1.0 }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        match self {
            FieldState::Thermal { beta } if !(beta > 0.0) => bad("beta must be > 0"),
            FieldState::SqueezedBand { sigma, omega_center, scale } => {
                if !(sigma > 0.0) || !(omega_center > 0.0) || !scale.is_finite() {
                    bad("squeezed band needs sigma > 0 and omega_center > 0")
                } else {
                    Ok(self)
                }
            }
            FieldState::SqueezedDelta { omega_center } if !(omega_center > 0.0) => bad("omega_center must be > 0"),
            FieldState::SqueezedConst { xi } if !xi.is_finite() => bad("xi must be finite"),
            _ => Ok(self),
        }
    }

    /// Weight inside the band of a squeezed_band state.
    pub fn band_weight(sigma: f64, scale: f64) -> f64 {
        (2.0 * scale / sigma).abs().cosh()
    }

    /// Points where the weight is discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            FieldState::SqueezedBand { sigma, omega_center, .. } => [omega_center - 0.5 * sigma, omega_center + 0.5 * sigma]
                .into_iter()
                .filter(|k| *k > 0.0)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// True when the weight is singular at k -> 0.
    pub fn has_infrared_pole(&self) -> bool {
        matches!(self, FieldState::Thermal { .. })
    }
}

pub fn weight(state: &FieldState, k: f64) -> Result<f64> {
    let k = k.abs();
    match *state {
        FieldState::Vacuum => Ok(1.0),
        FieldState::Thermal { beta } => Ok(1.0 / (0.5 * beta * k).tanh()),
        FieldState::SqueezedBand { sigma, omega_center, scale } => {
            if (k - omega_center).abs() <= 0.5 * sigma {
                Ok(FieldState::band_weight(sigma, scale))
            } else {
                Ok(1.0)
            }
        }
        FieldState::SqueezedConst { xi } => Ok((2.0 * xi.abs()).cosh()),
        FieldState::SqueezedDelta { .. } => Err(Error::NoPointwiseWeight),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightAsymptotics {
    pub sigmas: Vec<f64>,
    pub weights: Vec<f64>,
    /// Non-increasing in sigma over the grid.
    pub monotone: bool,
    /// In-band weight minus one at the largest sigma.
    pub large_sigma_excess: f64,
    /// In-band weight at the smallest sigma.
    pub small_sigma_weight: f64,
}

impl WeightAsymptotics {
    pub fn passes(&self) -> bool {
        self.monotone && self.large_sigma_excess < self.small_sigma_weight - 1.0
    }
}

/// In-band weight of a squeezed band state evaluated over a sigma grid.
pub fn weight_asymptotics_check(state: &FieldState, sigma_grid: &[f64]) -> Result<WeightAsymptotics> {
    let FieldState::SqueezedBand { scale, .. } = *state else {
        return Err(Error::InvalidParameter("asymptotics check needs a squeezed_band state".into()));
    };
    let mut sigmas: Vec<f64> = sigma_grid.to_vec();
    if sigmas.is_empty() || sigmas.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidParameter("sigma grid must be nonempty and positive".into()));
    }
    sigmas.sort_by(f64::total_cmp);
    let weights: Vec<f64> = sigmas.iter().map(|s| FieldState::band_weight(*s, scale)).collect();
    let monotone = weights.windows(2).all(|w| w[1] <= w[0]);
    Ok(WeightAsymptotics {
        large_sigma_excess: weights[weights.len() - 1] - 1.0,
        small_sigma_weight: weights[0],
        sigmas,
        weights,
        monotone,
    })
}
