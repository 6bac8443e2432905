//! TOML run configuration. All physics inputs are in gap units; temperatures
//! may instead be given in kelvin together with `gap_meters`.

use casimir_slabs::{units, CavityConfig, FieldState, Material, QuadratureSpec};
use serde::Deserialize;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl From<casimir_slabs::Error> for ConfigError {
    fn from(e: casimir_slabs::Error) -> Self {
        ConfigError(e.to_string())
    }
}

fn default_gap() -> f64 {
    1.0
}

fn default_model() -> String {
    "drude_lorentz".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    /// Physical gap length, needed only for kelvin inputs.
    pub gap_meters: Option<f64>,
    pub cavity: CavitySection,
    pub left: MaterialSection,
    /// Defaults to the left material.
    pub right: Option<MaterialSection>,
    #[serde(default)]
    pub state: StateSection,
    #[serde(default)]
    pub baths: BathSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub verify: VerifySection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// Relative tolerance of the real-axis versus Matsubara comparison (default 1e-6).
    pub matsubara_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    #[serde(default = "default_gap")]
    pub gap: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    #[serde(default = "default_model")]
    pub model: String,
    pub omega0: Option<f64>,
    pub omega_pl: Option<f64>,
    #[serde(default)]
    pub gamma0: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    /// vacuum | thermal | squeezed_band | squeezed_delta | squeezed_const
    pub kind: Option<String>,
    pub beta: Option<f64>,
    pub temperature_kelvin: Option<f64>,
    pub sigma: Option<f64>,
    pub omega_center: Option<f64>,
    pub scale: Option<f64>,
    pub xi: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    pub beta: Option<f64>,
    pub beta_left: Option<f64>,
    pub beta_right: Option<f64>,
    pub temperature_kelvin: Option<f64>,
    pub left_kelvin: Option<f64>,
    pub right_kelvin: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub panel_width: Option<f64>,
    pub tail_threshold: Option<f64>,
    pub max_panels: Option<usize>,
    pub uniform_extent: Option<f64>,
    pub growth: Option<f64>,
    pub k_min: Option<f64>,
    pub averaging_tol: Option<f64>,
    pub regulator: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub sigmas: Vec<f64>,
    pub omega_centers: Vec<f64>,
}

/// Resolved run inputs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub cavity: CavityConfig,
    pub left: MaterialSection,
    pub right: MaterialSection,
    pub state: FieldState,
    pub state_name: String,
    pub beta_left: f64,
    pub beta_right: f64,
    pub spec: QuadratureSpec,
    pub sweep: Option<SweepSection>,
    pub matsubara_tol: f64,
}

fn material(m: &MaterialSection, side: &str) -> Result<Material, ConfigError> {
    let o0 = || require(m.omega0, &format!("{side}.omega0"));
    let pl = || require(m.omega_pl, &format!("{side}.omega_pl"));
    match m.model.as_str() {
        "drude_lorentz" => Ok(Material::drude_lorentz(o0()?, pl()?, m.gamma0)?),
        "static_nd" => {
            if m.gamma0 != 0.0 {
                return Err(ConfigError(format!("[{side}] static_nd takes no gamma0")));
            }
            Ok(Material::static_nd(o0()?, pl()?)?)
        }
        "vacuum" => Ok(Material::vacuum()),
        other => Err(ConfigError(format!("[{side}] unknown model `{other}` (drude_lorentz | static_nd | vacuum)"))),
    }
}

fn kelvin_beta(t: f64, gap_meters: Option<f64>, key: &str) -> Result<f64, ConfigError> {
    let g = gap_meters.ok_or_else(|| ConfigError(format!("`{key}` needs the top-level key `gap_meters`")))?;
    Ok(units::kelvin_to_beta(t, g)?)
}

fn require(v: Option<f64>, key: &str) -> Result<f64, ConfigError> {
    v.ok_or_else(|| ConfigError(format!("missing key `{key}`")))
}

pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
    resolve(raw)
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    parse(&text)
}

fn resolve(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let left = material(&raw.left, "left")?;
    let right_section = raw.right.clone().unwrap_or_else(|| raw.left.clone());
    let right = material(&right_section, "right")?;
    let cavity = CavityConfig::new(raw.cavity.gap, raw.cavity.width, left, right)?;
    let gm = raw.gap_meters;

    let s = &raw.state;
    let field_beta = match (s.beta, s.temperature_kelvin) {
        (Some(_), Some(_)) => return Err(ConfigError("give either state.beta or state.temperature_kelvin".into())),
        (Some(b), None) => Some(b),
        (None, Some(t)) => Some(kelvin_beta(t, gm, "state.temperature_kelvin")?),
        (None, None) => None,
    };
    let kind = s.kind.clone().unwrap_or_else(|| if field_beta.is_some() { "thermal" } else { "vacuum" }.into());
    let state = match kind.as_str() {
        "vacuum" => FieldState::Vacuum,
        "thermal" => FieldState::thermal(require(field_beta, "state.beta")?)?,
        "squeezed_band" => FieldState::SqueezedBand {
            sigma: require(s.sigma, "state.sigma")?,
            omega_center: require(s.omega_center, "state.omega_center")?,
            scale: s.scale.unwrap_or(1.0),
        }
        .validated()?,
        "squeezed_delta" => FieldState::SqueezedDelta { omega_center: require(s.omega_center, "state.omega_center")? }.validated()?,
        "squeezed_const" => FieldState::SqueezedConst { xi: require(s.xi, "state.xi")? }.validated()?,
        other => return Err(ConfigError(format!("unknown state.kind `{other}`"))),
    };

    let b = &raw.baths;
    let shared = match (b.beta, b.temperature_kelvin) {
        (Some(x), None) => Some(x),
        (None, Some(t)) => Some(kelvin_beta(t, gm, "baths.temperature_kelvin")?),
        (None, None) => field_beta,
        (Some(_), Some(_)) => return Err(ConfigError("give either baths.beta or baths.temperature_kelvin".into())),
    };
    let side = |beta: Option<f64>, kelvin: Option<f64>, key: &str| -> Result<f64, ConfigError> {
        match (beta, kelvin) {
            (Some(x), None) => Ok(x),
            (None, Some(t)) => kelvin_beta(t, gm, key),
            (None, None) => require(shared, &format!("baths.{key}")),
            (Some(_), Some(_)) => Err(ConfigError(format!("baths: both a beta and a kelvin value given for {key}"))),
        }
    };
    let beta_left = side(b.beta_left, b.left_kelvin, "beta_left")?;
    let beta_right = side(b.beta_right, b.right_kelvin, "beta_right")?;
    for (v, k) in [(beta_left, "beta_left"), (beta_right, "beta_right")] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ConfigError(format!("baths.{k} must be > 0")));
        }
    }

    let q = &raw.quadrature;
    let mut spec = QuadratureSpec::default();
    macro_rules! set {
        ($($f:ident),*) => { $( if let Some(v) = q.$f { spec.$f = v; } )* };
    }
    set!(rel_tol, abs_tol, panel_width, tail_threshold, max_panels, uniform_extent, growth, k_min, averaging_tol);
    spec.regulator = q.regulator;
    spec.validate()?;

    if let Some(sw) = &raw.sweep {
        if sw.sigmas.is_empty() || sw.omega_centers.is_empty() {
            return Err(ConfigError("sweep.sigmas and sweep.omega_centers must be nonempty".into()));
        }
        if !sw.sigmas.windows(2).all(|p| p[0] < p[1]) || sw.sigmas[0] <= 0.0 {
            return Err(ConfigError("sweep.sigmas must be positive and ascending".into()));
        }
    }

    Ok(RunConfig {
        cavity,
        left: raw.left.clone(),
        right: right_section,
        state,
        state_name: kind,
        beta_left,
        beta_right,
        spec,
        sweep: raw.sweep,
        matsubara_tol: raw.verify.matsubara_tol.unwrap_or(1e-6),
    })
}
