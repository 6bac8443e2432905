use crate::config::RunConfig;
use crate::output::{header_with, num, row_with, Table, SCHEMA_VERSION};
use casimir_slabs::stress::pressure_difference;
use casimir_slabs::sweep::sigma_sweep;
use casimir_slabs::{
    force_bath, force_delta_squeezed, force_dissipationless, force_ic, force_total, halfspace_forces, lifshitz_matsubara,
    lifshitz_matsubara_slabs, lifshitz_zero_temperature, Error, Estimate, FieldState,
};
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Verification(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub struct Output<'a> {
    pub path: Option<&'a Path>,
    pub reproducible: bool,
}

const FORCE_COLUMNS: [&str; 7] = ["f_ic", "f_b", "f_total", "err_ic", "err_b", "attractive", "flags"];

pub fn force(cfg: &RunConfig, out: &Output) -> Result<Table, CliError> {
    let (f_ic, err_ic, f_b, err_b, flags) = match cfg.state {
        FieldState::SqueezedDelta { omega_center } => {
            let b = force_bath(&cfg.cavity, cfg.beta_left, cfg.beta_right, &cfg.spec)?;
            (force_delta_squeezed(&cfg.cavity, omega_center)?, 0.0, b.value, b.error, "delta_state")
        }
        _ => {
            let f = force_total(&cfg.cavity, &cfg.state, cfg.beta_left, cfg.beta_right, &cfg.spec)?;
            (f.f_ic, f.err_ic, f.f_b, f.err_b, "")
        }
    };
    let total = f_ic + f_b;
    let mut t = Table::new(header_with(&FORCE_COLUMNS));
    t.push(row_with(
        cfg,
        vec![num(f_ic), num(f_b), num(total), num(err_ic), num(err_b), (total > 0.0).to_string(), flags.to_string()],
    ));
    t.write(out.path, out.reproducible)?;
    Ok(t)
}

/// Per-Omega0 file name derived from `--out`: `runs/sweep.csv` -> `runs/sweep_omega_5.csv`.
pub fn sweep_path(out: &Path, omega_center: f64) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into());
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    out.with_file_name(format!("{stem}_omega_{omega_center}.{ext}"))
}

pub fn sweep_sigma(cfg: &RunConfig, out: &Output) -> Result<Vec<PathBuf>, CliError> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("missing section `[sweep]`".into()))?;
    let path = out.path.ok_or_else(|| CliError::Config("sweep-sigma needs --out".into()))?;
    if cfg.beta_left != cfg.beta_right {
        return Err(CliError::Config("sweep-sigma needs equal bath temperatures".into()));
    }
    let beta = cfg.beta_left;
    let result = sigma_sweep(&cfg.cavity, beta, &sweep.sigmas, &sweep.omega_centers, &cfg.spec)?;
    let th = &result.thermal;
    let mut written = Vec::new();
    for (row, &center) in result.rows.iter().zip(&sweep.omega_centers) {
        let mut t = Table::new(header_with(&[
            "sweep_omega_center", "sweep_sigma", "ratio_ic", "ratio_total", "f_ic", "f_b", "f_total", "err_ic", "err_b",
            "flags",
        ]));
        for c in row {
            t.push(row_with(
                cfg,
                vec![
                    num(center),
                    num(c.sigma),
                    num(c.ratio_ic),
                    num(c.ratio_total),
                    num(c.f_ic),
                    num(th.f_b),
                    num(c.f_total),
                    num(th.err_ic + c.err_delta),
                    num(th.err_b),
                    c.flag.clone().unwrap_or_default().replace(['\n', ','], " "),
                ],
            ));
        }
        let p = sweep_path(path, center);
        t.write(Some(&p), out.reproducible)?;
        written.push(p);
    }
    Ok(written)
}

fn estimate_row(cfg: &RunConfig, t: &mut Table, name: &str, e: Result<Estimate, Error>) {
    let (v, err, flag) = match e {
        Ok(e) => (e.value, e.error, String::new()),
        Err(e) => (f64::NAN, f64::NAN, e.to_string()),
    };
    t.push(row_with(cfg, vec![name.to_string(), num(v), num(err), flag]));
}

/// Limit-case forces for the configured materials.
pub fn limits(cfg: &RunConfig, out: &Output) -> Result<Table, CliError> {
    let c = &cfg.cavity;
    let s = &cfg.spec;
    let mut t = Table::new(header_with(&["quantity", "value", "error", "flags"]));
    let equal = cfg.beta_left == cfg.beta_right;
    if equal {
        estimate_row(cfg, &mut t, "matsubara_slabs", lifshitz_matsubara_slabs(c, cfg.beta_left, s));
        estimate_row(cfg, &mut t, "matsubara_halfspace", lifshitz_matsubara(&c.left, &c.right, c.gap, cfg.beta_left, s));
    }
    estimate_row(cfg, &mut t, "zero_temperature_halfspace", lifshitz_zero_temperature(c, s));
    let phi = match cfg.state {
        FieldState::Thermal { beta } => Some(beta),
        _ => None,
    };
    if let Some(phi) = phi {
        match halfspace_forces(&c.left, &c.right, c.gap, cfg.beta_left, cfg.beta_right, phi, s) {
            Ok(h) => {
                estimate_row(cfg, &mut t, "halfspace_ic", h.f_ic);
                estimate_row(cfg, &mut t, "halfspace_bath", h.f_b);
                estimate_row(cfg, &mut t, "halfspace_total", h.total);
            }
            Err(e) => estimate_row(cfg, &mut t, "halfspace_total", Err(e)),
        }
    }
    if c.is_dissipationless() && !matches!(cfg.state, FieldState::SqueezedDelta { .. }) {
        estimate_row(cfg, &mut t, "dissipationless", force_dissipationless(c, &cfg.state, s));
    }
    if let FieldState::SqueezedDelta { omega_center } = cfg.state {
        let e = force_delta_squeezed(c, omega_center).map(|v| Estimate { value: v, ..Estimate::zero() });
        estimate_row(cfg, &mut t, "delta_squeezed", e);
    }
    t.write(out.path, out.reproducible)?;
    Ok(t)
}

struct Check {
    name: &'static str,
    deviation: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Invariant checks. Writes the report, then fails if any check failed.
pub fn verify(cfg: &RunConfig, out: &Output) -> Result<Table, CliError> {
    let c = &cfg.cavity;
    let s = &cfg.spec;
    let (bl, br) = (cfg.beta_left, cfg.beta_right);
    let mut checks = Vec::new();
    let pointwise = !matches!(cfg.state, FieldState::SqueezedDelta { .. });

    if pointwise {
        let f = force_total(c, &cfg.state, bl, br, s)?;
        checks.push(Check { name: "additivity", deviation: (f.f_total - (f.f_ic + f.f_b)).abs(), tolerance: 0.0 });

        let grid: Vec<f64> = (0..25).map(|i| 0.05 + 1.2 * i as f64).collect();
        let p = pressure_difference(c, (bl, br), &cfg.state, &grid)?;
        checks.push(Check { name: "stress_oracle_ic", deviation: p.ic_max_deviation, tolerance: 1e-8 });
        checks.push(Check { name: "stress_oracle_bath", deviation: p.bath_max_deviation, tolerance: 1e-8 });

        // a regulated real-axis integral carries an O(1/cutoff) bias the Matsubara sum does not
        if bl == br && cfg.state == (FieldState::Thermal { beta: bl }) && s.regulator.is_none() {
            let m = lifshitz_matsubara_slabs(c, bl, s)?;
            checks.push(Check { name: "equilibrium_matsubara", deviation: rel(f.f_total, m.value), tolerance: cfg.matsubara_tol });
        }
        if bl == br {
            let g = force_total(&c.swapped(), &cfg.state, br, bl, s)?;
            let scale = f.f_total.abs().max(f64::MIN_POSITIVE);
            let tol = (f.err_total + g.err_total) / scale + 1e-12;
            checks.push(Check { name: "mirror_symmetry", deviation: rel(f.f_total, g.f_total), tolerance: tol });
        }
        if c.is_dissipationless() {
            checks.push(Check { name: "dissipationless_bath_zero", deviation: f.f_b.abs(), tolerance: 0.0 });
            let b = force_bath(c, bl, br, s)?;
            checks.push(Check { name: "dissipationless_bath_integral_zero", deviation: b.value.abs(), tolerance: 0.0 });
            if c.left.gamma0 == 0.0 && c.right.gamma0 == 0.0 {
                let ic = force_ic(c, &cfg.state, s)?;
                let d = force_dissipationless(c, &cfg.state, s)?;
                checks.push(Check { name: "dissipationless_dual", deviation: rel(ic.value, d.value), tolerance: 1e-9 });
            }
        }
    } else {
        let b = force_bath(c, bl, br, s)?;
        if c.is_dissipationless() {
            checks.push(Check { name: "dissipationless_bath_integral_zero", deviation: b.value.abs(), tolerance: 0.0 });
        }
    }

    let mut t = Table::new(vec![
        "schema_version".into(),
        "check".into(),
        "deviation".into(),
        "tolerance".into(),
        "passed".into(),
    ]);
    for ch in &checks {
        t.push(vec![SCHEMA_VERSION.into(), ch.name.into(), num(ch.deviation), num(ch.tolerance), ch.passed().to_string()]);
    }
    t.write(out.path, out.reproducible)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(t)
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
