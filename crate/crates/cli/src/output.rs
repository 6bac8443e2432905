use crate::config::RunConfig;
use casimir_slabs::FieldState;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA_VERSION: &str = "1";

/// Rows of string cells under a fixed header.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, mut w: W, reproducible: bool) -> std::io::Result<()> {
        if !reproducible {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            writeln!(w, "# generated_unix_time={secs}")?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for r in &self.rows {
            csv.write_record(r)?;
        }
        csv.flush()
    }

    pub fn write(&self, out: Option<&Path>, reproducible: bool) -> std::io::Result<()> {
        match out {
            Some(p) => self.write_to(std::fs::File::create(p)?, reproducible),
            None => self.write_to(std::io::stdout().lock(), reproducible),
        }
    }
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn echo_header() -> Vec<String> {
    [
        "gap", "width", "left_model", "left_omega0", "left_omega_pl", "left_gamma0", "right_model", "right_omega0",
        "right_omega_pl", "right_gamma0", "state", "state_beta", "sigma", "omega_center", "xi", "beta_left", "beta_right",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

pub fn echo(cfg: &RunConfig) -> Vec<String> {
    let (mut beta, mut sigma, mut center, mut xi) = (None, None, None, None);
    match cfg.state {
        FieldState::Vacuum => {}
        FieldState::Thermal { beta: b } => beta = Some(b),
        FieldState::SqueezedBand { sigma: s, omega_center: o, .. } => {
            sigma = Some(s);
            center = Some(o);
        }
        FieldState::SqueezedDelta { omega_center } => center = Some(omega_center),
        FieldState::SqueezedConst { xi: x } => xi = Some(x),
    }
    let (l, r) = (&cfg.left, &cfg.right);
    vec![
        num(cfg.cavity.gap),
        num(cfg.cavity.width),
        l.model.clone(),
        opt(l.omega0),
        opt(l.omega_pl),
        num(l.gamma0),
        r.model.clone(),
        opt(r.omega0),
        opt(r.omega_pl),
        num(r.gamma0),
        cfg.state_name.clone(),
        opt(beta),
        opt(sigma),
        opt(center),
        opt(xi),
        num(cfg.beta_left),
        num(cfg.beta_right),
    ]
}

/// schema_version, the input echo, then `tail`.
pub fn header_with(tail: &[&str]) -> Vec<String> {
    let mut h = vec!["schema_version".to_string()];
    h.extend(echo_header());
    h.extend(tail.iter().map(|s| s.to_string()));
    h
}

pub fn row_with(cfg: &RunConfig, tail: Vec<String>) -> Vec<String> {
    let mut r = vec![SCHEMA_VERSION.to_string()];
    r.extend(echo(cfg));
    r.extend(tail);
    r
}
