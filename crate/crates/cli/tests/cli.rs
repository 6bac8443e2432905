use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_casimir-slabs");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], row: &[String], name: &str) -> String {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    row[i].clone()
}

const THIN: &str = "[cavity]\nwidth = 1.0\n[left]\nomega0 = 1.0\nomega_pl = 3.0\ngamma0 = 0.5\n[state]\nbeta = 2.0\n";

#[test]
fn vacuum_slabs_give_zero_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[cavity]\nwidth = 1.0\n[left]\nmodel = \"vacuum\"\n[state]\nbeta = 1.0\n");
    let o = run(&["force", "--config", cfg.to_str().unwrap(), "--reproducible"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    for c in ["f_ic", "f_b", "f_total", "err_ic", "err_b"] {
        assert_eq!(column(&h, &rows[0], c).parse::<f64>().unwrap(), 0.0, "{c}");
    }
    assert_eq!(h[0], "schema_version");
    assert_eq!(h.last().unwrap(), "flags");
}

#[test]
fn missing_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[cavity]\nwidth = 1.0\n[left]\nomega_pl = 3.0\n[state]\nbeta = 2.0\n");
    let o = run(&["force", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("left.omega0"));

    let cfg = write_config(dir.path(), "[cavity]\ngap = 1.0\n[left]\nomega0 = 1.0\nomega_pl = 3.0\n");
    let o = run(&["force", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("width") && err.contains("line"), "{err}");
}

#[test]
fn kelvin_without_gap_meters_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &THIN.replace("beta = 2.0", "temperature_kelvin = 300.0"));
    let o = run(&["force", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gap_meters"));
}

#[test]
fn nonconvergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{THIN}[quadrature]\nmax_panels = 2\n"));
    let o = run(&["force", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reproducible_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), THIN);
    let c = cfg.to_str().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = run(&["force", "--config", c, "--out", p.to_str().unwrap(), "--reproducible", "--threads", "2"]);
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert!(ta.starts_with(b"schema_version,"));

    let o = run(&["force", "--config", c]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# generated_unix_time="));
    assert_eq!(text.lines().skip(1).collect::<Vec<_>>(), String::from_utf8(ta).unwrap().lines().collect::<Vec<_>>());
}

#[test]
fn equilibrium_config_verifies() {
    let cfg = configs().join("equilibrium.toml");
    let o = run(&["verify", "--config", cfg.to_str().unwrap(), "--reproducible"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let names: Vec<String> = rows.iter().map(|r| column(&h, r, "check")).collect();
    for want in ["additivity", "stress_oracle_ic", "stress_oracle_bath", "equilibrium_matsubara", "mirror_symmetry"] {
        assert!(names.iter().any(|n| n == want), "{want}");
    }
    let eq = rows.iter().find(|r| column(&h, r, "check") == "equilibrium_matsubara").unwrap();
    assert!(column(&h, eq, "deviation").parse::<f64>().unwrap() < 1e-6);
}

#[test]
fn lossless_config_has_exactly_zero_bath_checks() {
    let cfg = configs().join("lossless.toml");
    let o = run(&["verify", "--config", cfg.to_str().unwrap(), "--reproducible"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let bath: Vec<_> = rows.iter().filter(|r| column(&h, r, "check").contains("bath")).collect();
    assert!(bath.len() >= 3);
    for r in bath {
        assert_eq!(column(&h, r, "deviation"), "0");
    }
}

#[test]
fn failed_check_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{THIN}[verify]\nmatsubara_tol = 1e-14\n"));
    let o = run(&["verify", "--config", cfg.to_str().unwrap(), "--reproducible"]);
    assert_eq!(o.status.code(), Some(4));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("equilibrium_matsubara"));
    assert!(text.contains("false"));
}

#[test]
fn limits_report_each_limit() {
    let cfg = configs().join("equilibrium.toml");
    let o = run(&["limits", "--config", cfg.to_str().unwrap(), "--reproducible"]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let get = |q: &str| {
        let r = rows.iter().find(|r| column(&h, r, "quantity") == q).unwrap_or_else(|| panic!("{q}"));
        column(&h, r, "value").parse::<f64>().unwrap()
    };
    // half-space total from the real axis against its own Matsubara sum
    let (m, t) = (get("matsubara_halfspace"), get("halfspace_total"));
    assert!((m - t).abs() < 1e-6 * m.abs());
    // the separately divergent half-space pieces are reported, not hidden
    let ic = rows.iter().find(|r| column(&h, r, "quantity") == "halfspace_ic").unwrap();
    assert!(column(&h, ic, "value") == "NaN" && !column(&h, ic, "flags").is_empty());
    assert!(get("zero_temperature_halfspace") > get("matsubara_halfspace"));
}

#[test]
fn sweep_writes_one_file_per_center_and_isolates_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{THIN}[sweep]\nsigmas = [0.5, 1.0, 2.0]\nomega_centers = [1.0, 2.0, -1.0]\n"),
    );
    let out = dir.path().join("sweep.csv");
    let o = run(&["sweep-sigma", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--reproducible"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for (center, ok) in [("1", true), ("2", true), ("-1", false)] {
        let p = dir.path().join(format!("sweep_omega_{center}.csv"));
        let (h, rows) = csv_rows(&std::fs::read_to_string(&p).unwrap());
        assert_eq!(rows.len(), 3);
        for r in &rows {
            let ratio = column(&h, r, "ratio_ic").parse::<f64>().unwrap();
            if ok {
                assert!(ratio > 0.0 && ratio < 1.0, "{ratio}");
                assert!(column(&h, r, "flags").is_empty());
            } else {
                assert!(ratio.is_nan());
                assert!(!column(&h, r, "flags").is_empty());
            }
        }
    }
}

#[test]
fn sweep_needs_out_and_section() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), THIN);
    let o = run(&["sweep-sigma", "--config", cfg.to_str().unwrap(), "--out", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[sweep]"));
}

/// Regression baseline for the reference parameter set at 300 K.
#[test]
fn reference_thermal_baseline() {
    let cfg = configs().join("reference.toml");
    let o = run(&["force", "--config", cfg.to_str().unwrap(), "--reproducible"]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let v = |c: &str| column(&h, &rows[0], c).parse::<f64>().unwrap();
    assert!((v("state_beta") - 76.33).abs() < 1e-3);
    assert!((v("f_ic") - 865.216937).abs() < 1e-4, "{}", v("f_ic"));
    assert!((v("f_b") + 865.187984).abs() < 1e-4, "{}", v("f_b"));
    // finite-slab Matsubara sum at the same parameters
    assert!((v("f_total") - 0.028952996).abs() < 5e-8, "{}", v("f_total"));
    assert_eq!(column(&h, &rows[0], "attractive"), "true");
}
