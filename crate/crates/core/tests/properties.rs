use casimir_slabs::forces::{halfspace_forces, ic_bracket_sign};
use casimir_slabs::material::interface_reflection;
use casimir_slabs::scattering::slab_coefficients;
use casimir_slabs::stress::{pressure_difference, txx_bath_integrand, txx_ic_integrand, RegionPoint};
use casimir_slabs::sweep::sigma_sweep;
use casimir_slabs::*;
use proptest::prelude::*;

fn drude() -> impl Strategy<Value = Material> {
    (0.5f64..20.0, 0.0f64..30.0, 0.01f64..3.0).prop_map(|(o, p, g)| Material::drude_lorentz(o, p, g).unwrap())
}

fn lossless() -> impl Strategy<Value = Material> {
    (1.0f64..12.0).prop_map(|e| Material::with_static_permittivity(e).unwrap())
}

/// A point outside both slabs.
fn outside(cfg: &CavityConfig, u: f64) -> f64 {
    let h = 0.5 * cfg.gap;
    let outer = h + cfg.width;
    match (u * 3.0) as u32 {
        0 => -outer - 2.0 * u,
        1 => -h + (u - 1.0 / 3.0) * 3.0 * cfg.gap,
        _ => outer + 2.0 * u,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_conjugation_and_branch(m in drude(), w in 0.01f64..100.0) {
        let n = m.refractive_index(w).unwrap();
        prop_assert_eq!(m.refractive_index(-w).unwrap(), n.conj());
        if m.omega_pl > 0.0 {
            prop_assert!(n.re > 0.0 && n.im > 0.0);
        }
    }

    #[test]
    fn high_frequency_transparency(m in drude(), f in 10.0f64..1e4) {
        let w = f * m.omega0.max(m.gamma0);
        let e = m.permittivity(w).unwrap();
        prop_assert!((e - 1.0).norm() <= 2.0 * m.omega_pl * m.omega_pl / (w * w));
    }

    #[test]
    fn coefficient_conjugation(l in drude(), r in drude(), d in 0.05f64..5.0, w in 0.01f64..50.0) {
        let cfg = CavityConfig::new(1.0, d, l, r).unwrap();
        let p = cavity_coefficients(&cfg, w).unwrap();
        let m = cavity_coefficients(&cfg, -w).unwrap();
        let pairs = [
            (p.greater.reflection, m.greater.reflection),
            (p.transmission(), m.transmission()),
            (p.greater.far.gap_c, m.greater.far.gap_c),
            (p.greater.far.gap_d, m.greater.far.gap_d),
            (p.less.far.gap_c, m.less.far.gap_c),
            (p.less.far.gap_d, m.less.far.gap_d),
            (p.greater.near_a, m.greater.near_a),
            (p.greater.near_b, m.greater.near_b),
        ];
        for (a, b) in pairs {
            prop_assert!((a.conj() - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn lossless_unitarity(l in lossless(), r in lossless(), d in 0.05f64..5.0, w in 0.01f64..100.0) {
        let cfg = CavityConfig::new(1.0, d, l, r).unwrap();
        let s = cavity_coefficients(&cfg, w).unwrap();
        prop_assert!((s.greater.reflection.norm_sqr() + s.transmission().norm_sqr() - 1.0).abs() <= 1e-10);
        prop_assert!((s.left.r.norm_sqr() + s.left.t.norm_sqr() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn green_symmetry(l in drude(), r in drude(), d in 0.1f64..3.0, w in 0.05f64..30.0, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let cfg = CavityConfig::new(1.0, d, l, r).unwrap();
        let (x, xp) = (outside(&cfg, u), outside(&cfg, v));
        let a = green_function(&cfg, x, xp, w).unwrap();
        let b = green_function(&cfg, xp, x, w).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300), "{} {}", a, b);
    }

    #[test]
    fn weights_are_even_and_at_least_one(beta in 0.1f64..100.0, sigma in 0.01f64..100.0, center in 0.1f64..50.0, k in 1e-3f64..100.0) {
        for s in [FieldState::Vacuum, FieldState::thermal(beta).unwrap(), FieldState::squeezed_band(sigma, center).unwrap(), FieldState::SqueezedConst { xi: 0.3 }] {
            let w = weight(&s, k).unwrap();
            prop_assert!(w >= 1.0);
            prop_assert_eq!(w, weight(&s, -k).unwrap());
        }
        let th = weight(&FieldState::thermal(beta).unwrap(), k).unwrap();
        let bose = 1.0 + 2.0 / (beta * k).exp_m1();
        prop_assert!((th - bose).abs() <= 1e-13 * th);
    }

    #[test]
    fn bath_spectral_factor_is_nonnegative(m in drude(), beta in 0.1f64..100.0, w in 1e-3f64..100.0) {
        let f = m.fd_weight(w).unwrap() / (0.5 * beta * w).tanh();
        prop_assert!(f >= 0.0);
    }
}

#[test]
fn fluctuation_dissipation_identity_on_grid() {
    for m in [Material::drude_lorentz(10.0, 10.0, 0.1).unwrap(), Material::drude_lorentz(2.0, 7.0, 3.0).unwrap()] {
        for i in 0..=120 {
            let w = m.omega0 * 10f64.powf(-3.0 + 6.0 * i as f64 / 120.0);
            let a = m.fd_weight(w).unwrap();
            let b = m.fd_weight_from_kernel(w).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs(), "{w}: {a} {b}");
        }
    }
}

#[test]
fn thick_slab_reflection_converges_exponentially() {
    let m = Material::drude_lorentz(10.0, 10.0, 0.1).unwrap();
    let w = 3.0;
    let n = m.refractive_index(w).unwrap();
    let rn = interface_reflection(n);
    let (mut sx, mut sy, mut sxx, mut sxy, mut cnt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..=20 {
        let d = (2.0 + 8.0 * i as f64 / 20.0) / (w * n.im);
        let dev = (slab_coefficients(&m, d, w).unwrap().r - rn).norm().ln();
        sx += d;
        sy += dev;
        sxx += d * d;
        sxy += d * dev;
        cnt += 1.0;
    }
    let slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    let expected = -2.0 * w * n.im;
    assert!((slope / expected - 1.0).abs() < 0.05, "{slope} {expected}");
}

#[test]
fn stress_is_uniform_in_each_vacuum_region() {
    let l = Material::drude_lorentz(10.0, 10.0, 0.1).unwrap();
    let r = Material::drude_lorentz(4.0, 6.0, 0.5).unwrap();
    let cfg = CavityConfig::new(1.0, 0.7, l, r).unwrap();
    let th = FieldState::thermal(4.0).unwrap();
    let regions: [Box<dyn Fn(f64) -> f64>; 3] = [Box::new(|u| -1.2 - 3.0 * u), Box::new(|u| -0.5 + u), Box::new(|u| 1.2 + 3.0 * u)];
    for w in [0.3, 4.0, 10.5, 22.0] {
        for place in &regions {
            let pts: Vec<RegionPoint> = (0..10).map(|i| RegionPoint::new(&cfg, place(i as f64 / 9.0)).unwrap()).collect();
            let ic: Vec<f64> = pts.iter().map(|p| txx_ic_integrand(&cfg, &th, p, w).unwrap()).collect();
            let bath: Vec<f64> = pts.iter().map(|p| txx_bath_integrand(&cfg, (3.0, 6.0), p, w).unwrap()).collect();
            for v in [ic, bath] {
                for x in &v {
                    assert!((x - v[0]).abs() <= 1e-10 * v[0].abs(), "{w}: {x} {}", v[0]);
                }
            }
        }
    }
}

#[test]
fn stress_oracle_matches_closed_forms() {
    let cfg = CavityConfig::new(1.0, 0.7, Material::drude_lorentz(10.0, 10.0, 0.1).unwrap(), Material::drude_lorentz(4.0, 6.0, 0.5).unwrap()).unwrap();
    let grid: Vec<f64> = (1..=25).map(|i| 0.37 * i as f64).collect();
    let r = pressure_difference(&cfg, (3.0, 6.0), &FieldState::thermal(2.0).unwrap(), &grid).unwrap();
    assert!(r.ic_max_deviation <= 1e-8 && r.bath_max_deviation <= 1e-8, "{r:?}");
}

#[test]
fn additivity_is_exact() {
    let spec = QuadratureSpec::default();
    let cfg = CavityConfig::new(1.0, 0.7, Material::drude_lorentz(10.0, 10.0, 0.1).unwrap(), Material::drude_lorentz(4.0, 6.0, 0.5).unwrap()).unwrap();
    let b = force_total(&cfg, &FieldState::thermal(5.0).unwrap(), 3.0, 8.0, &spec).unwrap();
    assert_eq!(b.f_total - (b.f_ic + b.f_b), 0.0);
}

#[test]
fn mirror_symmetry_at_equal_temperatures() {
    let spec = QuadratureSpec::default();
    let (l, r) = (Material::drude_lorentz(10.0, 10.0, 0.1).unwrap(), Material::drude_lorentz(4.0, 6.0, 0.5).unwrap());
    let cfg = CavityConfig::new(1.0, 0.7, l, r).unwrap();
    let th = FieldState::thermal(6.0).unwrap();
    let a = force_total(&cfg, &th, 6.0, 6.0, &spec).unwrap();
    let b = force_total(&cfg.swapped(), &th, 6.0, 6.0, &spec).unwrap();
    assert!((a.f_total - b.f_total).abs() <= a.err_total + b.err_total);
}

#[test]
fn equilibrium_halfspaces_match_matsubara() {
    let spec = QuadratureSpec::default();
    let triples = [
        (0.5, 4.0, Material::drude_lorentz(10.0, 10.0, 0.1).unwrap()),
        (1.0, 30.0, Material::drude_lorentz(3.0, 8.0, 1.0).unwrap()),
        (2.0, 120.0, Material::drude_lorentz(1.0, 2.0, 0.3).unwrap()),
    ];
    for (a, beta, m) in triples {
        let h = halfspace_forces(&m, &m, a, beta, beta, beta, &spec).unwrap().total.unwrap();
        let l = lifshitz_matsubara(&m, &m, a, beta, &spec).unwrap();
        assert!((h.value / l.value - 1.0).abs() <= 1e-6, "{a} {beta}: {} {}", h.value, l.value);
    }
}

#[test]
fn ic_force_grows_with_weight_when_bracket_is_single_signed() {
    let spec = QuadratureSpec::default();
    let m = Material::drude_lorentz(1.0, 3.0, 5.0).unwrap();
    for d in [0.3, 1.0] {
        let cfg = CavityConfig::symmetric(1.0, d, m).unwrap();
        let grid: Vec<f64> = (0..4000).map(|i| 1e-3 * 1.004f64.powi(i)).collect();
        assert_eq!(ic_bracket_sign(&cfg, &grid).unwrap(), Some(1));
        let forces: Vec<f64> = [20.0, 5.0, 2.0, 0.5]
            .iter()
            .map(|&b| force_ic(&cfg, &FieldState::thermal(b).unwrap(), &spec).unwrap().value.abs())
            .collect();
        assert!(forces.windows(2).all(|p| p[1] >= p[0]), "{forces:?}");
    }
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let spec = QuadratureSpec::default();
    let cfg = CavityConfig::symmetric(1.0, 1.0, Material::drude_lorentz(10.0, 10.0, 0.1).unwrap()).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| sigma_sweep(&cfg, 20.0, &[0.5, 2.0, 8.0], &[1.0, 5.0], &spec).unwrap())
    };
    let (a, b) = (run(1), run(3));
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        for (x, y) in ra.iter().zip(rb) {
            assert_eq!(x.ratio_ic.to_bits(), y.ratio_ic.to_bits());
            assert_eq!(x.ratio_total.to_bits(), y.ratio_total.to_bits());
        }
    }
}
