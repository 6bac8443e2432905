//! Force integrals: initial-conditions (IC) part, bath part, their sum, and
//! the limiting cases (dissipationless slabs, delta squeezing, half-spaces,
//! Matsubara sums).
//!
//! Sign convention: F = T_xx(exterior) - T_xx(gap) on the left plate, so a
//! positive value pushes the plates together.

use crate::error::{Error, Result};
use crate::material::Material;
use crate::quadrature::{integrate_semiinfinite_averaged, integrate_semiinfinite_with, matsubara_sum, AveragedTail, Estimate, QuadratureSpec};
use crate::scattering::{cavity_coefficients, cavity_response, cavity_response_shifted, CavityConfig, CavityResponse, PhaseShift, ScatteringSet};
use crate::states::{weight, FieldState};
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Closed form used for the bath integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BathFormula {
    /// Consistent with the stress-tensor oracle and with equilibrium detailed balance.
    #[default]
    Compact,
    /// Long expanded expression, term by term. Kept for comparison only; it
    /// disagrees with the oracle and overflows for thick slabs.
    Expanded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBreakdown {
    pub f_ic: f64,
    pub f_b: f64,
    pub f_total: f64,
    pub err_ic: f64,
    pub err_b: f64,
    /// Error of the total, integrated directly from the summed integrand.
    pub err_total: f64,
    pub cfg: CavityConfig,
    pub state: FieldState,
    pub beta_left: f64,
    pub beta_right: f64,
}

impl ForceBreakdown {
    /// Positive total force pushes the plates together.
    pub fn attractive(&self) -> bool {
        self.f_total > 0.0
    }
}

fn coth_half(beta: f64, w: f64) -> f64 {
    1.0 / (0.5 * beta * w).tanh()
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("inverse temperature must be > 0, got {beta}")))
    }
}

/// k F(k) times the IC bracket.
pub fn ic_integrand(set: &CavityResponse, state: &FieldState) -> Result<f64> {
    let k = set.omega;
    Ok(k * weight(state, k)? * set.ic_bracket())
}

/// Bath integrand at real frequency omega for bath inverse temperatures beta_l, beta_r.
pub fn bath_integrand(set: &CavityResponse, beta_l: f64, beta_r: f64) -> f64 {
    let w = set.omega;
    let (l, r) = (&set.left, &set.right);
    let e2 = set.round_trip;
    let k = set.multiple;
    let q = k.norm_sqr();
    let d = set.width;

    let left_term = if l.index.im > 0.0 {
        let n = l.index;
        let rn = l.interface;
        let th = l.t_hat;
        let ex = l.attenuation;
        let one_m_ex = -(-2.0 * w * n.im * d).exp_m1();
        let phi = Complex64::from_polar(1.0, 2.0 * l.phase);
        let rho = l.r + r.r * l.t * l.t * e2 * k;
        let g = -rn * th + r.r * th * th * e2 * k;
        let one = 1.0 - rn * rho;
        let en = l.pass * l.pass;
        let thru = (1.0 + r.r.norm_sqr()) * q * th.norm_sqr();
        let body = n.re * one_m_ex * (one.norm_sqr() + ex * g.norm_sqr() - thru * (1.0 + rn.norm_sqr() * ex))
            + 2.0 * n.im * (one * (en * g).conj() * (phi - 1.0)).im
            + 2.0 * n.im * thru * ex * (rn * (phi - 1.0)).im;
        coth_half(beta_l, w) * (n + 1.0).norm_sqr() / n.norm_sqr() * body
    } else {
        0.0
    };

    let right_term = if r.index.im > 0.0 {
        let n = r.index;
        let rn = r.interface;
        let ex = r.attenuation;
        let one_m_ex = -(-2.0 * w * n.im * d).exp_m1();
        let phi = Complex64::from_polar(1.0, 2.0 * r.phase);
        // |tL|² - 1 - |rL|² without cancellation
        let leak = -l.absorption - 2.0 * l.r.norm_sqr();
        let body = n.re * one_m_ex * (1.0 + rn.norm_sqr() * ex) - 2.0 * n.im * ex * (rn * (phi - 1.0)).im;
        coth_half(beta_r, w) * (n + 1.0).norm_sqr() / n.norm_sqr() * q * r.t_hat.norm_sqr() * leak * body
    } else {
        0.0
    };
    0.25 * w * (left_term + right_term)
}

/// Long expanded bath expression, term by term.
pub fn bath_integrand_expanded(set: &ScatteringSet, beta_l: f64, beta_r: f64) -> f64 {
    let w = set.omega;
    let d = set.width;
    let (l, r) = (&set.left, &set.right);
    let (nl, nr) = (l.index, r.index);
    let (rl, rr, tl, tr) = (l.r, r.r, l.t, r.t);
    let (rnl, rnr) = (l.interface, r.interface);
    let e = (2.0 * I * w * set.gap).exp();
    let t = set.transmission();
    let den = 1.0 - rl * rr * e;
    let x1 = den * (1.0 - rnl * rl) - rnl * rr * tl * tl * e;
    let x2 = den * (rl - rnl) + rr * tl * tl * e;
    let lb = nl.re
        * (1.0 - (-2.0 * w * nl.im * d).exp())
        * (x1.norm_sqr() - x2.norm_sqr() + tl.norm_sqr() * (1.0 + rr.norm_sqr()) * (1.0 - rnl.norm_sqr()))
        + 2.0
            * nl.im
            * (((2.0 * I * w * nl.re * d).exp() - 1.0)
                * (x1 * (den.conj() * (rl.conj() - rnl.conj()) + rr.conj() * tl.conj() * tl.conj() / e)
                    + tl.norm_sqr() * (1.0 + rr.norm_sqr()) * rnl))
                .im;
    let lt = coth_half(beta_l, w) * (nl + 1.0).norm_sqr() / nl.norm_sqr() / (tr.norm_sqr() * tl.norm_sqr()) * lb;
    let rt = coth_half(beta_r, w) * (nr + 1.0).norm_sqr() / nr.norm_sqr()
        * (1.0 - (1.0 + rl.norm_sqr()) / tl.norm_sqr())
        * (nr.re * ((2.0 * w * nr.im * d).exp() - 1.0) * (1.0 - rnr.norm_sqr())
            - 2.0 * nr.im * (rnr * ((2.0 * I * w * nr.re * d).exp() - 1.0)).im);
    w / 8.0 * t.norm_sqr() * (lt + rt)
}

/// k F(k) [2 - (|tL|²(1+|rR|²) + |tR|²(1+|rL|²)) Q] for lossless slabs.
pub fn dissipationless_integrand(set: &CavityResponse, state: &FieldState) -> Result<f64> {
    let k = set.omega;
    let (l, r) = (&set.left, &set.right);
    let q = set.multiple.norm_sqr();
    let inner = l.t.norm_sqr() * (1.0 + r.r.norm_sqr()) + r.t.norm_sqr() * (1.0 + l.r.norm_sqr());
    Ok(k * weight(state, k)? * (2.0 - inner * q))
}

const AVERAGING_POINTS: usize = 8;

/// Mean of g over the fast gap and slab phases at frequency k, on an 8x8 grid.
fn phase_average<G: Fn(&CavityResponse) -> Result<f64>>(cfg: &CavityConfig, k: f64, g: &G) -> Result<f64> {
    let m = AVERAGING_POINTS;
    let step = 2.0 * PI / m as f64;
    let mut sum = 0.0;
    for i in 0..m {
        for j in 0..m {
            let shift = PhaseShift { gap: step * i as f64, slab: step * j as f64 };
            sum += g(&cavity_response_shifted(cfg, k, shift)?)?;
        }
    }
    Ok(sum / (m * m) as f64)
}

/// Integrate g(cavity response at k) over k, with a phase-averaged tail.
fn integrate_cavity<G: Fn(&CavityResponse) -> Result<f64>>(cfg: &CavityConfig, g: G, bps: &[f64], spec: &QuadratureSpec) -> Result<Estimate> {
    let f = |k: f64| g(&cavity_response(cfg, k)?);
    let avg = |k: f64| phase_average(cfg, k, &g);
    let tail = AveragedTail { average: &avg, slowest_frequency: (2.0 * cfg.gap).min(cfg.width) };
    integrate_semiinfinite_averaged(&f, Some(&tail), bps, spec)
}

fn breakpoints(cfg: &CavityConfig, state: Option<&FieldState>) -> Vec<f64> {
    let mut b = cfg.breakpoints();
    if let Some(s) = state {
        b.extend(s.breakpoints());
    }
    b
}

/// The IC integrand must stay finite as k -> 0 and the bracket must vanish at
/// least linearly there, otherwise a thermal weight makes the integral diverge.
fn infrared_check(cfg: &CavityConfig, state: &FieldState, spec: &QuadratureSpec) -> Result<()> {
    if !state.has_infrared_pole() {
        return Ok(());
    }
    let k = spec.k_min;
    let b1 = cavity_response(cfg, k)?.ic_bracket();
    let b2 = cavity_response(cfg, 0.5 * k)?.ic_bracket();
    let v = ic_integrand(&cavity_response(cfg, k)?, state)?;
    let vanishes = b1 == 0.0 || b2.abs() <= 0.51 * b1.abs() || b1.abs() <= 64.0 * f64::EPSILON * k;
    if v.is_finite() && vanishes {
        Ok(())
    } else {
        Err(Error::EndpointDivergence { k_min: k })
    }
}

pub fn force_ic(cfg: &CavityConfig, state: &FieldState, spec: &QuadratureSpec) -> Result<Estimate> {
    cfg.validate()?;
    let state = state.validated()?;
    if let FieldState::SqueezedDelta { .. } = state {
        return Err(Error::NoPointwiseWeight);
    }
    if cfg.is_vacuum() {
        return Ok(Estimate::zero());
    }
    infrared_check(cfg, &state, spec)?;
    integrate_cavity(cfg, |set: &CavityResponse| ic_integrand(set, &state), &breakpoints(cfg, Some(&state)), spec)
}

pub fn force_bath(cfg: &CavityConfig, beta_l: f64, beta_r: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    force_bath_with(cfg, beta_l, beta_r, spec, BathFormula::Compact)
}

pub fn force_bath_with(cfg: &CavityConfig, beta_l: f64, beta_r: f64, spec: &QuadratureSpec, formula: BathFormula) -> Result<Estimate> {
    cfg.validate()?;
    check_beta(beta_l)?;
    check_beta(beta_r)?;
    if cfg.is_dissipationless() {
        return Ok(Estimate::zero());
    }
    let bps = breakpoints(cfg, None);
    match formula {
        BathFormula::Compact => integrate_cavity(cfg, |set: &CavityResponse| Ok(bath_integrand(set, beta_l, beta_r)), &bps, spec),
        BathFormula::Expanded => {
            let f = |w: f64| Ok(bath_integrand_expanded(&cavity_coefficients(cfg, w)?, beta_l, beta_r));
            integrate_semiinfinite_with(&f, &bps, spec)
        }
    }
}

/// Both contributions. The total is integrated from the summed integrand,
/// whose large-k tail cancels; f_b is then total - f_ic.
pub fn force_total(cfg: &CavityConfig, state: &FieldState, beta_l: f64, beta_r: f64, spec: &QuadratureSpec) -> Result<ForceBreakdown> {
    check_beta(beta_l)?;
    check_beta(beta_r)?;
    let ic = force_ic(cfg, state, spec)?;
    let (total, err_total) = if cfg.is_dissipationless() {
        (ic.value, ic.error)
    } else {
        let g = |set: &CavityResponse| Ok(ic_integrand(set, state)? + bath_integrand(set, beta_l, beta_r));
        let e = integrate_cavity(cfg, g, &breakpoints(cfg, Some(state)), spec)?;
        (e.value, e.error)
    };
    let (f_b, err_b) = if cfg.is_dissipationless() { (0.0, 0.0) } else { (total - ic.value, err_total + ic.error) };
    Ok(ForceBreakdown {
        f_ic: ic.value,
        f_b,
        f_total: ic.value + f_b,
        err_ic: ic.error,
        err_b,
        err_total,
        cfg: *cfg,
        state: *state,
        beta_left: beta_l,
        beta_right: beta_r,
    })
}

/// Change of a force when the field state changes from `base` to `state`,
/// integrated from the weight difference only. Exact rewrite of
/// force_ic(state) - force_ic(base); useful when the weights differ on a
/// bounded window.
pub fn force_ic_difference(cfg: &CavityConfig, state: &FieldState, base: &FieldState, spec: &QuadratureSpec) -> Result<Estimate> {
    cfg.validate()?;
    let (state, base) = (state.validated()?, base.validated()?);
    if cfg.is_vacuum() {
        return Ok(Estimate::zero());
    }
    infrared_check(cfg, &state, spec)?;
    infrared_check(cfg, &base, spec)?;
    let f = |k: f64| {
        let dw = weight(&state, k)? - weight(&base, k)?;
        if dw == 0.0 {
            return Ok(0.0);
        }
        Ok(k * dw * cavity_response(cfg, k)?.ic_bracket())
    };
    let mut b = breakpoints(cfg, Some(&state));
    b.extend(base.breakpoints());
    integrate_semiinfinite_with(&f, &b, spec)
}

pub fn force_dissipationless(cfg: &CavityConfig, state: &FieldState, spec: &QuadratureSpec) -> Result<Estimate> {
    cfg.validate()?;
    let state = state.validated()?;
    if !cfg.is_dissipationless() || cfg.left.gamma0 != 0.0 || cfg.right.gamma0 != 0.0 {
        return Err(Error::InvalidParameter("dissipationless force needs lossless (static_nd) slabs".into()));
    }
    if let FieldState::SqueezedDelta { .. } = state {
        return Err(Error::NoPointwiseWeight);
    }
    if cfg.is_vacuum() {
        return Ok(Estimate::zero());
    }
    integrate_cavity(cfg, |set: &CavityResponse| dissipationless_integrand(set, &state), &breakpoints(cfg, Some(&state)), spec)
}

/// Force for squeezing concentrated at omega_center: the IC integrand there.
pub fn force_delta_squeezed(cfg: &CavityConfig, omega_center: f64) -> Result<f64> {
    if !(omega_center > 0.0) {
        return Err(Error::InvalidParameter("omega_center must be > 0".into()));
    }
    Ok(omega_center * cavity_response(cfg, omega_center)?.ic_bracket())
}

fn interface_imaginary(mat: &Material, xi: f64) -> Result<f64> {
    let n = mat.index_imaginary_axis(xi)?;
    Ok((1.0 - n) / (1.0 + n))
}

fn slab_imaginary(mat: &Material, d: f64, xi: f64) -> Result<f64> {
    let n = mat.index_imaginary_axis(xi)?;
    let rn = (1.0 - n) / (1.0 + n);
    let e = (-2.0 * xi * n * d).exp();
    Ok(rn * (1.0 - e) / (1.0 - rn * rn * e))
}

fn lifshitz_term(rl: f64, rr: f64, xi: f64, a: f64) -> f64 {
    let u = rl * rr * (-2.0 * xi * a).exp();
    xi * u / (1.0 - u)
}

/// Equilibrium force between half-spaces as a Matsubara sum,
/// (8 pi / beta) sum_{l>=1} xi_l u_l / (1 - u_l), u = rL rR e^{-2 xi a}.
pub fn lifshitz_matsubara(mat_l: &Material, mat_r: &Material, a: f64, beta: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    check_beta(beta)?;
    if mat_l.is_vacuum() || mat_r.is_vacuum() {
        return Ok(Estimate::zero());
    }
    let g = |xi: f64| Ok(lifshitz_term(interface_imaginary(mat_l, xi)?, interface_imaginary(mat_r, xi)?, xi, a));
    scale_sum(matsubara_sum(&g, beta, spec)?, 8.0 * PI / beta)
}

/// Equilibrium force between the finite slabs of `cfg` as a Matsubara sum.
pub fn lifshitz_matsubara_slabs(cfg: &CavityConfig, beta: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    check_beta(beta)?;
    cfg.validate()?;
    if cfg.left.is_vacuum() || cfg.right.is_vacuum() {
        return Ok(Estimate::zero());
    }
    let d = cfg.width;
    let g = |xi: f64| Ok(lifshitz_term(slab_imaginary(&cfg.left, d, xi)?, slab_imaginary(&cfg.right, d, xi)?, xi, cfg.gap));
    scale_sum(matsubara_sum(&g, beta, spec)?, 8.0 * PI / beta)
}

/// Zero-temperature equilibrium force between finite slabs, 4 int xi u/(1-u) dxi
/// along the imaginary frequency axis.
pub fn lifshitz_zero_temperature(cfg: &CavityConfig, spec: &QuadratureSpec) -> Result<Estimate> {
    cfg.validate()?;
    if cfg.left.is_vacuum() || cfg.right.is_vacuum() {
        return Ok(Estimate::zero());
    }
    let d = cfg.width;
    let g = |xi: f64| Ok(4.0 * lifshitz_term(slab_imaginary(&cfg.left, d, xi)?, slab_imaginary(&cfg.right, d, xi)?, xi, cfg.gap));
    let spec = QuadratureSpec { regulator: None, ..*spec };
    integrate_semiinfinite_with(&g, &[], &spec)
}

fn scale_sum(e: Estimate, c: f64) -> Result<Estimate> {
    Ok(Estimate { value: c * e.value, error: c * e.error, ..e })
}

/// Half-space limit. The IC and bath parts diverge separately (each carries
/// the free-field pressure); they are integrated as they stand and report
/// non-convergence unless a regulator is set. Their sum converges.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceForces {
    pub f_ic: Result<Estimate>,
    pub f_b: Result<Estimate>,
    pub total: Result<Estimate>,
}

#[derive(Debug, Clone, Copy)]
struct HalfspacePoint {
    a: f64,
    b: f64,
    q: f64,
    /// AB - Re u
    corr: f64,
}

fn halfspace_point(mat_l: &Material, mat_r: &Material, a: f64, w: f64) -> Result<HalfspacePoint> {
    let rl = mat_l.surface_reflection(w)?;
    let rr = mat_r.surface_reflection(w)?;
    let u = rl * rr * (2.0 * I * w * a).exp();
    let (al, bl) = (rl.norm_sqr(), rr.norm_sqr());
    Ok(HalfspacePoint { a: al, b: bl, q: 1.0 / (1.0 - u).norm_sqr(), corr: al * bl - u.re })
}

pub fn halfspace_ic_integrand(mat_l: &Material, mat_r: &Material, a: f64, beta_phi: f64, w: f64) -> Result<f64> {
    let p = halfspace_point(mat_l, mat_r, a, w)?;
    Ok(w * coth_half(beta_phi, w) * (1.0 + p.a))
}

pub fn halfspace_bath_integrand(mat_l: &Material, mat_r: &Material, a: f64, beta_l: f64, beta_r: f64, w: f64) -> Result<f64> {
    let p = halfspace_point(mat_l, mat_r, a, w)?;
    Ok(w * (coth_half(beta_l, w) * (1.0 - p.a) * (1.0 - (1.0 + p.b) * p.q) - coth_half(beta_r, w) * (1.0 - p.b) * (1.0 + p.a) * p.q))
}

/// IC plus bath half-space integrand, with the free-field parts cancelled analytically.
pub fn halfspace_total_integrand(mat_l: &Material, mat_r: &Material, a: f64, beta_l: f64, beta_r: f64, beta_phi: f64, w: f64) -> Result<f64> {
    let p = halfspace_point(mat_l, mat_r, a, w)?;
    let occ = |beta: f64| 2.0 / (beta * w).exp_m1();
    let vacuum = 4.0 * p.q * p.corr;
    let thermal = occ(beta_phi) * (1.0 + p.a) + occ(beta_l) * (1.0 - p.a) * (1.0 - (1.0 + p.b) * p.q)
        - occ(beta_r) * (1.0 - p.b) * (1.0 + p.a) * p.q;
    Ok(w * (vacuum + thermal))
}

pub fn halfspace_forces(
    mat_l: &Material,
    mat_r: &Material,
    a: f64,
    beta_l: f64,
    beta_r: f64,
    beta_phi: f64,
    spec: &QuadratureSpec,
) -> Result<HalfspaceForces> {
    mat_l.validate()?;
    mat_r.validate()?;
    for b in [beta_l, beta_r, beta_phi] {
        check_beta(b)?;
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter("gap must be > 0".into()));
    }
    let mut bps = mat_l.characteristic_frequencies();
    bps.extend(mat_r.characteristic_frequencies());
    let f_ic = if mat_l.is_vacuum() && spec.regulator.is_none() {
        // bare free-field pressure with nothing to compensate it
        Err(Error::NonConvergence { panels: 0, extent: 0.0 })
    } else {
        integrate_semiinfinite_with(&|w: f64| halfspace_ic_integrand(mat_l, mat_r, a, beta_phi, w), &bps, spec)
    };
    let f_b = integrate_semiinfinite_with(&|w: f64| halfspace_bath_integrand(mat_l, mat_r, a, beta_l, beta_r, w), &bps, spec);
    let total = integrate_semiinfinite_with(
        &|w: f64| halfspace_total_integrand(mat_l, mat_r, a, beta_l, beta_r, beta_phi, w),
        &bps,
        spec,
    );
    Ok(HalfspaceForces { f_ic, f_b, total })
}

/// Sign of the IC bracket over a k grid: Some(+1) or Some(-1) when single-signed.
pub fn ic_bracket_sign(cfg: &CavityConfig, grid: &[f64]) -> Result<Option<i8>> {
    let mut pos = false;
    let mut neg = false;
    for &k in grid {
        let b = cavity_response(cfg, k)?.ic_bracket();
        pos |= b > 0.0;
        neg |= b < 0.0;
    }
    Ok(match (pos, neg) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    })
}
