//! Pointwise xx stress integrands, built directly from mode values at x and
//! from slab integrals of |mode|². Serves as an independent check of the
//! closed-form force integrands.

use crate::error::{Error, Result};
use crate::forces::{bath_integrand, ic_integrand};
use crate::scattering::{cavity_coefficients, CavityConfig, ModeFunction, ModeKind, Region, ScatteringSet};
use crate::states::{weight, FieldState};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StressRegion {
    ExteriorLeft,
    Gap,
    ExteriorRight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub x: f64,
    pub region: StressRegion,
}

impl RegionPoint {
    pub fn new(cfg: &CavityConfig, x: f64) -> Result<Self> {
        let region = match cfg.region(x) {
            Region::ExteriorLeft => StressRegion::ExteriorLeft,
            Region::Gap => StressRegion::Gap,
            Region::ExteriorRight => StressRegion::ExteriorRight,
            _ => return Err(Error::UnsupportedRegion { x }),
        };
        Ok(RegionPoint { x, region })
    }

    fn check(&self, cfg: &CavityConfig) -> Result<()> {
        let ok = matches!(
            (cfg.region(self.x), self.region),
            (Region::ExteriorLeft, StressRegion::ExteriorLeft)
                | (Region::Gap, StressRegion::Gap)
                | (Region::ExteriorRight, StressRegion::ExteriorRight)
        );
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedRegion { x: self.x })
        }
    }
}

/// (omega²|psi|² + |psi'|²)/2 for a combination of e^{-sx} and e^{sx}.
fn energy(v: Complex64, dv: Complex64, w: f64) -> f64 {
    0.5 * (w * w * v.norm_sqr() + dv.norm_sqr())
}

/// IC stress integrand at x: (1/k) F(k) summed over the two modes of
/// (k²|Phi|² + |Phi'|²)/2.
pub fn txx_ic_integrand(cfg: &CavityConfig, state: &FieldState, p: &RegionPoint, k: f64) -> Result<f64> {
    p.check(cfg)?;
    let set = cavity_coefficients(cfg, k)?;
    let mut sum = 0.0;
    for kind in [ModeKind::PhiGreater, ModeKind::PhiLess] {
        let (v, dv) = ModeFunction::new(kind, set).eval_with_derivative(p.x);
        sum += energy(v, dv, k);
    }
    Ok(weight(state, k)? * sum / k)
}

/// Integral over y in [0, d] of |u|², where u solves u'' = -(omega n)² u with
/// u(0) = u0 and u(d) = u1.
pub fn slab_square_integral(u0: Complex64, u1: Complex64, n: Complex64, w: f64, d: f64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let e = (i * w * n * d).exp();
    let den = 1.0 - e * e;
    let p = (u0 - e * u1) / den;
    let q = (u1 - e * u0) / den;
    let x = 2.0 * w * n.im * d;
    let decay = if x > 1e-12 { -(-x).exp_m1() / (2.0 * w * n.im) } else { d * (1.0 - 0.5 * x) };
    let y = 2.0 * w * n.re * d;
    let osc = if y.abs() > 1e-12 { ((i * y).exp() - 1.0) / (i * 2.0 * w * n.re) } else { Complex64::new(d, 0.0) };
    (p.norm_sqr() + q.norm_sqr()) * decay + 2.0 * (p * q.conj() * (-i * w * n.conj() * d).exp() * osc).re
}

/// Per-slab ingredients for one point: field factor at x and slab integral of
/// the partner mode.
struct SlabPiece {
    factor: f64,
    integral: f64,
}

fn left_exterior_pieces(set: &ScatteringSet, x: f64) -> [SlabPiece; 2] {
    // G = -e^{sx} Phi>(x')/(2s) for x' to the right of x
    let s = Complex64::new(0.0, -set.omega);
    let (w, a, d) = (set.omega, set.gap, set.width);
    let h = 0.5 * a;
    let g = &set.greater;
    let psi = (s * x).exp();
    let factor = energy(psi, s * psi, w) / (w * w);
    let ul0 = (s * (h + d)).exp() + g.reflection * (-s * (h + d)).exp();
    let ul1 = g.far.gap_c * (s * h).exp() + g.far.gap_d * (-s * h).exp();
    let ur0 = g.far.gap_c * (-s * h).exp() + g.far.gap_d * (s * h).exp();
    let ur1 = g.far.transmission * (-s * (h + d)).exp();
    [
        SlabPiece { factor, integral: slab_square_integral(ul0, ul1, set.left.index, w, d) },
        SlabPiece { factor, integral: slab_square_integral(ur0, ur1, set.right.index, w, d) },
    ]
}

fn gap_pieces(set: &ScatteringSet, x: f64) -> [SlabPiece; 2] {
    let s = Complex64::new(0.0, -set.omega);
    let (w, a, d) = (set.omega, set.gap, set.width);
    let h = 0.5 * a;
    let k = set.multiple;
    let (l, r) = (&set.left, &set.right);
    let esd = (s * d).exp();
    let ea = (-s * a).exp();
    // left slab: G = [Phi<(x')/tR][Phi>(x) tR/T]/(-2s)
    let psi = (-s * d).exp() * ((-s * x).exp() + r.r * ea * (s * x).exp());
    let dpsi = (-s * d).exp() * (-s * (-s * x).exp() + s * r.r * ea * (s * x).exp());
    let f_left = energy(psi, dpsi, w) / (w * w);
    let v0 = l.t * esd * esd * k * (-s * (h + d)).exp();
    let v1 = esd * (-s * h).exp() * k * (1.0 + l.r);
    // right slab: G = [Phi<(x) tL/T][Phi>(x')/tL]/(-2s)
    let psi = (-s * d).exp() * ((s * x).exp() + l.r * ea * (-s * x).exp());
    let dpsi = (-s * d).exp() * (s * (s * x).exp() - s * l.r * ea * (-s * x).exp());
    let f_right = energy(psi, dpsi, w) / (w * w);
    let w0 = esd * (-s * h).exp() * k * (1.0 + r.r);
    let w1 = r.t * esd * esd * k * (-s * (h + d)).exp();
    [
        SlabPiece { factor: f_left, integral: slab_square_integral(v0, v1, l.index, w, d) },
        SlabPiece { factor: f_right, integral: slab_square_integral(w0, w1, r.index, w, d) },
    ]
}

fn coth_half(beta: f64, w: f64) -> f64 {
    1.0 / (0.5 * beta * w).tanh()
}

/// Bath stress integrand at x: sum over slabs of
/// 2 omega² Re(n) Im(n) coth(beta omega/2) times field factor times slab integral.
pub fn txx_bath_integrand(cfg: &CavityConfig, temps: (f64, f64), p: &RegionPoint, omega: f64) -> Result<f64> {
    p.check(cfg)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be > 0".into()));
    }
    if cfg.is_dissipationless() {
        return Ok(0.0);
    }
    let set = cavity_coefficients(cfg, omega)?;
    let (pieces, mats, betas) = match p.region {
        StressRegion::ExteriorLeft => (left_exterior_pieces(&set, p.x), [set.left, set.right], [temps.0, temps.1]),
        StressRegion::Gap => (gap_pieces(&set, p.x), [set.left, set.right], [temps.0, temps.1]),
        StressRegion::ExteriorRight => {
            // mirror image: right exterior of the swapped cavity is the left exterior
            let sw = set.swapped();
            (left_exterior_pieces(&sw, -p.x), [sw.left, sw.right], [temps.1, temps.0])
        }
    };
    let mut total = 0.0;
    for (piece, (m, beta)) in pieces.iter().zip(mats.iter().zip(betas)) {
        let n = m.index;
        if n.im == 0.0 {
            continue;
        }
        total += 2.0 * omega * omega * n.re * n.im * coth_half(beta, omega) * piece.factor * piece.integral;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureCheck {
    /// Largest relative deviation of the stress IC difference from the closed form.
    pub ic_max_deviation: f64,
    pub bath_max_deviation: f64,
    pub samples: usize,
}

pub fn relative_deviation(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m == 0.0 {
        0.0
    } else {
        (a - b).abs() / m
    }
}

/// Relative deviation, treating differences at the rounding level of the
/// summed stress terms (`scale`) as exact agreement.
fn deviation(a: f64, b: f64, scale: f64) -> f64 {
    if (a - b).abs() <= 64.0 * f64::EPSILON * scale {
        0.0
    } else {
        relative_deviation(a, b)
    }
}

/// Exterior minus gap stress integrands against the closed-form force integrands.
pub fn pressure_difference(cfg: &CavityConfig, temps: (f64, f64), state: &FieldState, omega_grid: &[f64]) -> Result<PressureCheck> {
    let ext = RegionPoint::new(cfg, -cfg.width - 0.5 * cfg.gap - 0.37 * cfg.gap)?;
    let gap = RegionPoint::new(cfg, 0.11 * cfg.gap)?;
    let mut ic_dev: f64 = 0.0;
    let mut bath_dev: f64 = 0.0;
    for &w in omega_grid {
        let set = cavity_coefficients(cfg, w)?;
        let (ie, ig) = (txx_ic_integrand(cfg, state, &ext, w)?, txx_ic_integrand(cfg, state, &gap, w)?);
        ic_dev = ic_dev.max(deviation(ie - ig, ic_integrand(&set, state)?, ie.abs() + ig.abs()));
        let (be, bg) = (txx_bath_integrand(cfg, temps, &ext, w)?, txx_bath_integrand(cfg, temps, &gap, w)?);
        let closed = if cfg.is_dissipationless() { 0.0 } else { bath_integrand(&set, temps.0, temps.1) };
        bath_dev = bath_dev.max(deviation(be - bg, closed, be.abs() + bg.abs()));
    }
    Ok(PressureCheck { ic_max_deviation: ic_dev, bath_max_deviation: bath_dev, samples: omega_grid.len() })
}
