//! Single-slab and two-slab scattering coefficients, mode functions and the
//! Green function of the two-plate geometry.
//!
//! Layout: left slab on [-d-a/2, -a/2], gap on [-a/2, a/2], right slab on
//! [a/2, a/2+d]. Coefficients are evaluated at s = -i omega. Amplitudes of
//! waves inside a slab are stored relative to the face the wave leaves from,
//! so every stored number stays bounded for opaque slabs.

use crate::error::{Error, Result};
use crate::material::{interface_reflection, Material};
use num_complex::Complex64;


#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    pub gap: f64,
    pub width: f64,
    pub left: Material,
    pub right: Material,
}

impl CavityConfig {
    pub fn new(gap: f64, width: f64, left: Material, right: Material) -> Result<Self> {
        let cfg = CavityConfig { gap, width, left, right };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn symmetric(gap: f64, width: f64, mat: Material) -> Result<Self> {
        Self::new(gap, width, mat, mat)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::InvalidParameter(format!("gap must be > 0, got {}", self.gap)));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::InvalidParameter(format!("width must be > 0, got {}", self.width)));
        }
        self.left.validate()?;
        self.right.validate()
    }

    pub fn swapped(&self) -> Self {
        CavityConfig { left: self.right, right: self.left, ..*self }
    }

    pub fn is_dissipationless(&self) -> bool {
        self.left.is_dissipationless() && self.right.is_dissipationless()
    }

    pub fn is_vacuum(&self) -> bool {
        self.left.is_vacuum() && self.right.is_vacuum()
    }

    pub fn region(&self, x: f64) -> Region {
        let h = 0.5 * self.gap;
        let outer = h + self.width;
        if x <= -outer {
            Region::ExteriorLeft
        } else if x < -h {
            Region::SlabLeft
        } else if x <= h {
            Region::Gap
        } else if x < outer {
            Region::SlabRight
        } else {
            Region::ExteriorRight
        }
    }

    /// Frequencies where integrands change character.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = self.left.characteristic_frequencies();
        v.extend(self.right.characteristic_frequencies());
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    ExteriorLeft,
    SlabLeft,
    Gap,
    SlabRight,
    ExteriorRight,
}

/// Response of one slab of width d at real frequency omega.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabResponse {
    pub index: Complex64,
    /// Interface coefficient (1-n)/(1+n).
    pub interface: Complex64,
    pub r: Complex64,
    pub t: Complex64,
    /// t e^{-i omega n d}; bounded when the slab is opaque.
    pub t_hat: Complex64,
    /// Single pass factor e^{i omega n d}.
    pub pass: Complex64,
    /// Phase of `pass`, omega Re(n) d (plus any imposed shift).
    pub phase: f64,
    /// |pass|² = e^{-2 omega Im(n) d}.
    pub attenuation: f64,
    /// 1 - |r|² - |t|², computed without cancellation.
    pub absorption: f64,
    /// 2 Re(conj(r) t).
    pub asymmetry: f64,
    /// |t² - r²|² - 1.
    pub defect: f64,
}

impl SlabResponse {
    fn conj(self) -> Self {
        SlabResponse {
            index: self.index.conj(),
            interface: self.interface.conj(),
            r: self.r.conj(),
            t: self.t.conj(),
            t_hat: self.t_hat.conj(),
            pass: self.pass.conj(),
            phase: -self.phase,
            ..self
        }
    }
}

pub fn slab_coefficients(mat: &Material, d: f64, omega: f64) -> Result<SlabResponse> {
    let n = mat.refractive_index(omega.abs())?;
    let resp = slab_from_index(n, d, omega.abs(), 0.0);
    Ok(if omega < 0.0 { resp.conj() } else { resp })
}

/// Slab response for index n; `shift` is added to the single-pass phase.
pub fn slab_from_index(n: Complex64, d: f64, omega: f64, shift: f64) -> SlabResponse {
    let rn = interface_reflection(n);
    let x = 2.0 * omega * n.im * d;
    let phase = omega * n.re * d + shift;
    let h = Complex64::from_polar((-0.5 * x).exp(), phase);
    let en = h * h;
    let den = 1.0 - rn * rn * en;
    let t_hat = (1.0 - rn * rn) / den;
    let r = rn * (1.0 - en) / den;
    let t = t_hat * h;
    // even and odd channel losses, 1 - |t +- r|², from the closed forms of t +- r
    let one_minus_att = -(-x).exp_m1();
    let base = (1.0 - rn.norm_sqr()) * one_minus_att;
    let cross = 4.0 * rn.im * h.im;
    let a_plus = (base - cross) / (1.0 + rn * h).norm_sqr();
    let a_minus = (base + cross) / (1.0 - rn * h).norm_sqr();
    SlabResponse {
        index: n,
        interface: rn,
        r,
        t,
        t_hat,
        pass: h,
        phase,
        attenuation: (-x).exp(),
        absorption: 0.5 * (a_plus + a_minus),
        asymmetry: 0.5 * (a_minus - a_plus),
        defect: -a_plus - a_minus + a_plus * a_minus,
    }
}

/// Amplitudes of one mode in the gap and on the transmitted side, optionally
/// divided by a common factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmittedPart {
    pub gap_c: Complex64,
    pub gap_d: Complex64,
    /// Coefficient of e^{-s n (x - a/2)} in the far slab.
    pub far_e: Complex64,
    /// Coefficient of e^{s n (x - a/2 - d)} in the far slab.
    pub far_f: Complex64,
    pub transmission: Complex64,
}

/// Mode launched from the left (incoming e^{-sx}). The mode launched from the
/// right is the same object computed for the mirrored cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitudes {
    pub reflection: Complex64,
    /// Coefficient of e^{-s n (x + a/2 + d)} in the near slab.
    pub near_a: Complex64,
    /// Coefficient of e^{s n (x + a/2)} in the near slab.
    pub near_b: Complex64,
    pub far: TransmittedPart,
    /// The transmitted part divided by the near slab's t.
    pub far_scaled: TransmittedPart,
    pub n_near: Complex64,
    pub n_far: Complex64,
}

/// What the force integrands need: both slabs and the gap round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityResponse {
    pub omega: f64,
    pub gap: f64,
    pub width: f64,
    pub left: SlabResponse,
    pub right: SlabResponse,
    /// e^{2 i omega a} (plus any imposed phase shift).
    pub round_trip: Complex64,
    /// 1/(1 - rL rR round_trip).
    pub multiple: Complex64,
}

/// Offsets added to the fast phases: the gap round trip and the single pass
/// through each slab.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseShift {
    pub gap: f64,
    pub slab: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringSet {
    pub response: CavityResponse,
    /// Phi> (incoming from the left).
    pub greater: ModeAmplitudes,
    /// Phi< expressed in the mirrored frame, Phi<(x) = mirrored(-x).
    pub less: ModeAmplitudes,
}

fn mode_amplitudes(near: &SlabResponse, far: &SlabResponse, k: Complex64, e2: Complex64, omega: f64, a: f64, d: f64) -> ModeAmplitudes {
    let s = Complex64::new(0.0, -omega);
    let esd = (s * d).exp();
    let outer = (s * (0.5 * a + d)).exp();
    let rho = near.r + far.r * near.t * near.t * e2 * k;
    let g = -near.interface * near.t_hat + far.r * near.t_hat * near.t_hat * e2 * k;
    let nn = near.index;
    let nf = far.index;
    let far_part = |scale: Complex64| TransmittedPart {
        gap_c: esd * k * scale,
        gap_d: (-s * a).exp() * esd * far.r * k * scale,
        far_e: (nf + 1.0) / (2.0 * nf) / outer * far.t_hat * esd * esd * k * scale,
        far_f: (nf - 1.0) / (2.0 * nf) / outer * far.t * esd * esd * k * scale,
        transmission: far.t * esd * esd * k * scale,
    };
    ModeAmplitudes {
        reflection: rho * (s * (a + 2.0 * d)).exp(),
        near_a: (nn + 1.0) / (2.0 * nn) * outer * (1.0 - near.interface * rho),
        near_b: (nn + 1.0) / (2.0 * nn) * outer * near.pass * g,
        far: far_part(near.t),
        far_scaled: far_part(Complex64::new(1.0, 0.0)),
        n_near: nn,
        n_far: nf,
    }
}

impl ModeAmplitudes {

    /// Raw coefficients (A, B, E, F) of e^{-snx}, e^{snx} in the near and far
    /// slabs. May overflow for opaque slabs.
    pub fn raw_in_slab(&self, omega: f64, a: f64, d: f64) -> [Complex64; 4] {
        let s = Complex64::new(0.0, -omega);
        let h = 0.5 * a;
        [
            self.near_a * (-s * self.n_near * (h + d)).exp(),
            self.near_b * (-s * self.n_near * h).exp(),
            self.far.far_e * (s * self.n_far * h).exp(),
            self.far.far_f * (-s * self.n_far * (h + d)).exp(),
        ]
    }
}

pub fn cavity_coefficients(cfg: &CavityConfig, omega: f64) -> Result<ScatteringSet> {
    let r = cavity_response(cfg, omega)?;
    let (a, d) = (r.gap, r.width);
    Ok(ScatteringSet {
        response: r,
        greater: mode_amplitudes(&r.left, &r.right, r.multiple, r.round_trip, omega, a, d),
        less: mode_amplitudes(&r.right, &r.left, r.multiple, r.round_trip, omega, a, d),
    })
}

pub fn cavity_response(cfg: &CavityConfig, omega: f64) -> Result<CavityResponse> {
    cfg.validate()?;
    if omega == 0.0 {
        return Err(Error::InvalidParameter("cavity coefficients need omega != 0".into()));
    }
    let left = slab_coefficients(&cfg.left, cfg.width, omega)?;
    let right = slab_coefficients(&cfg.right, cfg.width, omega)?;
    response_from_slabs(left, right, omega, cfg.gap, cfg.width, 0.0)
}

/// Cavity response with shifted fast phases (omega > 0).
pub fn cavity_response_shifted(cfg: &CavityConfig, omega: f64, shift: PhaseShift) -> Result<CavityResponse> {
    let nl = cfg.left.refractive_index(omega)?;
    let nr = cfg.right.refractive_index(omega)?;
    let left = slab_from_index(nl, cfg.width, omega, shift.slab);
    let right = slab_from_index(nr, cfg.width, omega, shift.slab);
    response_from_slabs(left, right, omega, cfg.gap, cfg.width, shift.gap)
}

fn response_from_slabs(left: SlabResponse, right: SlabResponse, omega: f64, a: f64, d: f64, gap_shift: f64) -> Result<CavityResponse> {
    let e2 = Complex64::from_polar(1.0, 2.0 * omega * a + gap_shift);
    let den = 1.0 - left.r * right.r * e2;
    if den.norm() < 1e-14 {
        return Err(Error::CavityResonance { omega });
    }
    Ok(CavityResponse { omega, gap: a, width: d, left, right, round_trip: e2, multiple: den.inv() })
}

impl std::ops::Deref for ScatteringSet {
    type Target = CavityResponse;
    fn deref(&self) -> &CavityResponse {
        &self.response
    }
}

impl CavityResponse {
    /// Stable form of 1 + |R>|² + |T|² - |C>|² - |D>|² - |C<|² - |D<|².
    pub fn ic_bracket(&self) -> f64 {
        let e2 = self.round_trip;
        let (l, r) = (&self.left, &self.right);
        let u = l.r * r.r * e2;
        let s = 4.0 * (u.norm_sqr() - u.re)
            + 2.0 * l.absorption * u.re
            + r.r.norm_sqr() * l.defect
            + 2.0 * (r.r * e2 * l.t).re * l.asymmetry
            + 2.0 * l.r.norm_sqr() * r.absorption
            + 2.0 * l.absorption * r.r.norm_sqr()
            + l.absorption * r.absorption;
        s * self.multiple.norm_sqr()
    }

    pub fn swapped(&self) -> Self {
        CavityResponse { left: self.right, right: self.left, ..*self }
    }
}

impl ScatteringSet {
    pub fn swapped(&self) -> Self {
        ScatteringSet { response: self.response.swapped(), greater: self.less, less: self.greater }
    }

    pub fn transmission(&self) -> Complex64 {
        self.greater.far.transmission
    }

    /// The same bracket summed term by term from the coefficient magnitudes.
    pub fn ic_bracket_direct(&self) -> f64 {
        let g = &self.greater;
        let l = &self.less;
        1.0 + g.reflection.norm_sqr() + g.far.transmission.norm_sqr()
            - g.far.gap_c.norm_sqr()
            - g.far.gap_d.norm_sqr()
            - l.far.gap_c.norm_sqr()
            - l.far.gap_d.norm_sqr()
    }
}

/// Which of the two independent solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    PhiLess,
    PhiGreater,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub kind: ModeKind,
    pub coefficients: ScatteringSet,
}

/// Value and x-derivative of Phi> described by `m` at x.
fn eval_greater(m: &ModeAmplitudes, omega: f64, a: f64, d: f64, x: f64) -> (Complex64, Complex64) {
    let s = Complex64::new(0.0, -omega);
    let h = 0.5 * a;
    let outer = h + d;
    if x <= -outer {
        let (em, ep) = ((-s * x).exp(), (s * x).exp());
        (em + m.reflection * ep, s * (-em + m.reflection * ep))
    } else if x < -h {
        let sn = s * m.n_near;
        let u = m.near_a * (-sn * (x + outer)).exp();
        let v = m.near_b * (sn * (x + h)).exp();
        (u + v, sn * (v - u))
    } else {
        eval_transmitted(&m.far, m.n_far, omega, a, d, x)
    }
}

fn eval_transmitted(p: &TransmittedPart, nf: Complex64, omega: f64, a: f64, d: f64, x: f64) -> (Complex64, Complex64) {
    let s = Complex64::new(0.0, -omega);
    let h = 0.5 * a;
    let outer = h + d;
    if x <= h {
        let u = p.gap_c * (-s * x).exp();
        let v = p.gap_d * (s * x).exp();
        (u + v, s * (v - u))
    } else if x < outer {
        let sn = s * nf;
        let u = p.far_e * (-sn * (x - h)).exp();
        let v = p.far_f * (sn * (x - outer)).exp();
        (u + v, sn * (v - u))
    } else {
        let u = p.transmission * (-s * x).exp();
        (u, -s * u)
    }
}

impl ModeFunction {
    pub fn new(kind: ModeKind, coefficients: ScatteringSet) -> Self {
        ModeFunction { kind, coefficients }
    }

    /// Value and first derivative at x.
    pub fn eval_with_derivative(&self, x: f64) -> (Complex64, Complex64) {
        let c = &self.coefficients;
        match self.kind {
            ModeKind::PhiGreater => eval_greater(&c.greater, c.omega, c.gap, c.width, x),
            ModeKind::PhiLess => {
                let (v, dv) = eval_greater(&c.less, c.omega, c.gap, c.width, -x);
                (v, -dv)
            }
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_with_derivative(x).0
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        self.eval_with_derivative(x).1
    }
}

pub fn mode_eval(mode: &ModeFunction, x: f64) -> Complex64 {
    mode.eval(x)
}

/// Green function G(x, x', s = -i omega) with unit jump of the x-derivative at x = x'.
/// x must lie outside the slabs; x' may be anywhere.
pub fn green_function(cfg: &CavityConfig, x: f64, xp: f64, omega: f64) -> Result<Complex64> {
    let set = cavity_coefficients(cfg, omega)?;
    green_from_set(&set, cfg, x, xp)
}

pub fn green_from_set(set: &ScatteringSet, cfg: &CavityConfig, x: f64, xp: f64) -> Result<Complex64> {
    match cfg.region(x) {
        Region::SlabLeft | Region::SlabRight => Err(Error::UnsupportedRegion { x }),
        Region::ExteriorRight => {
            green_from_set(&set.swapped(), &cfg.swapped(), -x, -xp)
        }
        Region::ExteriorLeft => {
            let s = Complex64::new(0.0, -set.omega);
            let pre = -0.5 / s;
            let greater = ModeFunction::new(ModeKind::PhiGreater, *set);
            if xp <= x {
                Ok(pre * (s * xp).exp() * greater.eval(x))
            } else {
                Ok(pre * (s * x).exp() * greater.eval(xp))
            }
        }
        Region::Gap => {
            let s = Complex64::new(0.0, -set.omega);
            let (a, d, w) = (set.gap, set.width, set.omega);
            let pre = -0.5 / s;
            let esd = (-s * d).exp();
            let ea = (-s * a).exp();
            if xp <= x {
                // Phi<(x')/tR times Phi>(x) tR / T
                let less = eval_scaled(&set.less, w, a, d, -xp);
                let tail = esd * ((-s * x).exp() + set.right.r * ea * (s * x).exp());
                Ok(pre * less * tail)
            } else {
                let greater = eval_scaled(&set.greater, w, a, d, xp);
                let tail = esd * ((s * x).exp() + set.left.r * ea * (-s * x).exp());
                Ok(pre * greater * tail)
            }
        }
    }
}

/// Phi> divided by the near slab's t, for x at or beyond the near gap face.
fn eval_scaled(m: &ModeAmplitudes, omega: f64, a: f64, d: f64, x: f64) -> Complex64 {
    eval_transmitted(&m.far_scaled, m.n_far, omega, a, d, x).0
}
