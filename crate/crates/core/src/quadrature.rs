//! Adaptive Gauss-Kronrod integration over (0, inf) in panels, and Matsubara
//! summation.
//!
//! Panels have width `panel_width` up to `uniform_extent` and then grow by the
//! factor `1 + growth`. Each panel is refined by bisection until its error
//! estimate meets the tolerance. Integration stops once three consecutive
//! panels each contribute less than `tail_threshold` times the running total.
//!
//! Integrands that oscillate in fast phases with a decaying envelope can
//! supply a phase-averaged version. Past the last breakpoint, once the
//! sampled envelope of (f - average) bounds the neglected oscillatory tail
//! below `averaging_tol` times the running total, the average is integrated
//! instead and that bound is added to the error.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub panel_width: f64,
    pub tail_threshold: f64,
    pub max_panels: usize,
    /// Panels are uniform below this k.
    pub uniform_extent: f64,
    /// Relative growth of panel width beyond `uniform_extent`.
    pub growth: f64,
    pub max_extent: f64,
    /// Bisection budget per panel.
    pub max_subdivisions: usize,
    /// Lower abscissa for the infrared finiteness check.
    pub k_min: f64,
    /// Maximum number of Matsubara terms.
    pub l_max: usize,
    /// Optional explicit cutoff: integrands are multiplied by exp(-k/cutoff).
    pub regulator: Option<f64>,
    /// Relative error allowed for switching to a phase-averaged tail.
    pub averaging_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-15,
            panel_width: std::f64::consts::FRAC_PI_2,
            tail_threshold: 1e-9,
            max_panels: 20_000,
            uniform_extent: 50.0,
            growth: 0.25,
            max_extent: 1e12,
            max_subdivisions: 2_000_000,
            k_min: 1e-8,
            l_max: 10_000_000,
            regulator: None,
            averaging_tol: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        let ok = pos(self.rel_tol)
            && pos(self.abs_tol)
            && pos(self.panel_width)
            && pos(self.tail_threshold)
            && pos(self.growth)
            && self.uniform_extent >= 0.0
            && self.max_extent > self.uniform_extent
            && self.max_panels > 0
            && self.max_subdivisions > 0
            && pos(self.k_min)
            && self.l_max > 0
            && pos(self.averaging_tol)
            && self.regulator.map_or(true, pos);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid quadrature spec: {self:?}")))
        }
    }

    pub fn with_regulator(mut self, cutoff: f64) -> Self {
        self.regulator = Some(cutoff);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    /// Panels (or series terms) used.
    pub panels: usize,
    /// Upper end of the integration range actually covered.
    pub extent: f64,
    pub evaluations: usize,
}

impl Estimate {
    pub fn zero() -> Self {
        Estimate { value: 0.0, error: 0.0, panels: 0, extent: 0.0, evaluations: 0 }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_745_243,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error.total_cmp(&o.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn eval_checked<F: Fn(f64) -> Result<f64>>(f: &F, x: f64) -> Result<f64> {
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NanIntegrand { at: x })
    }
}

/// One 21-point Gauss-Kronrod application with the QUADPACK error heuristic.
fn gk21<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<Piece> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = eval_checked(f, c)?;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = eval_checked(f, c - dx)?;
        let f2 = eval_checked(f, c + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Piece { a, b, value, error: err, resabs })
}

/// Adaptive bisection on [a, b]. Returns (value, error, resabs, evaluations).
pub fn integrate_interval<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<(f64, f64, f64, usize)> {
    integrate_interval_floor(f, a, b, spec, 0.0)
}

/// As `integrate_interval`, never asking for an error below `floor`.
fn integrate_interval_floor<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, spec: &QuadratureSpec, floor: f64) -> Result<(f64, f64, f64, usize)> {
    let first = gk21(f, a, b)?;
    let mut evals = 21;
    let mut heap = BinaryHeap::new();
    let (mut error, mut resabs) = (first.error, first.resabs);
    heap.push(first);
    let mut splits = 0;
    while error > spec.abs_tol.max(spec.rel_tol * resabs).max(floor) {
        if splits >= spec.max_subdivisions {
            return Err(Error::NonConvergence { panels: splits, extent: b });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // no room left to bisect; keep the estimate as is
            heap.push(worst);
            break;
        }
        let l = gk21(f, worst.a, mid)?;
        let r = gk21(f, mid, worst.b)?;
        evals += 42;
        splits += 1;
        error += l.error + r.error - worst.error;
        resabs += l.resabs + r.resabs - worst.resabs;
        heap.push(l);
        heap.push(r);
        if splits % 64 == 0 {
            // refresh the running sums to avoid drift
            error = heap.iter().map(|p| p.error).sum();
            resabs = heap.iter().map(|p| p.resabs).sum();
        }
    }
    let mut pieces = heap.into_vec();
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = pieces.iter().map(|p| p.value).sum();
    let error = pieces.iter().map(|p| p.error).sum();
    let resabs = pieces.iter().map(|p| p.resabs).sum();
    Ok((value, error, resabs, evals))
}

fn tail_estimate(last: &[f64]) -> f64 {
    // envelope of the last three panels, extrapolated geometrically when they decay
    let m: Vec<f64> = last.iter().map(|v| v.abs()).collect();
    let (p1, p2, p3) = (m[0], m[1], m[2]);
    let q = if p2 > 0.0 && p1 > 0.0 { (p3 / p2).max(p2 / p1) } else { 0.0 };
    let geometric = if q < 0.95 { p3 * q / (1.0 - q) } else { 20.0 * p3 };
    2.0 * geometric.max(p3)
}

/// Phase-averaged stand-in for an oscillatory integrand at large k.
pub struct AveragedTail<'a> {
    pub average: &'a dyn Fn(f64) -> Result<f64>,
    /// Lowest angular frequency (in k) of the oscillations removed by averaging.
    pub slowest_frequency: f64,
}

/// Integrate f over (0, inf) with extra panel boundaries at `breakpoints`.
pub fn integrate_semiinfinite_with<F: Fn(f64) -> Result<f64>>(f: &F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_semiinfinite_averaged(f, None, breakpoints, spec)
}

fn regulate(v: f64, k: f64, spec: &QuadratureSpec) -> f64 {
    match spec.regulator {
        Some(cut) => v * (-k / cut).exp(),
        None => v,
    }
}

/// Like `integrate_semiinfinite_with`, switching to `tail.average` when allowed.
pub fn integrate_semiinfinite_averaged<F: Fn(f64) -> Result<f64>>(
    f: &F,
    tail: Option<&AveragedTail>,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let regulated = |k: f64| -> Result<f64> { Ok(regulate(f(k)?, k, spec)) };
    let averaged = |k: f64| -> Result<f64> {
        let g = tail.expect("only called with a tail").average;
        Ok(regulate(g(k)?, k, spec))
    };
    let mut switched = false;
    let mut bps: Vec<f64> = breakpoints.iter().copied().filter(|b| *b > 0.0 && b.is_finite()).collect();
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    let last_bp = bps.last().copied().unwrap_or(0.0);
    let mut next_bp = 0;

    let mut acc = 0.0f64;
    let mut comp = 0.0;
    let mut err = 0.0;
    let mut absacc = 0.0;
    let mut recent = [0.0f64; 3];
    let mut quiet = 0;
    let mut evals = 0;
    let mut lo = 0.0;
    for panel in 0..spec.max_panels {
        let width = if lo < spec.uniform_extent { spec.panel_width } else { spec.growth * lo };
        let mut hi = lo + width;
        if lo < spec.uniform_extent && hi > spec.uniform_extent {
            hi = spec.uniform_extent;
        }
        while next_bp < bps.len() && bps[next_bp] <= lo {
            next_bp += 1;
        }
        if next_bp < bps.len() && bps[next_bp] < hi {
            hi = bps[next_bp];
        }
        if hi > spec.max_extent {
            return Err(Error::NonConvergence { panels: panel, extent: lo });
        }
        if let Some(t) = tail {
            if !switched && lo >= last_bp.max(spec.uniform_extent) && acc + comp != 0.0 {
                // envelope of f - average over one period of the slowest phase
                let period = 2.0 * std::f64::consts::PI / t.slowest_frequency;
                let mut amp = 0.0f64;
                for j in 0..16 {
                    let k = lo + period * (j as f64 + 0.5) / 16.0;
                    amp = amp.max((eval_checked(&regulated, k)? - eval_checked(&averaged, k)?).abs());
                }
                evals += 32;
                let bound = 2.0 * amp / t.slowest_frequency;
                if bound <= spec.averaging_tol * (acc + comp).abs() {
                    switched = true;
                    err += bound;
                }
            }
        }
        // a panel need not be resolved beyond rel_tol of the total so far
        let floor = spec.rel_tol * (acc + comp).abs();
        let (v, e, ra, n) = if switched {
            integrate_interval_floor(&averaged, lo, hi, spec, floor)?
        } else {
            integrate_interval_floor(&regulated, lo, hi, spec, floor)?
        };
        evals += n;
        // Neumaier summation keeps the running total exact to rounding
        let t = acc + v;
        comp += if acc.abs() >= v.abs() { (acc - t) + v } else { (v - t) + acc };
        acc = t;
        err += e;
        absacc += ra;
        recent = [recent[1], recent[2], v];
        lo = hi;
        let total = acc + comp;
        if hi >= last_bp && v.abs() <= spec.tail_threshold * total.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 {
            let value = total;
            let rounding = 4.0 * f64::EPSILON * absacc;
            return Ok(Estimate {
                value,
                error: err + tail_estimate(&recent) + rounding,
                panels: panel + 1,
                extent: hi,
                evaluations: evals,
            });
        }
    }
    Err(Error::NonConvergence { panels: spec.max_panels, extent: lo })
}

pub fn integrate_semiinfinite<F: Fn(f64) -> Result<f64>>(f: &F, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_semiinfinite_with(f, &[], spec)
}

/// Sum g(xi_l) over Matsubara frequencies xi_l = 2 pi l / beta, l >= 1.
pub fn matsubara_sum<G: Fn(f64) -> Result<f64>>(g: &G, beta: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
    }
    let step = 2.0 * std::f64::consts::PI / beta;
    let mut acc = 0.0f64;
    let mut comp = 0.0;
    let mut absacc = 0.0;
    let mut recent = [0.0f64; 3];
    let mut quiet = 0;
    for l in 1..=spec.l_max {
        let xi = step * l as f64;
        let v = g(xi)?;
        if !v.is_finite() {
            return Err(Error::NanIntegrand { at: xi });
        }
        let t = acc + v;
        comp += if acc.abs() >= v.abs() { (acc - t) + v } else { (v - t) + acc };
        acc = t;
        absacc += v.abs();
        recent = [recent[1], recent[2], v];
        let total = acc + comp;
        if v.abs() <= spec.tail_threshold * total.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 {
            return Ok(Estimate {
                value: total,
                error: series_tail(&recent, l) + 4.0 * f64::EPSILON * absacc,
                panels: l,
                extent: xi,
                evaluations: l,
            });
        }
    }
    Err(Error::SeriesNonConvergence { terms: spec.l_max })
}

/// Bound on the remainder after term `l`, from the larger of a geometric and a
/// power-law fit of the last terms.
fn series_tail(last: &[f64], l: usize) -> f64 {
    let (t2, t3) = (last[1].abs(), last[2].abs());
    if t3 == 0.0 {
        return 0.0;
    }
    let q = if t2 > 0.0 { t3 / t2 } else { 1.0 };
    let geometric = if q < 1.0 { t3 * q / (1.0 - q) } else { f64::INFINITY };
    // a power law l^-p leaves roughly t l / (p - 1)
    let lf = l as f64;
    let p = if q > 0.0 && q < 1.0 { -q.ln() / (lf / (lf - 1.0)).ln() } else { 0.0 };
    let power = if p > 1.0 { t3 * lf / (p - 1.0) } else { f64::INFINITY };
    2.0 * geometric.max(power)
}
