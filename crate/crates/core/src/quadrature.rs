//! Complex oscillatory integrals ∫ ρ(μ) e^{-iφ(μ)} dμ with error control.
//!
//! The engine bisects the domain into panels over which the phase varies by
//! at most 2π, applies fixed-order Gauss-Legendre to the full complex
//! integrand on each panel, and refines the worst panel until the summed
//! 15-vs-7 order-comparison error estimate meets the tolerance. A midpoint
//! Riemann sum is provided as a deliberately simple oracle for tests.

use num_complex::Complex64;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::spectral::MassDensity;

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;

/// Hard cap on the number of panels before the engine gives up.
pub const PANEL_BUDGET: usize = 1 << 18;

/// Maximum phase change allowed across a single panel.
pub const MAX_PANEL_PHASE: f64 = std::f64::consts::TAU;

// The initial subdivision aims well below the cap: at a quarter period per
// panel the 15-vs-7 comparison usually meets the tolerance without any
// heap refinement, which is much cheaper than refining 2π panels later.
const INITIAL_PANEL_PHASE: f64 = MAX_PANEL_PHASE / 4.0;

// 15-point Gauss-Legendre rule on [-1, 1].
#[allow(clippy::excessive_precision)]
const GL15_NODES: [f64; 15] = [
    -0.987_992_518_020_485_428_489_565_718_586,
    -0.937_273_392_400_705_904_307_758_947_710,
    -0.848_206_583_410_427_216_200_648_320_774,
    -0.724_417_731_360_170_047_416_186_054_613,
    -0.570_972_172_608_538_847_537_226_737_253,
    -0.394_151_347_077_563_369_897_207_370_981,
    -0.201_194_093_997_434_522_300_628_303_394,
    0.0,
    0.201_194_093_997_434_522_300_628_303_394,
    0.394_151_347_077_563_369_897_207_370_981,
    0.570_972_172_608_538_847_537_226_737_253,
    0.724_417_731_360_170_047_416_186_054_613,
    0.848_206_583_410_427_216_200_648_320_774,
    0.937_273_392_400_705_904_307_758_947_710,
    0.987_992_518_020_485_428_489_565_718_586,
];
#[allow(clippy::excessive_precision)]
const GL15_WEIGHTS: [f64; 15] = [
    0.030_753_241_996_117_268_354_628_393_577,
    0.070_366_047_488_108_124_709_267_416_450,
    0.107_159_220_467_171_935_011_869_546_685,
    0.139_570_677_926_154_314_447_804_794_511,
    0.166_269_205_816_993_933_553_200_860_481,
    0.186_161_000_015_562_211_026_800_561_866,
    0.198_431_485_327_111_576_456_118_326_443,
    0.202_578_241_925_561_272_880_620_199_967,
    0.198_431_485_327_111_576_456_118_326_443,
    0.186_161_000_015_562_211_026_800_561_866,
    0.166_269_205_816_993_933_553_200_860_481,
    0.139_570_677_926_154_314_447_804_794_511,
    0.107_159_220_467_171_935_011_869_546_685,
    0.070_366_047_488_108_124_709_267_416_450,
    0.030_753_241_996_117_268_354_628_393_577,
];

// 7-point Gauss-Legendre rule on [-1, 1], used for the order comparison.
#[allow(clippy::excessive_precision)]
const GL7_NODES: [f64; 7] = [
    -0.949_107_912_342_758_524_526_189_684_047,
    -0.741_531_185_599_394_439_863_864_773_280,
    -0.405_845_151_377_397_166_906_606_412_076,
    0.0,
    0.405_845_151_377_397_166_906_606_412_076,
    0.741_531_185_599_394_439_863_864_773_280,
    0.949_107_912_342_758_524_526_189_684_047,
];
#[allow(clippy::excessive_precision)]
const GL7_WEIGHTS: [f64; 7] = [
    0.129_484_966_168_869_693_270_611_432_679,
    0.279_705_391_489_276_667_901_467_771_423,
    0.381_830_050_505_118_944_950_369_775_488,
    0.417_959_183_673_469_387_755_102_040_816,
    0.381_830_050_505_118_944_950_369_775_488,
    0.279_705_391_489_276_667_901_467_771_423,
    0.129_484_966_168_869_693_270_611_432_679,
];

/// An oscillatory integral ∫_a^b density(μ)·e^{-i·phase(μ)} dμ.
///
/// Only continuous densities are integrable; the discrete case is summed in
/// closed form by the amplitude layer and never reaches the engine.
pub struct OscillatorySpec<'a, F>
where
    F: Fn(f64) -> f64 + Sync,
{
    pub density: &'a MassDensity,
    pub phase: F,
    pub domain: (f64, f64),
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl<'a, F> OscillatorySpec<'a, F>
where
    F: Fn(f64) -> f64 + Sync,
{
    /// Spec over `domain` with the default tolerances.
    pub fn new(density: &'a MassDensity, phase: F, domain: (f64, f64)) -> Result<Self> {
        Self::with_tolerances(density, phase, domain, DEFAULT_REL_TOL, DEFAULT_ABS_TOL)
    }

    pub fn with_tolerances(
        density: &'a MassDensity,
        phase: F,
        domain: (f64, f64),
        rel_tol: f64,
        abs_tol: f64,
    ) -> Result<Self> {
        let (a, b) = domain;
        if !(a >= 0.0 && a < b) || !b.is_finite() {
            return Err(Error::invalid(format!(
                "integration domain must satisfy 0 <= a < b (got [{a}, {b}])"
            )));
        }
        if let Some(cutoff) = density.cutoff_hi() {
            if b > cutoff {
                return Err(Error::invalid(format!(
                    "domain upper bound {b} exceeds the density cutoff {cutoff}"
                )));
            }
        }
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        Ok(Self {
            density,
            phase,
            domain,
            rel_tol,
            abs_tol,
        })
    }

    fn continuous(&self) -> Result<&crate::spectral::BreitWignerDensity> {
        match self.density {
            MassDensity::BreitWigner(bw) => Ok(bw),
            MassDensity::Discrete(_) => Err(Error::invalid(
                "oscillatory integration requires a continuous density",
            )),
        }
    }
}

/// Value of an oscillatory integral together with its accuracy diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.lo == other.lo
    }
}
impl Eq for Panel {}

// Max-heap by error estimate; ties broken by position so that refinement
// order (and therefore the result) is fully deterministic.
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn eval_panel<W, F>(weight: &W, phase: &F, lo: f64, hi: f64) -> (Complex64, f64)
where
    W: Fn(f64) -> f64,
    F: Fn(f64) -> f64,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let sample = |x: f64| -> Complex64 {
        let mu = center + half * x;
        let (s, c) = phase(mu).sin_cos();
        weight(mu) * Complex64::new(c, -s)
    };
    let mut i15 = Complex64::new(0.0, 0.0);
    for (x, w) in GL15_NODES.iter().zip(GL15_WEIGHTS.iter()) {
        i15 += *w * sample(*x);
    }
    let mut i7 = Complex64::new(0.0, 0.0);
    for (x, w) in GL7_NODES.iter().zip(GL7_WEIGHTS.iter()) {
        i7 += *w * sample(*x);
    }
    let value = half * i15;
    let err = (half * (i15 - i7)).norm();
    (value, err)
}

/// Sum panels in ascending domain order. Keeps the final value independent
/// of heap layout.
fn ordered_sum(panels: &mut [Panel]) -> (Complex64, f64) {
    panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for p in panels.iter() {
        value += p.value;
        err += p.err;
    }
    (value, err)
}

/// Adaptive oscillatory integration of an arbitrary continuous weight.
///
/// `seeds` lists interior breakpoints that the initial subdivision must
/// honor (the amplitude layer passes the Breit-Wigner peak neighborhood
/// m ± kΓ so that the density scale is resolved alongside the phase scale).
pub fn integrate_weighted<W, F>(
    weight: &W,
    phase: &F,
    domain: (f64, f64),
    rel_tol: f64,
    abs_tol: f64,
    seeds: &[f64],
) -> Result<IntegralResult>
where
    W: Fn(f64) -> f64 + Sync,
    F: Fn(f64) -> f64 + Sync,
{
    let (a, b) = domain;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!(
            "integration domain must satisfy a < b (got [{a}, {b}])"
        )));
    }
    if !(rel_tol > 0.0) || !(abs_tol > 0.0) {
        return Err(Error::invalid("tolerances must be positive"));
    }

    // initial breakpoints: domain ends plus any interior seeds
    let mut cuts: Vec<f64> = Vec::with_capacity(seeds.len() + 2);
    cuts.push(a);
    cuts.extend(seeds.iter().copied().filter(|s| *s > a && *s < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    // split until the phase change across every panel is at most 2π,
    // aiming for quarter periods when the budget has room for them
    let phase_span = |lo: f64, hi: f64| -> f64 {
        let (pl, pm, ph) = (phase(lo), phase(0.5 * (lo + hi)), phase(hi));
        pl.max(pm).max(ph) - pl.min(pm).min(ph)
    };
    let fine_count = phase_span(a, b) / INITIAL_PANEL_PHASE + cuts.len() as f64;
    let target = if fine_count < (PANEL_BUDGET / 2) as f64 {
        INITIAL_PANEL_PHASE
    } else {
        MAX_PANEL_PHASE
    };
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut work: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let mut over_budget = false;
    while let Some((lo, hi)) = work.pop() {
        if intervals.len() + work.len() + 1 >= PANEL_BUDGET {
            over_budget = true;
            intervals.push((lo, hi));
            intervals.append(&mut work);
            break;
        }
        let mid = 0.5 * (lo + hi);
        if phase_span(lo, hi) <= target || !(lo < mid && mid < hi) {
            intervals.push((lo, hi));
        } else {
            work.push((mid, hi));
            work.push((lo, mid));
        }
    }

    let evaluated: Vec<Panel> = intervals
        .par_iter()
        .map(|&(lo, hi)| {
            let (value, err) = eval_panel(weight, phase, lo, hi);
            Panel {
                lo,
                hi,
                value,
                err,
            }
        })
        .collect();

    let mut panels_used = evaluated.len();
    let mut running_value: Complex64 = evaluated.iter().map(|p| p.value).sum();
    let mut running_err: f64 = evaluated.iter().map(|p| p.err).sum();

    if over_budget {
        return Err(Error::Convergence {
            value: running_value,
            error_estimate: running_err,
            panels: panels_used,
        });
    }

    let mut heap: BinaryHeap<Panel> = evaluated.into();
    // panels too narrow to bisect are parked here; their error still counts
    let mut frozen: Vec<Panel> = Vec::new();

    loop {
        let tol = abs_tol.max(rel_tol * running_value.norm());
        if running_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            let mut all = frozen;
            let (value, error_estimate) = ordered_sum(&mut all);
            return Err(Error::Convergence {
                value,
                error_estimate,
                panels: panels_used,
            });
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            frozen.push(worst);
            continue;
        }
        if panels_used + 1 > PANEL_BUDGET {
            let mut all: Vec<Panel> = heap.into_vec();
            all.push(worst);
            all.extend(frozen);
            let (value, error_estimate) = ordered_sum(&mut all);
            return Err(Error::Convergence {
                value,
                error_estimate,
                panels: panels_used,
            });
        }
        let (v1, e1) = eval_panel(weight, phase, worst.lo, mid);
        let (v2, e2) = eval_panel(weight, phase, mid, worst.hi);
        running_value += v1 + v2 - worst.value;
        running_err += e1 + e2 - worst.err;
        running_err = running_err.max(0.0);
        heap.push(Panel {
            lo: worst.lo,
            hi: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            lo: mid,
            hi: worst.hi,
            value: v2,
            err: e2,
        });
        panels_used += 1;
    }

    let mut all: Vec<Panel> = heap.into_vec();
    all.extend(frozen);
    let (value, error_estimate) = ordered_sum(&mut all);
    Ok(IntegralResult {
        value,
        error_estimate,
        panels_used,
    })
}

/// Adaptive evaluation of an oscillatory integral spec.
pub fn integrate_oscillatory<F>(spec: &OscillatorySpec<'_, F>) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    let bw = spec.continuous()?;
    let seeds = peak_seeds(bw.m(), bw.width());
    integrate_weighted(
        &|mu| bw.value_at(mu),
        &spec.phase,
        spec.domain,
        spec.rel_tol,
        spec.abs_tol,
        &seeds,
    )
}

/// Breakpoints at m ± kΓ, k ∈ {1, 2, 5, 10}.
pub(crate) fn peak_seeds(m: f64, width: f64) -> Vec<f64> {
    let mut seeds = Vec::with_capacity(8);
    for k in [1.0, 2.0, 5.0, 10.0] {
        seeds.push(m - k * width);
        seeds.push(m + k * width);
    }
    seeds
}

/// Midpoint Riemann sum on a uniform grid; the ground-truth oracle for
/// tests. Chunked so the partial sums reduce in a fixed order regardless of
/// thread scheduling.
pub fn integrate_oracle<F>(spec: &OscillatorySpec<'_, F>, n_points: usize) -> Result<Complex64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let bw = spec.continuous()?;
    if n_points < 2 {
        return Err(Error::invalid(format!(
            "oracle needs at least 2 points (got {n_points})"
        )));
    }
    let (a, b) = spec.domain;
    let h = (b - a) / n_points as f64;
    const CHUNK: usize = 1 << 16;
    let n_chunks = n_points.div_ceil(CHUNK);
    let partials: Vec<Complex64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n_points);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in start..end {
                let mu = a + (j as f64 + 0.5) * h;
                let (s, co) = (spec.phase)(mu).sin_cos();
                acc += bw.value_at(mu) * Complex64::new(co, -s);
            }
            acc
        })
        .collect();
    let total: Complex64 = partials.iter().sum();
    Ok(total * h)
}
