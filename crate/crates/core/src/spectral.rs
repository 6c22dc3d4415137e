//! Mass densities |c(μ)|² on the half line μ ∈ [0, ∞).
//!
//! Two shapes are supported: a Breit-Wigner (Lorentzian) line truncated to
//! `[0, cutoff_hi]` and renormalized to unit mass, and a finite set of
//! discrete spectral lines with weights summing to one. Natural units
//! throughout: masses and widths carry energy units, densities 1/energy.

use crate::error::{Error, Result};

/// Default upper truncation, in units of Γ past the center mass.
pub const DEFAULT_TAIL_SIGMAS: f64 = 1e4;

/// Tolerance on ∫ density dμ = 1 for any constructible density.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Breit-Wigner mass density, truncated to `[0, cutoff_hi]` and renormalized
/// so that it integrates to exactly one.
///
/// The underlying line shape is (Γ/2π)·[(μ−m)² + Γ²/4]⁻¹; `norm` is the
/// reciprocal of its mass on the truncated interval, computed from the
/// arctan antiderivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreitWignerDensity {
    m: f64,
    width: f64,
    cutoff_hi: f64,
    norm: f64,
}

impl BreitWignerDensity {
    /// Build a truncated-renormalized line with `cutoff_hi = m + tail_sigmas·Γ`.
    pub fn new(m: f64, width: f64, tail_sigmas: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::invalid(format!(
                "center mass must be positive (got {m})"
            )));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::invalid(format!(
                "width must be positive (got {width})"
            )));
        }
        if !(tail_sigmas > 0.0) || !tail_sigmas.is_finite() {
            return Err(Error::invalid(format!(
                "tail_sigmas must be positive (got {tail_sigmas})"
            )));
        }
        let cutoff_hi = m + tail_sigmas * width;
        if !cutoff_hi.is_finite() {
            return Err(Error::invalid("cutoff overflowed".to_string()));
        }
        let half = 0.5 * width;
        // mass of the raw Lorentzian on [0, cutoff_hi]
        let mass = (((cutoff_hi - m) / half).atan() + (m / half).atan()) / std::f64::consts::PI;
        Ok(Self {
            m,
            width,
            cutoff_hi,
            norm: 1.0 / mass,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn cutoff_hi(&self) -> f64 {
        self.cutoff_hi
    }

    /// Renormalization constant (≥ 1 for any truncation).
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Density value at `mu`. Zero above the cutoff; negative `mu` is a
    /// domain error.
    pub fn evaluate(&self, mu: f64) -> Result<f64> {
        if !(mu >= 0.0) {
            return Err(Error::invalid(format!(
                "mass argument must satisfy mu >= 0 (got {mu})"
            )));
        }
        Ok(self.value_at(mu))
    }

    /// Unchecked evaluation used by the integrators.
    pub(crate) fn value_at(&self, mu: f64) -> f64 {
        if mu > self.cutoff_hi {
            return 0.0;
        }
        let half = 0.5 * self.width;
        let d = mu - self.m;
        self.norm * (self.width / (2.0 * std::f64::consts::PI)) / (d * d + half * half)
    }

    /// k-th moment ∫ μ^k density(μ) dμ for k ∈ {0, 1, 2}, in closed form.
    pub fn moment(&self, k: u32) -> Result<f64> {
        let half = 0.5 * self.width;
        let c = self.cutoff_hi;
        let m = self.m;
        let pi = std::f64::consts::PI;
        let atan_sum = ((c - m) / half).atan() + (m / half).atan();
        let mass = atan_sum / pi;
        let log_ratio = (((c - m) * (c - m) + half * half) / (m * m + half * half)).ln();
        match k {
            0 => Ok(self.norm * mass),
            1 => Ok(self.norm * (m * mass + self.width / (4.0 * pi) * log_ratio)),
            2 => Ok(self.norm
                * (m * m * mass
                    + m * self.width / (2.0 * pi) * log_ratio
                    + self.width / (2.0 * pi) * (c - half * atan_sum))),
            _ => Err(Error::invalid(format!(
                "moment order must be 0, 1 or 2 (got {k})"
            ))),
        }
    }
}

/// One discrete spectral line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub mass: f64,
    pub weight: f64,
}

/// Purely discrete mass density: Σ w_k δ(μ − μ_k) with Σ w_k = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDensity {
    lines: Vec<SpectralLine>,
}

impl DiscreteDensity {
    /// Build from (mass, weight) pairs. Masses must be non-negative and
    /// distinct, weights positive, and the weights must sum to exactly 1.0
    /// in f64 arithmetic.
    pub fn new(lines: Vec<(f64, f64)>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::invalid("discrete density needs at least one line"));
        }
        for &(mass, weight) in &lines {
            if !(mass >= 0.0) || !mass.is_finite() {
                return Err(Error::invalid(format!(
                    "line mass must satisfy mu >= 0 (got {mass})"
                )));
            }
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(Error::invalid(format!(
                    "line weight must be positive (got {weight})"
                )));
            }
        }
        let mut masses: Vec<f64> = lines.iter().map(|l| l.0).collect();
        masses.sort_by(f64::total_cmp);
        if masses.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("line masses must be distinct"));
        }
        let total: f64 = lines.iter().map(|l| l.1).sum();
        if total != 1.0 {
            return Err(Error::invalid(format!(
                "line weights must sum to exactly 1 (got {total})"
            )));
        }
        Ok(Self {
            lines: lines
                .into_iter()
                .map(|(mass, weight)| SpectralLine { mass, weight })
                .collect(),
        })
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn moment(&self, k: u32) -> Result<f64> {
        if k > 2 {
            return Err(Error::invalid(format!(
                "moment order must be 0, 1 or 2 (got {k})"
            )));
        }
        Ok(self
            .lines
            .iter()
            .map(|l| l.weight * l.mass.powi(k as i32))
            .sum())
    }
}

/// A mass density of either shape. Immutable after construction; evaluation
/// is pure, so values may be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub enum MassDensity {
    BreitWigner(BreitWignerDensity),
    Discrete(DiscreteDensity),
}

impl MassDensity {
    pub fn is_continuous(&self) -> bool {
        matches!(self, MassDensity::BreitWigner(_))
    }

    /// Upper end of the support for continuous densities.
    pub fn cutoff_hi(&self) -> Option<f64> {
        match self {
            MassDensity::BreitWigner(bw) => Some(bw.cutoff_hi()),
            MassDensity::Discrete(_) => None,
        }
    }

    /// ∫ μ^k density(μ) dμ (or Σ w_k μ_k^k), k ∈ {0, 1, 2}.
    pub fn moment(&self, k: u32) -> Result<f64> {
        match self {
            MassDensity::BreitWigner(bw) => bw.moment(k),
            MassDensity::Discrete(d) => d.moment(k),
        }
    }
}

impl From<BreitWignerDensity> for MassDensity {
    fn from(bw: BreitWignerDensity) -> Self {
        MassDensity::BreitWigner(bw)
    }
}

impl From<DiscreteDensity> for MassDensity {
    fn from(d: DiscreteDensity) -> Self {
        MassDensity::Discrete(d)
    }
}
