//! Exact closed-form evolution of a two-mass superposition, the widthless
//! "quantum clock" whose survival probability oscillates instead of
//! decaying.
//!
//! With equal weights the probabilities are pure cos² laws. A state with
//! definite velocity oscillates faster by γ (contraction); a state with
//! definite momentum oscillates slower by the two-mass factor
//! γ̃ = (√(p²+m₁²) + √(p²+m₂²))/(m₁+m₂), which coincides with a Lorentz
//! factor only when the masses degenerate.

use num_complex::Complex64;

use crate::amplitude::{lorentz_gamma, Preparation};
use crate::error::{Error, Result};
use crate::spectral::{DiscreteDensity, MassDensity};

/// Superposition of two mass eigenstates with weights summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoMassState {
    m1: f64,
    m2: f64,
    w1: f64,
    w2: f64,
}

impl TwoMassState {
    /// Build with `w2 = 1 − w1`, which keeps the weight sum exactly one.
    pub fn new(m1: f64, m2: f64, w1: f64) -> Result<Self> {
        Self::with_weights(m1, m2, w1, 1.0 - w1)
    }

    /// Equal-weight state, the configuration of the closed-form cos² laws.
    pub fn equal_weights(m1: f64, m2: f64) -> Result<Self> {
        Self::with_weights(m1, m2, 0.5, 0.5)
    }

    pub fn with_weights(m1: f64, m2: f64, w1: f64, w2: f64) -> Result<Self> {
        for m in [m1, m2] {
            if !(m >= 0.0) || !m.is_finite() {
                return Err(Error::invalid(format!(
                    "masses must satisfy m >= 0 (got {m})"
                )));
            }
        }
        if m1 == m2 {
            return Err(Error::invalid("the two masses must differ"));
        }
        if !(w1 > 0.0 && w2 > 0.0) {
            return Err(Error::invalid(format!(
                "weights must be positive (got {w1}, {w2})"
            )));
        }
        if w1 + w2 != 1.0 {
            return Err(Error::invalid(format!(
                "weights must sum to exactly 1 (got {})",
                w1 + w2
            )));
        }
        Ok(Self { m1, m2, w1, w2 })
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        self.w2
    }

    pub fn has_equal_weights(&self) -> bool {
        self.w1 == self.w2
    }

    /// Weighted mean mass.
    pub fn mean_mass(&self) -> f64 {
        self.w1 * self.m1 + self.w2 * self.m2
    }

    /// The equivalent two-line discrete density.
    pub fn to_density(&self) -> MassDensity {
        MassDensity::Discrete(
            DiscreteDensity::new(vec![(self.m1, self.w1), (self.m2, self.w2)])
                .expect("a valid state is a valid density"),
        )
    }
}

/// e^{-ix}
fn cis_neg(x: f64) -> Complex64 {
    let (s, c) = x.sin_cos();
    Complex64::new(c, -s)
}

/// Survival amplitude of the two-mass state for any weights.
///
/// Rest: w₁e^{-im₁t} + w₂e^{-im₂t}; velocity scales the masses by γ;
/// momentum replaces them by the energies √(p²+m_k²).
pub fn osc_amplitude(s: &TwoMassState, prep: Preparation, t: f64) -> Result<Complex64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!(
            "time must satisfy t >= 0 (got {t})"
        )));
    }
    prep.validate()?;
    let (ph1, ph2) = phase_pair(s, prep, t)?;
    Ok(s.w1 * cis_neg(ph1) + s.w2 * cis_neg(ph2))
}

fn phase_pair(s: &TwoMassState, prep: Preparation, t: f64) -> Result<(f64, f64)> {
    Ok(match prep {
        Preparation::Rest => (s.m1 * t, s.m2 * t),
        Preparation::DefiniteVelocity(v) => {
            let scaled = lorentz_gamma(v)? * t;
            (s.m1 * scaled, s.m2 * scaled)
        }
        Preparation::DefiniteMomentum(p) => (
            t * (p * p + s.m1 * s.m1).sqrt(),
            t * (p * p + s.m2 * s.m2).sqrt(),
        ),
    })
}

/// Closed-form survival probability, valid only for equal weights:
/// cos²(½Δφ(t)) with the preparation-dependent phase pair.
pub fn osc_probability_equal_weights(s: &TwoMassState, prep: Preparation, t: f64) -> Result<f64> {
    if !s.has_equal_weights() {
        return Err(Error::invalid(
            "the cos² closed form requires exactly equal weights",
        ));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!(
            "time must satisfy t >= 0 (got {t})"
        )));
    }
    prep.validate()?;
    let half_delta = match prep {
        Preparation::Rest => 0.5 * (s.m1 - s.m2) * t,
        Preparation::DefiniteVelocity(v) => 0.5 * (s.m1 - s.m2) * t * lorentz_gamma(v)?,
        Preparation::DefiniteMomentum(p) => {
            0.5 * ((p * p + s.m1 * s.m1).sqrt() - (p * p + s.m2 * s.m2).sqrt()) * t
        }
    };
    let c = half_delta.cos();
    Ok(c * c)
}

/// Two-mass effective dilation factor γ̃ = (√(p²+m₁²)+√(p²+m₂²))/(m₁+m₂).
pub fn effective_gamma_tilde(p: f64, m1: f64, m2: f64) -> Result<f64> {
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::invalid(format!(
            "momentum must satisfy p >= 0 (got {p})"
        )));
    }
    if !(m1 >= 0.0 && m2 >= 0.0 && m1 + m2 > 0.0) {
        return Err(Error::invalid(format!(
            "masses must satisfy m1, m2 >= 0 and m1 + m2 > 0 (got {m1}, {m2})"
        )));
    }
    Ok(((p * p + m1 * m1).sqrt() + (p * p + m2 * m2).sqrt()) / (m1 + m2))
}

/// Period of the equal-weight oscillation: 2π over the phase-difference
/// frequency of the given preparation.
pub fn oscillation_period(s: &TwoMassState, prep: Preparation) -> Result<f64> {
    if !s.has_equal_weights() {
        return Err(Error::invalid(
            "the oscillation period is defined for equal weights",
        ));
    }
    prep.validate()?;
    let freq = match prep {
        Preparation::Rest => (s.m1 - s.m2).abs(),
        Preparation::DefiniteVelocity(v) => (s.m1 - s.m2).abs() * lorentz_gamma(v)?,
        Preparation::DefiniteMomentum(p) => {
            ((p * p + s.m1 * s.m1).sqrt() - (p * p + s.m2 * s.m2).sqrt()).abs()
        }
    };
    Ok(std::f64::consts::TAU / freq)
}

/// Named two-mass configurations loadable from config files.
///
/// `k0` is the neutral-kaon pair (K_S, K_L masses in MeV with both decay
/// widths set to zero), `demo` a unit-scale pair for desk calculations.
pub fn preset(name: &str) -> Option<TwoMassState> {
    match name {
        "k0" => Some(
            TwoMassState::equal_weights(497.611, 497.611 + 3.484e-12)
                .expect("preset masses are valid"),
        ),
        "demo" => Some(TwoMassState::equal_weights(1.0, 2.0).expect("preset masses are valid")),
        _ => None,
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &["demo", "k0"]
}
