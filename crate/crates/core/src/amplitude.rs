//! Survival amplitudes A(t) = (ψ, ψ(t)) of an unstable state prepared at
//! rest, with definite velocity, or with definite momentum, plus the
//! closed-form exponential approximants valid in the intermediate-time
//! regime.
//!
//! The key exact identity implemented here is the contraction law
//! A_v(t) = A₀(γt): a state with sharp velocity decays *faster* than the
//! state at rest, by the Lorentz factor. A state with sharp momentum instead
//! obeys approximate Einstein dilation of the survival probability,
//! |A_p(t)|² ≅ |A₀(t/γ_m)|².

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{self, IntegralResult, OscillatorySpec};
use crate::spectral::MassDensity;

/// Kinematic preparation of the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preparation {
    /// Zero momentum and zero velocity.
    Rest,
    /// Eigenstate of the velocity operator, 0 ≤ v < 1.
    DefiniteVelocity(f64),
    /// Eigenstate of the momentum operator, p ≥ 0 (energy units).
    DefiniteMomentum(f64),
}

impl Preparation {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Preparation::Rest => Ok(()),
            Preparation::DefiniteVelocity(v) => lorentz_gamma(v).map(|_| ()),
            Preparation::DefiniteMomentum(p) => {
                if p >= 0.0 && p.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid(format!(
                        "momentum must satisfy p >= 0 (got {p})"
                    )))
                }
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Preparation::Rest => "rest",
            Preparation::DefiniteVelocity(_) => "velocity",
            Preparation::DefiniteMomentum(_) => "momentum",
        }
    }
}

/// Lorentz factor γ = (1 − v²)^{-1/2}.
pub fn lorentz_gamma(v: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&v) {
        return Err(Error::invalid(format!(
            "velocity must satisfy 0 <= v < 1 (got {v})"
        )));
    }
    Ok(1.0 / (1.0 - v * v).sqrt())
}

/// Mass-specific Lorentz factor γ_m = √(p² + m²)/m.
pub fn gamma_m(p: f64, m: f64) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::invalid(format!("mass must be positive (got {m})")));
    }
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::invalid(format!(
            "momentum must satisfy p >= 0 (got {p})"
        )));
    }
    Ok((p * p + m * m).sqrt() / m)
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!(
            "time must satisfy t >= 0 (got {t})"
        )));
    }
    Ok(())
}

/// e^{-ix}
fn cis_neg(x: f64) -> Complex64 {
    let (s, c) = x.sin_cos();
    Complex64::new(c, -s)
}

/// Rest amplitude with its quadrature error bound (zero for discrete
/// densities, whose sum is exact).
fn rest_with_error(d: &MassDensity, t: f64, rel_tol: f64, abs_tol: f64) -> Result<(Complex64, f64)> {
    check_time(t)?;
    match d {
        MassDensity::Discrete(lines) => {
            let a = lines
                .lines()
                .iter()
                .map(|l| l.weight * cis_neg(l.mass * t))
                .sum();
            Ok((a, 0.0))
        }
        MassDensity::BreitWigner(bw) => {
            let spec = OscillatorySpec::with_tolerances(
                d,
                move |mu| mu * t,
                (0.0, bw.cutoff_hi()),
                rel_tol,
                abs_tol,
            )?;
            let IntegralResult {
                value,
                error_estimate,
                ..
            } = quadrature::integrate_oscillatory(&spec)?;
            Ok((value, error_estimate))
        }
    }
}

fn momentum_with_error(
    d: &MassDensity,
    p: f64,
    t: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<(Complex64, f64)> {
    check_time(t)?;
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::invalid(format!(
            "momentum must satisfy p >= 0 (got {p})"
        )));
    }
    match d {
        MassDensity::Discrete(lines) => {
            let a = lines
                .lines()
                .iter()
                .map(|l| l.weight * cis_neg(t * (p * p + l.mass * l.mass).sqrt()))
                .sum();
            Ok((a, 0.0))
        }
        MassDensity::BreitWigner(bw) => {
            let spec = OscillatorySpec::with_tolerances(
                d,
                move |mu| t * (p * p + mu * mu).sqrt(),
                (0.0, bw.cutoff_hi()),
                rel_tol,
                abs_tol,
            )?;
            let IntegralResult {
                value,
                error_estimate,
                ..
            } = quadrature::integrate_oscillatory(&spec)?;
            Ok((value, error_estimate))
        }
    }
}

/// A₀(t) = ∫ |c(μ)|² e^{-iμt} dμ (or the discrete sum Σ w_k e^{-iμ_k t}).
pub fn survival_rest(d: &MassDensity, t: f64) -> Result<Complex64> {
    rest_with_error(d, t, quadrature::DEFAULT_REL_TOL, quadrature::DEFAULT_ABS_TOL)
        .map(|(a, _)| a)
}

/// A_v(t) through the exact rescaling A_v(t) = A₀(γt).
pub fn survival_velocity(d: &MassDensity, v: f64, t: f64) -> Result<Complex64> {
    let gamma = lorentz_gamma(v)?;
    check_time(t)?;
    survival_rest(d, gamma * t)
}

/// A_v(t) by direct integration of ∫ |c(μ)|² e^{-iμγt} dμ, kept as an
/// independent cross-check of the rescaling path.
pub fn survival_velocity_direct(d: &MassDensity, v: f64, t: f64) -> Result<Complex64> {
    let gamma = lorentz_gamma(v)?;
    check_time(t)?;
    let s = gamma * t;
    match d {
        MassDensity::Discrete(lines) => Ok(lines
            .lines()
            .iter()
            .map(|l| l.weight * cis_neg(l.mass * s))
            .sum()),
        MassDensity::BreitWigner(bw) => {
            let spec = OscillatorySpec::new(d, move |mu| mu * s, (0.0, bw.cutoff_hi()))?;
            Ok(quadrature::integrate_oscillatory(&spec)?.value)
        }
    }
}

/// A_p(t) = ∫ |c(μ)|² e^{-it√(p²+μ²)} dμ (or the discrete sum).
pub fn survival_momentum(d: &MassDensity, p: f64, t: f64) -> Result<Complex64> {
    momentum_with_error(
        d,
        p,
        t,
        quadrature::DEFAULT_REL_TOL,
        quadrature::DEFAULT_ABS_TOL,
    )
    .map(|(a, _)| a)
}

/// Dispatch on the preparation.
pub fn survival(d: &MassDensity, prep: Preparation, t: f64) -> Result<Complex64> {
    match prep {
        Preparation::Rest => survival_rest(d, t),
        Preparation::DefiniteVelocity(v) => survival_velocity(d, v, t),
        Preparation::DefiniteMomentum(p) => survival_momentum(d, p, t),
    }
}

/// Intermediate-time approximant at rest: exp(−imt − ½Γt).
pub fn approx_rest(m: f64, width: f64, t: f64) -> Complex64 {
    Complex64::from_polar((-0.5 * width * t).exp(), -(m * t))
}

/// Definite-momentum approximant: exp(−imγ_m t − ½Γt/γ_m).
pub fn approx_momentum(m: f64, width: f64, p: f64, t: f64) -> Result<Complex64> {
    let g = gamma_m(p, m)?;
    Ok(Complex64::from_polar(
        (-0.5 * width * t / g).exp(),
        -(m * g * t),
    ))
}

/// Definite-velocity approximant: exp(−imγt − ½Γtγ), the contracted law.
pub fn approx_velocity(m: f64, width: f64, v: f64, t: f64) -> Result<Complex64> {
    let g = lorentz_gamma(v)?;
    Ok(Complex64::from_polar(
        (-0.5 * width * t * g).exp(),
        -(m * g * t),
    ))
}

/// The two approximant exponents evaluated with γ set equal to γ_m.
///
/// Their imaginary (main) parts coincide by construction; the whole
/// difference sits in the real parts, ½Γt(γ_m − 1/γ_m), which is what
/// separates the dilated momentum law from the contracted velocity law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentComparison {
    pub momentum_exponent: Complex64,
    pub velocity_exponent: Complex64,
    pub real_part_difference: f64,
}

pub fn exponent_compare(m: f64, width: f64, p: f64, t: f64) -> Result<ExponentComparison> {
    check_time(t)?;
    let g = gamma_m(p, m)?;
    let main = -(m * t * g);
    let momentum_exponent = Complex64::new(-0.5 * width * t / g, main);
    let velocity_exponent = Complex64::new(-0.5 * width * t * g, main);
    Ok(ExponentComparison {
        momentum_exponent,
        velocity_exponent,
        real_part_difference: 0.5 * width * t * (g - 1.0 / g),
    })
}

/// A computed time series of survival amplitudes for one preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    pub times: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
    /// |A(t)|² at each grid point.
    pub probabilities: Vec<f64>,
    /// Squared modulus of the matching closed-form approximant; present
    /// only for Breit-Wigner densities.
    pub approx_probabilities: Option<Vec<f64>>,
    /// Quadrature error bound per point (zero for discrete densities).
    pub quad_errors: Vec<f64>,
    pub preparation: Preparation,
    pub density: MassDensity,
}

impl AmplitudeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Evaluate the survival amplitude on a sorted, non-negative time grid with
/// the default quadrature tolerances.
pub fn amplitude_series(
    d: &MassDensity,
    prep: Preparation,
    times: &[f64],
) -> Result<AmplitudeSeries> {
    amplitude_series_with_tolerances(
        d,
        prep,
        times,
        quadrature::DEFAULT_REL_TOL,
        quadrature::DEFAULT_ABS_TOL,
    )
}

/// Evaluate the survival amplitude on a sorted, non-negative time grid.
///
/// Grid points are independent and evaluated concurrently; the output order
/// matches the input grid.
pub fn amplitude_series_with_tolerances(
    d: &MassDensity,
    prep: Preparation,
    times: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<AmplitudeSeries> {
    prep.validate()?;
    if times.is_empty() {
        return Err(Error::invalid("time grid must not be empty"));
    }
    for t in times {
        check_time(*t)?;
    }
    if times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("time grid must be sorted ascending"));
    }

    let points: Vec<(Complex64, f64)> = times
        .par_iter()
        .map(|&t| match prep {
            Preparation::Rest => rest_with_error(d, t, rel_tol, abs_tol),
            Preparation::DefiniteVelocity(v) => {
                let gamma = lorentz_gamma(v)?;
                rest_with_error(d, gamma * t, rel_tol, abs_tol)
            }
            Preparation::DefiniteMomentum(p) => momentum_with_error(d, p, t, rel_tol, abs_tol),
        })
        .collect::<Result<_>>()?;

    let amplitudes: Vec<Complex64> = points.iter().map(|(a, _)| *a).collect();
    let quad_errors: Vec<f64> = points.iter().map(|(_, e)| *e).collect();
    let probabilities: Vec<f64> = amplitudes.iter().map(|a| a.norm_sqr()).collect();

    let approx_probabilities = match d {
        MassDensity::BreitWigner(bw) => {
            let (m, w) = (bw.m(), bw.width());
            let values: Result<Vec<f64>> = times
                .iter()
                .map(|&t| {
                    Ok(match prep {
                        Preparation::Rest => approx_rest(m, w, t).norm_sqr(),
                        Preparation::DefiniteVelocity(v) => approx_velocity(m, w, v, t)?.norm_sqr(),
                        Preparation::DefiniteMomentum(p) => approx_momentum(m, w, p, t)?.norm_sqr(),
                    })
                })
                .collect();
            Some(values?)
        }
        MassDensity::Discrete(_) => None,
    };

    Ok(AmplitudeSeries {
        times: times.to_vec(),
        amplitudes,
        probabilities,
        approx_probabilities,
        quad_errors,
        preparation: prep,
        density: d.clone(),
    })
}

/// Uniformly spaced grid over [t_min, t_max], suited to lifetime fitting.
pub fn linear_grid(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid(format!("grid needs n >= 2 (got {n})")));
    }
    if !(t_min >= 0.0 && t_max > t_min) || !t_max.is_finite() {
        return Err(Error::invalid(format!(
            "grid bounds must satisfy 0 <= t_min < t_max (got [{t_min}, {t_max}])"
        )));
    }
    let span = t_max - t_min;
    let den = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                t_max
            } else {
                t_min + span * i as f64 / den
            }
        })
        .collect())
}

/// Log-spaced grid over [t_min, t_max] with t_min > 0, suited to tail
/// studies.
pub fn log_grid(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid(format!("grid needs n >= 2 (got {n})")));
    }
    if !(t_min > 0.0 && t_max > t_min) || !t_max.is_finite() {
        return Err(Error::invalid(format!(
            "log grid bounds must satisfy 0 < t_min < t_max (got [{t_min}, {t_max}])"
        )));
    }
    let log_ratio = (t_max / t_min).ln();
    let den = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                t_max
            } else {
                t_min * (log_ratio * i as f64 / den).exp()
            }
        })
        .collect())
}
