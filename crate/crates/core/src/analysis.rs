//! Effective lifetimes and dilation/contraction factors extracted from
//! computed survival series.
//!
//! A lifetime is defined by a least-squares line fit of ln|A(t)|² against t
//! over a window inside the exponential regime, rather than a 1/e crossing,
//! so it is insensitive to grid placement. Comparison reports put the
//! measured moving-to-rest ratio side by side with the Einstein-dilation
//! reference and with the law the preparation actually obeys (contraction
//! 1/γ for definite velocity, dilation γ_m or γ̃ for definite momentum).

use serde::Serialize;

use crate::amplitude::{
    self, amplitude_series, gamma_m, linear_grid, log_grid, lorentz_gamma, AmplitudeSeries,
    Preparation,
};
use crate::error::{Error, Result};
use crate::spectral::MassDensity;
use crate::twomass::{effective_gamma_tilde, oscillation_period, TwoMassState};

/// Number of grid points used by the report fits.
pub const FIT_POINTS: usize = 200;

/// Probabilities at or below this are excluded from log fits.
pub const MIN_FIT_PROBABILITY: f64 = 1e-3;

/// Result of a log-linear lifetime fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifetimeFit {
    /// Fitted mean life τ = −1/slope of ln|A|².
    pub tau: f64,
    /// RMS residual of the straight-line fit in log space.
    pub log_residual_rms: f64,
    /// Fit window [t_lo, t_hi].
    pub window: (f64, f64),
    /// Number of grid points that entered the fit.
    pub n_points: usize,
}

/// Side-by-side dilation/contraction comparison for one moving preparation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonReport {
    /// Measured τ_moving/τ_rest (or moving/rest period ratio for the
    /// two-mass clock).
    pub ratio_measured: f64,
    /// The Einstein-dilation reference factor (γ or γ_m).
    pub ratio_einstein: f64,
    /// The factor the implemented law predicts: γ_m for momentum, 1/γ for
    /// velocity, γ̃ for the two-mass momentum clock.
    pub ratio_law: f64,
    /// Max over the window of |F_moving(t) − F_rest(t·scale)| with the
    /// law's time rescaling.
    pub max_pointwise_gap: f64,
}

/// Default fit window [0.2/Γ_eff, 3/Γ_eff].
pub fn default_fit_window(width_eff: f64) -> (f64, f64) {
    (0.2 / width_eff, 3.0 / width_eff)
}

/// Least-squares line fit of ln|A(t)|² over `window`; τ = −1/slope.
pub fn fit_lifetime(series: &AmplitudeSeries, window: (f64, f64)) -> Result<LifetimeFit> {
    let (t_lo, t_hi) = window;
    if !(t_lo < t_hi) {
        return Err(Error::fit(format!(
            "window must satisfy t_lo < t_hi (got [{t_lo}, {t_hi}])"
        )));
    }
    let mut ts: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (i, &t) in series.times.iter().enumerate() {
        if t < t_lo || t > t_hi {
            continue;
        }
        let f = series.probabilities[i];
        if f <= MIN_FIT_PROBABILITY {
            return Err(Error::fit(format!(
                "probability {f} at t = {t} is at or below the log-fit floor {MIN_FIT_PROBABILITY}"
            )));
        }
        ts.push(t);
        ys.push(f.ln());
    }
    let n = ts.len();
    if n < 8 {
        return Err(Error::fit(format!(
            "need at least 8 grid points inside the window (got {n})"
        )));
    }
    let nf = n as f64;
    let t_mean = ts.iter().sum::<f64>() / nf;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dt = ts[i] - t_mean;
        sxx += dt * dt;
        sxy += dt * (ys[i] - y_mean);
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(Error::fit(format!(
            "non-negative log slope {slope}; the series does not decay over the window"
        )));
    }
    let intercept = y_mean - slope * t_mean;
    let mut ss = 0.0;
    for i in 0..n {
        let r = ys[i] - (intercept + slope * ts[i]);
        ss += r * r;
    }
    Ok(LifetimeFit {
        tau: -1.0 / slope,
        log_residual_rms: (ss / nf).sqrt(),
        window,
        n_points: n,
    })
}

/// Fit the moving and rest lifetimes on the same density and report the
/// measured ratio against the Einstein and implemented laws.
///
/// `rest_window` overrides the default rest-frame fit window
/// [0.2/Γ, 3/Γ]; the moving window is the rest window divided by γ
/// (velocity) or multiplied by γ_m (momentum), which keeps the number of
/// e-folds comparable between frames.
pub fn dilation_report(
    d: &MassDensity,
    prep: Preparation,
    rest_window: Option<(f64, f64)>,
) -> Result<ComparisonReport> {
    match prep {
        Preparation::Rest => Err(Error::invalid(
            "dilation report needs a moving preparation (velocity or momentum)",
        )),
        Preparation::DefiniteVelocity(v) => match d {
            MassDensity::BreitWigner(_) => {
                let gamma = lorentz_gamma(v)?;
                bw_report(d, prep, rest_window, gamma, 1.0 / gamma, gamma)
            }
            MassDensity::Discrete(_) => two_mass_report(d, prep, rest_window),
        },
        Preparation::DefiniteMomentum(p) => match d {
            MassDensity::BreitWigner(bw) => {
                let g = gamma_m(p, bw.m())?;
                bw_report(d, prep, rest_window, g, g, g)
            }
            MassDensity::Discrete(_) => two_mass_report(d, prep, rest_window),
        },
    }
}

/// Lifetime-based report for a continuous density.
///
/// `einstein` and `law` are the reference ratios; `time_scale` maps a rest
/// time to the moving-frame time at which the law predicts the same
/// probability (1/γ for velocity, γ_m for momentum).
fn bw_report(
    d: &MassDensity,
    prep: Preparation,
    rest_window: Option<(f64, f64)>,
    einstein: f64,
    law: f64,
    time_scale: f64,
) -> Result<ComparisonReport> {
    let bw = match d {
        MassDensity::BreitWigner(bw) => bw,
        MassDensity::Discrete(_) => {
            return Err(Error::invalid(
                "lifetime comparison requires a continuous density; the two-mass clock is compared by period",
            ))
        }
    };
    let rest_win = rest_window.unwrap_or_else(|| default_fit_window(bw.width()));
    let rest_grid = linear_grid(rest_win.0, rest_win.1, FIT_POINTS)?;
    let scale = match prep {
        Preparation::DefiniteVelocity(_) => 1.0 / time_scale,
        _ => time_scale,
    };
    let moving_grid: Vec<f64> = rest_grid.iter().map(|t| t * scale).collect();
    let rest_series = amplitude_series(d, Preparation::Rest, &rest_grid)?;
    let moving_series = amplitude_series(d, prep, &moving_grid)?;
    let rest_fit = fit_lifetime(&rest_series, rest_win)?;
    let moving_fit = fit_lifetime(
        &moving_series,
        (rest_win.0 * scale, rest_win.1 * scale),
    )?;
    // moving grid point i corresponds to rest grid point i under the law's
    // rescaling, so the pointwise gap needs no extra integrals
    let max_pointwise_gap = rest_series
        .probabilities
        .iter()
        .zip(moving_series.probabilities.iter())
        .map(|(r, m)| (r - m).abs())
        .fold(0.0, f64::max);
    Ok(ComparisonReport {
        ratio_measured: moving_fit.tau / rest_fit.tau,
        ratio_einstein: einstein,
        ratio_law: law,
        max_pointwise_gap,
    })
}

/// Period-based report for the two-line equal-weight clock. The moving
/// period dilates by γ̃ under definite momentum and contracts by 1/γ under
/// definite velocity.
fn two_mass_report(
    d: &MassDensity,
    prep: Preparation,
    window: Option<(f64, f64)>,
) -> Result<ComparisonReport> {
    let lines = match d {
        MassDensity::Discrete(disc) if disc.lines().len() == 2 => disc.lines(),
        _ => {
            return Err(Error::invalid(
                "period comparison requires a two-line discrete density",
            ))
        }
    };
    let state = TwoMassState::with_weights(
        lines[0].mass,
        lines[1].mass,
        lines[0].weight,
        lines[1].weight,
    )?;
    if !state.has_equal_weights() {
        return Err(Error::invalid("period comparison requires equal weights"));
    }
    let ratio_measured =
        oscillation_period(&state, prep)? / oscillation_period(&state, Preparation::Rest)?;
    // einstein reference: the Lorentz factor of a clock carrying the mean
    // mass; law + time rescaling: γ̃ dilation (momentum) or γ contraction
    // (velocity). moving probability at t matches rest at t·rest_scale.
    let (ratio_einstein, ratio_law, rest_scale) = match prep {
        Preparation::DefiniteMomentum(p) => {
            let gamma_tilde = effective_gamma_tilde(p, state.m1(), state.m2())?;
            (gamma_m(p, state.mean_mass())?, gamma_tilde, 1.0 / gamma_tilde)
        }
        Preparation::DefiniteVelocity(v) => {
            let gamma = lorentz_gamma(v)?;
            (gamma, 1.0 / gamma, gamma)
        }
        Preparation::Rest => unreachable!("rest is rejected by the caller"),
    };
    let rest_period = oscillation_period(&state, Preparation::Rest)?;
    let t_hi = window
        .map(|w| w.1)
        .unwrap_or(3.0 * rest_period * ratio_measured);
    let grid = linear_grid(0.0, t_hi, 256)?;
    let mut max_pointwise_gap = 0.0f64;
    for &t in &grid {
        let moving = amplitude::survival(d, prep, t)?.norm_sqr();
        let rest = amplitude::survival_rest(d, t * rest_scale)?.norm_sqr();
        max_pointwise_gap = max_pointwise_gap.max((moving - rest).abs());
    }
    Ok(ComparisonReport {
        ratio_measured,
        ratio_einstein,
        ratio_law,
        max_pointwise_gap,
    })
}

/// Largest contiguous window on which the computed |A|² stays within
/// `rel_dev` of its closed-form approximant.
///
/// The scan grid is log-spaced over [0.05, 6]/Γ_eff with Γ_eff matched to
/// the preparation, wide enough to bracket the exponential regime from both
/// sides.
pub fn exponential_window_scan(
    d: &MassDensity,
    prep: Preparation,
    rel_dev: f64,
) -> Result<(f64, f64)> {
    let bw = match d {
        MassDensity::BreitWigner(bw) => bw,
        MassDensity::Discrete(_) => {
            return Err(Error::invalid(
                "no exponential approximant exists for a discrete density",
            ))
        }
    };
    let width_eff = match prep {
        Preparation::Rest => bw.width(),
        Preparation::DefiniteVelocity(v) => bw.width() * lorentz_gamma(v)?,
        Preparation::DefiniteMomentum(p) => bw.width() / gamma_m(p, bw.m())?,
    };
    let grid = log_grid(0.05 / width_eff, 6.0 / width_eff, 200)?;
    let series = amplitude_series(d, prep, &grid)?;
    window_from_series(&series, rel_dev)
}

/// Grid scan of a precomputed series against its attached approximant.
pub fn window_from_series(series: &AmplitudeSeries, rel_dev: f64) -> Result<(f64, f64)> {
    if !(rel_dev > 0.0 && rel_dev < 1.0) {
        return Err(Error::invalid(format!(
            "relative deviation must lie in (0, 1) (got {rel_dev})"
        )));
    }
    let approx = series.approx_probabilities.as_ref().ok_or_else(|| {
        Error::invalid("series has no approximant values (discrete density)")
    })?;
    let ok: Vec<bool> = series
        .probabilities
        .iter()
        .zip(approx.iter())
        .map(|(f, a)| *a > 0.0 && (f - a).abs() / a < rel_dev)
        .collect();
    let mut best: Option<(usize, usize)> = None;
    let mut run_start = None;
    for (i, good) in ok.iter().enumerate() {
        match (good, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(bs, be)| i - 1 - s > be - bs) {
                    best = Some((s, i - 1));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        let e = ok.len() - 1;
        if best.is_none_or(|(bs, be)| e - s > be - bs) {
            best = Some((s, e));
        }
    }
    match best {
        Some((s, e)) if e > s => Ok((series.times[s], series.times[e])),
        _ => Err(Error::invalid(format!(
            "no window stays within {rel_dev} of the approximant"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{BreitWignerDensity, DiscreteDensity};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn bw_density() -> MassDensity {
        MassDensity::BreitWigner(BreitWignerDensity::new(1.0, 0.01, 1e4).unwrap())
    }

    /// Hand-built series with |A|² = e^{-t/τ}, bypassing quadrature.
    fn synthetic_series(tau: f64, t_max: f64, n: usize) -> AmplitudeSeries {
        let times = linear_grid(0.0, t_max, n).unwrap();
        let amplitudes: Vec<Complex64> = times
            .iter()
            .map(|t| Complex64::new((-0.5 * t / tau).exp(), 0.0))
            .collect();
        let probabilities: Vec<f64> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
        AmplitudeSeries {
            quad_errors: vec![0.0; times.len()],
            approx_probabilities: None,
            times,
            amplitudes,
            probabilities,
            preparation: Preparation::Rest,
            density: bw_density(),
        }
    }

    #[test]
    fn exact_exponential_recovers_tau() {
        let s = synthetic_series(100.0, 300.0, 200);
        let fit = fit_lifetime(&s, (20.0, 300.0)).unwrap();
        assert_relative_eq!(fit.tau, 100.0, max_relative = 1e-9);
        assert!(fit.log_residual_rms < 1e-12);
        assert!(fit.n_points >= 8);
    }

    #[test]
    fn window_invariance_on_exact_data() {
        let s = synthetic_series(100.0, 600.0, 400);
        let a = fit_lifetime(&s, (10.0, 200.0)).unwrap().tau;
        let b = fit_lifetime(&s, (150.0, 590.0)).unwrap().tau;
        assert_relative_eq!(a, b, max_relative = 1e-9);
    }

    #[test]
    fn fit_rejects_bad_input() {
        // constant probability has slope 0
        let times = linear_grid(0.0, 10.0, 32).unwrap();
        let flat = AmplitudeSeries {
            amplitudes: vec![Complex64::new(1.0, 0.0); 32],
            probabilities: vec![1.0; 32],
            approx_probabilities: None,
            quad_errors: vec![0.0; 32],
            times,
            preparation: Preparation::Rest,
            density: bw_density(),
        };
        assert!(matches!(
            fit_lifetime(&flat, (0.0, 10.0)),
            Err(Error::Fit(_))
        ));
        // too few points in the window
        let s = synthetic_series(100.0, 300.0, 200);
        assert!(fit_lifetime(&s, (0.0, 5.0)).is_err());
        assert!(fit_lifetime(&s, (5.0, 5.0)).is_err());
        // probabilities below the log floor
        let deep = synthetic_series(1.0, 40.0, 100);
        assert!(fit_lifetime(&deep, (10.0, 40.0)).is_err());
    }

    #[test]
    fn rest_lifetime_matches_width() {
        let d = bw_density();
        let grid = linear_grid(20.0, 300.0, 200).unwrap();
        let series = amplitude_series(&d, Preparation::Rest, &grid).unwrap();
        let fit = fit_lifetime(&series, (20.0, 300.0)).unwrap();
        assert!(
            (fit.tau - 100.0).abs() / 100.0 < 0.02,
            "tau = {} not within 2% of 1/width",
            fit.tau
        );
    }

    #[test]
    fn velocity_report_contracts() {
        let d = bw_density();
        let r = dilation_report(&d, Preparation::DefiniteVelocity(0.6), None).unwrap();
        assert!((r.ratio_measured - 0.8).abs() < 0.008, "{r:?}");
        assert_eq!(r.ratio_einstein, 1.25);
        assert_eq!(r.ratio_law, 0.8);
        assert!(r.max_pointwise_gap <= 1e-9, "{r:?}");
    }

    #[test]
    fn momentum_report_dilates() {
        let d = bw_density();
        let r = dilation_report(&d, Preparation::DefiniteMomentum(1.0), None).unwrap();
        let s2 = 2.0f64.sqrt();
        assert!(
            (r.ratio_measured - s2).abs() / s2 < 0.01,
            "measured {} vs √2",
            r.ratio_measured
        );
        assert_eq!(r.ratio_einstein, s2);
        assert_eq!(r.ratio_law, s2);
        assert!(r.ratio_measured > 1.0);
    }

    #[test]
    fn momentum_zero_report_is_unity() {
        let d = bw_density();
        let r = dilation_report(&d, Preparation::DefiniteMomentum(0.0), None).unwrap();
        assert!((r.ratio_measured - 1.0).abs() < 0.005, "{r:?}");
        assert_eq!(r.ratio_einstein, 1.0);
    }

    #[test]
    fn rest_report_is_rejected() {
        assert!(dilation_report(&bw_density(), Preparation::Rest, None).is_err());
    }

    #[test]
    fn two_mass_period_report() {
        let d = MassDensity::Discrete(DiscreteDensity::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap());
        let r = dilation_report(&d, Preparation::DefiniteMomentum(2.0), None).unwrap();
        let gt = (5.0f64.sqrt() + 8.0f64.sqrt()) / 3.0;
        assert_relative_eq!(r.ratio_measured, gt, max_relative = 1e-13);
        assert_relative_eq!(r.ratio_law, gt, max_relative = 1e-15);
        // Einstein reference from the mean mass differs from γ̃
        assert!((r.ratio_einstein - r.ratio_law).abs() > 1e-2);
        // Eq-level identity: the momentum clock is the rest clock run at t/γ̃
        assert!(r.max_pointwise_gap <= 1e-12, "{r:?}");
    }

    #[test]
    fn two_mass_velocity_report_contracts_the_period() {
        let d = MassDensity::Discrete(DiscreteDensity::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap());
        let r = dilation_report(&d, Preparation::DefiniteVelocity(0.6), None).unwrap();
        assert_relative_eq!(r.ratio_measured, 0.8, max_relative = 1e-14);
        assert_eq!(r.ratio_einstein, 1.25);
        assert_relative_eq!(r.ratio_law, 0.8, max_relative = 1e-15);
        assert!(r.max_pointwise_gap <= 1e-12, "{r:?}");
    }

    #[test]
    fn window_scan_brackets_the_exponential_regime() {
        let d = bw_density();
        let (lo, hi) = exponential_window_scan(&d, Preparation::Rest, 0.5).unwrap();
        assert!(lo <= 20.0, "window starts at {lo}");
        assert!(hi >= 300.0, "window ends at {hi}");
    }

    #[test]
    fn window_scan_nesting() {
        let d = bw_density();
        let grid = log_grid(5.0, 600.0, 120).unwrap();
        let series = amplitude_series(&d, Preparation::Rest, &grid).unwrap();
        let wide = window_from_series(&series, 0.5).unwrap();
        let narrow = window_from_series(&series, 0.05).unwrap();
        assert!(wide.0 <= narrow.0 && narrow.1 <= wide.1);
    }

    #[test]
    fn window_scan_rejects_discrete_and_bad_dev() {
        let disc =
            MassDensity::Discrete(DiscreteDensity::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap());
        assert!(exponential_window_scan(&disc, Preparation::Rest, 0.5).is_err());
        assert!(exponential_window_scan(&bw_density(), Preparation::Rest, 0.0).is_err());
        assert!(exponential_window_scan(&bw_density(), Preparation::Rest, 1.0).is_err());
    }
}
