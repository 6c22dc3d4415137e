//! Implementations of the four subcommands.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde_json::json;

use decaylaw::amplitude::{amplitude_series, Preparation};
use decaylaw::analysis::{dilation_report, ComparisonReport};
use decaylaw::config::DensityConfig;
use decaylaw::spectral::MassDensity;
use decaylaw::twomass::{
    self, effective_gamma_tilde, osc_amplitude, osc_probability_equal_weights, TwoMassState,
};
use decaylaw::Complex64;

use crate::cli_error::{CliError, CliResult};
use crate::output::{emit, fmt_f64};
use crate::runconfig::{OutputFormat, RunArgs, RunConfig};

/// Compute a survival-amplitude series and stream it as CSV or JSON rows.
pub fn cmd_decay(args: &RunArgs) -> CliResult<()> {
    let cfg = args.resolve()?;
    let density = cfg.density.build()?;
    let prep = cfg.preparation.build()?;
    let times = cfg.grid.build()?;
    let series = decaylaw::amplitude::amplitude_series_with_tolerances(
        &density, prep, &times, cfg.rel_tol, cfg.abs_tol,
    )?;

    let mut payload = String::new();
    match cfg.format {
        OutputFormat::Csv => {
            let has_approx = series.approx_probabilities.is_some();
            payload.push_str("t,re_A,im_A,prob");
            if has_approx {
                payload.push_str(",approx_prob");
            }
            payload.push('\n');
            for i in 0..series.len() {
                payload.push_str(&fmt_f64(series.times[i]));
                payload.push(',');
                payload.push_str(&fmt_f64(series.amplitudes[i].re));
                payload.push(',');
                payload.push_str(&fmt_f64(series.amplitudes[i].im));
                payload.push(',');
                payload.push_str(&fmt_f64(series.probabilities[i]));
                if let Some(approx) = &series.approx_probabilities {
                    payload.push(',');
                    payload.push_str(&fmt_f64(approx[i]));
                }
                payload.push('\n');
            }
        }
        OutputFormat::Json => {
            for i in 0..series.len() {
                let mut row = json!({
                    "t": series.times[i],
                    "re_A": series.amplitudes[i].re,
                    "im_A": series.amplitudes[i].im,
                    "prob": series.probabilities[i],
                });
                if let Some(approx) = &series.approx_probabilities {
                    row["approx_prob"] = json!(approx[i]);
                }
                payload.push_str(&row.to_string());
                payload.push('\n');
            }
        }
    }
    emit(cfg.out.as_deref(), &payload)
}

#[derive(Debug, Clone, Args)]
pub struct OscillateArgs {
    #[command(flatten)]
    pub run: RunArgs,

    /// Named two-mass preset (demo, k0)
    #[arg(long)]
    pub preset: Option<String>,

    /// First mass of an ad-hoc two-mass state
    #[arg(long)]
    pub m1: Option<f64>,

    /// Second mass of an ad-hoc two-mass state
    #[arg(long)]
    pub m2: Option<f64>,

    /// Weight of the first mass (default 0.5)
    #[arg(long)]
    pub w1: Option<f64>,

    /// Require the cos² closed-form column (errors on unequal weights)
    #[arg(long = "closed-form")]
    pub closed_form: bool,
}

/// Evolve a two-mass clock and stream (t, re_A, im_A, prob[, closed_form]).
pub fn cmd_oscillate(args: &OscillateArgs) -> CliResult<()> {
    let cfg = args.run.resolve_without_density()?;
    let state = resolve_state(args, &cfg)?;
    let prep = cfg.preparation.build()?;
    let times = cfg.grid.build()?;

    if args.closed_form && !state.has_equal_weights() {
        return Err(CliError::config(format!(
            "--closed-form requires equal weights (got w1 = {}, w2 = {})",
            state.w1(),
            state.w2()
        )));
    }
    let with_closed_form = args.closed_form || state.has_equal_weights();

    let rows: Vec<(f64, Complex64, Option<f64>)> = times
        .iter()
        .map(|&t| -> CliResult<_> {
            let a = osc_amplitude(&state, prep, t)?;
            let cf = if with_closed_form {
                Some(osc_probability_equal_weights(&state, prep, t)?)
            } else {
                None
            };
            Ok((t, a, cf))
        })
        .collect::<CliResult<_>>()?;

    // the momentum clock runs slow by γ̃, worth reporting up front
    let gamma_tilde = match prep {
        Preparation::DefiniteMomentum(p) => {
            Some(effective_gamma_tilde(p, state.m1(), state.m2())?)
        }
        _ => None,
    };

    let mut payload = String::new();
    match cfg.format {
        OutputFormat::Csv => {
            if let Some(gt) = gamma_tilde {
                payload.push_str(&format!("# gamma_tilde={}\n", fmt_f64(gt)));
            }
            payload.push_str("t,re_A,im_A,prob");
            if with_closed_form {
                payload.push_str(",closed_form");
            }
            payload.push('\n');
            for (t, a, cf) in &rows {
                payload.push_str(&fmt_f64(*t));
                payload.push(',');
                payload.push_str(&fmt_f64(a.re));
                payload.push(',');
                payload.push_str(&fmt_f64(a.im));
                payload.push(',');
                payload.push_str(&fmt_f64(a.norm_sqr()));
                if let Some(cf) = cf {
                    payload.push(',');
                    payload.push_str(&fmt_f64(*cf));
                }
                payload.push('\n');
            }
        }
        OutputFormat::Json => {
            if let Some(gt) = gamma_tilde {
                payload.push_str(&json!({ "gamma_tilde": gt }).to_string());
                payload.push('\n');
            }
            for (t, a, cf) in &rows {
                let mut row = json!({
                    "t": t,
                    "re_A": a.re,
                    "im_A": a.im,
                    "prob": a.norm_sqr(),
                });
                if let Some(cf) = cf {
                    row["closed_form"] = json!(cf);
                }
                payload.push_str(&row.to_string());
                payload.push('\n');
            }
        }
    }
    emit(cfg.out.as_deref(), &payload)
}

fn resolve_state(args: &OscillateArgs, cfg: &RunConfig) -> CliResult<TwoMassState> {
    if let Some(name) = &args.preset {
        return twomass::preset(name).ok_or_else(|| {
            CliError::config(format!(
                "unknown preset {name:?}; available: {}",
                twomass::preset_names().join(", ")
            ))
        });
    }
    match (args.m1, args.m2) {
        (Some(m1), Some(m2)) => {
            let w1 = args.w1.unwrap_or(0.5);
            return Ok(TwoMassState::new(m1, m2, w1)?);
        }
        (None, None) => {}
        _ => return Err(CliError::config("--m1 and --m2 must be given together")),
    }
    // fall back to a two-line discrete density from the config
    match &cfg.density {
        DensityConfig::Discrete { lines } if lines.len() == 2 => Ok(TwoMassState::with_weights(
            lines[0].0, lines[1].0, lines[0].1, lines[1].1,
        )?),
        DensityConfig::Preset { name } => twomass::preset(name).ok_or_else(|| {
            CliError::config(format!(
                "unknown preset {name:?}; available: {}",
                twomass::preset_names().join(", ")
            ))
        }),
        _ => Err(CliError::config(
            "oscillate needs --preset, --m1/--m2, or a two-line discrete density",
        )),
    }
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Config file of the rest run
    pub rest_config: PathBuf,

    /// Config file of the moving run (same density, non-rest preparation)
    pub moving_config: PathBuf,

    /// Rest-frame fit window start (default 0.2/Γ)
    #[arg(long = "window-lo")]
    pub window_lo: Option<f64>,

    /// Rest-frame fit window end (default 3/Γ)
    #[arg(long = "window-hi")]
    pub window_hi: Option<f64>,

    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fit the moving and rest lifetimes (or periods) and emit the comparison
/// report as JSON.
pub fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    let rest_cfg = RunConfig::load(&args.rest_config)?;
    let moving_cfg = RunConfig::load(&args.moving_config)?;
    let report = compare_report(&rest_cfg, &moving_cfg, window_of(args)?)?;
    let mut payload = serde_json::to_string(&report)
        .map_err(|e| CliError::config(format!("cannot serialize report: {e}")))?;
    payload.push('\n');
    emit(args.out.as_deref(), &payload)
}

fn window_of(args: &CompareArgs) -> CliResult<Option<(f64, f64)>> {
    match (args.window_lo, args.window_hi) {
        (Some(lo), Some(hi)) => Ok(Some((lo, hi))),
        (None, None) => Ok(None),
        _ => Err(CliError::config(
            "--window-lo and --window-hi must be given together",
        )),
    }
}

fn compare_report(
    rest_cfg: &RunConfig,
    moving_cfg: &RunConfig,
    window: Option<(f64, f64)>,
) -> CliResult<ComparisonReport> {
    let rest_density = rest_cfg.density.build()?;
    let moving_density = moving_cfg.density.build()?;
    if rest_density != moving_density {
        return Err(CliError::config(
            "the two configs must describe the same density",
        ));
    }
    let rest_prep = rest_cfg.preparation.build()?;
    if rest_prep != Preparation::Rest {
        return Err(CliError::config(
            "the first config must use the rest preparation",
        ));
    }
    let moving_prep = moving_cfg.preparation.build()?;
    if moving_prep == Preparation::Rest {
        return Err(CliError::config(
            "the second config must use a moving preparation (velocity or momentum)",
        ));
    }
    Ok(dilation_report(&rest_density, moving_prep, window)?)
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub run: RunArgs,

    /// Scan axis: p | v | gamma | t
    #[arg(long)]
    pub axis: String,

    /// First axis value
    #[arg(long)]
    pub from: f64,

    /// Last axis value
    #[arg(long)]
    pub to: f64,

    /// Number of scan points
    #[arg(long)]
    pub steps: usize,
}

/// Sweep one axis; each row is a ComparisonReport (p, v, gamma) or an
/// amplitude summary (t). Rows are computed concurrently and emitted in
/// axis order.
pub fn cmd_scan(args: &ScanArgs) -> CliResult<()> {
    let cfg = args.run.resolve()?;
    if args.steps == 0 {
        return Err(CliError::config("scan needs at least one step"));
    }
    // the negation also rejects NaN bounds
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(args.from <= args.to) {
        return Err(CliError::config(format!(
            "scan bounds must satisfy from <= to (got {} > {})",
            args.from, args.to
        )));
    }
    let values: Vec<f64> = if args.steps == 1 {
        vec![args.from]
    } else {
        let step = (args.to - args.from) / (args.steps - 1) as f64;
        (0..args.steps)
            .map(|i| {
                if i == args.steps - 1 {
                    args.to
                } else {
                    args.from + step * i as f64
                }
            })
            .collect()
    };

    let density = cfg.density.build()?;
    let payload = match args.axis.as_str() {
        "t" => scan_time(&cfg, &density, &values)?,
        "p" => scan_reports(&cfg, &values, "p", |d, x| {
            Ok(dilation_report(d, Preparation::DefiniteMomentum(x), None)?)
        })?,
        "v" => scan_reports(&cfg, &values, "v", |d, x| {
            Ok(dilation_report(d, Preparation::DefiniteVelocity(x), None)?)
        })?,
        "gamma" => {
            let prep = cfg.preparation.build()?;
            if prep == Preparation::Rest {
                return Err(CliError::config(
                    "a gamma scan needs a moving preparation in the config",
                ));
            }
            let base = match &cfg.density {
                DensityConfig::BreitWigner { m, tail_sigmas, .. } => (*m, *tail_sigmas),
                _ => {
                    return Err(CliError::config(
                        "a gamma scan needs a breit-wigner density",
                    ))
                }
            };
            scan_reports(&cfg, &values, "gamma", move |_, x| {
                let d = DensityConfig::BreitWigner {
                    m: base.0,
                    gamma: x,
                    tail_sigmas: base.1,
                }
                .build()?;
                Ok(dilation_report(&d, prep, None)?)
            })?
        }
        other => {
            return Err(CliError::config(format!(
                "unknown scan axis {other:?}; use p, v, gamma, or t"
            )))
        }
    };
    emit(cfg.out.as_deref(), &payload)
}

fn scan_time(cfg: &RunConfig, density: &MassDensity, values: &[f64]) -> CliResult<String> {
    let prep = cfg.preparation.build()?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let series = amplitude_series(density, prep, &sorted)?;
    let mut payload = String::new();
    match cfg.format {
        OutputFormat::Csv => {
            payload.push_str("t,re_A,im_A,prob\n");
            for i in 0..series.len() {
                payload.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_f64(series.times[i]),
                    fmt_f64(series.amplitudes[i].re),
                    fmt_f64(series.amplitudes[i].im),
                    fmt_f64(series.probabilities[i]),
                ));
            }
        }
        OutputFormat::Json => {
            for i in 0..series.len() {
                payload.push_str(
                    &json!({
                        "t": series.times[i],
                        "re_A": series.amplitudes[i].re,
                        "im_A": series.amplitudes[i].im,
                        "prob": series.probabilities[i],
                    })
                    .to_string(),
                );
                payload.push('\n');
            }
        }
    }
    Ok(payload)
}

fn scan_reports<F>(
    cfg: &RunConfig,
    values: &[f64],
    axis_name: &str,
    row: F,
) -> CliResult<String>
where
    F: Fn(&MassDensity, f64) -> CliResult<ComparisonReport> + Sync,
{
    let density = cfg.density.build()?;
    let reports: Vec<ComparisonReport> = values
        .par_iter()
        .map(|&x| row(&density, x))
        .collect::<CliResult<_>>()?;

    let mut payload = String::new();
    match cfg.format {
        OutputFormat::Csv => {
            payload.push_str(&format!(
                "{axis_name},ratio_measured,ratio_einstein,ratio_law,max_pointwise_gap\n"
            ));
            for (x, r) in values.iter().zip(reports.iter()) {
                payload.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_f64(*x),
                    fmt_f64(r.ratio_measured),
                    fmt_f64(r.ratio_einstein),
                    fmt_f64(r.ratio_law),
                    fmt_f64(r.max_pointwise_gap),
                ));
            }
        }
        OutputFormat::Json => {
            for (x, r) in values.iter().zip(reports.iter()) {
                let report_value = serde_json::to_value(r)
                    .map_err(|e| CliError::config(format!("cannot serialize report: {e}")))?;
                let mut obj = serde_json::Map::new();
                obj.insert(axis_name.to_string(), json!(x));
                if let serde_json::Value::Object(fields) = report_value {
                    obj.extend(fields);
                }
                payload.push_str(&serde_json::Value::Object(obj).to_string());
                payload.push('\n');
            }
        }
    }
    Ok(payload)
}
