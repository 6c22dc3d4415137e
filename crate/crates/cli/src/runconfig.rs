//! Run configuration: a JSON config file plus command-line overrides.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use decaylaw::config::{DensityConfig, GridConfig, PreparationConfig};
use decaylaw::quadrature::{DEFAULT_ABS_TOL, DEFAULT_REL_TOL};

use crate::cli_error::{CliError, CliResult};

fn default_rel_tol() -> f64 {
    DEFAULT_REL_TOL
}

fn default_abs_tol() -> f64 {
    DEFAULT_ABS_TOL
}

fn default_grid() -> GridConfig {
    GridConfig::Linear {
        t_min: 0.0,
        t_max: 300.0,
        n: 301,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Complete description of one computation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub density: DensityConfig,
    #[serde(default)]
    pub preparation: PreparationConfig,
    #[serde(default = "default_grid")]
    pub grid: GridConfig,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "RunConfig::default_format")]
    pub format: OutputFormat,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn default_format() -> OutputFormat {
        OutputFormat::Csv
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn validate(&self) -> CliResult<()> {
        self.validate_run_parameters()?;
        self.density.build()?;
        Ok(())
    }

    /// Everything except the density: tolerances, preparation, grid.
    pub fn validate_run_parameters(&self) -> CliResult<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(CliError::config(format!(
                "tolerances must be positive (got rel_tol={}, abs_tol={})",
                self.rel_tol, self.abs_tol
            )));
        }
        self.preparation.build()?;
        self.grid.build()?;
        Ok(())
    }
}

/// Flags shared by the series-producing subcommands. Every flag overrides
/// the corresponding config-file field.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON config file with density/preparation/grid/tolerances
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Density: "breit-wigner" (with --m/--width), a preset name,
    /// inline JSON, or a path to a density JSON file
    #[arg(long)]
    pub density: Option<String>,

    /// Preparation kind: rest | velocity | momentum
    #[arg(long)]
    pub prep: Option<String>,

    /// Velocity for the definite-velocity preparation (implies --prep velocity)
    #[arg(long)]
    pub v: Option<f64>,

    /// Momentum for the definite-momentum preparation (implies --prep momentum)
    #[arg(long)]
    pub p: Option<f64>,

    /// Breit-Wigner center mass
    #[arg(long)]
    pub m: Option<f64>,

    /// Breit-Wigner width Γ
    #[arg(long)]
    pub width: Option<f64>,

    /// Upper truncation in units of Γ past the center mass
    #[arg(long = "tail-sigmas")]
    pub tail_sigmas: Option<f64>,

    /// Grid start time
    #[arg(long = "t-min")]
    pub t_min: Option<f64>,

    /// Grid end time
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,

    /// Number of grid points
    #[arg(long)]
    pub n: Option<usize>,

    /// Grid spacing: lin | log
    #[arg(long)]
    pub grid: Option<String>,

    /// Relative quadrature tolerance
    #[arg(long)]
    pub tol: Option<f64>,

    /// Output format: csv | json
    #[arg(long)]
    pub format: Option<String>,

    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Resolve the config file plus flag overrides into a full RunConfig.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let cfg = self.resolve_inner()?;
        if let DensityConfig::BreitWigner { m, gamma, .. } = &cfg.density {
            if m.is_nan() || gamma.is_nan() {
                return Err(CliError::config(
                    "a breit-wigner density needs --m and --width (or a config file)",
                ));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Like `resolve`, but tolerates a missing density (the oscillate
    /// command can take its state from --preset or --m1/--m2 instead).
    pub fn resolve_without_density(&self) -> CliResult<RunConfig> {
        let cfg = self.resolve_inner()?;
        cfg.validate_run_parameters()?;
        Ok(cfg)
    }

    fn resolve_inner(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig {
                density: DensityConfig::BreitWigner {
                    m: f64::NAN, // must be provided by flags
                    gamma: f64::NAN,
                    tail_sigmas: decaylaw::spectral::DEFAULT_TAIL_SIGMAS,
                },
                preparation: PreparationConfig::Rest,
                grid: default_grid(),
                rel_tol: DEFAULT_REL_TOL,
                abs_tol: DEFAULT_ABS_TOL,
                format: OutputFormat::Csv,
                out: None,
            },
        };

        if let Some(spec) = &self.density {
            cfg.density = parse_density_arg(spec)?;
        }

        // --m/--width/--tail-sigmas adjust a Breit-Wigner density in place
        if self.m.is_some() || self.width.is_some() || self.tail_sigmas.is_some() {
            match &mut cfg.density {
                DensityConfig::BreitWigner {
                    m,
                    gamma,
                    tail_sigmas,
                } => {
                    if let Some(v) = self.m {
                        *m = v;
                    }
                    if let Some(v) = self.width {
                        *gamma = v;
                    }
                    if let Some(v) = self.tail_sigmas {
                        *tail_sigmas = v;
                    }
                }
                _ => {
                    return Err(CliError::config(
                        "--m/--width/--tail-sigmas apply only to a breit-wigner density",
                    ))
                }
            }
        }

        if self.v.is_some() && self.p.is_some() {
            return Err(CliError::config("--v and --p are mutually exclusive"));
        }
        if let Some(kind) = &self.prep {
            cfg.preparation = match kind.as_str() {
                "rest" => PreparationConfig::Rest,
                "velocity" => PreparationConfig::Velocity {
                    v: self.v.ok_or_else(|| {
                        CliError::config("--prep velocity needs --v")
                    })?,
                },
                "momentum" => PreparationConfig::Momentum {
                    p: self.p.ok_or_else(|| {
                        CliError::config("--prep momentum needs --p")
                    })?,
                },
                other => {
                    return Err(CliError::config(format!(
                        "unknown preparation {other:?}; use rest, velocity, or momentum"
                    )))
                }
            };
        } else if let Some(v) = self.v {
            cfg.preparation = PreparationConfig::Velocity { v };
        } else if let Some(p) = self.p {
            cfg.preparation = PreparationConfig::Momentum { p };
        }

        if self.grid.is_some() || self.t_min.is_some() || self.t_max.is_some() || self.n.is_some()
        {
            cfg.grid = merge_grid(cfg.grid, self)?;
        }

        if let Some(tol) = self.tol {
            cfg.rel_tol = tol;
        }
        if let Some(fmt) = &self.format {
            cfg.format = match fmt.as_str() {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                other => {
                    return Err(CliError::config(format!(
                        "unknown format {other:?}; use csv or json"
                    )))
                }
            };
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }

        Ok(cfg)
    }
}

fn merge_grid(current: GridConfig, args: &RunArgs) -> CliResult<GridConfig> {
    let (cur_t_min, cur_t_max, cur_n, cur_kind) = match current {
        GridConfig::Linear { t_min, t_max, n } => (t_min, t_max, n, "lin"),
        GridConfig::Log { t_min, t_max, n } => (t_min, t_max, n, "log"),
    };
    let kind = args.grid.as_deref().unwrap_or(cur_kind);
    let t_min = args.t_min.unwrap_or(cur_t_min);
    let t_max = args.t_max.unwrap_or(cur_t_max);
    let n = args.n.unwrap_or(cur_n);
    match kind {
        "lin" | "linear" => Ok(GridConfig::Linear { t_min, t_max, n }),
        "log" => Ok(GridConfig::Log {
            // a linear default starting at 0 cannot seed a log grid
            t_min: if t_min > 0.0 { t_min } else { 1.0 },
            t_max,
            n,
        }),
        other => Err(CliError::config(format!(
            "unknown grid kind {other:?}; use lin or log"
        ))),
    }
}

/// Interpret the --density argument: inline JSON, a file path, the literal
/// Breit-Wigner kind, or a preset name.
fn parse_density_arg(spec: &str) -> CliResult<DensityConfig> {
    let trimmed = spec.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed)
            .map_err(|e| CliError::config(format!("cannot parse inline density: {e}")));
    }
    let path = Path::new(trimmed);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        return serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("cannot parse {}: {e}", path.display())));
    }
    match trimmed {
        "bw" | "breit-wigner" => Ok(DensityConfig::BreitWigner {
            m: f64::NAN,
            gamma: f64::NAN,
            tail_sigmas: decaylaw::spectral::DEFAULT_TAIL_SIGMAS,
        }),
        name if decaylaw::twomass::preset(name).is_some() => Ok(DensityConfig::Preset {
            name: name.to_string(),
        }),
        other => Err(CliError::config(format!(
            "unknown density {other:?}: expected breit-wigner, a preset ({}), inline JSON, or a file",
            decaylaw::twomass::preset_names().join(", ")
        ))),
    }
}
