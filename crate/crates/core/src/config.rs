//! JSON-compatible descriptions of densities, preparations, and time grids.
//!
//! These are the wire forms used by config files and the CLI:
//!
//! ```json
//! {"kind": "breit-wigner", "m": 1.0, "gamma": 0.01, "tail_sigmas": 10000.0}
//! {"kind": "discrete", "lines": [[1.0, 0.5], [2.0, 0.5]]}
//! {"kind": "preset", "name": "k0"}
//! ```

use serde::{Deserialize, Serialize};

use crate::amplitude::{linear_grid, log_grid, Preparation};
use crate::error::{Error, Result};
use crate::spectral::{BreitWignerDensity, DiscreteDensity, MassDensity, DEFAULT_TAIL_SIGMAS};
use crate::twomass;

fn default_tail_sigmas() -> f64 {
    DEFAULT_TAIL_SIGMAS
}

fn default_t_min() -> f64 {
    0.0
}

/// Density description as written in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum DensityConfig {
    #[serde(rename = "breit-wigner")]
    BreitWigner {
        m: f64,
        gamma: f64,
        #[serde(default = "default_tail_sigmas")]
        tail_sigmas: f64,
    },
    #[serde(rename = "discrete")]
    Discrete { lines: Vec<(f64, f64)> },
    /// A named two-mass preset (equal-weight discrete pair).
    #[serde(rename = "preset")]
    Preset { name: String },
}

impl DensityConfig {
    pub fn build(&self) -> Result<MassDensity> {
        match self {
            DensityConfig::BreitWigner {
                m,
                gamma,
                tail_sigmas,
            } => Ok(MassDensity::BreitWigner(BreitWignerDensity::new(
                *m,
                *gamma,
                *tail_sigmas,
            )?)),
            DensityConfig::Discrete { lines } => Ok(MassDensity::Discrete(DiscreteDensity::new(
                lines.clone(),
            )?)),
            DensityConfig::Preset { name } => twomass::preset(name)
                .map(|s| s.to_density())
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "unknown preset {name:?}; available: {}",
                        twomass::preset_names().join(", ")
                    ))
                }),
        }
    }
}

/// Preparation description as written in config files.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum PreparationConfig {
    #[default]
    #[serde(rename = "rest")]
    Rest,
    #[serde(rename = "velocity")]
    Velocity { v: f64 },
    #[serde(rename = "momentum")]
    Momentum { p: f64 },
}

impl PreparationConfig {
    pub fn build(&self) -> Result<Preparation> {
        let prep = match *self {
            PreparationConfig::Rest => Preparation::Rest,
            PreparationConfig::Velocity { v } => Preparation::DefiniteVelocity(v),
            PreparationConfig::Momentum { p } => Preparation::DefiniteMomentum(p),
        };
        prep.validate()?;
        Ok(prep)
    }
}

/// Time-grid description: linear grids start at `t_min` (default 0),
/// log grids need `t_min > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum GridConfig {
    #[serde(rename = "linear")]
    Linear {
        #[serde(default = "default_t_min")]
        t_min: f64,
        t_max: f64,
        n: usize,
    },
    #[serde(rename = "log")]
    Log { t_min: f64, t_max: f64, n: usize },
}

impl GridConfig {
    pub fn build(&self) -> Result<Vec<f64>> {
        match *self {
            GridConfig::Linear { t_min, t_max, n } => linear_grid(t_min, t_max, n),
            GridConfig::Log { t_min, t_max, n } => log_grid(t_min, t_max, n),
        }
    }
}

/// Parse any of the config fragments from a JSON string.
pub fn parse_json<T: for<'de> Deserialize<'de>>(json: &str) -> Result<T> {
    serde_json::from_str(json).map_err(|e| Error::invalid(format!("config parse error: {e}")))
}
