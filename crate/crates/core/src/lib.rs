//! Survival amplitudes and decay laws of moving unstable quantum states.
//!
//! A moving unstable state can be prepared at rest, with definite velocity,
//! or with definite momentum. This crate computes the corresponding survival
//! amplitudes from a mass density, evaluates the closed-form exponential and
//! two-mass oscillation laws, and extracts effective lifetimes and
//! dilation/contraction factors from the computed series.
//!
//! Natural units (ħ = c = 1) are used throughout: masses and widths carry
//! energy units, time carries inverse-energy units, and velocities are
//! dimensionless in [0, 1).
//!
//! ```
//! use decaylaw::amplitude::{survival_rest, survival_velocity};
//! use decaylaw::spectral::{BreitWignerDensity, MassDensity};
//!
//! // a narrow line at m = 1 with Γ = 0.01 decays with lifetime 1/Γ = 100
//! let d = MassDensity::BreitWigner(BreitWignerDensity::new(1.0, 0.01, 1e4)?);
//! let f = survival_rest(&d, 100.0)?.norm_sqr();
//! assert!((f - (-1.0f64).exp()).abs() < 0.01 * f);
//!
//! // a state with sharp velocity decays *faster*: A_v(t) = A₀(γt)
//! let moving = survival_velocity(&d, 0.6, 80.0)?;
//! assert_eq!(moving, survival_rest(&d, 100.0)?);
//! # Ok::<(), decaylaw::Error>(())
//! ```

// Domain guards are written as `!(x > 0.0)` on purpose: the negation also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
pub mod analysis;
pub mod config;
pub mod error;
pub mod quadrature;
pub mod spectral;
pub mod twomass;

pub use error::{Error, Result};
pub use num_complex::Complex64;
