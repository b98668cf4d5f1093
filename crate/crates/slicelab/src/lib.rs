//! Finite-L time-slice approximants for three exactly solvable quantum
//! models — the harmonic oscillator, a self-interacting spin, and a spin-½
//! dimer — alongside direct numerical evaluation of the auxiliary-field
//! integrals that define them.
//!
//! The library is split into an exact symbolic layer and a floating-point
//! layer:
//!
//! * [`rational`], [`exppoly`], [`comb`] — arbitrary-precision rationals,
//!   exponential-polynomial algebra, and delta-comb densities of states
//!   connected by an exact Laplace-transform bijection.
//! * [`sho`], [`spin_single`], [`spin_dimer`] — closed forms per model:
//!   partition-function approximants, both energy estimators, heat
//!   capacities, densities of states, and high-temperature series.
//! * [`fieldint`] — the same partition functions computed the hard way, by
//!   Gauss–Hermite quadrature or seeded Monte Carlo over the Gaussian
//!   auxiliary fields, with sign diagnostics; used to cross-validate the
//!   closed forms.
//! * [`curve`] — temperature sweeps and symbolic T = 0 limits for the CLI.
//!
//! Everything in the symbolic layer is immutable and exact; floating point
//! enters only at evaluation boundaries.

pub mod comb;
pub mod curve;
pub mod exppoly;
pub mod fieldint;
pub mod model;
pub mod numeric;
pub mod rational;
pub mod sho;
pub mod spin_dimer;
pub mod spin_single;

pub use comb::{inverse_laplace, laplace, DeltaComb, DeltaTerm};
pub use exppoly::{ratio_limit_at_infinity, ExpPoly, Term};
pub use model::{CurveSample, ModelSpec, Spin, ThermoCurve, ZeroTemperatureLimits};
pub use rational::Rational;

/// Errors surfaced by model validation and the numeric estimators.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("beta must be positive, got {0}")]
    NonPositiveBeta(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error(
        "dimer with zero exchange has no projector form; it factorizes into \
         two independent single spins coupled by jprime — evaluate those instead"
    )]
    ZeroExchange,

    #[error(
        "coupling matrix is not positive definite in the real channel \
         (eigenvalue block {lambda} < 0); use the mixed channel, which takes \
         that block along an imaginary field"
    )]
    IndefiniteCoupling { lambda: f64 },

    #[error(
        "coupling matrix is singular (zero eigenvalue block); the real \
         channel cannot weight it — use the mixed channel, which drops the \
         zero block"
    )]
    SingularCoupling,

    #[error(
        "quadrature over {dim} field dimensions is past the supported {max}; \
         use the Monte Carlo estimator instead"
    )]
    QuadratureTooLarge { dim: usize, max: usize },

    #[error("sample count must be positive")]
    NoSamples,

    #[error("grid is unusable: {0}")]
    DegenerateGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
