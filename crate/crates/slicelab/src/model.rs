//! Model descriptions and tabulated thermodynamic curves.

use crate::rational::Rational;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Spin magnitude, stored as 2s so half-integers stay exact.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spin {
    two_s: u32,
}

impl Spin {
    pub fn new(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return Err(Error::InvalidModel("spin must be at least 1/2".into()));
        }
        Ok(Spin { two_s })
    }

    pub fn half() -> Self {
        Spin { two_s: 1 }
    }

    pub fn two_s(&self) -> u32 {
        self.two_s
    }

    /// Hilbert-space dimension 2s+1.
    pub fn multiplicity(&self) -> u32 {
        self.two_s + 1
    }

    /// s as an exact rational.
    pub fn value(&self) -> Rational {
        Rational::new(self.two_s as i64, 2)
    }

    /// s(s+1).
    pub fn casimir(&self) -> Rational {
        let s = self.value();
        &s * &(&s + &Rational::one())
    }

    /// Magnetic quantum numbers m = −s, −s+1, …, s as exact rationals.
    pub fn levels(&self) -> Vec<Rational> {
        (0..=self.two_s)
            .map(|k| Rational::new(2 * k as i64 - self.two_s as i64, 2))
            .collect()
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_s % 2 == 0 {
            write!(f, "{}", self.two_s / 2)
        } else {
            write!(f, "{}/2", self.two_s)
        }
    }
}

impl fmt::Debug for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Spin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r: Rational = s
            .parse()
            .map_err(|e: String| Error::InvalidModel(format!("bad spin: {e}")))?;
        let doubled = &r * &Rational::from_int(2);
        if !doubled.denom().eq(&num::BigInt::from(1)) || !doubled.is_positive() {
            return Err(Error::InvalidModel(format!(
                "spin must be a positive half-integer, got {r}"
            )));
        }
        let two_s: u32 = doubled
            .numer()
            .try_into()
            .map_err(|_| Error::InvalidModel(format!("spin {r} too large")))?;
        Spin::new(two_s)
    }
}

/// Which exactly solvable system, with its couplings and slice count L.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    /// Harmonic oscillator (ħω = 1), truncated to L Matsubara frequencies;
    /// L must be odd.
    Sho { l: u32 },
    /// Single spin s with quadratic self-coupling J (energy unit J).
    SingleSpin { s: Spin, j: Rational, l: u32 },
    /// Spin-½ pair: exchange J plus per-site self-coupling J′.
    Dimer {
        j: Rational,
        jprime: Rational,
        l: u32,
    },
}

impl ModelSpec {
    pub fn l(&self) -> u32 {
        match self {
            ModelSpec::Sho { l }
            | ModelSpec::SingleSpin { l, .. }
            | ModelSpec::Dimer { l, .. } => *l,
        }
    }

    pub fn with_l(&self, l: u32) -> Self {
        let mut m = self.clone();
        match &mut m {
            ModelSpec::Sho { l: x }
            | ModelSpec::SingleSpin { l: x, .. }
            | ModelSpec::Dimer { l: x, .. } => *x = l,
        }
        m
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ModelSpec::Sho { .. } => "sho",
            ModelSpec::SingleSpin { .. } => "spin",
            ModelSpec::Dimer { .. } => "dimer",
        }
    }

    /// Structural checks: L ≥ 1 everywhere, L odd for the oscillator,
    /// nonzero exchange for the dimer (J = 0 factorizes into two single
    /// spins and is not representable by the dimer's projector form).
    pub fn validate(&self) -> Result<()> {
        if self.l() == 0 {
            return Err(Error::InvalidModel("slice count L must be at least 1".into()));
        }
        match self {
            ModelSpec::Sho { l } if l % 2 == 0 => Err(Error::InvalidModel(format!(
                "oscillator frequency count L must be odd, got {l}"
            ))),
            ModelSpec::Dimer { j, .. } if j.is_zero() => Err(Error::ZeroExchange),
            _ => Ok(()),
        }
    }
}

impl fmt::Debug for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Sho { l } => write!(f, "sho(L={l})"),
            ModelSpec::SingleSpin { s, j, l } => write!(f, "spin(s={s}, J={j}, L={l})"),
            ModelSpec::Dimer { j, jprime, l } => {
                write!(f, "dimer(J={j}, Jp={jprime}, L={l})")
            }
        }
    }
}

/// One tabulated temperature point. `utilde` is absent where the
/// Hamiltonian-average estimator is not defined (the oscillator).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CurveSample {
    pub beta: f64,
    pub t: f64,
    pub z: f64,
    pub u: f64,
    pub utilde: Option<f64>,
    pub c: f64,
}

/// Tabulated (β, Z, U, Ũ, C) samples for one model at one L.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThermoCurve {
    pub model: ModelSpec,
    pub samples: Vec<CurveSample>,
}

/// T = 0 values obtained symbolically (dominant-rate limits), never by
/// evaluating at large β.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ZeroTemperatureLimits {
    pub u: f64,
    pub utilde: Option<f64>,
    pub c: f64,
}
