//! Harmonic oscillator truncated to L Matsubara frequencies (ħω = k_B = 1).
//!
//! The L-approximant keeps the static frequency plus (L−1)/2 conjugate
//! pairs, so L is always odd. Its partition function is
//!
//! ```text
//! Z_L(β) = (1/β) · Π_{n=1}^{(L−1)/2} [1 + (β/2πn)²]^{−1}
//! ```
//!
//! and the matching density of states is the smooth, periodic
//!
//! ```text
//! g_L(E) = [2^{L−1}·((L−1)/2)!² / (L−1)!] · sin^{L−1}(πE) · Θ(E)
//! ```
//!
//! normalized to unit integral per period. Unlike the spin models this
//! approximant is nonnegative everywhere, and its low-temperature heat
//! capacity is L (each kept mode contributes classically).

use crate::numeric;
use crate::rational::Rational;
use crate::{Error, Result};
use std::f64::consts::PI;

fn check_odd(l: u32) -> Result<()> {
    if l == 0 || l % 2 == 0 {
        return Err(Error::InvalidModel(format!(
            "oscillator frequency count L must be odd and positive, got {l}"
        )));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) {
        return Err(Error::NonPositiveBeta(beta));
    }
    Ok(())
}

/// Partition-function approximant Z_L(β).
pub fn z(l: u32, beta: f64) -> Result<f64> {
    check_odd(l)?;
    check_beta(beta)?;
    let mut acc = 1.0 / beta;
    for n in 1..=(l - 1) / 2 {
        let x = beta / (2.0 * PI * n as f64);
        acc /= 1.0 + x * x;
    }
    Ok(acc)
}

/// Normalization prefactor of the density of states, exact:
/// 2^{L−1}·((L−1)/2)!² / (L−1)!. Arbitrary precision internally, so large L
/// does not overflow.
pub fn dos_prefactor(l: u32) -> Result<Rational> {
    check_odd(l)?;
    let m = (l - 1) / 2;
    let num = Rational::from_int(2).pow((l - 1) as i32) * Rational::factorial(m).pow(2);
    Ok(num / Rational::factorial(l - 1))
}

/// Density-of-states approximant g_L(E): the prefactor times sin^{L−1}(πE)
/// for E ≥ 0, zero for E < 0 (the E = 0 step takes the value of the E > 0
/// branch, which for L > 1 is 0 anyway).
pub fn dos(l: u32, e: f64) -> Result<f64> {
    check_odd(l)?;
    if e < 0.0 {
        return Ok(0.0);
    }
    let pref = dos_prefactor(l)?.to_f64();
    Ok(pref * (PI * e).sin().powi((l - 1) as i32))
}

/// Internal energy U_L = −∂_β ln Z_L, in closed form:
/// 1/β + Σ_n 2β/((2πn)² + β²).
pub fn u(l: u32, beta: f64) -> Result<f64> {
    check_odd(l)?;
    check_beta(beta)?;
    let mut acc = 1.0 / beta;
    for n in 1..=(l - 1) / 2 {
        let w = 2.0 * PI * n as f64;
        acc += 2.0 * beta / (w * w + beta * beta);
    }
    Ok(acc)
}

/// Heat capacity C_L = −β²·∂U_L/∂β, in closed form:
/// 1 + Σ_n 2β²(β² − (2πn)²)/((2πn)² + β²)².
///
/// Tends to 1 at high temperature and to L at low temperature.
pub fn heat_capacity(l: u32, beta: f64) -> Result<f64> {
    check_odd(l)?;
    check_beta(beta)?;
    let mut acc = 1.0;
    for n in 1..=(l - 1) / 2 {
        let w2 = (2.0 * PI * n as f64).powi(2);
        let b2 = beta * beta;
        acc += 2.0 * b2 * (b2 - w2) / (w2 + b2).powi(2);
    }
    Ok(acc)
}

/// Exact oscillator values (no truncation), for reference curves.
pub fn exact_z(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(0.5 / (0.5 * beta).sinh())
}

pub fn exact_u(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(0.5 / (0.5 * beta).tanh())
}

pub fn exact_heat_capacity(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let s = (0.5 * beta).sinh();
    Ok(0.25 * beta * beta / (s * s))
}

/// ∫₀^∞ e^{−βE}·g_L(E) dE computed numerically: one period by adaptive
/// quadrature, the rest by the exact geometric tail (g_L has period 1 in E,
/// so the integral over [k, k+1] is e^{−βk} times the first-period value).
pub fn laplace_of_dos(l: u32, beta: f64) -> Result<f64> {
    check_odd(l)?;
    check_beta(beta)?;
    let pref = dos_prefactor(l)?.to_f64();
    let one_period = numeric::integrate(
        &|e: f64| pref * (PI * e).sin().powi((l - 1) as i32) * (-beta * e).exp(),
        0.0,
        1.0,
        1e-12,
    );
    Ok(one_period / (1.0 - (-beta).exp()))
}

/// ∫₀¹ g_L(E) dE as an exact rational. The sin-power integral over one
/// period is the central-binomial value C(2m, m)/4^m with m = (L−1)/2, and
/// the prefactor cancels it to exactly 1 — the approximant is normalized to
/// one state per period.
pub fn dos_period_norm(l: u32) -> Result<Rational> {
    check_odd(l)?;
    let m = (l - 1) / 2;
    let wallis = Rational::binomial(2 * m, m) / Rational::from_int(4).pow(m as i32);
    Ok(dos_prefactor(l)? * wallis)
}
