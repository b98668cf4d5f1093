//! Single spin s with a quadratic self-coupling −J·Ŝ² (k_B = 1).
//!
//! The Hamiltonian is a multiple of the identity on the spin multiplet, so
//! the exact thermodynamics is trivial — Z = (2s+1)e^{βJs(s+1)}, U = −Js(s+1)
//! at every temperature. The L-slice approximant is not trivial: the
//! static (L = 1) density matrix picks up a polynomial prefactor from the
//! Gaussian auxiliary-field integral,
//!
//! ```text
//! z₁(β) = Σ_{m=−s}^{s} (1 + 2m²βJ)·e^{m²βJ},
//! ```
//!
//! and the L-slice partition function is the rescaled power
//! Z_L(β) = (2s+1)·[z₁(β/L)/(2s+1)]^L. Everything here is an exact
//! [`ExpPoly`], so densities of states, series, and identities are checked
//! in rational arithmetic.
//!
//! Two energy estimators appear: U_L = −∂_β ln Z_L (log-derivative of the
//! approximant) and Ũ_L = ⟨H⟩ under the approximant density matrix, which
//! for this model is the exact −Js(s+1) at every β and L. U_L is anomalous:
//! it satisfies U_L(β) = U₁(β/L) exactly, decreases toward −Js² as T → 0,
//! and makes the heat capacity negative at all temperatures.

use crate::comb::{inverse_laplace, DeltaComb, DeltaTerm};
use crate::exppoly::{ratio_limit_at_infinity, ExpPoly, Term};
use crate::model::Spin;
use crate::rational::Rational;
use crate::{Error, Result};

/// Exact (infinite-L) values at inverse temperature β.
pub struct SpinExact {
    pub z: f64,
    pub u: f64,
    pub dos: DeltaComb,
}

/// Exact partition function, energy, and density of states: the spectrum is
/// the single level −Js(s+1) with multiplicity 2s+1.
pub fn exact(s: Spin, j: &Rational, beta: f64) -> SpinExact {
    let e0 = -&(j * &s.casimir());
    let mult = Rational::from_int(s.multiplicity() as i64);
    SpinExact {
        z: mult.to_f64() * (-e0.to_f64() * beta).exp(),
        u: e0.to_f64(),
        dos: DeltaComb::from_terms(vec![DeltaTerm {
            center: e0,
            order: 0,
            coeff: mult,
        }]),
    }
}

/// Static (one-slice) partition function z₁(β) = Σ_m (1 + 2m²βJ)e^{m²βJ}
/// as an exact exponential polynomial. Levels with equal m² merge.
pub fn z1_exppoly(s: Spin, j: &Rational) -> ExpPoly {
    let terms = s
        .levels()
        .iter()
        .map(|m| {
            let m2j = &(m * m) * j;
            Term {
                poly: vec![Rational::one(), &m2j + &m2j],
                rate: m2j,
            }
        })
        .collect();
    ExpPoly::from_terms(terms)
}

/// L-slice partition function Z_L(β) = (2s+1)·[z₁(β/L)/(2s+1)]^L, exact.
pub fn zl_exppoly(s: Spin, j: &Rational, l: u32) -> ExpPoly {
    assert!(l >= 1, "slice count must be at least 1");
    let mult = Rational::from_int(s.multiplicity() as i64);
    let per_slice = z1_exppoly(s, j).scale_beta(&Rational::from_int(l as i64).recip());
    per_slice.pow(l).scale(&mult.pow(1 - l as i32))
}

/// L-slice partition function as a float, evaluated in the factored form
/// (2s+1)·[z₁(β/L)/(2s+1)]^L.
///
/// Numerically this is the only safe route at large L: the expanded
/// [`zl_exppoly`] carries binomially amplified coefficients of both signs,
/// and evaluating it in floating point loses all significance near L ≈ 50,
/// while the factored form costs one small evaluation and a power.
pub fn zl(s: Spin, j: &Rational, l: u32, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::NonPositiveBeta(beta));
    }
    assert!(l >= 1, "slice count must be at least 1");
    let mult = s.multiplicity() as f64;
    let z1 = z1_exppoly(s, j).eval(beta / l as f64);
    Ok(mult * (z1 / mult).powi(l as i32))
}

/// Log-derivative energy U_L(β) = −Z_L′(β)/Z_L(β).
///
/// Computed through the exact rescaling identity U_L(β) = U₁(β/L), which
/// needs only the one-slice polynomial and stays numerically exact at any L.
pub fn ul(s: Spin, j: &Rational, l: u32, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::NonPositiveBeta(beta));
    }
    let z1 = z1_exppoly(s, j);
    let b = beta / l as f64;
    Ok(-z1.ddbeta().eval(b) / z1.eval(b))
}

/// Exact T → 0 limit of U_L, from the dominant rate of Z_L (never from a
/// large-β evaluation). For J > 0 this is the saddle-point value −Js².
pub fn ul_at_zero_temperature(s: Spin, j: &Rational, l: u32) -> Rational {
    let z = zl_exppoly(s, j, l);
    ratio_limit_at_infinity(&z.ddbeta().neg(), &z)
        .expect("partition function has a dominant term")
}

/// Heat capacity C_L = −β²·∂U_L/∂β = β²(Z″Z − Z′²)/Z², exact derivatives.
///
/// The rescaling identity gives C_L(β) = L·C₁(β/L), so only the one-slice
/// polynomial and its derivatives are ever evaluated.
pub fn heat_capacity(s: Spin, j: &Rational, l: u32, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::NonPositiveBeta(beta));
    }
    let z = z1_exppoly(s, j);
    let z1 = z.ddbeta();
    let z2 = z1.ddbeta();
    let b = beta / l as f64;
    let zb = z.eval(b);
    Ok(l as f64 * b * b * (z2.eval(b) * zb - z1.eval(b).powi(2)) / (zb * zb))
}

/// Exact T → 0 limit of C_L: minus the polynomial degree of Z_L's dominant
/// term (U_L approaches its limit like −d/β, so −β²·∂U/∂β → −d).
pub fn heat_capacity_at_zero_temperature(s: Spin, j: &Rational, l: u32) -> Rational {
    let z = zl_exppoly(s, j, l);
    let (_, degree, _) = z.dominant().expect("partition function is nonzero");
    Rational::from_int(-(degree as i64))
}

/// Hamiltonian-average energy Ũ_L: exactly −Js(s+1), independent of β and L
/// (the Hamiltonian is constant on the multiplet).
pub fn utilde(s: Spin, j: &Rational) -> Rational {
    -&(j * &s.casimir())
}

/// Density of states of the L-approximant: the exact delta comb obtained by
/// inverse Laplace transform of Z_L. For s = ½ it is
/// 2·(1 + (J/2L)·d/dE)^L δ(E + J/4) expanded binomially.
pub fn dos(s: Spin, j: &Rational, l: u32) -> DeltaComb {
    inverse_laplace(&zl_exppoly(s, j, l))
}

/// Check the exact rescaling identity U_L(β) = U₁(β/L) in rational
/// arithmetic, by cross-multiplying the two log-derivative ratios:
/// Z_L′(β)·Z₁(β/L) must equal Z₁′(β/L)·Z_L(β) as exponential polynomials.
pub fn ul_rescaling_identity_holds(s: Spin, j: &Rational, l: u32) -> bool {
    let inv_l = Rational::from_int(l as i64).recip();
    let zl = zl_exppoly(s, j, l);
    let z1 = z1_exppoly(s, j);
    let z1_scaled = z1.scale_beta(&inv_l);
    let dz1_scaled = z1.ddbeta().scale_beta(&inv_l);
    zl.ddbeta().mul(&z1_scaled) == dz1_scaled.mul(&zl)
}
