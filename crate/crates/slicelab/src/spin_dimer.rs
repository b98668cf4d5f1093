//! Spin-½ dimer with exchange J and per-site self-coupling J′ (k_B = 1).
//!
//! The Hamiltonian −J′(Ŝ₁² + Ŝ₂²) − 2J·Ŝ₁·Ŝ₂ has a triplet at
//! E_t = −3J′/2 − J/2 and a singlet at E_s = −3J′/2 + 3J/2. The L-slice
//! approximant stays block diagonal in that basis: each slice multiplies the
//! triplet by a weight c₁ and the singlet by a weight c₀, both exact
//! exponential polynomials in β (slice width β/L baked in), so
//!
//! ```text
//! Z_L(β) = (3·c₁(β)^L + c₀(β)^L)·e^{βJ′/2}.
//! ```
//!
//! The singlet weight c₀ turns negative beyond a crossover β*, which is
//! where the slice approximant stops being a legitimate density matrix. For
//! odd L the negativity survives the L-th power and shows up in observables:
//! the Hamiltonian average Ũ_L dips below the triplet floor E_t — an
//! estimate outside the spectrum's convex hull — while even powers wash the
//! sign out. [`singlet_weight`] exposes c₀^L so callers can map the region.
//!
//! Everything is exact until a final `eval`; J = 0 is rejected (the weights
//! have J in denominators — a zero-exchange dimer is just two independent
//! single spins).

use crate::comb::{inverse_laplace, DeltaComb, DeltaTerm};
use crate::exppoly::{ratio_limit_at_infinity, ExpPoly, Term};
use crate::rational::Rational;
use crate::{Error, Result};

/// Exact (infinite-L) values at inverse temperature β.
pub struct DimerExact {
    pub z: f64,
    pub u: f64,
    pub dos: DeltaComb,
}

/// Spectrum as (triplet, singlet) = (−3J′/2 − J/2, −3J′/2 + 3J/2).
pub fn levels(j: &Rational, jprime: &Rational) -> (Rational, Rational) {
    let half = Rational::new(1, 2);
    let base = -&(&(jprime * &Rational::from_int(3)) * &half);
    let e_t = &base - &(j * &half);
    let e_s = &base + &(&(j * &Rational::from_int(3)) * &half);
    (e_t, e_s)
}

/// Exact partition function, energy, and density of states from the
/// two-level spectrum (triplet degeneracy 3).
pub fn exact(j: &Rational, jprime: &Rational, beta: f64) -> DimerExact {
    let (e_t, e_s) = levels(j, jprime);
    let (et, es) = (e_t.to_f64(), e_s.to_f64());
    let (wt, ws) = ((-beta * et).exp(), (-beta * es).exp());
    DimerExact {
        z: 3.0 * wt + ws,
        u: (3.0 * et * wt + es * ws) / (3.0 * wt + ws),
        dos: DeltaComb::from_terms(vec![
            DeltaTerm { center: e_t, order: 0, coeff: Rational::from_int(3) },
            DeltaTerm { center: e_s, order: 0, coeff: Rational::from_int(1) },
        ]),
    }
}

fn check_exchange(j: &Rational) -> Result<()> {
    if j.is_zero() {
        return Err(Error::ZeroExchange);
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) {
        return Err(Error::NonPositiveBeta(beta));
    }
    Ok(())
}

/// Per-slice triplet and singlet weights (c₁, c₀) as exponential
/// polynomials in β with the slice width β/L already substituted:
///
/// ```text
/// c₁ = (5/6 − J′²/6J² + β(J+J′)²/3LJ)·e^{βJ/2L}
///    + (1/6 + J′²/6J² − β(J−J′)²/6LJ)·e^{−βJ/2L},
/// c₀ = (−1/2 + J′²/2J²)·e^{βJ/2L}
///    + (3/2 − J′²/2J² − β(J−J′)²/2LJ)·e^{−βJ/2L}.
/// ```
///
/// Both equal 1 at β = 0. Requires J ≠ 0 and L ≥ 1.
pub fn slice_brackets(j: &Rational, jprime: &Rational, l: u32) -> Result<(ExpPoly, ExpPoly)> {
    check_exchange(j)?;
    assert!(l >= 1, "slice count must be at least 1");
    let li = Rational::from_int(l as i64);
    let q = (jprime / j).pow(2);
    let sum2 = (j + jprime).pow(2);
    let diff2 = (j - jprime).pow(2);
    let rate = j / &(&li * &Rational::from_int(2));
    let c1 = ExpPoly::from_terms(vec![
        Term {
            poly: vec![
                Rational::new(5, 6) - &q / &Rational::from_int(6),
                &sum2 / &(&(&li * j) * &Rational::from_int(3)),
            ],
            rate: rate.clone(),
        },
        Term {
            poly: vec![
                Rational::new(1, 6) + &q / &Rational::from_int(6),
                -&(&diff2 / &(&(&li * j) * &Rational::from_int(6))),
            ],
            rate: -&rate,
        },
    ]);
    let c0 = ExpPoly::from_terms(vec![
        Term {
            poly: vec![Rational::new(-1, 2) + &q / &Rational::from_int(2)],
            rate: rate.clone(),
        },
        Term {
            poly: vec![
                Rational::new(3, 2) - &q / &Rational::from_int(2),
                -&(&diff2 / &(&(&li * j) * &Rational::from_int(2))),
            ],
            rate: -&rate,
        },
    ]);
    Ok((c1, c0))
}

/// L-slice partition function Z_L(β) = (3c₁^L + c₀^L)·e^{βJ′/2}, exact.
pub fn zl_exppoly(j: &Rational, jprime: &Rational, l: u32) -> Result<ExpPoly> {
    let (c1, c0) = slice_brackets(j, jprime, l)?;
    let shift = jprime / &Rational::from_int(2);
    Ok(c1
        .pow(l)
        .scale(&Rational::from_int(3))
        .add(&c0.pow(l))
        .shift_rate(&shift))
}

/// Exact Taylor coefficients of Z_L about β = 0, degrees 0..=order.
pub fn series(j: &Rational, jprime: &Rational, l: u32, order: usize) -> Result<Vec<Rational>> {
    Ok(zl_exppoly(j, jprime, l)?.taylor(order))
}

/// L-slice partition function as a float, evaluated in the factored form
/// (3c₁^L + c₀^L)·e^{βJ′/2}.
///
/// The expanded [`zl_exppoly`] is the exact object, but its coefficients are
/// binomially amplified with both signs, so evaluating the expansion in
/// floating point collapses near L ≈ 50. The factored form evaluates the two
/// small brackets first and only then takes powers, which is stable at any L.
pub fn zl(j: &Rational, jprime: &Rational, l: u32, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let (c1, c0) = slice_brackets(j, jprime, l)?;
    let n = 3.0 * c1.eval(beta).powi(l as i32) + c0.eval(beta).powi(l as i32);
    Ok(n * (beta * jprime.to_f64() / 2.0).exp())
}

/// N = 3c₁^L + c₀^L and its first two β-derivatives at one β, from the
/// bracket values — the shared core of [`ul`] and [`heat_capacity`].
fn bracket_log_parts(
    j: &Rational,
    jprime: &Rational,
    l: u32,
    beta: f64,
) -> Result<(f64, f64, f64)> {
    let (c1, c0) = slice_brackets(j, jprime, l)?;
    let lf = l as f64;
    let (mut n, mut np, mut npp) = (0.0, 0.0, 0.0);
    for (weight, c) in [(3.0, c1), (1.0, c0)] {
        let d1 = c.ddbeta();
        let d2 = d1.ddbeta();
        let (v, vp, vpp) = (c.eval(beta), d1.eval(beta), d2.eval(beta));
        n += weight * v.powi(l as i32);
        np += weight * lf * v.powi(l as i32 - 1) * vp;
        npp += weight * lf * v.powi(l as i32 - 1) * vpp;
        if l >= 2 {
            npp += weight * lf * (lf - 1.0) * v.powi(l as i32 - 2) * vp * vp;
        }
    }
    Ok((n, np, npp))
}

/// Log-derivative energy U_L(β) = −Z_L′(β)/Z_L(β), via the factored form:
/// −(3c₁^{L−1}c₁′ + c₀^{L−1}c₀′)·L/(3c₁^L + c₀^L) − J′/2.
pub fn ul(j: &Rational, jprime: &Rational, l: u32, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let (n, np, _) = bracket_log_parts(j, jprime, l, beta)?;
    Ok(-np / n - jprime.to_f64() / 2.0)
}

/// Exact T → 0 limit of U_L from the dominant rate of Z_L: −|J|/2 at
/// J′ = 0, and generically |J|/2 + J′/2 below zero (the self-coupling
/// contributes its sliced saddle value −J′/4 per site, not −3J′/4).
pub fn ul_at_zero_temperature(j: &Rational, jprime: &Rational, l: u32) -> Result<Rational> {
    let z = zl_exppoly(j, jprime, l)?;
    Ok(ratio_limit_at_infinity(&z.ddbeta().neg(), &z)
        .expect("partition function has a dominant term"))
}

/// Hamiltonian-average energy Ũ_L = (3w₁E_t + w₀E_s)/(3w₁ + w₀) with
/// w₁ = c₁(β)^L, w₀ = c₀(β)^L. Where w₀ < 0 (odd L past the crossover)
/// this drops below E_t, outside the spectrum.
pub fn utilde(j: &Rational, jprime: &Rational, l: u32, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let (c1, c0) = slice_brackets(j, jprime, l)?;
    let (e_t, e_s) = levels(j, jprime);
    let w1 = c1.eval(beta).powi(l as i32);
    let w0 = c0.eval(beta).powi(l as i32);
    Ok((3.0 * w1 * e_t.to_f64() + w0 * e_s.to_f64()) / (3.0 * w1 + w0))
}

/// Exact T → 0 limit of Ũ_L, as a ratio limit of the two exponential
/// polynomials 3c₁^L·E_t + c₀^L·E_s and 3c₁^L + c₀^L.
pub fn utilde_at_zero_temperature(
    j: &Rational,
    jprime: &Rational,
    l: u32,
) -> Result<Rational> {
    let (c1, c0) = slice_brackets(j, jprime, l)?;
    let (e_t, e_s) = levels(j, jprime);
    let w1 = c1.pow(l);
    let w0 = c0.pow(l);
    let num = w1.scale(&(&Rational::from_int(3) * &e_t)).add(&w0.scale(&e_s));
    let den = w1.scale(&Rational::from_int(3)).add(&w0);
    ratio_limit_at_infinity(&num, &den).ok_or_else(|| {
        Error::InvalidModel("hamiltonian-average estimator diverges as T → 0".into())
    })
}

/// Heat capacity C_L = −β²·∂U_L/∂β = β²·(ln Z_L)″, from the same factored
/// derivatives as [`ul`] (the linear e^{βJ′/2} shift drops out).
pub fn heat_capacity(j: &Rational, jprime: &Rational, l: u32, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let (n, np, npp) = bracket_log_parts(j, jprime, l, beta)?;
    Ok(beta * beta * (npp / n - (np / n).powi(2)))
}

/// Exact T → 0 limit of C_L: minus the polynomial degree of Z_L's dominant
/// term (−L whenever the dominant bracket keeps its linear part).
pub fn heat_capacity_at_zero_temperature(
    j: &Rational,
    jprime: &Rational,
    l: u32,
) -> Result<Rational> {
    let z = zl_exppoly(j, jprime, l)?;
    let (_, degree, _) = z.dominant().expect("partition function is nonzero");
    Ok(Rational::from_int(-(degree as i64)))
}

/// Density of states of the L-approximant: exact inverse Laplace transform
/// of Z_L. For L = 1, J = 1, J′ = 0 it is
/// 2δ(E+½) + δ′(E+½) + 2δ(E−½) − δ′(E−½).
pub fn dos(j: &Rational, jprime: &Rational, l: u32) -> Result<DeltaComb> {
    Ok(inverse_laplace(&zl_exppoly(j, jprime, l)?))
}

/// Signed singlet weight w₀ = c₀(β)^L. Negative exactly where the
/// approximant assigns the singlet a negative probability; for even L the
/// power is nonnegative everywhere.
pub fn singlet_weight(j: &Rational, jprime: &Rational, l: u32, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let (_, c0) = slice_brackets(j, jprime, l)?;
    Ok(c0.eval(beta).powi(l as i32))
}

/// Temperatures in `(0, beta_max]` where the singlet weight `c0(β)^L` is
/// negative, for the pure exchange dimer (`J > 0`, no self-coupling).
///
/// For even `L` the weight is a square and the answer is always `None`.
/// For odd `L` the singlet bracket is strictly decreasing in β with a single
/// zero β*, so the region — when it intersects the requested range at all —
/// is the interval `(β*, beta_max]`; β* is located by a sign scan followed
/// by bisection to 1e−9.
pub fn negative_weight_region(
    j: &Rational,
    l: u32,
    beta_max: f64,
) -> Result<Option<(f64, f64)>> {
    if !j.is_positive() {
        return Err(Error::InvalidModel(
            "the singlet-weight analysis requires J > 0".into(),
        ));
    }
    if !(beta_max > 0.0) || !beta_max.is_finite() {
        return Err(Error::NonPositiveBeta(beta_max));
    }
    if l % 2 == 0 {
        return Ok(None);
    }
    let (_, c0) = slice_brackets(j, &Rational::zero(), l)?;
    let f = |beta: f64| c0.eval(beta);
    // scan for the first sign change; c0(0) = 1 > 0
    let steps = 4096;
    let mut lo = 0.0_f64;
    for i in 1..=steps {
        let hi = beta_max * i as f64 / steps as f64;
        if f(hi) < 0.0 {
            let root = crate::numeric::bisect(&f, lo, hi, 1e-9);
            return Ok(Some((root, beta_max)));
        }
        lo = hi;
    }
    Ok(None)
}
