//! Reaching non-positive-definite dimer couplings by extrapolation.
//!
//! The field integral needs every coupling eigenvalue positive, i.e.
//! J′ > |J| for the dimer. Physical parameter sets often sit outside that
//! region (J′ = 0 in the extreme), but `Z_L` is available *inside* it, so
//! one can evaluate on a grid of safely large J′ and extrapolate back.
//!
//! Raw `Z_L(J′)` grows like e^{βJ′/2} and defeats low-degree polynomial
//! extrapolation, so we divide that self-interaction shift out first:
//! `Z_L(J′)·e^{−βJ′/2}` is exactly a polynomial in J′ of degree 2L (each
//! slice bracket contributes a quadratic factor per power of L and the
//! shift is the only non-polynomial dependence). A least-squares fit of
//! the reduced values therefore becomes *exact* once the requested degree
//! reaches 2L, and the value at J′ = 0 — where the shift factor is 1 — is
//! the partition function itself.

use crate::model::ModelSpec;
use crate::numeric::polyfit;
use crate::rational::Rational;
use crate::spin_dimer;
use crate::{Error, Result};

/// Extrapolate the dimer partition function to J′ = 0.
///
/// Evaluates `Z_L` at the given grid of self-couplings (each of which must
/// exceed |J|, so the corresponding field integrals are positive definite),
/// fits a polynomial of the requested degree to the shift-reduced values,
/// and returns the fit's value at J′ = 0. The exchange coupling J is taken
/// from `model`; its own J′ and slice count are ignored in favor of the
/// explicit arguments.
pub fn extrapolate_jprime(
    model: &ModelSpec,
    beta: f64,
    l: u32,
    jprime_grid: &[Rational],
    degree: usize,
) -> Result<f64> {
    let j = match model {
        ModelSpec::Dimer { j, .. } => j.clone(),
        _ => {
            return Err(Error::InvalidModel(
                "self-coupling extrapolation applies to the dimer only".into(),
            ))
        }
    };
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::NonPositiveBeta(beta));
    }
    if jprime_grid.is_empty() || degree >= jprime_grid.len() {
        return Err(Error::DegenerateGrid(format!(
            "a degree-{degree} fit needs more than {degree} grid points, got {}",
            jprime_grid.len()
        )));
    }
    let jabs = j.abs();
    for g in jprime_grid {
        if g.cmp_value(&jabs) != std::cmp::Ordering::Greater {
            return Err(Error::DegenerateGrid(format!(
                "grid point {g} must exceed |J| = {jabs} to keep the coupling \
                 positive definite"
            )));
        }
    }
    for (i, a) in jprime_grid.iter().enumerate() {
        for b in &jprime_grid[i + 1..] {
            if a.cmp_value(b) == std::cmp::Ordering::Equal {
                return Err(Error::DegenerateGrid(format!("duplicate grid point {a}")));
            }
        }
    }

    let xs: Vec<f64> = jprime_grid.iter().map(Rational::to_f64).collect();
    let mut ys = Vec::with_capacity(jprime_grid.len());
    for g in jprime_grid {
        let z = spin_dimer::zl_exppoly(&j, g, l)?.eval(beta);
        ys.push(z * (-beta * g.to_f64() / 2.0).exp());
    }
    let coeffs = polyfit(&xs, &ys, degree).ok_or_else(|| {
        Error::DegenerateGrid("polynomial fit is singular on this grid".into())
    })?;
    Ok(coeffs[0])
}
