//! Temperature sweeps: tabulated (β, Z, U, Ũ, C) curves plus symbolic T = 0
//! limits, shared by the command-line front end and the report tooling.
//!
//! Sliced spin curves go through each module's factored evaluators (one-slice
//! polynomial plus powers), which stay numerically exact at any slice count —
//! unlike evaluating the expanded product polynomial, which cancels
//! catastrophically at large L. The T = 0 block never extrapolates from
//! large β — it comes from the dominant-rate limits, which are exact.

use crate::model::{CurveSample, ModelSpec, ThermoCurve, ZeroTemperatureLimits};
use crate::{sho, spin_dimer, spin_single, Error, Result};

/// Spacing of a β grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl std::str::FromStr for Spacing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(format!("unknown spacing '{other}' (expected linear or log)")),
        }
    }
}

/// β grid with exact endpoints: `steps` points from `min` to `max`,
/// linearly or geometrically spaced.
pub fn beta_grid(min: f64, max: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(min > 0.0) || !min.is_finite() {
        return Err(Error::NonPositiveBeta(min));
    }
    if !(max > min) || !max.is_finite() {
        return Err(Error::DegenerateGrid(format!(
            "beta range needs max > min > 0, got [{min}, {max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::DegenerateGrid(format!(
            "a beta grid needs at least 2 steps, got {steps}"
        )));
    }
    let n = steps - 1;
    let mut grid: Vec<f64> = (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            match spacing {
                Spacing::Linear => min + (max - min) * t,
                Spacing::Log => min * (max / min).powf(t),
            }
        })
        .collect();
    grid[0] = min;
    grid[n] = max;
    Ok(grid)
}

/// Tabulate the sliced model over a β grid.
///
/// `utilde` is filled for the spin models (a constant for the single spin,
/// the projector-weighted average for the dimer) and absent for the
/// oscillator, where no such estimator is defined.
pub fn sliced_curve(model: &ModelSpec, betas: &[f64]) -> Result<ThermoCurve> {
    model.validate()?;
    let mut samples = Vec::with_capacity(betas.len());
    match model {
        ModelSpec::Sho { l } => {
            for &beta in betas {
                samples.push(CurveSample {
                    beta,
                    t: 1.0 / beta,
                    z: sho::z(*l, beta)?,
                    u: sho::u(*l, beta)?,
                    utilde: None,
                    c: sho::heat_capacity(*l, beta)?,
                });
            }
        }
        ModelSpec::SingleSpin { s, j, l } => {
            let utilde = spin_single::utilde(*s, j).to_f64();
            for &beta in betas {
                samples.push(CurveSample {
                    beta,
                    t: 1.0 / beta,
                    z: spin_single::zl(*s, j, *l, beta)?,
                    u: spin_single::ul(*s, j, *l, beta)?,
                    utilde: Some(utilde),
                    c: spin_single::heat_capacity(*s, j, *l, beta)?,
                });
            }
        }
        ModelSpec::Dimer { j, jprime, l } => {
            for &beta in betas {
                samples.push(CurveSample {
                    beta,
                    t: 1.0 / beta,
                    z: spin_dimer::zl(j, jprime, *l, beta)?,
                    u: spin_dimer::ul(j, jprime, *l, beta)?,
                    utilde: Some(spin_dimer::utilde(j, jprime, *l, beta)?),
                    c: spin_dimer::heat_capacity(j, jprime, *l, beta)?,
                });
            }
        }
    }
    Ok(ThermoCurve { model: model.clone(), samples })
}

/// Tabulate the unsliced reference model over a β grid.
///
/// For the spin models this is the two- or few-level Boltzmann sum; for the
/// oscillator the closed geometric-series forms. `utilde` is left empty —
/// without slicing the two energy estimators coincide with `u`.
pub fn exact_curve(model: &ModelSpec, betas: &[f64]) -> Result<ThermoCurve> {
    model.validate()?;
    let mut samples = Vec::with_capacity(betas.len());
    if let ModelSpec::Sho { .. } = model {
        for &beta in betas {
            samples.push(CurveSample {
                beta,
                t: 1.0 / beta,
                z: sho::exact_z(beta)?,
                u: sho::exact_u(beta)?,
                utilde: None,
                c: sho::exact_heat_capacity(beta)?,
            });
        }
        return Ok(ThermoCurve { model: model.clone(), samples });
    }

    // few-level Boltzmann sums; energies shifted by the ground state so the
    // ratios stay finite at large β. The single spin is one degenerate level:
    // the coupling multiplies the Casimir, so every |s,m⟩ sits at −J·s(s+1).
    let levels: Vec<(f64, f64)> = match model {
        ModelSpec::SingleSpin { s, j, .. } => {
            vec![(-(j * &s.casimir()).to_f64(), s.multiplicity() as f64)]
        }
        ModelSpec::Dimer { j, jprime, .. } => {
            let (e_t, e_s) = spin_dimer::levels(j, jprime);
            vec![(e_t.to_f64(), 3.0), (e_s.to_f64(), 1.0)]
        }
        ModelSpec::Sho { .. } => unreachable!(),
    };
    let e0 = levels.iter().map(|(e, _)| *e).fold(f64::INFINITY, f64::min);
    for &beta in betas {
        check_beta(beta)?;
        let (mut zs, mut es, mut e2s) = (0.0, 0.0, 0.0);
        for &(e, g) in &levels {
            let w = g * (-beta * (e - e0)).exp();
            zs += w;
            es += e * w;
            e2s += e * e * w;
        }
        let u = es / zs;
        samples.push(CurveSample {
            beta,
            t: 1.0 / beta,
            z: zs * (-beta * e0).exp(),
            u,
            utilde: None,
            c: beta * beta * (e2s / zs - u * u),
        });
    }
    Ok(ThermoCurve { model: model.clone(), samples })
}

/// T = 0 values of the sliced model, from symbolic dominant-rate limits.
///
/// The oscillator approximant loses its zero-point energy (U → 0) but keeps
/// one classical unit of heat capacity per retained frequency (C → L). The
/// spin models produce exact rationals, converted here for reporting.
pub fn zero_temperature_limits(model: &ModelSpec) -> Result<ZeroTemperatureLimits> {
    model.validate()?;
    match model {
        ModelSpec::Sho { l } => Ok(ZeroTemperatureLimits {
            u: 0.0,
            utilde: None,
            c: *l as f64,
        }),
        ModelSpec::SingleSpin { s, j, l } => Ok(ZeroTemperatureLimits {
            u: spin_single::ul_at_zero_temperature(*s, j, *l).to_f64(),
            utilde: Some(spin_single::utilde(*s, j).to_f64()),
            c: spin_single::heat_capacity_at_zero_temperature(*s, j, *l).to_f64(),
        }),
        ModelSpec::Dimer { j, jprime, l } => Ok(ZeroTemperatureLimits {
            u: spin_dimer::ul_at_zero_temperature(j, jprime, *l)?.to_f64(),
            utilde: Some(spin_dimer::utilde_at_zero_temperature(j, jprime, *l)?.to_f64()),
            c: spin_dimer::heat_capacity_at_zero_temperature(j, jprime, *l)?.to_f64(),
        }),
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::NonPositiveBeta(beta));
    }
    Ok(())
}
