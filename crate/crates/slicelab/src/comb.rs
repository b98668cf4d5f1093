//! Delta combs: distributions Σᵢ cᵢ·δ^{(kᵢ)}(E − Eᵢ).
//!
//! These are the exact inverse Laplace images of [`ExpPoly`] partition
//! functions, i.e. the densities of states of the spin models. The bijection
//! is term-by-term: c·β^k·e^{λβ} ↔ c·δ^{(k)}(E + λ). Pairing against
//! polynomial test functions and taking moments are exact rational
//! operations.

use crate::exppoly::{ExpPoly, Term};
use crate::rational::Rational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

/// One comb line: `coeff·δ^{(order)}(E − center)`.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct DeltaTerm {
    pub center: Rational,
    pub order: u32,
    pub coeff: Rational,
}

/// Canonical delta comb: terms sorted by (center, order), coefficients
/// nonzero, (center, order) pairs unique.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct DeltaComb {
    terms: Vec<DeltaTerm>,
}

impl DeltaComb {
    pub fn empty() -> Self {
        DeltaComb { terms: Vec::new() }
    }

    /// Canonicalize: merge duplicate (center, order) lines, drop zeros, sort.
    pub fn from_terms(terms: Vec<DeltaTerm>) -> Self {
        let mut terms = terms;
        terms.sort_by(|a, b| {
            a.center
                .cmp_value(&b.center)
                .then_with(|| a.order.cmp(&b.order))
        });
        let mut merged: Vec<DeltaTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.center == t.center && last.order == t.order => {
                    last.coeff = &last.coeff + &t.coeff;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        DeltaComb { terms: merged }
    }

    pub fn terms(&self) -> &[DeltaTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct singularity locations, ascending.
    pub fn centers(&self) -> Vec<&Rational> {
        let mut out: Vec<&Rational> = Vec::new();
        for t in &self.terms {
            if out.last() != Some(&&t.center) {
                out.push(&t.center);
            }
        }
        out
    }

    /// Exact pairing ∫ f(E)·comb(E) dE for a polynomial test function
    /// (ascending coefficients): Σᵢ cᵢ·(−1)^{kᵢ}·f^{(kᵢ)}(Eᵢ).
    pub fn pair(&self, poly: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for t in &self.terms {
            let d = poly_derivative(poly, t.order);
            let val = poly_eval(&d, &t.center);
            let sign = if t.order % 2 == 0 {
                Rational::one()
            } else {
                Rational::from_int(-1)
            };
            total = total + &t.coeff * sign * val;
        }
        total
    }

    /// k-th moment: pairing against E^k.
    pub fn moment(&self, k: u32) -> Rational {
        let mut poly = vec![Rational::zero(); k as usize + 1];
        poly[k as usize] = Rational::one();
        self.pair(&poly)
    }
}

fn poly_derivative(poly: &[Rational], order: u32) -> Vec<Rational> {
    let mut p = poly.to_vec();
    for _ in 0..order {
        if p.len() <= 1 {
            return Vec::new();
        }
        p = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Rational::from_int(k as i64))
            .collect();
    }
    p
}

fn poly_eval(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Exact inverse Laplace transform: c·β^k·e^{λβ} → c·δ^{(k)}(E + λ).
pub fn inverse_laplace(z: &ExpPoly) -> DeltaComb {
    let mut terms = Vec::new();
    for t in z.terms() {
        for (k, c) in t.poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(DeltaTerm {
                center: -&t.rate,
                order: k as u32,
                coeff: c.clone(),
            });
        }
    }
    DeltaComb::from_terms(terms)
}

/// Exact Laplace transform, inverse of [`inverse_laplace`]:
/// c·δ^{(k)}(E − E₀) → c·β^k·e^{−E₀β}.
pub fn laplace(comb: &DeltaComb) -> ExpPoly {
    let terms = comb
        .terms()
        .iter()
        .map(|t| {
            let mut poly = vec![Rational::zero(); t.order as usize + 1];
            poly[t.order as usize] = t.coeff.clone();
            Term {
                poly,
                rate: -&t.center,
            }
        })
        .collect();
    ExpPoly::from_terms(terms)
}

impl std::fmt::Debug for DeltaComb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·δ", t.coeff)?;
            if t.order > 0 {
                write!(f, "^({})", t.order)?;
            }
            write!(f, "(E − ({}))", t.center)?;
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for DeltaComb {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<RawTerm>,
        }
        #[derive(Deserialize)]
        struct RawTerm {
            center: Rational,
            order: u32,
            coeff: Rational,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.terms.iter().any(|t| t.coeff.is_zero()) {
            return Err(D::Error::custom("comb term with zero coefficient"));
        }
        Ok(DeltaComb::from_terms(
            raw.terms
                .into_iter()
                .map(|t| DeltaTerm {
                    center: t.center,
                    order: t.order,
                    coeff: t.coeff,
                })
                .collect(),
        ))
    }
}
