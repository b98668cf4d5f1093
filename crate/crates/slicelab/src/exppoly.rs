//! Exact exponential-polynomial algebra.
//!
//! An [`ExpPoly`] is a finite sum Σᵢ pᵢ(β)·e^{λᵢβ} with rational polynomial
//! coefficients and rational rates. Every closed-form slice partition
//! function in this crate is one, so products, powers, β-derivatives, and
//! Taylor expansions can all be carried out without floating point. The
//! canonical form (rates strictly increasing, no zero polynomials, no
//! trailing zero coefficients) makes equality decidable, which the test
//! suite leans on heavily.

use crate::rational::Rational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use std::fmt;

/// One summand `poly(β)·e^{rate·β}`; `poly` is ascending in degree.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub poly: Vec<Rational>,
    pub rate: Rational,
}

/// Canonical sum of exponential-polynomial terms.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

fn trim_poly(poly: &mut Vec<Rational>) {
    while poly.last().is_some_and(Rational::is_zero) {
        poly.pop();
    }
}

/// Polynomial product, ascending coefficients.
fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

fn poly_add_into(acc: &mut Vec<Rational>, add: &[Rational]) {
    if acc.len() < add.len() {
        acc.resize(add.len(), Rational::zero());
    }
    for (a, b) in acc.iter_mut().zip(add) {
        *a = &*a + b;
    }
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        ExpPoly::term(vec![c], Rational::zero())
    }

    pub fn one() -> Self {
        ExpPoly::constant(Rational::one())
    }

    /// Single term `poly(β)·e^{rate·β}`.
    pub fn term(poly: Vec<Rational>, rate: Rational) -> Self {
        ExpPoly::from_terms(vec![Term { poly, rate }])
    }

    /// Canonicalize: merge equal rates, drop zero polynomials, sort by rate.
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|mut t| {
                trim_poly(&mut t.poly);
                t
            })
            .filter(|t| !t.poly.is_empty())
            .collect();
        terms.sort_by(|a, b| a.rate.cmp_value(&b.rate));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.rate == t.rate => {
                    poly_add_into(&mut last.poly, &t.poly);
                }
                _ => merged.push(t),
            }
        }
        merged.retain_mut(|t| {
            trim_poly(&mut t.poly);
            !t.poly.is_empty()
        });
        ExpPoly { terms: merged }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ExpPoly::from_terms(terms)
    }

    pub fn neg(&self) -> ExpPoly {
        self.scale(&Rational::from_int(-1))
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        self.add(&other.neg())
    }

    /// Pointwise product: rates add, polynomials convolve.
    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    poly: poly_mul(&a.poly, &b.poly),
                    rate: &a.rate + &b.rate,
                });
            }
        }
        ExpPoly::from_terms(terms)
    }

    /// `self^l` by binary exponentiation (`l = 0` gives 1).
    pub fn pow(&self, l: u32) -> ExpPoly {
        let mut result = ExpPoly::one();
        let mut base = self.clone();
        let mut l = l;
        while l > 0 {
            if l & 1 == 1 {
                result = result.mul(&base);
            }
            l >>= 1;
            if l > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiply every coefficient by a rational scalar.
    pub fn scale(&self, c: &Rational) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    poly: t.poly.iter().map(|p| p * c).collect(),
                    rate: t.rate.clone(),
                })
                .collect(),
        }
    }

    /// Multiply by `e^{delta·β}` (exact rate shift).
    pub fn shift_rate(&self, delta: &Rational) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    poly: t.poly.clone(),
                    rate: &t.rate + delta,
                })
                .collect(),
        }
    }

    /// Substitute β → factor·β (so `factor = 1/L` turns f(β) into f(β/L)).
    /// Coefficient of β^k picks up factor^k; rates scale by factor.
    pub fn scale_beta(&self, factor: &Rational) -> ExpPoly {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut f = Rational::one();
                let poly = t
                    .poly
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        if k > 0 {
                            f = &f * factor;
                        }
                        c * &f
                    })
                    .collect();
                Term {
                    poly,
                    rate: &t.rate * factor,
                }
            })
            .collect();
        ExpPoly::from_terms(terms)
    }

    /// Exact β-derivative: (p(β)e^{λβ})′ = (p′ + λp)e^{λβ}.
    pub fn ddbeta(&self) -> ExpPoly {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut poly = vec![Rational::zero(); t.poly.len() + 1];
                for (k, c) in t.poly.iter().enumerate() {
                    // λ·c_k β^k
                    poly[k] = &poly[k] + &(c * &t.rate);
                    // k·c_k β^{k−1}
                    if k > 0 {
                        poly[k - 1] = &poly[k - 1] + &(c * &Rational::from_int(k as i64));
                    }
                }
                Term {
                    poly,
                    rate: t.rate.clone(),
                }
            })
            .collect();
        ExpPoly::from_terms(terms)
    }

    /// Floating-point evaluation at β.
    pub fn eval(&self, beta: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let p = t
                    .poly
                    .iter()
                    .rev()
                    .fold(0.0, |acc, c| acc * beta + c.to_f64());
                p * (t.rate.to_f64() * beta).exp()
            })
            .sum()
    }

    /// Exact Taylor coefficients about β = 0, degrees 0..=order.
    pub fn taylor(&self, order: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); order + 1];
        for t in &self.terms {
            // rate powers λ^0..λ^order and inverse factorials, built once
            let mut rate_pow = vec![Rational::one()];
            for _ in 0..order {
                rate_pow.push(rate_pow.last().unwrap() * &t.rate);
            }
            for (j, out_j) in out.iter_mut().enumerate() {
                let kmax = j.min(t.poly.len().saturating_sub(1));
                for (k, c) in t.poly.iter().enumerate().take(kmax + 1) {
                    let m = (j - k) as u32;
                    *out_j =
                        &*out_j + &(c * &rate_pow[j - k] / Rational::factorial(m));
                }
            }
        }
        out
    }

    /// The term with the largest rate, as (rate, degree, leading coefficient).
    /// This is the β → ∞ dominant behavior; `None` for the zero sum.
    pub fn dominant(&self) -> Option<(&Rational, usize, &Rational)> {
        self.terms.last().map(|t| {
            let deg = t.poly.len() - 1;
            (&t.rate, deg, &t.poly[deg])
        })
    }
}

/// Exact β → ∞ limit of `num(β)/den(β)`.
///
/// Compares dominant rates, then dominant polynomial degrees. Returns
/// `Some(0)` when the denominator dominates, the ratio of leading
/// coefficients when they tie, and `None` when the ratio diverges (or the
/// denominator is identically zero).
pub fn ratio_limit_at_infinity(num: &ExpPoly, den: &ExpPoly) -> Option<Rational> {
    if num.is_zero() {
        return if den.is_zero() { None } else { Some(Rational::zero()) };
    }
    let (nr, nd, nc) = num.dominant()?;
    let (dr, dd, dc) = den.dominant()?;
    match nr.cmp_value(dr) {
        std::cmp::Ordering::Less => Some(Rational::zero()),
        std::cmp::Ordering::Greater => None,
        std::cmp::Ordering::Equal => match nd.cmp(&dd) {
            std::cmp::Ordering::Less => Some(Rational::zero()),
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal => Some(nc / dc),
        },
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "(")?;
            for (k, c) in t.poly.iter().enumerate() {
                if k > 0 {
                    write!(f, " + ")?;
                }
                if k == 0 {
                    write!(f, "{c}")?;
                } else if k == 1 {
                    write!(f, "{c}·β")?;
                } else {
                    write!(f, "{c}·β^{k}")?;
                }
            }
            write!(f, ")e^({}β)", t.rate)?;
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for ExpPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct RawTerm {
            poly: Vec<Rational>,
            rate: Rational,
        }
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<RawTerm>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.terms.iter().any(|t| t.poly.is_empty()) {
            return Err(D::Error::custom("term with empty polynomial"));
        }
        Ok(ExpPoly::from_terms(
            raw.terms
                .into_iter()
                .map(|t| Term {
                    poly: t.poly,
                    rate: t.rate,
                })
                .collect(),
        ))
    }
}
