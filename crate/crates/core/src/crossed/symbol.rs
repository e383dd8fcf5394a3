use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MERGE_TOL: f64 = 1e-12;
const DROP_TOL: f64 = 1e-14;

/// A function on `[0,1]` of the form `c₀ + Σ cₖ x^{aₖ}` with `Re aₖ > 0`.
///
/// Terms are kept sorted by exponent with near-equal exponents merged, so two
/// symbols built along different routes compare term by term.
#[derive(Clone, PartialEq, Default)]
pub struct SymbolFunction {
    constant: Complex64,
    terms: Vec<(Complex64, Complex64)>,
}

impl fmt::Debug for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.constant != Complex64::new(0.0, 0.0) || self.terms.is_empty() {
            parts.push(format!("({})", self.constant));
        }
        for (c, a) in &self.terms {
            parts.push(format!("({c})·x^({a})"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl SymbolFunction {
    pub fn new(constant: Complex64, terms: Vec<(Complex64, Complex64)>) -> Result<Self> {
        if !(constant.re.is_finite() && constant.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite constant".into()));
        }
        for (c, a) in &terms {
            if !(c.re.is_finite() && c.im.is_finite() && a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::InvalidArgument("non-finite term".into()));
            }
            if a.re <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "exponent {a} must have positive real part"
                )));
            }
        }
        Ok(Self::from_parts(constant, terms))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant_fn(c: Complex64) -> Self {
        Self { constant: c, terms: Vec::new() }
    }

    /// `c·x^a`.
    pub fn monomial(c: Complex64, a: Complex64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), vec![(c, a)])
    }

    pub(crate) fn from_parts(constant: Complex64, terms: Vec<(Complex64, Complex64)>) -> Self {
        Self { constant, terms: canonical_terms(terms, MERGE_TOL) }
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    /// `(coefficient, exponent)` pairs.
    pub fn terms(&self) -> &[(Complex64, Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.constant == Complex64::new(0.0, 0.0) && self.terms.is_empty()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if x <= 0.0 {
            return self.constant;
        }
        self.eval_ln(x.ln())
    }

    /// `f(x)` given `ln x`; `ln x = -∞` stands for `x = 0`.
    pub fn eval_ln(&self, ln_x: f64) -> Complex64 {
        self.terms.iter().fold(self.constant, |acc, (c, a)| {
            // below this the term underflows to 0
            if a.re * ln_x < -745.0 {
                acc
            } else {
                acc + c * (a * ln_x).exp()
            }
        })
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity((self.terms.len() + 1) * (other.terms.len() + 1));
        for (c, a) in &other.terms {
            terms.push((self.constant * c, *a));
        }
        for (c, a) in &self.terms {
            terms.push((c * other.constant, *a));
            for (d, b) in &other.terms {
                terms.push((c * d, a + b));
            }
        }
        Self::from_parts(self.constant * other.constant, terms)
    }

    pub fn conjugate(&self) -> Self {
        Self::from_parts(
            self.constant.conj(),
            self.terms.iter().map(|(c, a)| (c.conj(), a.conj())).collect(),
        )
    }

    /// `x ↦ f(x^s)`.
    pub fn rescale(&self, s: f64) -> Self {
        Self::from_parts(self.constant, self.terms.iter().map(|(c, a)| (*c, a * s)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::from_parts(self.constant + other.constant, terms)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::from_parts(self.constant * k, self.terms.iter().map(|(c, a)| (c * k, *a)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `|Δc₀| + Σ |Δcₖ|` after matching exponents that agree within `tol`.
    pub fn distance(&self, other: &Self, tol: f64) -> f64 {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(c, a)| (-c, *a)));
        let diff = canonical_terms(terms, tol);
        (self.constant - other.constant).norm() + diff.iter().map(|(c, _)| c.norm()).sum::<f64>()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other, tol) <= tol
    }

    /// Upper bound for `sup |f|` on `[0,1]`.
    pub fn sup_bound(&self) -> f64 {
        self.constant.norm() + self.terms.iter().map(|(c, _)| c.norm()).sum::<f64>()
    }
}

fn canonical_terms(terms: Vec<(Complex64, Complex64)>, tol: f64) -> Vec<(Complex64, Complex64)> {
    let mut merged: Vec<(Complex64, Complex64)> = Vec::with_capacity(terms.len());
    for (c, a) in terms {
        match merged.iter_mut().find(|(_, b)| (a - b).norm() <= tol * (1.0 + b.norm())) {
            Some(slot) => slot.0 += c,
            None => merged.push((c, a)),
        }
    }
    merged.retain(|(c, _)| c.norm() >= DROP_TOL);
    merged.sort_by(|(_, a), (_, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    merged
}
