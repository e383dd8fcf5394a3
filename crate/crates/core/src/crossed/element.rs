use std::collections::BTreeMap;

use num_complex::Complex64;

use super::base::common_base;
use super::symbol::SymbolFunction;
use crate::error::{Error, Result};
use crate::moebius::{check_unit, LinearFractionalMap};
use crate::DEFAULT_TOL;

/// A finite sum `Σₙ Γ_ζ(fₙ)[U_{Ψ_{ζ,tⁿ}}]` in the unitized crossed product
/// `C₀([0,1]) ⋊ Z`, where `t = base_t`.
///
/// The unit lives in the constant slot of `coeffs[0]`; every other index
/// carries a symbol vanishing at `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedProductElement {
    zeta: Complex64,
    base_t: f64,
    coeffs: BTreeMap<i64, SymbolFunction>,
}

fn is_unit_base(t: f64) -> bool {
    t.ln().abs() <= 1e-12
}

fn same_base(t1: f64, t2: f64) -> bool {
    (t1 - t2).abs() <= 1e-12 * t1.max(t2)
}

impl CrossedProductElement {
    pub fn new(zeta: Complex64, base_t: f64, coeffs: BTreeMap<i64, SymbolFunction>) -> Result<Self> {
        let zeta = check_unit(zeta, "zeta")?;
        if !(base_t.is_finite() && base_t > 0.0) {
            return Err(Error::InvalidArgument(format!("base t = {base_t} must be positive")));
        }
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        for (n, f) in &coeffs {
            if *n != 0 && f.constant() != Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "coefficient at n = {n} must vanish at x = 0"
                )));
            }
            if *n != 0 && is_unit_base(base_t) {
                return Err(Error::InvalidArgument(
                    "base t = 1 only supports index 0".into(),
                ));
            }
        }
        Ok(Self { zeta, base_t, coeffs })
    }

    fn from_parts(zeta: Complex64, base_t: f64, coeffs: BTreeMap<i64, SymbolFunction>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        Self { zeta, base_t, coeffs }
    }

    pub fn zero(zeta: Complex64, base_t: f64) -> Result<Self> {
        Self::new(zeta, base_t, BTreeMap::new())
    }

    pub fn identity(zeta: Complex64, base_t: f64) -> Result<Self> {
        Self::scalar(zeta, base_t, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(zeta: Complex64, base_t: f64, c: Complex64) -> Result<Self> {
        Self::gamma(zeta, base_t, SymbolFunction::constant_fn(c))
    }

    /// `Γ_ζ(f)` at index `0`.
    pub fn gamma(zeta: Complex64, base_t: f64, f: SymbolFunction) -> Result<Self> {
        Self::new(zeta, base_t, BTreeMap::from([(0, f)]))
    }

    /// The coset `[C_φ]` for a non-automorphism `φ` fixing a boundary point
    /// `ζ`, written over base `base_t`: `s^{-1/2} x^{a_φ}` at index `n` where
    /// `φ'(ζ) = s = base_tⁿ`.
    pub fn coset_of_composition(map: &LinearFractionalMap, base_t: f64) -> Result<Self> {
        if map.is_automorphism() {
            return Err(Error::NotEligible("automorphisms have no coset of this form".into()));
        }
        let dec = map.canonical_decomposition()?;
        if dec.a.re <= 0.0 {
            return Err(Error::NotEligible(format!(
                "translation part {} is not in the right half-plane",
                dec.a
            )));
        }
        let n = base_exponent(dec.t, base_t)?;
        let f = SymbolFunction::monomial(Complex64::new(dec.t.powf(-0.5), 0.0), dec.a)?;
        Self::new(dec.zeta, base_t, BTreeMap::from([(n, f)]))
    }

    /// `[C_φ]* = φ'(ζ)^{-1}[C_σ]` with `σ` the Krein adjoint.
    pub fn coset_of_adjoint(map: &LinearFractionalMap, base_t: f64) -> Result<Self> {
        if map.is_automorphism() {
            return Err(Error::NotEligible("automorphisms have no coset of this form".into()));
        }
        let dec = map.canonical_decomposition()?;
        let sigma = map.krein_adjoint()?;
        let e = Self::coset_of_composition(&sigma, base_t)?;
        Ok(e.scale(Complex64::new(1.0 / dec.t, 0.0)))
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn base_t(&self) -> f64 {
        self.base_t
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, SymbolFunction> {
        &self.coeffs
    }

    pub fn coeff(&self, n: i64) -> SymbolFunction {
        self.coeffs.get(&n).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    /// `(M, N)`, the smallest and largest index of the support (`(0, 0)` for zero).
    pub fn index_range(&self) -> (i64, i64) {
        match (self.coeffs.keys().next(), self.coeffs.keys().next_back()) {
            (Some(&m), Some(&n)) => (m, n),
            _ => (0, 0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Support inside `{0}`.
    pub fn is_diagonal(&self) -> bool {
        self.coeffs.keys().all(|&n| n == 0)
    }

    /// Support inside `[0, ∞)`.
    pub fn is_triangular(&self) -> bool {
        self.coeffs.keys().all(|&n| n >= 0)
    }

    fn check_zeta(&self, other: &Self) -> Result<()> {
        if (self.zeta - other.zeta).norm() > DEFAULT_TOL {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    /// The base both operands can share without rebasing, if any.
    fn shared_base(&self, other: &Self) -> Result<f64> {
        self.check_zeta(other)?;
        if same_base(self.base_t, other.base_t) || other.is_diagonal() {
            Ok(self.base_t)
        } else if self.is_diagonal() {
            Ok(other.base_t)
        } else {
            Err(Error::BaseMismatch)
        }
    }

    /// Twisted convolution: `(f U^k)(g U^l) = f·β_k(g) U^{k+l}`, `β_k(g)(x) = g(x^{t^k})`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let t = self.shared_base(other)?;
        let mut out: BTreeMap<i64, SymbolFunction> = BTreeMap::new();
        for (&k, f) in &self.coeffs {
            let shift = t.powi(k as i32);
            for (&l, g) in &other.coeffs {
                let term = f.product(&g.rescale(shift));
                let slot = out.entry(k + l).or_default();
                *slot = slot.add(&term);
            }
        }
        Ok(Self::from_parts(self.zeta, t, out))
    }

    /// `(f U^n)* = β_{-n}(f̄) U^{-n}`.
    pub fn adjoint(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&n, f)| (-n, f.conjugate().rescale(self.base_t.powi(-n as i32))))
            .collect();
        Self::from_parts(self.zeta, self.base_t, coeffs)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let t = self.shared_base(other)?;
        let mut out = self.coeffs.clone();
        for (&n, g) in &other.coeffs {
            let slot = out.entry(n).or_default();
            *slot = slot.add(g);
        }
        Ok(Self::from_parts(self.zeta, t, out))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&n, f)| (n, f.scale(k))).collect();
        Self::from_parts(self.zeta, self.base_t, coeffs)
    }

    /// `self + c·I`.
    pub fn add_scalar(&self, c: Complex64) -> Self {
        let mut out = self.coeffs.clone();
        let slot = out.entry(0).or_default();
        *slot = slot.add(&SymbolFunction::constant_fn(c));
        Self::from_parts(self.zeta, self.base_t, out)
    }

    /// Rewrites the element over `new_t`, which must satisfy `base_t = new_tᵐ`
    /// for an integer `m`; index `n` moves to `n·m`.
    pub fn rebase(&self, new_t: f64) -> Result<Self> {
        if !(new_t.is_finite() && new_t > 0.0) {
            return Err(Error::InvalidArgument(format!("base t = {new_t} must be positive")));
        }
        if self.is_diagonal() {
            return Ok(Self { base_t: new_t, ..self.clone() });
        }
        let m = base_exponent(self.base_t, new_t)?;
        if m == 0 {
            return Err(Error::BaseIncompatible { derivative: self.base_t, base: new_t });
        }
        let coeffs = self.coeffs.iter().map(|(&n, f)| (n * m, f.clone())).collect();
        Ok(Self::from_parts(self.zeta, new_t, coeffs))
    }

    /// Brings two elements over a common base, when one exists.
    pub fn align(&self, other: &Self) -> Result<(Self, Self)> {
        self.check_zeta(other)?;
        if self.shared_base(other).is_ok() {
            let t = self.shared_base(other)?;
            return Ok((self.rebase(t)?, other.rebase(t)?));
        }
        let cb = common_base(self.base_t, other.base_t).ok_or(Error::BaseMismatch)?;
        Ok((self.rebase(cb.t)?, other.rebase(cb.t)?))
    }

    /// Sum of coefficient distances after matching indices.
    pub fn distance(&self, other: &Self, tol: f64) -> f64 {
        let mut keys: Vec<i64> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter().map(|&n| self.coeff(n).distance(&other.coeff(n), tol)).sum()
    }

    /// Coefficient-wise equality within `tol` (same `ζ`, comparable base).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shared_base(other).is_ok() && self.distance(other, tol) <= tol
    }
}

/// The integer `n` with `s = baseⁿ` (`0` when `s = 1`, whatever the base).
pub(crate) fn base_exponent(s: f64, base: f64) -> Result<i64> {
    if is_unit_base(s) {
        return Ok(0);
    }
    if !(base.is_finite() && base > 0.0) || is_unit_base(base) {
        return Err(Error::BaseIncompatible { derivative: s, base });
    }
    let ratio = s.ln() / base.ln();
    let n = ratio.round();
    if (ratio - n).abs() > DEFAULT_TOL {
        return Err(Error::BaseIncompatible { derivative: s, base });
    }
    Ok(n as i64)
}
