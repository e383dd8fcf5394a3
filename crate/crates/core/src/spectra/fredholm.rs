use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::laurent::{golden_max, winding_number_with, LaurentPolynomial};
use super::region::{Curve, RegionKind, SpectrumRegion};
use crate::crossed::{CrossedProductElement, SymbolFunction};
use crate::error::{Error, Result};
use crate::oracle::{omega_complement, singular_values};
use crate::DEFAULT_TOL;

const F0_GRID: usize = 1024;

/// `(p0, p1)` with `p_λ(z) = Σ f_n(λ) zⁿ`.
pub fn boundary_polynomials(e: &CrossedProductElement) -> (LaurentPolynomial, LaurentPolynomial) {
    let (m, n) = e.index_range();
    let at = |ln_x: f64| -> LaurentPolynomial {
        let coeffs = (m..=n).map(|k| e.coeff(k).eval_ln(ln_x)).collect();
        LaurentPolynomial::new(m, coeffs)
    };
    (at(f64::NEG_INFINITY), at(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FredholmOptions {
    pub tol: f64,
    pub nu_schedule: Vec<usize>,
    pub x_grid: Vec<f64>,
    pub mu_values: Vec<usize>,
    /// Relative change between the last two `ν` below which `ω` counts as converged.
    pub convergence_tol: f64,
}

impl Default for FredholmOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            nu_schedule: vec![20, 40, 80, 160],
            x_grid: (1..10).map(|k| k as f64 / 10.0).collect(),
            mu_values: vec![3, 4, 5],
            convergence_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FredholmDecision {
    Fredholm,
    NotFredholm,
    Inconclusive,
}

/// `ω_{x,μ}` at each `ν` of the schedule. Convergence is judged on the Schur
/// complement between the last two `ν`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaSample {
    pub x: f64,
    pub mu: usize,
    pub estimates: Vec<(usize, Complex64)>,
    /// Last estimate, if any.
    pub omega: Option<Complex64>,
    /// Smallest singular value of the Schur complement whose determinant is
    /// `ω`, divided by `‖b‖ = Σₙ sup |fₙ|`; `ω = 0` exactly when this vanishes.
    pub normalized: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FredholmReport {
    pub inv1_p0: bool,
    pub inv1_p1: bool,
    pub kappa_plus: Option<i64>,
    pub kappa_minus: Option<i64>,
    pub inv2_holds: bool,
    pub omega_samples: Vec<OmegaSample>,
    pub decision: FredholmDecision,
    pub notes: Vec<String>,
}

fn winding_or_note(p: &LaurentPolynomial, tol: f64, name: &str, notes: &mut Vec<String>) -> (bool, Option<i64>) {
    match winding_number_with(p, Complex64::new(0.0, 0.0), tol) {
        Ok(k) => (true, Some(k)),
        Err(Error::VanishesOnCircle) => (false, None),
        Err(err) => {
            notes.push(format!("winding of {name}: {err}"));
            (true, None)
        }
    }
}

/// Minimum of `|f|` on `[0,1]` and where it is attained: a 1024-point grid,
/// then golden-section refinement around each local minimum of the grid.
pub(crate) fn symbol_min(f: &SymbolFunction) -> (f64, f64) {
    let xs: Vec<f64> = (0..=F0_GRID).map(|k| k as f64 / F0_GRID as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f.eval(x).norm()).collect();
    let mut best = (vals[0], 0.0);
    for k in 0..=F0_GRID {
        if vals[k] < best.0 {
            best = (vals[k], xs[k]);
        }
        let left = k == 0 || vals[k] <= vals[k - 1];
        let right = k == F0_GRID || vals[k] <= vals[k + 1];
        if left && right && k > 0 && k < F0_GRID {
            let g = |x: f64| -f.eval(x).norm();
            let x = golden_max(&g, xs[k - 1], xs[k + 1]);
            let v = -g(x);
            if v < best.0 {
                best = (v, x);
            }
        }
    }
    best
}

fn omega_sample(e: &CrossedProductElement, x: f64, mu: usize, kappa: i64, opts: &FredholmOptions) -> OmegaSample {
    let schedule: Vec<usize> = opts.nu_schedule.iter().copied().filter(|&nu| nu > mu).collect();
    let mut complements = Vec::new();
    for &nu in &schedule {
        match omega_complement(e, x, mu, nu, kappa) {
            Ok(s) => complements.push((nu, s)),
            Err(_) => break,
        }
    }
    let norm: f64 = e.coeffs().values().map(SymbolFunction::sup_bound).sum();
    let estimates: Vec<(usize, Complex64)> = complements.iter().map(|(nu, s)| (*nu, s.determinant())).collect();
    let converged = complements.len() == schedule.len()
        && match complements.as_slice() {
            [.., (_, a), (_, b)] => (b - a).norm() <= opts.convergence_tol * b.norm().max(opts.tol * norm),
            _ => false,
        };
    let normalized = match complements.last() {
        Some((_, s)) if norm > 0.0 => singular_values(s).last().copied().unwrap_or(0.0) / norm,
        Some(_) => 0.0,
        None => f64::NAN,
    };
    OmegaSample { x, mu, omega: estimates.last().map(|&(_, w)| w), estimates, normalized, converged }
}

/// Fredholm test from the boundary polynomials and the limits
/// `ω_{x,μ} = lim_ν det τ_x(b)^ν / det τ_x(b)^ν_μ`.
pub fn fredholm_conditions(e: &CrossedProductElement, opts: &FredholmOptions) -> FredholmReport {
    let tol = opts.tol;
    let mut notes = Vec::new();
    let t = e.base_t();
    if (t.ln()).abs() <= 1e-12 {
        let (m, _) = symbol_min(&e.coeff(0));
        let fred = m > tol;
        notes.push(format!("diagonal element over base 1: min |f0| on [0,1] = {m:.3e}"));
        return FredholmReport {
            inv1_p0: fred,
            inv1_p1: fred,
            kappa_plus: fred.then_some(0),
            kappa_minus: fred.then_some(0),
            inv2_holds: fred,
            omega_samples: Vec::new(),
            decision: if fred { FredholmDecision::Fredholm } else { FredholmDecision::NotFredholm },
            notes,
        };
    }
    let (p0, p1) = boundary_polynomials(e);
    let (inv1_p0, k0) = winding_or_note(&p0, tol, "p0", &mut notes);
    let (inv1_p1, k1) = winding_or_note(&p1, tol, "p1", &mut notes);
    let (kappa_plus, kappa_minus) = if t > 1.0 { (k0, k1) } else { (k1, k0) };
    let inv2_holds = matches!((k0, k1), (Some(a), Some(b)) if a == b);
    let mut report = FredholmReport {
        inv1_p0,
        inv1_p1,
        kappa_plus,
        kappa_minus,
        inv2_holds,
        omega_samples: Vec::new(),
        decision: FredholmDecision::NotFredholm,
        notes,
    };
    if !inv1_p0 || !inv1_p1 || (k0.is_some() && k1.is_some() && !inv2_holds) {
        return report;
    }
    let Some(kappa) = k0.filter(|_| inv2_holds) else {
        report.decision = FredholmDecision::Inconclusive;
        return report;
    };

    let mut xs = opts.x_grid.clone();
    if e.is_triangular() {
        let (_, x) = symbol_min(&e.coeff(0));
        if x > 0.0 && x < 1.0 && !xs.contains(&x) {
            xs.push(x);
            report.notes.push(format!("x = {x} added where |f0| is smallest"));
        }
    }
    let jobs: Vec<(f64, usize)> = xs.iter().flat_map(|&x| opts.mu_values.iter().map(move |&mu| (x, mu))).collect();
    let samples: Vec<OmegaSample> = jobs.par_iter().map(|&(x, mu)| omega_sample(e, x, mu, kappa, opts)).collect();
    let vanishing = samples.iter().any(|s| s.converged && s.normalized <= tol);
    let all_good = samples.iter().all(|s| s.converged && s.normalized > tol);
    report.decision = if vanishing {
        FredholmDecision::NotFredholm
    } else if all_good && !samples.is_empty() {
        FredholmDecision::Fredholm
    } else {
        FredholmDecision::Inconclusive
    };
    report.omega_samples = samples;
    report
}

/// Fredholm test for elements supported in `[0, N]`: `f0` has no zero on
/// `[0,1]` and `p1` has no zero in the closed disk.
pub fn is_fredholm_triangular(e: &CrossedProductElement) -> Result<bool> {
    is_fredholm_triangular_with(e, DEFAULT_TOL)
}

pub fn is_fredholm_triangular_with(e: &CrossedProductElement, tol: f64) -> Result<bool> {
    if !e.is_triangular() {
        return Err(Error::NotTriangular);
    }
    let (m, _) = symbol_min(&e.coeff(0));
    if m <= tol {
        return Ok(false);
    }
    let (_, p1) = boundary_polynomials(e);
    if p1.is_zero() {
        return Ok(false);
    }
    Ok(p1.roots().iter().all(|r| r.norm() > 1.0 + tol))
}

/// `f0([0,1]) ∪ p1(closed disk)` for elements supported in `[0, N]`.
pub fn essential_spectrum_triangular(e: &CrossedProductElement) -> Result<SpectrumRegion> {
    essential_spectrum_triangular_with(e, DEFAULT_TOL)
}

pub fn essential_spectrum_triangular_with(e: &CrossedProductElement, tol: f64) -> Result<SpectrumRegion> {
    if !e.is_triangular() {
        return Err(Error::NotTriangular);
    }
    let mut region = SpectrumRegion::empty(RegionKind::Exact, tol);
    let f0 = e.coeff(0);
    if f0.terms().is_empty() {
        region.add_point(f0.constant());
    } else {
        region.curves.push(Curve::new("f0", move |x| f0.eval(x)));
    }
    let (_, p1) = boundary_polynomials(e);
    region.add_polynomial_disk(p1);
    Ok(region)
}

/// The subset `p0(T) ∪ p1(T) ∪ W` of the essential spectrum, where `W` holds
/// the points around which `p0` and `p1` have defined, different windings.
pub fn spectral_inclusion(e: &CrossedProductElement) -> SpectrumRegion {
    spectral_inclusion_with(e, DEFAULT_TOL)
}

pub fn spectral_inclusion_with(e: &CrossedProductElement, tol: f64) -> SpectrumRegion {
    let (p0, p1) = boundary_polynomials(e);
    let mut region = SpectrumRegion::empty(RegionKind::Inclusion, tol);
    region.add_circle_image("p0", &p0);
    region.add_circle_image("p1", &p1);
    region.winding_mismatch.push((p0, p1));
    region
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::moebius::LinearFractionalMap;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk_coset() -> CrossedProductElement {
        let phi = LinearFractionalMap::psi(ONE, 4.0).unwrap();
        let phi = phi.compose(&LinearFractionalMap::rho(ONE, ONE).unwrap());
        CrossedProductElement::coset_of_composition(&phi, 4.0).unwrap()
    }

    fn quick() -> FredholmOptions {
        FredholmOptions { nu_schedule: vec![10, 20, 40], x_grid: vec![0.3, 0.7], ..Default::default() }
    }

    #[test]
    fn boundary_examples() {
        let e = disk_coset();
        let (p0, p1) = boundary_polynomials(&e);
        assert!(p0.is_zero());
        assert_eq!(p1.min_degree(), 1);
        assert!((p1.coeff(1) - c(0.5, 0.0)).norm() < 1e-12);
        let (p0, p1) = boundary_polynomials(&CrossedProductElement::identity(ONE, 4.0).unwrap());
        assert_eq!(p0, LaurentPolynomial::constant(ONE));
        assert_eq!(p1, LaurentPolynomial::constant(ONE));
        let (p0, p1) = boundary_polynomials(&e.add_scalar(c(0.0, 2.0)));
        assert_eq!(p0, LaurentPolynomial::constant(c(0.0, 2.0)));
        assert!((p1.coeff(0) - c(0.0, 2.0)).norm() < 1e-15 && (p1.coeff(1) - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fredholm_examples() {
        let r = fredholm_conditions(&disk_coset(), &quick());
        assert_eq!(r.decision, FredholmDecision::NotFredholm);
        assert!(!r.inv1_p0);
        let r = fredholm_conditions(&CrossedProductElement::identity(ONE, 4.0).unwrap(), &quick());
        assert_eq!(r.decision, FredholmDecision::Fredholm);
        assert_eq!((r.kappa_plus, r.kappa_minus), (Some(0), Some(0)));
        let f = SymbolFunction::new(ONE, vec![(c(0.5, 0.0), ONE)]).unwrap();
        let g = CrossedProductElement::gamma(ONE, 4.0, f.clone()).unwrap();
        assert_eq!(fredholm_conditions(&g, &quick()).decision, FredholmDecision::Fredholm);
        let g1 = CrossedProductElement::gamma(ONE, 1.0, f).unwrap();
        assert_eq!(fredholm_conditions(&g1, &quick()).decision, FredholmDecision::Fredholm);
    }

    #[test]
    fn winding_mismatch_is_not_fredholm() {
        let e = disk_coset().add_scalar(c(-0.2, 0.0));
        let r = fredholm_conditions(&e, &quick());
        assert_eq!((r.kappa_plus, r.kappa_minus), (Some(0), Some(1)));
        assert_eq!(r.decision, FredholmDecision::NotFredholm);
        let e = disk_coset().add_scalar(c(-0.8, 0.0));
        assert_eq!(fredholm_conditions(&e, &quick()).decision, FredholmDecision::Fredholm);
    }

    #[test]
    fn interior_zero_of_f0_is_found() {
        let f = SymbolFunction::new(c(-0.45, 0.0), vec![(ONE, ONE)]).unwrap();
        let e = CrossedProductElement::gamma(ONE, 2.0, f).unwrap();
        assert_eq!(is_fredholm_triangular(&e), Ok(false));
        assert_eq!(fredholm_conditions(&e, &quick()).decision, FredholmDecision::NotFredholm);
    }

    #[test]
    fn triangular_examples() {
        let e = disk_coset();
        assert_eq!(is_fredholm_triangular(&e.add_scalar(ONE)), Ok(true));
        assert_eq!(is_fredholm_triangular(&e), Ok(false));
        let g = CrossedProductElement::gamma(ONE, 4.0, SymbolFunction::monomial(ONE, ONE).unwrap()).unwrap();
        assert_eq!(is_fredholm_triangular(&g), Ok(false));
        let lower = CrossedProductElement::new(ONE, 4.0, BTreeMap::from([(-1, SymbolFunction::monomial(ONE, ONE).unwrap())])).unwrap();
        assert_eq!(is_fredholm_triangular(&lower), Err(Error::NotTriangular));
        assert_eq!(essential_spectrum_triangular(&lower).unwrap_err(), Error::NotTriangular);
    }

    #[test]
    fn example_regions() {
        let r = essential_spectrum_triangular(&disk_coset()).unwrap();
        assert!(r.contains(c(0.0, 0.0)) && r.contains(c(0.0, 0.49)) && r.contains(c(0.5, 0.0)));
        assert!(!r.contains(c(0.0, 0.51)));
        let zero = CrossedProductElement::zero(ONE, 4.0).unwrap();
        let r = essential_spectrum_triangular(&zero).unwrap();
        assert_eq!(r.points, vec![c(0.0, 0.0)]);
        assert!(r.curves.is_empty() && r.polynomial_disks.is_empty());

        let inc = spectral_inclusion(&disk_coset());
        assert!(inc.contains(c(0.5, 0.0)) && inc.contains(c(0.1, 0.2)));
        assert!(inc.contains(c(0.0, 0.0)) && !inc.contains(c(0.6, 0.0)));
        let inc = spectral_inclusion(&CrossedProductElement::identity(ONE, 4.0).unwrap());
        assert_eq!(inc.points, vec![ONE]);
        assert!(!inc.contains(c(0.5, 0.0)));
    }
}
