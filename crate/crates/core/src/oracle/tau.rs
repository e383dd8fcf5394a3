use nalgebra::DMatrix;
use num_complex::Complex64;

use super::linalg::{log_det, relative_min_pivot, smallest_singular_value};
use super::{Provenance, TruncatedMatrix};
use crate::crossed::CrossedProductElement;
use crate::error::{Error, Result};

/// `ln(x^{t^i}) = t^i ln x`, with `-∞` for `x = 0`.
pub(crate) fn orbit_ln(x: f64, t: f64, i: i64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x >= 1.0 {
        return 0.0;
    }
    let scale = (i as f64 * t.ln()).exp();
    if scale.is_infinite() {
        f64::NEG_INFINITY
    } else {
        scale * x.ln()
    }
}

/// Entries `τ_x(b)_{i, j+κ} = f_{j+κ-i}(x^{t^i})` for `i` in `rows`, `j` in `cols`.
fn tau_rect(e: &CrossedProductElement, x: f64, rows: &[i64], cols: &[i64], kappa: i64) -> DMatrix<Complex64> {
    let t = e.base_t();
    let mut m = DMatrix::from_element(rows.len(), cols.len(), Complex64::new(0.0, 0.0));
    let (lo, hi) = e.index_range();
    for (r, &i) in rows.iter().enumerate() {
        let ln = orbit_ln(x, t, i);
        for (c, &j) in cols.iter().enumerate() {
            let k = j + kappa - i;
            if k < lo || k > hi {
                continue;
            }
            if let Some(f) = e.coeffs().get(&k) {
                m[(r, c)] = f.eval_ln(ln);
            }
        }
    }
    m
}

fn tau_block(e: &CrossedProductElement, x: f64, idx: &[i64], kappa: i64) -> DMatrix<Complex64> {
    tau_rect(e, x, idx, idx, kappa)
}

/// The `(2ν+1)×(2ν+1)` section of the trajectorial matrix `[τ_x(b)]` over
/// indices `-ν..=ν`.
pub fn tau_matrix(e: &CrossedProductElement, x: f64, nu: usize) -> TruncatedMatrix {
    let idx: Vec<i64> = (-(nu as i64)..=nu as i64).collect();
    TruncatedMatrix { entries: tau_block(e, x, &idx, 0), provenance: Provenance::TauX { x, nu } }
}

/// Smallest singular value of `m - λI`.
pub fn sigma_min(m: &TruncatedMatrix, lambda: Complex64) -> f64 {
    let mut a = m.entries.clone();
    for i in 0..a.nrows().min(a.ncols()) {
        a[(i, i)] -= lambda;
    }
    smallest_singular_value(&a)
}

/// `det τ_x(b)^ν / det τ_x(b)^ν_μ`, the `κ`-shifted section over `-ν..=ν`
/// divided by the one over `J_{ν,μ} = {-ν..-μ} ∪ {μ..ν}`.
pub fn omega_estimate(
    e: &CrossedProductElement,
    x: f64,
    mu: usize,
    nu: usize,
    kappa: i64,
) -> Result<Complex64> {
    if mu == 0 || nu <= mu {
        return Err(Error::InvalidArgument(format!("need 0 < mu < nu, got mu = {mu}, nu = {nu}")));
    }
    let (nu, mu) = (nu as i64, mu as i64);
    let full: Vec<i64> = (-nu..=nu).collect();
    let punctured: Vec<i64> = (-nu..=-mu).chain(mu..=nu).collect();
    let num = tau_block(e, x, &full, kappa);
    let den = tau_block(e, x, &punctured, kappa);
    if relative_min_pivot(&den) <= 1e-15 {
        return Err(Error::SingularDenominator);
    }
    let (l2, p2) = log_det(&den).ok_or(Error::SingularDenominator)?;
    let Some((l1, p1)) = log_det(&num) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    Ok(p1 / p2 * (l1 - l2).exp())
}

/// The Schur complement `S` of the punctured block in the `κ`-shifted section
/// over `-ν..=ν`, indexed by the central rows `-μ+1..=μ-1`; `det S = ω_{x,μ}`.
pub fn omega_complement(
    e: &CrossedProductElement,
    x: f64,
    mu: usize,
    nu: usize,
    kappa: i64,
) -> Result<DMatrix<Complex64>> {
    if mu == 0 || nu <= mu {
        return Err(Error::InvalidArgument(format!("need 0 < mu < nu, got mu = {mu}, nu = {nu}")));
    }
    let (nu, mu) = (nu as i64, mu as i64);
    let central: Vec<i64> = (-mu + 1..mu).collect();
    let punctured: Vec<i64> = (-nu..=-mu).chain(mu..=nu).collect();
    let block = |rows: &[i64], cols: &[i64]| tau_rect(e, x, rows, cols, kappa);
    let pp = block(&punctured, &punctured);
    if relative_min_pivot(&pp) <= 1e-15 {
        return Err(Error::SingularDenominator);
    }
    let lu = pp.lu();
    let pc = block(&punctured, &central);
    let sol = lu.solve(&pc).ok_or(Error::SingularDenominator)?;
    Ok(block(&central, &central) - block(&central, &punctured) * sol)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::crossed::SymbolFunction;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk_coset() -> CrossedProductElement {
        let f = SymbolFunction::monomial(c(0.5, 0.0), ONE).unwrap();
        CrossedProductElement::new(ONE, 4.0, BTreeMap::from([(1, f)])).unwrap()
    }

    #[test]
    fn identity_section() {
        let id = CrossedProductElement::identity(ONE, 4.0).unwrap();
        let m = tau_matrix(&id, 0.3, 3);
        assert_eq!(m.entries, DMatrix::identity(7, 7));
        assert!((sigma_min(&m, ONE)).abs() < 1e-15);
        assert!((sigma_min(&m, c(0.0, 0.0)) - 1.0).abs() < 1e-14);
        for mu in 1..3 {
            assert!((omega_estimate(&id, 0.4, mu, 5, 0).unwrap() - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn weighted_shift_entries() {
        let e = disk_coset();
        let m = tau_matrix(&e, 0.0, 2);
        assert!(m.entries.iter().all(|z| z.norm() == 0.0));
        let m = tau_matrix(&e, 0.5, 2);
        for i in -2i64..=1 {
            let r = (i + 2) as usize;
            let expected = 0.5 * 0.5f64.powf(4f64.powi(i as i32));
            assert!((m.entries[(r, r + 1)] - c(expected, 0.0)).norm() < 1e-15);
        }
        let nonzero = m.entries.iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn diagonal_omega_is_central_product() {
        let f = SymbolFunction::new(ONE, vec![(c(0.5, 0.0), ONE)]).unwrap();
        let e = CrossedProductElement::gamma(ONE, 2.0, f.clone()).unwrap();
        let x: f64 = 0.6;
        let expected: Complex64 = (-2i64..=2).map(|j| f.eval(x.powf(2f64.powi(j as i32)))).product();
        let w = omega_estimate(&e, x, 3, 20, 0).unwrap();
        assert!((w - expected).norm() < 1e-12 * expected.norm());
    }

    #[test]
    fn complement_determinant_is_omega() {
        let f0 = SymbolFunction::new(c(1.5, 0.2), vec![(c(0.3, -0.1), c(0.7, 0.4))]).unwrap();
        let f1 = SymbolFunction::monomial(c(0.8, 0.0), c(1.0, 1.0)).unwrap();
        let fm = SymbolFunction::monomial(c(0.0, 0.3), c(2.0, 0.0)).unwrap();
        let e = CrossedProductElement::new(ONE, 3.0, BTreeMap::from([(-1, fm), (0, f0), (1, f1)])).unwrap();
        for mu in [2, 3, 4] {
            let s = omega_complement(&e, 0.4, mu, 30, 0).unwrap();
            assert_eq!(s.nrows(), 2 * mu - 1);
            let w = omega_estimate(&e, 0.4, mu, 30, 0).unwrap();
            assert!((s.determinant() - w).norm() < 1e-10 * w.norm(), "{} vs {w}", s.determinant());
        }
    }

    #[test]
    fn singular_denominator() {
        let e = disk_coset();
        assert_eq!(omega_estimate(&e, 0.5, 2, 6, 0), Err(Error::SingularDenominator));
        assert!(omega_estimate(&e, 0.5, 3, 3, 0).is_err());
        assert_eq!(omega_complement(&e, 0.5, 2, 6, 0), Err(Error::SingularDenominator));
    }
}
