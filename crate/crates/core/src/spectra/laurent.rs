use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

/// Number of circle samples for the argument-principle cross-check.
pub const CIRCLE_SAMPLES: usize = 4096;

/// `Σ_{n=M}^{N} cₙ zⁿ`, trimmed so that `c_M` and `c_N` are nonzero (the zero
/// polynomial is `M = N = 0`, `c₀ = 0`).
#[derive(Clone, PartialEq, Serialize)]
pub struct LaurentPolynomial {
    min_degree: i64,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0 || self.coeffs.len() == 1)
            .map(|(k, c)| format!("({c})z^{}", self.min_degree + k as i64))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl LaurentPolynomial {
    pub fn new(min_degree: i64, coeffs: Vec<Complex64>) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let Some(first) = coeffs.iter().position(|c| *c != zero) else {
            return Self::zero();
        };
        let last = coeffs.iter().rposition(|c| *c != zero).unwrap_or(first);
        Self { min_degree: min_degree + first as i64, coeffs: coeffs[first..=last].to_vec() }
    }

    pub fn zero() -> Self {
        Self { min_degree: 0, coeffs: vec![Complex64::new(0.0, 0.0)] }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.coeffs.len() as i64 - 1
    }

    /// Coefficients `c_M, …, c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        let k = n - self.min_degree;
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(k as usize).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1 && self.min_degree == 0 || self.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let p = self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        p * z.powi(self.min_degree as i32)
    }

    /// `p - z0`.
    pub fn shift_value(&self, z0: Complex64) -> Self {
        let lo = self.min_degree.min(0);
        let hi = self.max_degree().max(0);
        let coeffs = (lo..=hi)
            .map(|n| if n == 0 { self.coeff(n) - z0 } else { self.coeff(n) })
            .collect();
        Self::new(lo, coeffs)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.min_degree, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `zᵏ p(z)`.
    pub fn mul_z(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { min_degree: self.min_degree + k, coeffs: self.coeffs.clone() }
    }

    /// Nonzero roots of `z^{-M} p(z)` (all its roots, since `c_M ≠ 0`).
    pub fn roots(&self) -> Vec<Complex64> {
        if self.is_zero() {
            return Vec::new();
        }
        let c = &self.coeffs;
        let deg = c.len() - 1;
        match deg {
            0 => Vec::new(),
            1 => vec![-c[0] / c[1]],
            _ => {
                let lead = c[deg];
                let mut comp = DMatrix::from_element(deg, deg, Complex64::new(0.0, 0.0));
                for k in 0..deg {
                    comp[(0, k)] = -c[deg - 1 - k] / lead;
                }
                for k in 1..deg {
                    comp[(k, k - 1)] = Complex64::new(1.0, 0.0);
                }
                let (_, t) = Schur::new(comp).unpack();
                triangular_eigenvalues(&t).into_iter().map(|r| polish(c, r)).collect()
            }
        }
    }

    /// `max |p|` on the unit circle.
    pub fn circle_max(&self) -> f64 {
        let f = |th: f64| self.eval(Complex64::from_polar(1.0, th)).norm();
        let n = 1024;
        let h = 2.0 * PI / n as f64;
        let (k, _) = (0..n)
            .map(|k| (k, f(k as f64 * h)))
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        let th = golden_max(&f, (k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
        f(th).max(f(k as f64 * h))
    }
}

fn triangular_eigenvalues(t: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].norm() > 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let tr = a + d;
            let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
            out.push((tr + disc) / 2.0);
            out.push((tr - disc) / 2.0);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    out
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn polish(c: &[Complex64], mut r: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (p, dp) = horner(c, r);
        if dp.norm() == 0.0 {
            break;
        }
        let next = r - p / dp;
        if !(next.re.is_finite() && next.im.is_finite()) || horner(c, next).0.norm() >= p.norm() {
            break;
        }
        r = next;
    }
    r
}

pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    (a + b) / 2.0
}

/// Winding number of `p - z0` around `0` along the unit circle.
pub fn winding_number(p: &LaurentPolynomial, z0: Complex64) -> Result<i64> {
    winding_number_with(p, z0, DEFAULT_TOL)
}

/// Roots of `z^{-M}(p - z0)` inside the disk, plus `M`; cross-checked against
/// the change of argument along the circle.
pub fn winding_number_with(p: &LaurentPolynomial, z0: Complex64, tol: f64) -> Result<i64> {
    let q = p.shift_value(z0);
    if q.is_zero() {
        return Err(Error::VanishesOnCircle);
    }
    let values: Vec<Complex64> = (0..CIRCLE_SAMPLES)
        .map(|k| q.eval(circle_point(k as f64 / CIRCLE_SAMPLES as f64)))
        .collect();
    if values.iter().any(|v| v.norm() <= tol) {
        return Err(Error::VanishesOnCircle);
    }
    let roots = q.roots();
    if roots.iter().any(|r| (r.norm() - 1.0).abs() <= tol) {
        return Err(Error::VanishesOnCircle);
    }
    let by_roots = roots.iter().filter(|r| r.norm() < 1.0).count() as i64 + q.min_degree();
    let by_argument = argument_winding(&q, &values, tol)?;
    if by_roots != by_argument {
        return Err(Error::CrossCheckMismatch { roots: by_roots, argument: by_argument });
    }
    Ok(by_roots)
}

fn circle_point(s: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * s)
}

fn argument_winding(q: &LaurentPolynomial, values: &[Complex64], tol: f64) -> Result<i64> {
    let n = values.len();
    let mut total = 0.0;
    for k in 0..n {
        let (a, b) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
        total += arg_increment(q, a, b, values[k], values[(k + 1) % n], tol, 0)?;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn arg_increment(
    q: &LaurentPolynomial,
    a: f64,
    b: f64,
    qa: Complex64,
    qb: Complex64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let inc = (qb / qa).arg();
    if inc.abs() <= PI / 4.0 || depth >= 60 {
        return Ok(inc);
    }
    let m = 0.5 * (a + b);
    let qm = q.eval(circle_point(m));
    if qm.norm() <= tol {
        return Err(Error::VanishesOnCircle);
    }
    Ok(arg_increment(q, a, m, qa, qm, tol, depth + 1)? + arg_increment(q, m, b, qm, qb, tol, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trimming() {
        let p = LaurentPolynomial::new(-2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.min_degree(), -1);
        assert_eq!(p.max_degree(), 1);
        assert!(LaurentPolynomial::new(3, vec![c(0.0, 0.0)]).is_zero());
        assert!((p.eval(c(2.0, 0.0)) - c(0.5 + 4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn winding_examples() {
        let z = LaurentPolynomial::new(1, vec![c(1.0, 0.0)]);
        assert_eq!(winding_number(&z, c(0.0, 0.0)).unwrap(), 1);
        let p = LaurentPolynomial::new(0, vec![c(-2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(winding_number(&p, c(0.0, 0.0)).unwrap(), 0);
        let inv = LaurentPolynomial::new(-2, vec![c(1.0, 0.0)]);
        assert_eq!(winding_number(&inv, c(0.0, 0.0)).unwrap(), -2);
        assert_eq!(winding_number(&z, c(1.0, 0.0)), Err(Error::VanishesOnCircle));
        assert_eq!(winding_number(&LaurentPolynomial::zero(), c(0.0, 0.0)), Err(Error::VanishesOnCircle));
        assert_eq!(winding_number(&LaurentPolynomial::constant(c(3.0, 0.0)), c(0.0, 0.0)).unwrap(), 0);
    }

    #[test]
    fn scalar_and_shift_laws() {
        let p = LaurentPolynomial::new(-1, vec![c(0.3, 0.1), c(-1.0, 0.5), c(0.0, 0.2), c(2.0, 0.0)]);
        let z0 = c(0.1, -0.2);
        let w = winding_number(&p, c(0.0, 0.0)).unwrap();
        assert_eq!(winding_number(&p.scale(c(-3.0, 2.0)), c(0.0, 0.0)).unwrap(), w);
        assert_eq!(winding_number(&p.mul_z(1), c(0.0, 0.0)).unwrap(), w + 1);
        assert!(winding_number(&p, z0).is_ok());
    }

    #[test]
    fn roots_of_cubic() {
        let roots = [c(0.5, 0.0), c(-2.0, 1.0), c(0.0, 0.3)];
        // (z - r0)(z - r1)(z - r2)
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let p = LaurentPolynomial::new(0, coeffs);
        let mut found = p.roots();
        assert_eq!(found.len(), 3);
        for r in roots {
            let (k, _) = found.iter().enumerate().min_by(|x, y| (x.1 - r).norm().total_cmp(&(y.1 - r).norm())).unwrap();
            assert!((found[k] - r).norm() < 1e-12);
            found.remove(k);
        }
    }

    #[test]
    fn circle_max_of_linear() {
        let p = LaurentPolynomial::new(0, vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!((p.circle_max() - 1.5).abs() < 1e-12);
    }
}
