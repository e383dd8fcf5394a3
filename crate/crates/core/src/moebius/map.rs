use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Moduli within this relative distance of the maximum count as ties when
/// picking the normalization pivot.
const PIVOT_TIE: f64 = 1e-12;

/// A linear-fractional map `z ↦ (az + b)/(cz + d)` with `ad − bc ≠ 0`.
///
/// Coefficients are stored normalized: the first coefficient (in the order
/// `a, b, c, d`) whose modulus attains the maximum is scaled to exactly `1`.
/// Two quadruples describe the same map iff they are proportional, which is
/// what [`LinearFractionalMap::approx_eq`] tests.
#[derive(Clone, Copy, PartialEq)]
pub struct LinearFractionalMap {
    coeffs: [Complex64; 4],
}

impl fmt::Debug for LinearFractionalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coeffs;
        write!(f, "LinearFractionalMap(({a})z + ({b}) / ({c})z + ({d}))")
    }
}

impl fmt::Display for LinearFractionalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coeffs;
        write!(f, "(({a})z + ({b})) / (({c})z + ({d}))")
    }
}

fn normalize(coeffs: [Complex64; 4]) -> [Complex64; 4] {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let idx = coeffs
        .iter()
        .position(|c| c.norm() >= max * (1.0 - PIVOT_TIE))
        .unwrap_or(0);
    let pivot = coeffs[idx];
    let mut out = coeffs.map(|c| c / pivot);
    out[idx] = ONE;
    out
}

impl LinearFractionalMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        Self::from_coeffs([a, b, c, d])
    }

    pub fn from_coeffs(coeffs: [Complex64; 4]) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        if coeffs.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::Degenerate);
        }
        let coeffs = normalize(coeffs);
        let [a, b, c, d] = coeffs;
        if (a * d - b * c).norm() <= 1e-14 {
            return Err(Error::Degenerate);
        }
        Ok(Self { coeffs })
    }

    pub fn identity() -> Self {
        Self { coeffs: [ONE, ZERO, ZERO, ONE] }
    }

    /// Rotation `z ↦ ωz` for a unimodular `ω`.
    pub fn rotation(omega: Complex64) -> Result<Self> {
        check_unit(omega, "rotation factor")?;
        Self::new(omega / omega.norm(), ZERO, ZERO, ONE)
    }

    /// The parabolic map `ρ_{ζ,a}(z) = ((2 − a)z + aζ) / (−a ζ̄ z + (2 + a))`.
    ///
    /// It fixes `ζ` with derivative `1` and is conjugate to translation by
    /// `a` on the right half-plane; it is an automorphism iff `Re a = 0`.
    pub fn rho(zeta: Complex64, a: Complex64) -> Result<Self> {
        let zeta = check_unit(zeta, "zeta")?;
        if !(a.re >= -DEFAULT_TOL) || !a.im.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "translation number must have Re a >= 0, got {a}"
            )));
        }
        let two = Complex64::new(2.0, 0.0);
        Self::new(two - a, a * zeta, -a * zeta.conj(), two + a)
    }

    /// The hyperbolic automorphism `Ψ_{ζ,t}` fixing `ζ` with `Ψ'(ζ) = t`.
    pub fn psi(zeta: Complex64, t: f64) -> Result<Self> {
        let zeta = check_unit(zeta, "zeta")?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!("psi needs t > 0, got {t}")));
        }
        Self::new(
            Complex64::new(t + 1.0, 0.0),
            zeta * (1.0 - t),
            zeta.conj() * (1.0 - t),
            Complex64::new(1.0 + t, 0.0),
        )
    }

    pub fn coeffs(&self) -> [Complex64; 4] {
        self.coeffs
    }

    pub fn a(&self) -> Complex64 {
        self.coeffs[0]
    }
    pub fn b(&self) -> Complex64 {
        self.coeffs[1]
    }
    pub fn c(&self) -> Complex64 {
        self.coeffs[2]
    }
    pub fn d(&self) -> Complex64 {
        self.coeffs[3]
    }

    pub fn determinant(&self) -> Complex64 {
        let [a, b, c, d] = self.coeffs;
        a * d - b * c
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let [a, b, c, d] = self.coeffs;
        let den = c * z + d;
        if den.norm() < DEFAULT_TOL {
            return Err(Error::PoleAtInput);
        }
        Ok((a * z + b) / den)
    }

    /// `self ∘ inner`, i.e. the product of coefficient matrices.
    pub fn compose(&self, inner: &Self) -> Self {
        let [a1, b1, c1, d1] = self.coeffs;
        let [a2, b2, c2, d2] = inner.coeffs;
        let coeffs = [
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
        ];
        Self { coeffs: normalize(coeffs) }
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.coeffs;
        Self { coeffs: normalize([d, -b, -c, a]) }
    }

    /// `n`-th iterate for `n ≥ 0`, iterate of the inverse for `n < 0`.
    pub fn iterate(&self, n: i64) -> Self {
        let step = if n >= 0 { *self } else { self.inverse() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.compose(&step))
    }

    /// `(φ'(z), φ''(z))`.
    pub fn derivatives_at(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let [_, _, c, d] = self.coeffs;
        let den = c * z + d;
        if den.norm() < DEFAULT_TOL {
            return Err(Error::PoleAtInput);
        }
        let det = self.determinant();
        let first = det / (den * den);
        let second = -2.0 * c * det / (den * den * den);
        Ok((first, second))
    }

    /// Projective distance between coefficient quadruples: the relative
    /// residual of the best scalar fit `self ≈ λ·other`.
    pub fn distance(&self, other: &Self) -> f64 {
        let p = &self.coeffs;
        let q = &other.coeffs;
        let qq: f64 = q.iter().map(|c| c.norm_sqr()).sum();
        let qp: Complex64 = q.iter().zip(p).map(|(qi, pi)| qi.conj() * pi).sum();
        let lambda = qp / qq;
        let res: f64 = p
            .iter()
            .zip(q)
            .map(|(pi, qi)| (pi - lambda * qi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let pn: f64 = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        res / pn
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::identity(), tol)
    }

    /// The Krein adjoint `σ(z) = (āz − c̄)/(−b̄z + d̄)` of a self-map.
    pub fn krein_adjoint(&self) -> Result<Self> {
        if !self.is_self_map() {
            return Err(Error::NotSelfMap);
        }
        let [a, b, c, d] = self.coeffs;
        Ok(Self { coeffs: normalize([a.conj(), -c.conj(), -b.conj(), d.conj()]) })
    }

    /// `(A, B)` with `|az+b|² − |cz+d|² = A + 2 Re(Bz)` on the unit circle.
    pub(crate) fn circle_form(&self) -> (f64, Complex64) {
        let [a, b, c, d] = self.coeffs;
        let big_a = a.norm_sqr() + b.norm_sqr() - c.norm_sqr() - d.norm_sqr();
        let big_b = a * b.conj() - c * d.conj();
        (big_a, big_b)
    }

    /// Maximum of `|az+b|² − |cz+d|²` over the unit circle.
    pub fn circle_excess(&self) -> f64 {
        let (a, b) = self.circle_form();
        a + 2.0 * b.norm()
    }
}

pub(crate) fn check_unit(z: Complex64, what: &str) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() || (z.norm() - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::InvalidArgument(format!("{what} must lie on the unit circle, got {z}")));
    }
    Ok(z / z.norm())
}
