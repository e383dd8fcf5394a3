use num_complex::Complex64;
use serde::Serialize;

use super::map::LinearFractionalMap;
use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

/// Numerical decision thresholds shared by the classification routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance on normalized coefficient expressions.
    pub eps: f64,
    /// Largest order probed when looking for a finite-order automorphism.
    pub q_max: u32,
    /// Largest `|n|` accepted as a membership certificate.
    pub max_power: i64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps: DEFAULT_TOL, q_max: 64, max_power: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AutomorphismOrder {
    Finite(u32),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AutomorphismKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Where a self-map of the disk touches the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum MapClass {
    /// `‖φ‖∞ < 1`; `C_φ` is compact.
    InteriorContact,
    Automorphism { order: AutomorphismOrder, kind: AutomorphismKind },
    /// Fixes `ζ` with `φ'(ζ) = 1`; `a` is the translation number, `Re a > 0`.
    ParabolicNonAutomorphism { zeta: Complex64, a: Complex64 },
    /// Fixes `ζ` with `φ'(ζ) > 0`, `φ'(ζ) ≠ 1`.
    BoundaryFixedNonParabolic { zeta: Complex64, derivative: f64 },
    /// Sends `ζ` to a different boundary point `η`; `derivative = |φ'(ζ)|`.
    BoundaryToBoundary { zeta: Complex64, eta: Complex64, derivative: f64 },
}

impl MapClass {
    pub fn is_automorphism(&self) -> bool {
        matches!(self, MapClass::Automorphism { .. })
    }

    /// True for the two classes of non-automorphisms fixing a boundary point.
    pub fn fixes_boundary_point(&self) -> bool {
        matches!(
            self,
            MapClass::ParabolicNonAutomorphism { .. } | MapClass::BoundaryFixedNonParabolic { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryFixedPoint {
    pub zeta: Complex64,
    /// `φ'(ζ)`, real and positive for self-maps.
    pub derivative: f64,
    /// Set when the point was accepted but sits close to the tolerance edge.
    pub low_confidence: bool,
}

/// `φ = Ψ_{ζ,t} ∘ ρ_{ζ,a}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalDecomposition {
    pub zeta: Complex64,
    pub t: f64,
    pub a: Complex64,
    pub low_confidence: bool,
}

impl CanonicalDecomposition {
    pub fn reconstruct(&self) -> Result<LinearFractionalMap> {
        Ok(LinearFractionalMap::psi(self.zeta, self.t)?
            .compose(&LinearFractionalMap::rho(self.zeta, self.a)?))
    }
}

impl LinearFractionalMap {
    pub fn is_self_map(&self) -> bool {
        self.is_self_map_with(&Tolerances::default())
    }

    /// Closed-form test: `|d| > |c|` (no pole on the closed disk) and
    /// `max_{|z|=1} |az+b|² − |cz+d|² ≤ ε`.
    pub fn is_self_map_with(&self, tol: &Tolerances) -> bool {
        self.d().norm() > self.c().norm() && self.circle_excess() <= tol.eps
    }

    /// Automorphism test on the circle form: `A = 0` and `B = 0`.
    pub fn is_automorphism_with(&self, tol: &Tolerances) -> bool {
        let (a, b) = self.circle_form();
        self.is_self_map_with(tol) && a.abs() <= tol.eps && b.norm() <= tol.eps
    }

    pub fn is_automorphism(&self) -> bool {
        self.is_automorphism_with(&Tolerances::default())
    }

    /// The unique circle point where a non-automorphism with `‖φ‖∞ = 1`
    /// reaches the circle, `ζ = B̄/|B|`.
    pub fn contact_point(&self) -> Option<Complex64> {
        self.contact_point_with(&Tolerances::default())
    }

    pub fn contact_point_with(&self, tol: &Tolerances) -> Option<Complex64> {
        if !self.is_self_map_with(tol) || self.is_automorphism_with(tol) {
            return None;
        }
        if self.circle_excess() < -tol.eps {
            return None;
        }
        let (_, b) = self.circle_form();
        Some(b.conj() / b.norm())
    }

    pub fn classify(&self) -> Result<MapClass> {
        self.classify_with(&Tolerances::default())
    }

    pub fn classify_with(&self, tol: &Tolerances) -> Result<MapClass> {
        if !self.is_self_map_with(tol) {
            return Err(Error::NotSelfMap);
        }
        if self.is_automorphism_with(tol) {
            let kind = self.automorphism_kind(tol);
            let order = match kind {
                AutomorphismKind::Identity => AutomorphismOrder::Finite(1),
                AutomorphismKind::Parabolic | AutomorphismKind::Hyperbolic => {
                    AutomorphismOrder::Infinite
                }
                AutomorphismKind::Elliptic => self.finite_order(tol),
            };
            return Ok(MapClass::Automorphism { order, kind });
        }
        let Some(zeta) = self.contact_point_with(tol) else {
            return Ok(MapClass::InteriorContact);
        };
        let eta = self.evaluate(zeta)?;
        let (d1, _) = self.derivatives_at(zeta)?;
        if (eta - zeta).norm() <= tol.eps {
            if (d1 - 1.0).norm() <= tol.eps {
                let a = self.translation_number_at(zeta, tol)?;
                Ok(MapClass::ParabolicNonAutomorphism { zeta, a })
            } else {
                Ok(MapClass::BoundaryFixedNonParabolic { zeta, derivative: d1.re })
            }
        } else {
            Ok(MapClass::BoundaryToBoundary { zeta, eta: eta / eta.norm(), derivative: d1.norm() })
        }
    }

    fn automorphism_kind(&self, tol: &Tolerances) -> AutomorphismKind {
        if self.is_identity(tol.eps) {
            return AutomorphismKind::Identity;
        }
        // (tr)²/det is real for disk automorphisms: < 4 elliptic, = 4 parabolic.
        let tr = self.a() + self.d();
        let ratio = (tr * tr / self.determinant()).re;
        if (ratio - 4.0).abs() <= 4.0 * tol.eps {
            AutomorphismKind::Parabolic
        } else if ratio > 4.0 {
            AutomorphismKind::Hyperbolic
        } else {
            AutomorphismKind::Elliptic
        }
    }

    fn finite_order(&self, tol: &Tolerances) -> AutomorphismOrder {
        let mut power = *self;
        for q in 1..=tol.q_max {
            if power.is_identity(tol.eps) {
                return AutomorphismOrder::Finite(q);
            }
            power = power.compose(self);
        }
        AutomorphismOrder::Infinite
    }

    pub fn boundary_fixed_point(&self) -> Option<BoundaryFixedPoint> {
        self.boundary_fixed_point_with(&Tolerances::default())
    }

    /// A fixed point on the unit circle with its derivative.
    ///
    /// Non-automorphisms can only fix their contact point. Automorphisms go
    /// through the fixed-point quadratic `cz² + (d − a)z − b = 0`; when both
    /// roots are on the circle (hyperbolic case) the one with the larger
    /// derivative is reported. The identity reports `ζ = 1`.
    pub fn boundary_fixed_point_with(&self, tol: &Tolerances) -> Option<BoundaryFixedPoint> {
        if !self.is_self_map_with(tol) {
            return None;
        }
        if !self.is_automorphism_with(tol) {
            let zeta = self.contact_point_with(tol)?;
            let residual = (self.evaluate(zeta).ok()? - zeta).norm();
            if residual > tol.eps {
                return None;
            }
            let (d1, _) = self.derivatives_at(zeta).ok()?;
            return Some(BoundaryFixedPoint {
                zeta,
                derivative: d1.re,
                low_confidence: residual > 1e-3 * tol.eps || d1.im.abs() > tol.eps,
            });
        }
        if self.is_identity(tol.eps) {
            return Some(BoundaryFixedPoint {
                zeta: Complex64::new(1.0, 0.0),
                derivative: 1.0,
                low_confidence: false,
            });
        }
        let [a, b, c, d] = self.coeffs();
        if c.norm() <= tol.eps {
            // affine automorphism: a rotation, fixing 0 and ∞ only
            return None;
        }
        let p = d - a;
        let disc = p * p + 4.0 * b * c;
        let scale = p.norm_sqr() + 4.0 * (b * c).norm();
        let candidates: Vec<Complex64> = if disc.norm() <= tol.eps * scale.max(1.0) {
            vec![-p / (2.0 * c)]
        } else {
            let s = disc.sqrt();
            vec![(-p + s) / (2.0 * c), (-p - s) / (2.0 * c)]
        };
        candidates
            .into_iter()
            .filter(|z| (z.norm() - 1.0).abs() <= tol.eps.sqrt())
            .filter_map(|z| {
                let z = z / z.norm();
                let (d1, _) = self.derivatives_at(z).ok()?;
                let residual = (self.evaluate(z).ok()? - z).norm();
                (residual <= tol.eps.sqrt()).then_some(BoundaryFixedPoint {
                    zeta: z,
                    derivative: d1.re,
                    low_confidence: residual > tol.eps || d1.im.abs() > tol.eps,
                })
            })
            .max_by(|x, y| x.derivative.total_cmp(&y.derivative))
    }

    /// Translation number `a = φ''(ζ)·ζ` of a parabolic map fixing `ζ`.
    pub fn translation_number(&self) -> Result<Complex64> {
        let tol = Tolerances::default();
        let fp = self.boundary_fixed_point_with(&tol).ok_or(Error::NotParabolic)?;
        self.translation_number_at(fp.zeta, &tol)
    }

    /// Translation number at a prescribed fixed point.
    pub fn translation_number_at(&self, zeta: Complex64, tol: &Tolerances) -> Result<Complex64> {
        let (d1, d2) = self.derivatives_at(zeta)?;
        let fixed = (self.evaluate(zeta)? - zeta).norm() <= tol.eps;
        if !fixed || (d1 - 1.0).norm() > tol.eps {
            return Err(Error::NotParabolic);
        }
        Ok(d2 * zeta)
    }

    pub fn canonical_decomposition(&self) -> Result<CanonicalDecomposition> {
        let tol = Tolerances::default();
        let fp = self.boundary_fixed_point_with(&tol).ok_or(Error::NoBoundaryFixedPoint)?;
        let mut dec = self.decompose_at(fp.zeta)?;
        dec.low_confidence |= fp.low_confidence;
        Ok(dec)
    }

    /// Decomposition about a specific boundary fixed point `ζ`, e.g. to pick
    /// the attracting point of a hyperbolic automorphism.
    pub fn canonical_decomposition_at(&self, zeta: Complex64) -> Result<CanonicalDecomposition> {
        let tol = Tolerances::default();
        if !self.is_self_map_with(&tol) {
            return Err(Error::NotSelfMap);
        }
        if (zeta.norm() - 1.0).abs() > tol.eps
            || (self.evaluate(zeta)? - zeta).norm() > tol.eps
        {
            return Err(Error::NoBoundaryFixedPoint);
        }
        self.decompose_at(zeta / zeta.norm())
    }

    fn decompose_at(&self, zeta: Complex64) -> Result<CanonicalDecomposition> {
        let (d1, d2) = self.derivatives_at(zeta)?;
        let a = (d2 * zeta - d1 * d1 + d1) / d1;
        Ok(CanonicalDecomposition {
            zeta,
            t: d1.re,
            a,
            low_confidence: d1.im.abs() > DEFAULT_TOL,
        })
    }

    /// The numbers `b, c > 0` with `φ∘σ = ρ_{η,2b}` and `σ∘φ = ρ_{ζ,2c}`.
    pub fn alignment_numbers(&self) -> Result<(f64, f64)> {
        let tol = Tolerances::default();
        let zeta = self
            .contact_point_with(&tol)
            .ok_or_else(|| Error::NotEligible("map must be a non-automorphism touching the circle".into()))?;
        let eta = self.evaluate(zeta)?;
        let eta = eta / eta.norm();
        let sigma = self.krein_adjoint()?;
        let loose = Tolerances { eps: 1e-7, ..tol };
        let b = self.compose(&sigma).translation_number_at(eta, &loose)? / 2.0;
        let c = sigma.compose(self).translation_number_at(zeta, &loose)? / 2.0;
        for v in [b, c] {
            if v.re <= 0.0 || v.im.abs() > 1e-7 * (1.0 + v.norm()) {
                return Err(Error::NotEligible(format!(
                    "alignment number {v} is not real positive"
                )));
            }
        }
        Ok((b.re, c.re))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn self_map_examples() {
        assert!(LinearFractionalMap::rho(ONE, ONE).unwrap().is_self_map());
        let twice = LinearFractionalMap::new(c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), ONE).unwrap();
        assert!(!twice.is_self_map());
        for t in [0.5, 3.0] {
            let psi = LinearFractionalMap::psi(c(0.0, 1.0), t).unwrap();
            assert!(psi.is_self_map());
            assert!(psi.is_automorphism());
        }
    }

    #[test]
    fn classify_examples() {
        let rho = LinearFractionalMap::rho(ONE, ONE).unwrap();
        match rho.classify().unwrap() {
            MapClass::ParabolicNonAutomorphism { zeta, a } => {
                assert!((zeta - ONE).norm() < 1e-12);
                assert!((a - ONE).norm() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        let phi = LinearFractionalMap::psi(ONE, 2.0).unwrap().compose(&rho);
        match phi.classify().unwrap() {
            MapClass::BoundaryFixedNonParabolic { zeta, derivative } => {
                assert!((zeta - ONE).norm() < 1e-12);
                assert!((derivative - 2.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        let minus = LinearFractionalMap::rotation(-ONE).unwrap();
        assert_eq!(
            minus.classify().unwrap(),
            MapClass::Automorphism {
                order: AutomorphismOrder::Finite(2),
                kind: AutomorphismKind::Elliptic
            }
        );
        let half = LinearFractionalMap::new(c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), ONE).unwrap();
        assert_eq!(half.classify().unwrap(), MapClass::InteriorContact);
        let psi = LinearFractionalMap::psi(ONE, 2.0).unwrap();
        assert_eq!(
            psi.classify().unwrap(),
            MapClass::Automorphism {
                order: AutomorphismOrder::Infinite,
                kind: AutomorphismKind::Hyperbolic
            }
        );
        let twice = LinearFractionalMap::new(c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), ONE).unwrap();
        assert_eq!(twice.classify(), Err(Error::NotSelfMap));
    }

    #[test]
    fn classify_rotation_orders() {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        let r = LinearFractionalMap::rotation(w).unwrap();
        assert!(matches!(
            r.classify().unwrap(),
            MapClass::Automorphism { order: AutomorphismOrder::Finite(5), .. }
        ));
        let irrational = LinearFractionalMap::rotation(Complex64::from_polar(1.0, 1.0)).unwrap();
        assert!(matches!(
            irrational.classify().unwrap(),
            MapClass::Automorphism { order: AutomorphismOrder::Infinite, kind: AutomorphismKind::Elliptic }
        ));
        let parabolic_auto = LinearFractionalMap::rho(ONE, c(0.0, 1.5)).unwrap();
        assert!(matches!(
            parabolic_auto.classify().unwrap(),
            MapClass::Automorphism { order: AutomorphismOrder::Infinite, kind: AutomorphismKind::Parabolic }
        ));
        assert_eq!(
            LinearFractionalMap::identity().classify().unwrap(),
            MapClass::Automorphism {
                order: AutomorphismOrder::Finite(1),
                kind: AutomorphismKind::Identity
            }
        );
    }

    #[test]
    fn two_point_map() {
        // z ↦ −(z + 1)/2 sends 1 to −1
        let m = LinearFractionalMap::new(-ONE, -ONE, c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        match m.classify().unwrap() {
            MapClass::BoundaryToBoundary { zeta, eta, derivative } => {
                assert!((zeta - ONE).norm() < 1e-12);
                assert!((eta + ONE).norm() < 1e-12);
                assert!((derivative - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(m.boundary_fixed_point().is_none());
    }

    #[test]
    fn boundary_fixed_point_examples() {
        let rho = LinearFractionalMap::rho(ONE, ONE).unwrap();
        let fp = rho.boundary_fixed_point().unwrap();
        assert!((fp.zeta - ONE).norm() < 1e-12 && (fp.derivative - 1.0).abs() < 1e-12);
        let psi = LinearFractionalMap::psi(ONE, 4.0).unwrap();
        let fp = psi.boundary_fixed_point().unwrap();
        assert!((fp.zeta - ONE).norm() < 1e-12 && (fp.derivative - 4.0).abs() < 1e-12);
        let half = LinearFractionalMap::new(c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), ONE).unwrap();
        assert!(half.boundary_fixed_point().is_none());
        // parabolic automorphism: double root
        let zeta = Complex64::from_polar(1.0, 0.7);
        let pa = LinearFractionalMap::rho(zeta, c(0.0, -2.0)).unwrap();
        let fp = pa.boundary_fixed_point().unwrap();
        assert!((fp.zeta - zeta).norm() < 1e-7);
    }

    #[test]
    fn translation_number_examples() {
        let rho = LinearFractionalMap::rho(ONE, ONE).unwrap();
        assert!((rho.translation_number().unwrap() - ONE).norm() < 1e-12);
        assert_eq!(LinearFractionalMap::identity().translation_number().unwrap(), c(0.0, 0.0));
        let zeta = Complex64::from_polar(1.0, -2.1);
        let a = c(0.7, -1.3);
        let r = LinearFractionalMap::rho(zeta, a).unwrap();
        assert!((r.translation_number().unwrap() - a).norm() < 1e-12);
        let psi = LinearFractionalMap::psi(ONE, 3.0).unwrap();
        assert_eq!(psi.translation_number(), Err(Error::NotParabolic));
    }

    #[test]
    fn canonical_decomposition_examples() {
        let zeta = Complex64::from_polar(1.0, 0.4);
        let psi = LinearFractionalMap::psi(zeta, 3.0).unwrap();
        let dec = psi.canonical_decomposition().unwrap();
        assert!((dec.zeta - zeta).norm() < 1e-12);
        assert!((dec.t - 3.0).abs() < 1e-12 && dec.a.norm() < 1e-12);

        let rho = LinearFractionalMap::rho(ONE, ONE).unwrap();
        let dec = rho.canonical_decomposition().unwrap();
        assert!((dec.t - 1.0).abs() < 1e-12 && (dec.a - ONE).norm() < 1e-12);

        let phi = LinearFractionalMap::psi(ONE, 4.0).unwrap().compose(&rho);
        let dec = phi.canonical_decomposition().unwrap();
        assert!((dec.t - 4.0).abs() < 1e-12 && (dec.a - ONE).norm() < 1e-12);
        assert!(dec.reconstruct().unwrap().approx_eq(&phi, 1e-12));

        let half = LinearFractionalMap::new(c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), ONE).unwrap();
        assert_eq!(half.canonical_decomposition(), Err(Error::NoBoundaryFixedPoint));
    }

    #[test]
    fn decomposition_at_attracting_point() {
        let zeta = Complex64::from_polar(1.0, 1.1);
        let psi = LinearFractionalMap::psi(zeta, 0.25).unwrap();
        let dec = psi.canonical_decomposition_at(zeta).unwrap();
        assert!((dec.t - 0.25).abs() < 1e-12 && dec.a.norm() < 1e-12);
        let dec = psi.canonical_decomposition().unwrap();
        assert!((dec.zeta + zeta).norm() < 1e-12 && (dec.t - 4.0).abs() < 1e-12);
    }

    #[test]
    fn alignment_numbers_examples() {
        let rho = LinearFractionalMap::rho(ONE, ONE).unwrap();
        let (b, c_) = rho.alignment_numbers().unwrap();
        assert!((b - 1.0).abs() < 1e-10 && (c_ - 1.0).abs() < 1e-10);
        let phi_sigma = rho.compose(&rho.krein_adjoint().unwrap());
        assert!(phi_sigma.approx_eq(&LinearFractionalMap::rho(ONE, c(2.0 * b, 0.0)).unwrap(), 1e-12));
        assert!(LinearFractionalMap::psi(ONE, 2.0).unwrap().alignment_numbers().is_err());
    }
}
