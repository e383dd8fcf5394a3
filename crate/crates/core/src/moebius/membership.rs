use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::classify::{MapClass, Tolerances};
use super::map::LinearFractionalMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum MembershipCertificate {
    /// `ψ'(ζ) = φ'(ζ)^n`.
    Power { n: i64 },
    /// `ψ` is an automorphism of the disk.
    Automorphism,
    /// `ψ` does not fix `ζ`.
    NotFixed,
    /// `ln ψ'(ζ) / ln φ'(ζ)` is not an integer in the searched range.
    NonIntegralLogRatio { ratio: f64 },
    /// `φ` is parabolic, so only parabolic `ψ` qualify.
    NotParabolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub certificate: MembershipCertificate,
}

/// Decides whether `C_ψ ∈ C*(C_φ, K)` for a linear-fractional `ψ` with
/// `‖ψ‖∞ = 1` and `C_ψ ≠ I`, where `φ` is a non-automorphism fixing a point
/// `ζ` of the circle.
pub fn membership(phi: &LinearFractionalMap, psi: &LinearFractionalMap) -> Result<Membership> {
    membership_with(phi, psi, &Tolerances::default())
}

pub fn membership_with(
    phi: &LinearFractionalMap,
    psi: &LinearFractionalMap,
    tol: &Tolerances,
) -> Result<Membership> {
    let (zeta, phi_deriv) = match phi.classify_with(tol) {
        Ok(MapClass::ParabolicNonAutomorphism { zeta, .. }) => (zeta, 1.0),
        Ok(MapClass::BoundaryFixedNonParabolic { zeta, derivative }) => (zeta, derivative),
        Ok(_) => {
            return Err(Error::PreconditionViolated(
                "phi must be a non-automorphism fixing a point of the unit circle".into(),
            ))
        }
        Err(Error::NotSelfMap) => {
            return Err(Error::PreconditionViolated("phi is not a self-map of the disk".into()))
        }
        Err(e) => return Err(e),
    };
    let class = match psi.classify_with(tol) {
        Ok(c) => c,
        Err(Error::NotSelfMap) => {
            return Err(Error::PreconditionViolated("psi is not a self-map of the disk".into()))
        }
        Err(e) => return Err(e),
    };
    if class == MapClass::InteriorContact {
        return Err(Error::PreconditionViolated("psi has sup-norm < 1 (C_psi is compact)".into()));
    }
    if psi.is_identity(tol.eps) {
        return Err(Error::PreconditionViolated("C_psi is the identity".into()));
    }
    if class.is_automorphism() {
        return Ok(Membership { member: false, certificate: MembershipCertificate::Automorphism });
    }
    let fixed = psi
        .evaluate(zeta)
        .map(|w| (w - zeta).norm() <= tol.eps)
        .unwrap_or(false);
    if !fixed {
        return Ok(Membership { member: false, certificate: MembershipCertificate::NotFixed });
    }
    let psi_deriv = psi.derivatives_at(zeta)?.0.re;

    if (phi_deriv - 1.0).abs() <= tol.eps {
        let member = (psi_deriv - 1.0).abs() <= tol.eps;
        let certificate = if member {
            MembershipCertificate::Power { n: 0 }
        } else {
            MembershipCertificate::NotParabolic
        };
        return Ok(Membership { member, certificate });
    }
    let ratio = psi_deriv.ln() / phi_deriv.ln();
    let n = ratio.round();
    if (ratio - n).abs() <= tol.eps && n.abs() <= tol.max_power as f64 {
        Ok(Membership { member: true, certificate: MembershipCertificate::Power { n: n as i64 } })
    } else {
        Ok(Membership {
            member: false,
            certificate: MembershipCertificate::NonIntegralLogRatio { ratio },
        })
    }
}

/// The two classical lower bounds for `‖Σ c_j C_{φ_j}‖²_e`.
///
/// The first is `(1/2π) Σ |c_j|² |J(φ_j)|`, where `J(φ)` is the set of circle
/// points sent to the circle (all of it for automorphisms, measure zero
/// otherwise). The second groups the terms touching the circle at `ζ` by
/// their boundary data `(φ_j(ζ), φ_j'(ζ))` and sums `|Σ c_j|² / |φ_j'(ζ)|`.
pub fn essential_norm_lower_bounds(
    terms: &[(Complex64, LinearFractionalMap)],
    zeta: Complex64,
) -> Result<(f64, f64)> {
    let tol = Tolerances::default();
    let mut measure_bound = 0.0;
    // (boundary value, derivative, accumulated coefficient)
    let mut groups: Vec<(Complex64, Complex64, Complex64)> = Vec::new();
    for (coef, map) in terms {
        if !map.is_self_map_with(&tol) {
            return Err(Error::NotSelfMap);
        }
        if map.is_automorphism_with(&tol) {
            // |J(φ)| = 2π for automorphisms
            measure_bound += coef.norm_sqr() * 2.0 * PI;
        }
        let Ok(value) = map.evaluate(zeta) else { continue };
        if (value.norm() - 1.0).abs() > tol.eps {
            continue;
        }
        let (d1, _) = map.derivatives_at(zeta)?;
        let same = |g: &(Complex64, Complex64, Complex64)| {
            (g.0 - value).norm() <= tol.eps && (g.1 - d1).norm() <= tol.eps * (1.0 + d1.norm())
        };
        match groups.iter_mut().find(|g| same(g)) {
            Some(g) => g.2 += coef,
            None => groups.push((value, d1, *coef)),
        }
    }
    let data_bound = groups.iter().map(|(_, d1, s)| s.norm_sqr() / d1.norm()).sum();
    Ok((measure_bound / (2.0 * PI), data_bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    fn phi4() -> LinearFractionalMap {
        LinearFractionalMap::psi(ONE, 4.0)
            .unwrap()
            .compose(&LinearFractionalMap::rho(ONE, ONE).unwrap())
    }

    #[test]
    fn iterate_is_member() {
        let phi = phi4();
        let m = membership(&phi, &phi.compose(&phi)).unwrap();
        assert_eq!(m, Membership { member: true, certificate: MembershipCertificate::Power { n: 2 } });
    }

    #[test]
    fn automorphism_is_not_member() {
        let m = membership(&phi4(), &LinearFractionalMap::psi(ONE, 2.0).unwrap()).unwrap();
        assert_eq!(m.certificate, MembershipCertificate::Automorphism);
        assert!(!m.member);
    }

    #[test]
    fn non_integral_log_ratio() {
        let psi = LinearFractionalMap::psi(ONE, 3.0)
            .unwrap()
            .compose(&LinearFractionalMap::rho(ONE, ONE).unwrap());
        let m = membership(&phi4(), &psi).unwrap();
        assert!(!m.member);
        match m.certificate {
            MembershipCertificate::NonIntegralLogRatio { ratio } => {
                assert!((ratio - 3f64.ln() / 4f64.ln()).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn krein_adjoint_is_negative_power() {
        let phi = phi4();
        let m = membership(&phi, &phi.krein_adjoint().unwrap()).unwrap();
        assert_eq!(m.certificate, MembershipCertificate::Power { n: -1 });
    }

    #[test]
    fn preconditions() {
        let phi = phi4();
        let half = LinearFractionalMap::new(
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            ONE,
        )
        .unwrap();
        assert!(matches!(membership(&phi, &half), Err(Error::PreconditionViolated(_))));
        assert!(matches!(
            membership(&phi, &LinearFractionalMap::identity()),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            membership(&LinearFractionalMap::psi(ONE, 2.0).unwrap(), &phi),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn bounds_examples() {
        let phi = phi4();
        let (j, d) = essential_norm_lower_bounds(&[(ONE, phi)], ONE).unwrap();
        assert_eq!(j, 0.0);
        assert!((d - 0.25).abs() < 1e-12);
        assert_eq!(essential_norm_lower_bounds(&[], ONE).unwrap(), (0.0, 0.0));

        let other = LinearFractionalMap::psi(ONE, 4.0)
            .unwrap()
            .compose(&LinearFractionalMap::rho(ONE, Complex64::new(2.0, 1.0)).unwrap());
        let (_, d) = essential_norm_lower_bounds(&[(ONE, phi), (-ONE, other)], ONE).unwrap();
        assert!(d.abs() < 1e-12);

        let (j, _) =
            essential_norm_lower_bounds(&[(Complex64::new(0.0, 2.0), LinearFractionalMap::identity())], ONE)
                .unwrap();
        assert!((j - 4.0).abs() < 1e-12);
    }
}
