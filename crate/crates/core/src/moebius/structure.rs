use num_complex::Complex64;
use serde::Serialize;

use super::classify::{AutomorphismOrder, MapClass, Tolerances};
use super::map::LinearFractionalMap;
use crate::error::Result;

/// The rows of the classification of `C*(T_z, C_φ)/K` for a single
/// linear-fractional self-map `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "row", rename_all = "snake_case")]
pub enum StructureRow {
    /// `‖φ‖∞ < 1`.
    Compact,
    FiniteOrderAutomorphism { q: u32 },
    InfiniteOrderAutomorphism,
    /// Non-automorphism with `φ(ζ) = ζ`, `φ'(ζ) = 1`.
    ParabolicFixed { zeta: Complex64 },
    /// Non-automorphism with `φ(ζ) = ζ`, `φ'(ζ) ≠ 1`.
    NonParabolicFixed { zeta: Complex64, derivative: f64 },
    /// Non-automorphism with `φ(ζ) = η ≠ ζ`.
    TwoPoint { zeta: Complex64, eta: Complex64 },
}

impl StructureRow {
    pub fn tag(&self) -> &'static str {
        match self {
            StructureRow::Compact => "C(T)",
            StructureRow::FiniteOrderAutomorphism { .. } => "C(T) ⋊ Z/qZ",
            StructureRow::InfiniteOrderAutomorphism => "C(T) ⋊ Z",
            StructureRow::ParabolicFixed { .. } => "unitization of C_ζ(T) ⊕ C_0([0,1])",
            StructureRow::NonParabolicFixed { .. } => {
                "unitization of C_ζ(T) ⊕ (C_0([0,1]) ⋊_β Z)"
            }
            StructureRow::TwoPoint { .. } => "D(ζ,η) ⊂ C(T) ⊕ M_2(C([0,1]))",
        }
    }

    /// The algebra `C*(T_z, C_φ)/K` is isomorphic to, with parameters filled in.
    pub fn description(&self) -> String {
        match *self {
            StructureRow::Compact => "C(T)".to_string(),
            StructureRow::FiniteOrderAutomorphism { q } => {
                format!("C(T) ⋊_α Z/{q}Z, α_n(f) = f ∘ φ_n")
            }
            StructureRow::InfiniteOrderAutomorphism => "C(T) ⋊_α Z, α_n(f) = f ∘ φ_n".to_string(),
            StructureRow::ParabolicFixed { zeta } => format!(
                "unitization of C_ζ(T) ⊕ C_0([0,1]) ≅ {{(w, v) ∈ C(T) ⊕ C([0,1]) : w(ζ) = v(0)}}, ζ = {}",
                fmt_c(zeta)
            ),
            StructureRow::NonParabolicFixed { zeta, derivative } => format!(
                "unitization of C_ζ(T) ⊕ (C_0([0,1]) ⋊_β Z), β_n(f)(x) = f(x^({}^n)), ζ = {}",
                fmt_r(derivative),
                fmt_c(zeta)
            ),
            StructureRow::TwoPoint { zeta, eta } => format!(
                "{{(w, V) ∈ C(T) ⊕ M_2(C([0,1])) : V(0) = diag(w(ζ), w(η))}}, ζ = {}, η = {}",
                fmt_c(zeta),
                fmt_c(eta)
            ),
        }
    }
}

fn fmt_r(x: f64) -> String {
    let r = (x * 1e10).round() / 1e10;
    format!("{}", if r == 0.0 { 0.0 } else { r })
}

fn fmt_c(z: Complex64) -> String {
    if z.im.abs() < 1e-12 {
        fmt_r(z.re)
    } else {
        format!("{}{}{}i", fmt_r(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_r(z.im.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub class: MapClass,
    pub row: StructureRow,
    pub tag: String,
    pub description: String,
    pub notes: Vec<String>,
}

/// Looks up the structure of `C*(T_z, C_φ)/K`.
pub fn shift_algebra_structure(map: &LinearFractionalMap) -> Result<StructureReport> {
    shift_algebra_structure_with(map, &Tolerances::default())
}

pub fn shift_algebra_structure_with(
    map: &LinearFractionalMap,
    tol: &Tolerances,
) -> Result<StructureReport> {
    let class = map.classify_with(tol)?;
    let mut notes = Vec::new();
    let row = match class {
        MapClass::InteriorContact => {
            notes.push("C_φ is compact".to_string());
            StructureRow::Compact
        }
        MapClass::Automorphism { order: AutomorphismOrder::Finite(q), .. } => {
            StructureRow::FiniteOrderAutomorphism { q }
        }
        MapClass::Automorphism { order: AutomorphismOrder::Infinite, .. } => {
            notes.push(format!("no finite order up to {}", tol.q_max));
            StructureRow::InfiniteOrderAutomorphism
        }
        MapClass::ParabolicNonAutomorphism { zeta, .. } => {
            notes.push("C*(C_φ, K)/K ≅ unitization of C_0([0,1])".to_string());
            StructureRow::ParabolicFixed { zeta }
        }
        MapClass::BoundaryFixedNonParabolic { zeta, derivative } => {
            notes.push(
                "C*(C_φ, K)/K ≅ unitization of C_0([0,1]) ⋊_β Z, β_n(f)(x) = f(x^(φ'(ζ)^n))"
                    .to_string(),
            );
            notes.push(
                "K_0(C*(C_φ, K)) ≅ Z ⊕ Z generated by [I] and a rank-one projection; K_1 ≅ 0"
                    .to_string(),
            );
            StructureRow::NonParabolicFixed { zeta, derivative }
        }
        MapClass::BoundaryToBoundary { zeta, eta, .. } => StructureRow::TwoPoint { zeta, eta },
    };
    if let Some(bfp) = map.boundary_fixed_point_with(tol) {
        if bfp.low_confidence {
            notes.push("boundary fixed point decided within tolerance (low confidence)".into());
        }
    }
    Ok(StructureReport {
        class,
        row,
        tag: row.tag().to_string(),
        description: row.description(),
        notes,
    })
}
