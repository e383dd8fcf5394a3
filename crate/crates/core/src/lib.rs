//! Composition operators induced by linear-fractional self-maps of the unit
//! disk, studied modulo the compact operators.
//!
//! The crate is organised in four layers:
//!
//! * [`moebius`]: exact coefficient algebra of linear-fractional maps,
//!   classification, canonical `Ψ ∘ ρ` decomposition, membership in
//!   `C*(C_φ, K)` and the structure table for `C*(T_z, C_φ)/K`.
//! * [`crossed`]: the unitized cyclic crossed product `C₀([0,1]) ⋊ Z` that
//!   models `C*(C_φ, K)/K`, with symbols stored as exponential sums `Σ cₖ x^{aₖ}`.
//! * [`spectra`]: boundary Laurent polynomials, winding numbers, Fredholm
//!   decisions and essential-spectrum regions.
//! * [`oracle`]: finite truncations (trajectorial matrices, Hardy-space
//!   matrices of composition / Toeplitz / unitary operators) used to check the
//!   algebraic layers numerically.
//!
//! JSON formats for maps and elements live in [`json`].

pub mod crossed;
pub mod error;
pub mod json;
pub mod moebius;
pub mod oracle;
pub mod spectra;

pub use num_complex::Complex64;

pub use crate::crossed::{common_base, CommonBase, CrossedProductElement, SymbolFunction};
pub use crate::error::{Error, Result};
pub use crate::moebius::{
    essential_norm_lower_bounds, membership, AutomorphismKind, AutomorphismOrder,
    BoundaryFixedPoint, CanonicalDecomposition, LinearFractionalMap, MapClass, Membership,
    MembershipCertificate, StructureReport, StructureRow, Tolerances,
};
pub use crate::spectra::{
    boundary_polynomials, essential_spectrum_triangular, fredholm_conditions,
    is_fredholm_triangular, spectral_inclusion, winding_number, FredholmDecision,
    FredholmOptions, FredholmReport, LaurentPolynomial, SpectrumRegion,
};

/// Default classification tolerance on normalized coefficients.
pub const DEFAULT_TOL: f64 = 1e-9;
