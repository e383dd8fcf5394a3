//! Boundary Laurent polynomials, winding numbers, the Fredholm test for
//! crossed-product elements and essential-spectrum regions.

mod fredholm;
mod laurent;
mod region;

pub use fredholm::{
    boundary_polynomials, essential_spectrum_triangular, essential_spectrum_triangular_with,
    fredholm_conditions, is_fredholm_triangular, is_fredholm_triangular_with, spectral_inclusion,
    spectral_inclusion_with, FredholmDecision, FredholmOptions, FredholmReport, OmegaSample,
};
pub use laurent::{winding_number, winding_number_with, LaurentPolynomial, CIRCLE_SAMPLES};
pub use region::{Curve, RegionKind, SpectrumRegion};
