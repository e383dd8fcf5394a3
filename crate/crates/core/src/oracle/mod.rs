//! Finite sections used to check the algebraic layers: trajectorial matrices
//! `τ_x(b)` on `ℓ²(Z)` and Hardy-space matrices of composition, Toeplitz and
//! unitary operators.

mod h2;
mod linalg;
mod tau;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

pub use h2::{
    adjoint_residual_matrix, compactness_profile, fourier_coefficients, h2_composition_matrix,
    h2_toeplitz_matrix, h2_unitary_matrix, unitary_gram_defect, unitary_weight, FFT_SIZE,
};
pub use linalg::{log_det, singular_values, smallest_singular_value};
pub use tau::{omega_complement, omega_estimate, sigma_min, tau_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    TauX { x: f64, nu: usize },
    H2Composition { n: usize },
    H2Toeplitz { n: usize },
    H2Unitary { n: usize },
    Residual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMatrix {
    pub entries: DMatrix<Complex64>,
    pub provenance: Provenance,
}

impl TruncatedMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.entries)
    }
}
