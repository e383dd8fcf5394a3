use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::linalg::singular_values;
use super::{Provenance, TruncatedMatrix};
use crate::error::{Error, Result};
use crate::moebius::LinearFractionalMap;

/// Number of circle samples used for Fourier coefficients.
pub const FFT_SIZE: usize = 8192;

fn truncated_product(p: &[Complex64], q: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, a) in p.iter().enumerate().take(len) {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, b) in q.iter().enumerate().take(len - i) {
            out[i + j] += a * b;
        }
    }
    out
}

/// Matrix of `C_φ` on `span{1, z, …, z^N}`: column `j` holds the first `N+1`
/// Taylor coefficients of `φ^j`.
pub fn h2_composition_matrix(map: &LinearFractionalMap, n: usize) -> Result<TruncatedMatrix> {
    if !map.is_self_map() {
        return Err(Error::NotSelfMap);
    }
    let [a, b, c, d] = map.coeffs();
    if c.norm() >= d.norm() {
        return Err(Error::SeriesDivergence);
    }
    let len = n + 1;
    // 1/(cz+d) = (1/d) Σ (-c/d)^k z^k
    let r = -c / d;
    let mut geo = Vec::with_capacity(len);
    let mut term = Complex64::new(1.0, 0.0) / d;
    for _ in 0..len {
        geo.push(term);
        term *= r;
    }
    let mut num = vec![Complex64::new(0.0, 0.0); len];
    num[0] = b;
    if len > 1 {
        num[1] = a;
    }
    let phi = truncated_product(&num, &geo, len);

    let mut m = DMatrix::from_element(len, len, Complex64::new(0.0, 0.0));
    let mut power = vec![Complex64::new(0.0, 0.0); len];
    power[0] = Complex64::new(1.0, 0.0);
    for j in 0..len {
        for (i, v) in power.iter().enumerate() {
            m[(i, j)] = *v;
        }
        power = truncated_product(&power, &phi, len);
    }
    Ok(TruncatedMatrix { entries: m, provenance: Provenance::H2Composition { n } })
}

/// Fourier coefficients `ĝ(k)` for `k = -n..=n`, indexed by `k + n`.
pub fn fourier_coefficients<F>(symbol: F, n: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let size = FFT_SIZE.max((2 * n + 2).next_power_of_two());
    let mut buf: Vec<Complex64> = (0..size)
        .map(|k| symbol(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / size as f64)))
        .collect();
    FftPlanner::new().plan_fft_forward(size).process(&mut buf);
    let scale = 1.0 / size as f64;
    (-(n as i64)..=n as i64)
        .map(|k| buf[k.rem_euclid(size as i64) as usize] * scale)
        .collect()
}

/// Matrix of the Toeplitz operator `T_g` on `span{1, …, z^N}`:
/// entry `(i, j) = ĝ(i - j)`.
pub fn h2_toeplitz_matrix<F>(symbol: F, n: usize) -> TruncatedMatrix
where
    F: Fn(Complex64) -> Complex64,
{
    let coeffs = fourier_coefficients(symbol, n);
    let len = n + 1;
    let m = DMatrix::from_fn(len, len, |i, j| coeffs[(i as i64 - j as i64 + n as i64) as usize]);
    TruncatedMatrix { entries: m, provenance: Provenance::H2Toeplitz { n } }
}

/// The weight `w_γ(z) = sqrt(1 - |γ⁻¹(0)|²) / |1 - conj(γ⁻¹(0)) z|`.
pub fn unitary_weight(gamma: &LinearFractionalMap) -> Result<impl Fn(Complex64) -> Complex64> {
    let p = gamma.inverse().evaluate(Complex64::new(0.0, 0.0))?;
    let num = (1.0 - p.norm_sqr()).max(0.0).sqrt();
    Ok(move |z: Complex64| Complex64::new(num / (1.0 - p.conj() * z).norm(), 0.0))
}

/// `T_{w_γ} C_γ` truncated; equals the unitary `U_γ` up to a compact operator.
pub fn h2_unitary_matrix(gamma: &LinearFractionalMap, n: usize) -> Result<TruncatedMatrix> {
    if !gamma.is_automorphism() {
        return Err(Error::NotAutomorphism);
    }
    let w = unitary_weight(gamma)?;
    let t = h2_toeplitz_matrix(w, n);
    let c = h2_composition_matrix(gamma, n)?;
    Ok(TruncatedMatrix { entries: t.entries * c.entries, provenance: Provenance::H2Unitary { n } })
}

/// Singular values (descending) of each member of a family of truncations.
pub fn compactness_profile<F>(family: F, sizes: &[usize]) -> Result<Vec<(usize, Vec<f64>)>>
where
    F: Fn(usize) -> Result<TruncatedMatrix>,
{
    sizes.iter().map(|&n| Ok((n, singular_values(&family(n)?.entries)))).collect()
}

/// Truncation of `C_φ* - |φ'(ζ)|⁻¹ C_σ` for a non-automorphism `φ` touching
/// the circle at `ζ`, with `σ` its Krein adjoint. The operator is compact.
pub fn adjoint_residual_matrix(map: &LinearFractionalMap, n: usize) -> Result<TruncatedMatrix> {
    let zeta = map.contact_point().ok_or(Error::NotSelfMap)?;
    let d1 = map.derivatives_at(zeta)?.0.norm();
    let sigma = map.krein_adjoint()?;
    let cphi = h2_composition_matrix(map, n)?.entries;
    let csig = h2_composition_matrix(&sigma, n)?.entries;
    let r = cphi.adjoint() - csig * Complex64::new(1.0 / d1, 0.0);
    Ok(TruncatedMatrix { entries: r, provenance: Provenance::Residual })
}

/// Leading `n×n` block of `M*M - I` with `M = T_{w_γ} C_γ` computed at size
/// `2n`, so truncation tails do not reach the block.
pub fn unitary_gram_defect(gamma: &LinearFractionalMap, n: usize) -> Result<TruncatedMatrix> {
    let big = h2_unitary_matrix(gamma, 2 * n)?.entries;
    let cols = big.columns(0, n + 1).into_owned();
    let g = cols.adjoint() * cols - DMatrix::identity(n + 1, n + 1);
    Ok(TruncatedMatrix { entries: g, provenance: Provenance::Residual })
}
