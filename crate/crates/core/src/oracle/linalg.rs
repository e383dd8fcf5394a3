use nalgebra::DMatrix;
use num_complex::Complex64;

/// `log|det A|` and the phase `det A / |det A|`, from a partially pivoted LU
/// factorisation. `None` for an exactly singular matrix.
pub fn log_det(a: &DMatrix<Complex64>) -> Option<(f64, Complex64)> {
    let n = a.nrows();
    if n == 0 {
        return Some((0.0, Complex64::new(1.0, 0.0)));
    }
    let lu = a.clone().lu();
    let u = lu.u();
    let mut log_abs = 0.0;
    let mut phase: Complex64 = lu.p().determinant();
    for i in 0..n {
        let p = u[(i, i)];
        let m = p.norm();
        if m == 0.0 || !m.is_finite() {
            return None;
        }
        log_abs += m.ln();
        phase *= p / m;
    }
    Some((log_abs, phase))
}

/// Smallest pivot modulus of the LU factorisation relative to the largest
/// entry of `a`.
pub fn relative_min_pivot(a: &DMatrix<Complex64>) -> f64 {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let u = a.clone().lu().u();
    (0..a.nrows()).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min) / scale
}

pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Smallest singular value. When the SVD puts it near round-off level the
/// value is recomputed as `1/‖A⁻¹‖₂`, which keeps relative accuracy for the
/// triangular and banded matrices used here.
pub fn smallest_singular_value(a: &DMatrix<Complex64>) -> f64 {
    let s = singular_values(a);
    let (Some(&smax), Some(&smin)) = (s.first(), s.last()) else {
        return 0.0;
    };
    if smin > 1e-8 * smax {
        return smin;
    }
    let Some(inv) = a.clone().lu().try_inverse() else {
        return smin;
    };
    let inv_norm = singular_values(&inv).first().copied().unwrap_or(0.0);
    if inv_norm.is_finite() && inv_norm > 0.0 {
        1.0 / inv_norm
    } else {
        smin
    }
}
