use serde::Serialize;

use crate::DEFAULT_TOL;

/// Largest denominator searched for a rational relation between logarithms.
pub const MAX_DENOMINATOR: i64 = 64;

/// `t1 = t^{n1}` and `t2 = t^{n2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommonBase {
    pub t: f64,
    pub n1: i64,
    pub n2: i64,
}

/// Finds a base `t` of which both `t1` and `t2` are integer powers, by a
/// continued-fraction search for `ln t1 / ln t2 = n1/n2` with `|n1|, |n2| ≤ 64`.
/// Returns `None` when no such relation holds within tolerance.
pub fn common_base(t1: f64, t2: f64) -> Option<CommonBase> {
    if !(t1 > 0.0 && t2 > 0.0 && t1.is_finite() && t2.is_finite()) {
        return None;
    }
    let (l1, l2) = (t1.ln(), t2.ln());
    if l1.abs() <= 1e-12 || l2.abs() <= 1e-12 {
        return None;
    }
    let ratio = l1 / l2;
    let sign = ratio.signum() as i64;
    let mut x = ratio.abs();
    // convergents p/q of |ratio|
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e6 {
            break;
        }
        let a = a as i64;
        let (p, q) = (a * p1 + p0, a * q1 + q0);
        if p > MAX_DENOMINATOR || q > MAX_DENOMINATOR {
            break;
        }
        if (q as f64 * l1 - (sign * p) as f64 * l2).abs() < DEFAULT_TOL && p > 0 {
            let n1 = sign * p;
            let n2 = q;
            return Some(CommonBase { t: (l1 / n1 as f64).exp(), n1, n2 });
        }
        (p0, q0, p1, q1) = (p1, q1, p, q);
        let frac = x - a as f64;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let cb = common_base(4.0, 16.0).unwrap();
        assert_eq!((cb.n1, cb.n2), (1, 2));
        assert!((cb.t - 4.0).abs() < 1e-12);
        let cb = common_base(8.0, 4.0).unwrap();
        assert_eq!((cb.n1, cb.n2), (3, 2));
        assert!((cb.t - 2.0).abs() < 1e-12);
        assert_eq!(common_base(2.0, 3.0), None);
    }

    #[test]
    fn opposite_sides_of_one() {
        let cb = common_base(4.0, 0.5).unwrap();
        assert_eq!((cb.n1, cb.n2), (-2, 1));
        assert!((cb.t - 0.5).abs() < 1e-12);
        assert!((cb.t.powi(cb.n1 as i32) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn equal_bases() {
        let cb = common_base(3.0, 3.0).unwrap();
        assert_eq!((cb.n1, cb.n2), (1, 1));
        assert_eq!(common_base(1.0, 3.0), None);
    }
}
