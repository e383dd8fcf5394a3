use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::laurent::{golden_max, winding_number_with, LaurentPolynomial};
use crate::error::Error;

const INITIAL_SAMPLES: usize = 257;
const MAX_SAMPLES: usize = 1 << 16;

type Param = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A parametric curve `[0,1] → C` with adaptively refined samples.
#[derive(Clone)]
pub struct Curve {
    pub label: String,
    f: Param,
    samples: Vec<(f64, Complex64)>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({}, {} samples)", self.label, self.samples.len())
    }
}

impl Curve {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        let f: Param = Arc::new(f);
        let mut samples: Vec<(f64, Complex64)> = (0..INITIAL_SAMPLES)
            .map(|k| {
                let s = k as f64 / (INITIAL_SAMPLES - 1) as f64;
                (s, f(s))
            })
            .collect();
        let scale = samples.iter().map(|(_, z)| z.norm()).fold(1.0, f64::max);
        let chord = 2e-3 * scale;
        loop {
            let mut next = Vec::with_capacity(samples.len() * 2);
            let mut changed = false;
            for w in samples.windows(2) {
                next.push(w[0]);
                if (w[1].1 - w[0].1).norm() > chord && w[1].0 - w[0].0 > 1e-9 {
                    let s = 0.5 * (w[0].0 + w[1].0);
                    next.push((s, f(s)));
                    changed = true;
                }
            }
            next.push(*samples.last().expect("nonempty"));
            samples = next;
            if !changed || samples.len() > MAX_SAMPLES {
                break;
            }
        }
        Self { label: label.into(), f, samples }
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        (self.f)(s)
    }

    pub fn samples(&self) -> &[(f64, Complex64)] {
        &self.samples
    }

    /// The same curve with a midpoint inserted in every sample interval.
    pub fn refined(&self) -> Self {
        let mut samples = Vec::with_capacity(2 * self.samples.len());
        for w in self.samples.windows(2) {
            samples.push(w[0]);
            let s = 0.5 * (w[0].0 + w[1].0);
            samples.push((s, self.eval(s)));
        }
        samples.extend(self.samples.last().copied());
        Self { label: self.label.clone(), f: self.f.clone(), samples }
    }

    /// Distance from `lambda` to the curve: nearest samples refined by a
    /// golden-section search on the parametrisation.
    pub fn distance(&self, lambda: Complex64) -> f64 {
        let n = self.samples.len();
        let mut order: Vec<(usize, f64)> =
            self.samples.iter().enumerate().map(|(k, (_, z))| (k, (z - lambda).norm())).collect();
        order.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut best = order[0].1;
        for &(k, _) in order.iter().take(4) {
            let lo = self.samples[k.saturating_sub(1)].0;
            let hi = self.samples[(k + 1).min(n - 1)].0;
            let g = |s: f64| -(self.eval(s) - lambda).norm();
            let s = golden_max(&g, lo, hi);
            best = best.min(-g(s));
        }
        best
    }

    fn max_modulus(&self) -> f64 {
        let (k, m) = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, (_, z))| (k, z.norm()))
            .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
        let n = self.samples.len();
        let lo = self.samples[k.saturating_sub(1)].0;
        let hi = self.samples[(k + 1).min(n - 1)].0;
        let g = |s: f64| self.eval(s).norm();
        m.max(g(golden_max(&g, lo, hi)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// The essential spectrum itself.
    Exact,
    /// A subset of the essential spectrum.
    Inclusion,
}

/// A union of parametric curves, images of the closed disk under
/// polynomials, winding-number mismatch sets and points.
#[derive(Debug, Clone)]
pub struct SpectrumRegion {
    pub kind: RegionKind,
    pub curves: Vec<Curve>,
    /// Each polynomial contributes `p(closed disk)`.
    pub polynomial_disks: Vec<LaurentPolynomial>,
    /// Each pair contributes the `z0` off both circle images around which the
    /// two have different winding numbers.
    pub winding_mismatch: Vec<(LaurentPolynomial, LaurentPolynomial)>,
    pub points: Vec<Complex64>,
    pub tolerance: f64,
}

impl SpectrumRegion {
    pub fn empty(kind: RegionKind, tolerance: f64) -> Self {
        Self {
            kind,
            curves: Vec::new(),
            polynomial_disks: Vec::new(),
            winding_mismatch: Vec::new(),
            points: Vec::new(),
            tolerance,
        }
    }

    pub fn add_point(&mut self, z: Complex64) {
        if !self.points.iter().any(|p| (p - z).norm() <= self.tolerance) {
            self.points.push(z);
        }
    }

    /// Adds `p(closed disk)`, or a point when `p` is constant.
    pub fn add_polynomial_disk(&mut self, p: LaurentPolynomial) {
        if p.is_constant() {
            self.add_point(p.coeff(0));
        } else {
            self.polynomial_disks.push(p);
        }
    }

    /// Adds `p(T)`, or a point when `p` is constant.
    pub fn add_circle_image(&mut self, label: &str, p: &LaurentPolynomial) {
        if p.is_constant() {
            self.add_point(p.coeff(0));
        } else {
            let q = p.clone();
            self.curves.push(Curve::new(label, move |s| q.eval(Complex64::from_polar(1.0, 2.0 * PI * s))));
        }
    }

    pub fn union(mut self, other: SpectrumRegion) -> SpectrumRegion {
        self.curves.extend(other.curves);
        self.polynomial_disks.extend(other.polynomial_disks);
        self.winding_mismatch.extend(other.winding_mismatch);
        for p in other.points {
            self.add_point(p);
        }
        self.tolerance = self.tolerance.max(other.tolerance);
        if other.kind == RegionKind::Inclusion {
            self.kind = RegionKind::Inclusion;
        }
        self
    }

    pub fn contains(&self, lambda: Complex64) -> bool {
        let tol = self.tolerance;
        self.points.iter().any(|p| (p - lambda).norm() <= tol)
            || self.polynomial_disks.iter().any(|p| disk_contains(p, lambda, tol))
            || self.curves.iter().any(|c| c.distance(lambda) <= tol)
            || self.winding_mismatch.iter().any(|(a, b)| {
                match (winding_number_with(a, lambda, tol), winding_number_with(b, lambda, tol)) {
                    (Ok(x), Ok(y)) => x != y,
                    _ => false,
                }
            })
    }

    /// `max |λ|` over the region.
    pub fn radius(&self) -> f64 {
        let pts = self.points.iter().map(|p| p.norm());
        let disks = self.polynomial_disks.iter().map(|p| p.circle_max());
        let curves = self.curves.iter().map(|c| c.max_modulus());
        pts.chain(disks).chain(curves).fold(0.0, f64::max)
    }

    /// Every curve with one more level of refinement.
    pub fn refined(&self) -> Self {
        Self { curves: self.curves.iter().map(Curve::refined).collect(), ..self.clone() }
    }

    /// Boundary samples: curve samples and the circle images of the disks.
    pub fn boundary_samples(&self, per_disk: usize) -> Vec<(String, usize, f64, Complex64)> {
        let mut out = Vec::new();
        for (ci, c) in self.curves.iter().enumerate() {
            for &(s, z) in c.samples() {
                out.push((format!("curve:{}", c.label), ci, s, z));
            }
        }
        for (di, p) in self.polynomial_disks.iter().enumerate() {
            for k in 0..per_disk {
                let s = k as f64 / per_disk as f64;
                out.push(("disk".to_string(), di, s, p.eval(Complex64::from_polar(1.0, 2.0 * PI * s))));
            }
        }
        for (pi, p) in self.points.iter().enumerate() {
            out.push(("point".to_string(), pi, 0.0, *p));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let cplx = |z: &Complex64| json!([z.re, z.im]);
        let poly = |p: &LaurentPolynomial| {
            json!({"min_degree": p.min_degree(), "coeffs": p.coeffs().iter().map(cplx).collect::<Vec<_>>()})
        };
        json!({
            "kind": self.kind,
            "tolerance": self.tolerance,
            "curves": self.curves.iter().map(|c| json!({
                "label": c.label,
                "samples": c.samples().iter().map(|(_, z)| cplx(z)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "disks": self.polynomial_disks.iter().map(poly).collect::<Vec<_>>(),
            "winding_mismatch": self.winding_mismatch.iter().map(|(a, b)| json!([poly(a), poly(b)])).collect::<Vec<_>>(),
            "points": self.points.iter().map(cplx).collect::<Vec<_>>(),
        })
    }
}

fn disk_contains(p: &LaurentPolynomial, lambda: Complex64, tol: f64) -> bool {
    match winding_number_with(p, lambda, tol) {
        Ok(w) => w >= 1,
        Err(Error::VanishesOnCircle) => true,
        Err(Error::CrossCheckMismatch { roots, .. }) => roots >= 1,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disk_membership() {
        let mut r = SpectrumRegion::empty(RegionKind::Exact, 1e-9);
        r.add_polynomial_disk(LaurentPolynomial::new(1, vec![c(0.5, 0.0)]));
        assert!(r.contains(c(0.0, 0.0)));
        assert!(r.contains(c(0.3, 0.3)));
        assert!(r.contains(c(0.5, 0.0)));
        assert!(!r.contains(c(0.36, 0.36)));
        assert!((r.radius() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn curve_distance() {
        let curve = Curve::new("segment", |s| c(s, 0.0));
        assert!(curve.distance(c(0.5, 0.0)) < 1e-12);
        assert!((curve.distance(c(0.5, 0.3)) - 0.3).abs() < 1e-9);
        assert!((curve.distance(c(2.0, 0.0)) - 1.0).abs() < 1e-12);
        let spiral = Curve::new("spiral", |x| {
            if x == 0.0 { c(0.0, 0.0) } else { (c(1.0, 1.0) * x.ln()).exp() }
        });
        let on = (c(1.0, 1.0) * 0.37f64.ln()).exp();
        assert!(spiral.distance(on) < 1e-12);
        assert!(spiral.refined().samples().len() > spiral.samples().len());
    }

    #[test]
    fn constants_become_points() {
        let mut r = SpectrumRegion::empty(RegionKind::Exact, 1e-9);
        r.add_polynomial_disk(LaurentPolynomial::zero());
        r.add_circle_image("p0", &LaurentPolynomial::zero());
        assert_eq!(r.points, vec![c(0.0, 0.0)]);
        assert!(r.curves.is_empty());
        assert!(r.contains(c(0.0, 0.0)));
        assert!(!r.contains(c(1e-6, 0.0)));
        let js = r.to_json();
        assert_eq!(js["points"][0], json!([0.0, 0.0]));
    }
}
