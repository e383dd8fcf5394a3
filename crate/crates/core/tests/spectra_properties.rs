use std::collections::BTreeMap;
use std::f64::consts::PI;

use calkin_core::oracle::{h2_composition_matrix, omega_estimate, sigma_min, tau_matrix};
use calkin_core::spectra::{
    essential_spectrum_triangular, fredholm_conditions, is_fredholm_triangular, spectral_inclusion,
    winding_number, FredholmDecision, FredholmOptions, LaurentPolynomial,
};
use calkin_core::{Complex64, CrossedProductElement, LinearFractionalMap, SymbolFunction};
use proptest::prelude::*;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn small(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(re, im)| c(re, im))
}

fn upsilon() -> impl Strategy<Value = Complex64> {
    (0.1f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| c(re, im))
}

fn laurent(lo: i64, hi: i64) -> impl Strategy<Value = LaurentPolynomial> {
    (lo..=hi, 0i64..=(hi - lo))
        .prop_flat_map(|(m, len)| (Just(m), prop::collection::vec(small(1.0), (len + 1) as usize)))
        .prop_map(|(m, coeffs)| LaurentPolynomial::new(m, coeffs))
}

/// Triangular elements with `f0` bounded away from zero.
fn triangular() -> impl Strategy<Value = CrossedProductElement> {
    let f0 = ((1.0f64..2.0), (0.0..2.0 * PI), prop::collection::vec((small(0.3), upsilon()), 0..=2))
        .prop_map(|(r, th, terms)| SymbolFunction::new(Complex64::from_polar(r, th), terms).unwrap());
    let fk = prop::collection::vec((small(1.0), upsilon()), 1..=2)
        .prop_map(|terms| SymbolFunction::new(c(0.0, 0.0), terms).unwrap());
    (prop::sample::select(vec![2.0, 3.0, 4.0, 0.5]), f0, prop::collection::vec(fk, 1..=3)).prop_map(|(t, f0, rest)| {
        let mut coeffs = BTreeMap::from([(0, f0)]);
        for (k, f) in rest.into_iter().enumerate() {
            coeffs.insert(k as i64 + 1, f);
        }
        CrossedProductElement::new(ONE, t, coeffs).unwrap()
    })
}

fn roots_winding(p: &LaurentPolynomial) -> i64 {
    p.roots().iter().filter(|r| r.norm() < 1.0).count() as i64 + p.min_degree()
}

fn argument_winding(p: &LaurentPolynomial) -> i64 {
    let m = 1 << 14;
    let vals: Vec<Complex64> = (0..=m).map(|k| p.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))).collect();
    let total: f64 = vals.windows(2).map(|w| (w[1] / w[0]).arg()).sum();
    (total / (2.0 * PI)).round() as i64
}

fn light() -> FredholmOptions {
    FredholmOptions { nu_schedule: vec![10, 20, 40], x_grid: vec![0.2, 0.5, 0.8], ..Default::default() }
}

fn disk_coset() -> CrossedProductElement {
    let phi = LinearFractionalMap::psi(ONE, 4.0).unwrap().compose(&LinearFractionalMap::rho(ONE, ONE).unwrap());
    CrossedProductElement::coset_of_composition(&phi, 4.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn degree_five_dual_method(coeffs in prop::collection::vec(small(1.0), 6)) {
        let p = LaurentPolynomial::new(0, coeffs);
        prop_assume!(!p.is_zero());
        prop_assert_eq!(roots_winding(&p), argument_winding(&p));
    }

    #[test]
    fn winding_scalar_and_shift_laws(p in laurent(-3, 4), k in small(3.0), s in -3i64..=3) {
        prop_assume!(k.norm() > 1e-3);
        if let Ok(w) = winding_number(&p, c(0.0, 0.0)) {
            prop_assert_eq!(winding_number(&p.scale(k), c(0.0, 0.0)).unwrap(), w);
            prop_assert_eq!(winding_number(&p.mul_z(s), c(0.0, 0.0)).unwrap(), w + s);
            prop_assert_eq!(w, argument_winding(&p));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn omega_matches_diagonal_product(e in triangular()) {
        let f0 = e.coeff(0);
        let t = e.base_t();
        for x in [0.3f64, 0.5, 0.7] {
            for mu in [3i32, 4, 5] {
                let product: Complex64 = (-mu + 1..mu).map(|j| f0.eval(x.powf(t.powi(j)))).product();
                let w = omega_estimate(&e, x, mu as usize, 80, 0).unwrap();
                prop_assert!((w - product).norm() < 1e-8 * product.norm());
            }
        }
    }

    #[test]
    fn triangular_decisions_agree(e in triangular(), shift in small(2.0)) {
        let e = e.add_scalar(shift);
        let report = fredholm_conditions(&e, &light());
        if report.decision != FredholmDecision::Inconclusive {
            prop_assert_eq!(report.decision == FredholmDecision::Fredholm, is_fredholm_triangular(&e).unwrap());
        }
    }

    #[test]
    fn outside_the_spectrum_is_fredholm(e in triangular(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let region = essential_spectrum_triangular(&e).unwrap();
        let lambda = c(re, im);
        // keep away from the boundary so both tests see the same side
        let near = [-1.0, 1.0].iter().flat_map(|&a| [c(a, 0.0), c(0.0, a)])
            .any(|d| region.contains(lambda + 0.05 * d));
        prop_assume!(!region.contains(lambda) && !near);
        let report = fredholm_conditions(&e.add_scalar(-lambda), &light());
        prop_assert_eq!(report.decision, FredholmDecision::Fredholm, "{:?}", report);
    }

    #[test]
    fn inclusion_inside_exact_region(e in triangular()) {
        let exact = essential_spectrum_triangular(&e).unwrap();
        let inc = spectral_inclusion(&e);
        let r = exact.radius() + 0.5;
        for i in 0..41 {
            for j in 0..41 {
                let lambda = c(-r + 2.0 * r * i as f64 / 40.0, -r + 2.0 * r * j as f64 / 40.0);
                if inc.contains(lambda) {
                    prop_assert!(exact.contains(lambda), "{lambda}");
                }
            }
        }
    }

    #[test]
    fn contains_is_monotone_and_refinement_stable(e1 in triangular(), e2 in triangular(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let r1 = essential_spectrum_triangular(&e1).unwrap();
        let r2 = essential_spectrum_triangular(&e2).unwrap();
        let lambda = c(re, im);
        let union = r1.clone().union(r2.clone());
        if r1.contains(lambda) || r2.contains(lambda) {
            prop_assert!(union.contains(lambda));
        }
        let near = [-1.0, 1.0].iter().flat_map(|&a| [c(a, 0.0), c(0.0, a)])
            .any(|d| r1.contains(lambda + 1e-6 * d) != r1.contains(lambda));
        if !near {
            prop_assert_eq!(r1.refined().contains(lambda), r1.contains(lambda));
        }
    }

    #[test]
    fn composition_matrix_is_antimultiplicative(a in small(0.2), b in small(0.2), cc in small(0.2), a2 in small(0.4), b2 in small(0.3)) {
        let phi = LinearFractionalMap::new(a, b, cc, ONE).unwrap();
        let psi = LinearFractionalMap::new(a2, b2, c(0.0, 0.0), ONE).unwrap();
        let n = 64;
        let lhs = h2_composition_matrix(&phi.compose(&psi), n).unwrap().entries;
        let rhs = h2_composition_matrix(&psi, n).unwrap().entries * h2_composition_matrix(&phi, n).unwrap().entries;
        let h = n / 2;
        prop_assert!((lhs.view((0, 0), (h, h)) - rhs.view((0, 0), (h, h))).norm() < 1e-8);
    }
}

#[test]
fn exchange_identity_on_truncations() {
    // C_φ C_{ρ_{η,a}} = C_{ρ_{ζ,φ'(ζ)a}} C_φ, i.e. M(ρ_η) M(φ) against M(φ) M(ρ_ζ) for matrices of C_·
    let phi = LinearFractionalMap::psi(ONE, 2.0).unwrap().compose(&LinearFractionalMap::rho(ONE, ONE).unwrap());
    let a = c(0.7, 0.3);
    let n = 128;
    let m = |f: &LinearFractionalMap| h2_composition_matrix(f, n).unwrap().entries;
    let lhs = m(&LinearFractionalMap::rho(ONE, a).unwrap().compose(&phi));
    let rhs = m(&phi.compose(&LinearFractionalMap::rho(ONE, 2.0 * a).unwrap()));
    let h = n / 2;
    assert!((lhs.view((0, 0), (h, h)) - rhs.view((0, 0), (h, h))).norm() < 1e-10);
    let prod_l = m(&phi) * m(&LinearFractionalMap::rho(ONE, a).unwrap());
    let prod_r = m(&LinearFractionalMap::rho(ONE, 2.0 * a).unwrap()) * m(&phi);
    let q = n / 8;
    let diff = (prod_l.view((0, 0), (q, q)) - prod_r.view((0, 0), (q, q))).norm();
    assert!(diff < 1e-6, "{diff}");
}

#[test]
fn pseudospectral_separation_over_x_grid() {
    let e = disk_coset();
    let nus = [50usize, 100, 200];
    let mut inner = vec![0.0f64; 3];
    let mut outer = vec![f64::INFINITY; 3];
    for k in 1..10 {
        let x = k as f64 / 10.0;
        for (i, &nu) in nus.iter().enumerate() {
            let m = tau_matrix(&e, x, nu);
            inner[i] = inner[i].max(sigma_min(&m, c(0.25, 0.0)));
            outer[i] = outer[i].min(sigma_min(&m, c(0.0, 0.75)));
        }
    }
    assert!(inner.windows(2).all(|w| w[1] < w[0]), "{inner:?}");
    assert!(outer.iter().all(|&s| s > 0.2), "{outer:?}");
    assert!(outer[2] >= 10.0 * inner[2]);
}

#[test]
fn spectrum_of_spiral_and_disk() {
    let a = c(1.0, 1.0);
    let rho = CrossedProductElement::coset_of_composition(&LinearFractionalMap::rho(ONE, a).unwrap(), 4.0).unwrap();
    let e = rho.add(&disk_coset()).unwrap();
    let region = essential_spectrum_triangular(&e).unwrap();
    for k in 0..64 {
        let x = k as f64 / 63.0;
        let spiral = if x == 0.0 { c(0.0, 0.0) } else { (a * x.ln()).exp() };
        assert!(region.contains(spiral), "x = {x}");
    }
    assert!(!region.contains(c(0.0, 0.5)));
    assert!(region.contains(c(1.0, 0.49)));
}
