use calkin_core::json::{
    element_to_json, parse_element, parse_element_value, parse_map, parse_map_value, parse_terms, snap, MapSpec,
};
use calkin_core::moebius::{membership_with, shift_algebra_structure_with};
use calkin_core::oracle::{sigma_min, tau_matrix};
use calkin_core::spectra::{
    boundary_polynomials, essential_spectrum_triangular_with, fredholm_conditions, spectral_inclusion_with,
    FredholmDecision,
};
use calkin_core::{
    common_base, essential_norm_lower_bounds, AutomorphismKind, AutomorphismOrder, Complex64, CrossedProductElement,
    Error, LinearFractionalMap, MapClass, MembershipCertificate, Tolerances,
};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::JobConfig;
use crate::output::{complex, csv_bytes, real, write_files};
use crate::{svg, Failure};

pub const SIGMA_HEADER: [&str; 5] = ["lambda_re", "lambda_im", "x", "nu", "sigma_min"];
pub const CONVERGENCE_HEADER: [&str; 8] =
    ["lambda_re", "lambda_im", "x", "nu_first", "nu_last", "sigma_first", "sigma_last", "trend"];
pub const BOUNDARY_HEADER: [&str; 5] = ["label", "index", "parameter", "re", "im"];
const INCLUSION_BANNER: &str = "WARNING: element is not triangular; showing the inclusion region only";

type Outcome = Result<u8, Failure>;

fn tolerances(cfg: &JobConfig) -> Tolerances {
    Tolerances { eps: cfg.tolerance, ..Tolerances::default() }
}

fn json_value(input: &str) -> Result<Value, Failure> {
    serde_json::from_str(input).map_err(|e| Failure::new(2, format!("invalid JSON: {e}")))
}

fn field<'a>(value: &'a Value, name: &str) -> Result<&'a Value, Failure> {
    value.get(name).ok_or_else(|| Failure::new(2, format!("missing field {name:?}")))
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

/// One-line classification, e.g. `parabolic non-automorphism, ζ=1, a=1`.
pub fn class_line(map: &LinearFractionalMap, class: &MapClass, tol: &Tolerances) -> String {
    match *class {
        MapClass::InteriorContact => "interior contact (compact)".into(),
        MapClass::Automorphism { kind: AutomorphismKind::Identity, .. } => "identity".into(),
        MapClass::Automorphism { order, kind } => {
            let order = match order {
                AutomorphismOrder::Finite(q) => format!("order {q}"),
                AutomorphismOrder::Infinite => "infinite order".into(),
            };
            let kind = match kind {
                AutomorphismKind::Elliptic => "elliptic",
                AutomorphismKind::Parabolic => "parabolic",
                _ => "hyperbolic",
            };
            let mut s = format!("automorphism, {order} ({kind})");
            if let Some(b) = map.boundary_fixed_point_with(tol) {
                s += &format!(", fixes {}, derivative {}", complex(b.zeta), real(b.derivative));
            }
            s
        }
        MapClass::ParabolicNonAutomorphism { zeta, a } => {
            format!("parabolic non-automorphism, ζ={}, a={}", complex(zeta), complex(a))
        }
        MapClass::BoundaryFixedNonParabolic { zeta, derivative } => {
            format!("boundary-fixed non-parabolic, ζ={}, derivative {}", complex(zeta), real(derivative))
        }
        MapClass::BoundaryToBoundary { zeta, eta, derivative } => format!(
            "boundary contact without fixed point, ζ={} ↦ η={}, |φ'(ζ)|={}",
            complex(zeta),
            complex(eta),
            real(derivative)
        ),
    }
}

pub fn classify(input: &str, cfg: &JobConfig) -> Outcome {
    let map = parse_map(input)?;
    let tol = tolerances(cfg);
    let class = map.classify_with(&tol)?;
    println!("{}", class_line(&map, &class, &tol));
    println!("map: {map}");
    if let Some(b) = map.boundary_fixed_point_with(&tol) {
        let flag = if b.low_confidence { " (low confidence)" } else { "" };
        println!("boundary fixed point: ζ={}, φ'(ζ)={}{flag}", complex(b.zeta), real(b.derivative));
    }
    if class.fixes_boundary_point() {
        if let Ok(d) = map.canonical_decomposition() {
            println!("decomposition: Ψ_{{ζ,t}} ∘ ρ_{{ζ,a}}, ζ={}, t={}, a={}", complex(d.zeta), real(d.t), complex(d.a));
        }
    }
    Ok(0)
}

pub fn decompose(input: &str, cfg: &JobConfig) -> Outcome {
    let map = parse_map(input)?;
    let d = map.canonical_decomposition()?;
    let pair = |z: Complex64| [z.re, z.im];
    let psi = MapSpec::Psi { zeta: pair(d.zeta), t: d.t };
    // automorphisms Ψ_{ζ,t} have a = 0 and no parabolic factor
    let spec = if d.a.norm() <= cfg.tolerance {
        psi
    } else {
        MapSpec::Compose(Box::new(psi), Box::new(MapSpec::Rho { zeta: pair(d.zeta), a: pair(d.a) }))
    };
    print!("{}", pretty(&serde_json::to_value(spec).expect("serializable")));
    if d.low_confidence {
        eprintln!("warning: boundary data decided within tolerance (low confidence)");
    }
    Ok(0)
}

pub fn coset(input: &str, cfg: &JobConfig, adjoint: bool) -> Outcome {
    let map = parse_map(input)?;
    let base = match cfg.base {
        Some(b) => b,
        None => snap(map.canonical_decomposition()?.t),
    };
    let e = if adjoint {
        CrossedProductElement::coset_of_adjoint(&map, base)?
    } else {
        CrossedProductElement::coset_of_composition(&map, base)?
    };
    print!("{}", pretty(&element_to_json(&e)));
    Ok(0)
}

pub fn mul(input: &str, cfg: &JobConfig) -> Outcome {
    let v = json_value(input)?;
    let left = parse_element_value(field(&v, "left")?, cfg.base)?;
    let right = parse_element_value(field(&v, "right")?, cfg.base)?;
    let (left, right) = left.align(&right)?;
    print!("{}", pretty(&element_to_json(&left.multiply(&right)?)));
    Ok(0)
}

pub fn adj(input: &str, cfg: &JobConfig) -> Outcome {
    let e = parse_element(input, cfg.base)?;
    print!("{}", pretty(&element_to_json(&e.adjoint())));
    Ok(0)
}

pub fn membership(input: &str, cfg: &JobConfig) -> Outcome {
    let v = json_value(input)?;
    let phi = parse_map_value(field(&v, "phi")?)?;
    let psi = parse_map_value(field(&v, "psi")?)?;
    let m = membership_with(&phi, &psi, &tolerances(cfg))?;
    let reason = match m.certificate {
        MembershipCertificate::Power { n } => format!("ψ'(ζ) = φ'(ζ)^n with n = {n}"),
        MembershipCertificate::Automorphism => "ψ is an automorphism".into(),
        MembershipCertificate::NotFixed => "ψ does not fix ζ".into(),
        MembershipCertificate::NonIntegralLogRatio { ratio } => {
            format!("ln ψ'(ζ) / ln φ'(ζ) = {} is not an integer", real(ratio))
        }
        MembershipCertificate::NotParabolic => "φ is parabolic but ψ is not".into(),
    };
    println!("{} ({reason})", m.member);
    Ok(0)
}

pub fn structure(input: &str, cfg: &JobConfig) -> Outcome {
    let map = parse_map(input)?;
    let report = shift_algebra_structure_with(&map, &tolerances(cfg))?;
    println!("row: {}", report.tag);
    println!("C*(T_z, C_φ)/K ≅ {}", report.description);
    for note in &report.notes {
        println!("note: {note}");
    }
    if matches!(report.class, MapClass::BoundaryFixedNonParabolic { .. }) {
        println!("note: the K-theory statement is documentation only and is not computed");
    }
    Ok(0)
}

pub fn fredholm(input: &str, cfg: &JobConfig) -> Outcome {
    let e = parse_element(input, cfg.base)?;
    let (p0, p1) = boundary_polynomials(&e);
    let report = fredholm_conditions(&e, &cfg.fredholm_options());
    let holds = |b: bool| if b { "holds" } else { "fails" };
    let kappa = |k: Option<i64>| k.map_or("undefined".to_string(), |k| k.to_string());
    println!("p0(z) = {p0}");
    println!("p1(z) = {p1}");
    println!("inv1 p0: {}", holds(report.inv1_p0));
    println!("inv1 p1: {}", holds(report.inv1_p1));
    println!("kappa+: {}", kappa(report.kappa_plus));
    println!("kappa-: {}", kappa(report.kappa_minus));
    println!("inv2: {}", holds(report.inv2_holds));
    if !report.omega_samples.is_empty() {
        println!("{:>8} {:>4} {:>10} {:>14} {:>12}", "x", "mu", "converged", "|omega|", "normalized");
        for s in &report.omega_samples {
            let omega = s.omega.map_or("-".to_string(), |w| format!("{:.6e}", w.norm()));
            println!("{:>8} {:>4} {:>10} {:>14} {:>12.4e}", real(s.x), s.mu, s.converged, omega, s.normalized);
        }
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    println!("decision: {:?}", report.decision);
    Ok(match report.decision {
        FredholmDecision::Fredholm => 0,
        FredholmDecision::NotFredholm => 1,
        FredholmDecision::Inconclusive => 5,
    })
}

pub fn spectrum(input: &str, cfg: &JobConfig) -> Outcome {
    let e = parse_element(input, cfg.base)?;
    let (region, banner) = match essential_spectrum_triangular_with(&e, cfg.tolerance) {
        Ok(r) => (r, None),
        Err(Error::NotTriangular) if cfg.inclusion => {
            eprintln!("{INCLUSION_BANNER}");
            (spectral_inclusion_with(&e, cfg.tolerance), Some(INCLUSION_BANNER))
        }
        Err(Error::NotTriangular) => {
            return Err(Failure::new(4, "element is not triangular; pass --inclusion for the inclusion region"))
        }
        Err(err) => return Err(err.into()),
    };
    let boundary = region.boundary_samples(720).into_iter().map(|(label, index, s, z)| {
        vec![label, index.to_string(), s.to_string(), z.re.to_string(), z.im.to_string()]
    });
    let files = [
        ("region.json", pretty(&region.to_json()).into_bytes()),
        ("boundary.csv", csv_bytes(&BOUNDARY_HEADER, boundary)),
        ("spectrum.svg", svg::render(&region, cfg.lambda_grid, banner).into_bytes()),
    ];
    let written = write_files(&cfg.output_dir, &files)?;
    println!(
        "{:?} region: {} curve(s), {} disk(s), {} point(s), radius {}",
        region.kind,
        region.curves.len(),
        region.polynomial_disks.len(),
        region.points.len(),
        real(region.radius())
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(0)
}

/// `"decreasing"` when σ_min drops at every step, `"stable"` when every value
/// is within 10% of the first, `"mixed"` otherwise.
pub fn trend(values: &[f64]) -> &'static str {
    let first = values[0];
    if values.len() > 1 && values.windows(2).all(|w| w[1] < w[0]) {
        "decreasing"
    } else if values.iter().all(|v| (v - first).abs() <= 0.1 * first.abs()) {
        "stable"
    } else {
        "mixed"
    }
}

pub fn oracle_scan(input: &str, cfg: &JobConfig) -> Outcome {
    let e = parse_element(input, cfg.base)?;
    let norm: f64 = e.coeffs().values().map(|f| f.sup_bound()).sum();
    let r = if norm > 0.0 { 1.1 * norm } else { 1.0 };
    let lambdas = cfg.lambdas(r);
    let xs = cfg.xs();
    let nus = &cfg.nu_schedule;
    let matrices: Vec<_> = xs
        .iter()
        .flat_map(|&x| nus.iter().map(move |&nu| (x, nu)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(x, nu)| tau_matrix(&e, x, nu))
        .collect();
    let jobs: Vec<(usize, usize)> =
        (0..lambdas.len()).flat_map(|l| (0..matrices.len()).map(move |m| (l, m))).collect();
    let sigmas: Vec<f64> = jobs.par_iter().map(|&(l, m)| sigma_min(&matrices[m], lambdas[l])).collect();

    let per_x = nus.len();
    let mut rows = Vec::with_capacity(jobs.len());
    let mut summary = Vec::new();
    for (l, lambda) in lambdas.iter().enumerate() {
        for (xi, x) in xs.iter().enumerate() {
            let base = (l * xs.len() + xi) * per_x;
            let values = &sigmas[base..base + per_x];
            for (nu, s) in nus.iter().zip(values) {
                rows.push(vec![lambda.re.to_string(), lambda.im.to_string(), x.to_string(), nu.to_string(), s.to_string()]);
            }
            summary.push(vec![
                lambda.re.to_string(),
                lambda.im.to_string(),
                x.to_string(),
                nus[0].to_string(),
                nus[per_x - 1].to_string(),
                values[0].to_string(),
                values[per_x - 1].to_string(),
                trend(values).to_string(),
            ]);
        }
    }
    let files = [
        ("sigma_min.csv", csv_bytes(&SIGMA_HEADER, rows)),
        ("convergence.csv", csv_bytes(&CONVERGENCE_HEADER, summary)),
    ];
    for p in write_files(&cfg.output_dir, &files)? {
        println!("wrote {}", p.display());
    }
    println!("{} λ × {} x × {} ν samples", lambdas.len(), xs.len(), nus.len());
    Ok(0)
}

fn point_of(value: &Value) -> Option<Complex64> {
    let v = value.get("combination").unwrap_or(value).get("zeta")?;
    Some(Complex64::new(v.get(0)?.as_f64()?, v.get(1)?.as_f64()?))
}

pub fn bounds(input: &str, _cfg: &JobConfig) -> Outcome {
    let v = json_value(input)?;
    let terms = parse_terms(input)?;
    if terms.is_empty() {
        return Err(Failure::new(2, "no terms given"));
    }
    let decompositions: Vec<_> = terms.iter().filter_map(|(_, m)| m.canonical_decomposition().ok()).collect();
    let zeta = point_of(&v)
        .or_else(|| decompositions.first().map(|d| d.zeta))
        .or_else(|| terms.iter().find_map(|(_, m)| m.contact_point()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let (measure, data) = essential_norm_lower_bounds(&terms, zeta)?;
    println!("ζ = {}", complex(zeta));
    println!("measure bound: {}", real(measure));
    println!("boundary-data bound: {}", real(data));
    println!("‖A‖_e ≥ {}", real(measure.max(data).sqrt()));
    let mut base: Option<f64> = None;
    for d in decompositions.iter().filter(|d| d.t.ln().abs() > 1e-12) {
        base = match base {
            None => Some(d.t),
            Some(b) => match common_base(b, d.t) {
                Some(cb) => Some(cb.t),
                None => {
                    println!("note: derivatives at ζ share no common base with bounded denominators; independence assumed");
                    break;
                }
            },
        };
    }
    Ok(0)
}
