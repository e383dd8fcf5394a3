//! JSON formats.
//!
//! Maps: `{"coeffs": [[re,im] ×4]}`, `{"rho": {"zeta": [re,im], "a": [re,im]}}`,
//! `{"psi": {"zeta": [re,im], "t": real}}`, `{"compose": [outer, inner]}` or
//! `"identity"`.
//!
//! Elements: `{"zeta": [re,im], "t": real, "coeffs": {"n": {"const": [re,im],
//! "terms": [{"c": [re,im], "a": [re,im]}, …]}}}`, or a linear combination of
//! cosets `{"combination": {"scalar": [re,im], "terms": [{"c": [re,im], "map":
//! map, "adjoint": bool}, …], "base": real, "zeta": [re,im]}}` where `scalar`,
//! `base`, `zeta` and `adjoint` are optional.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::crossed::{common_base, CrossedProductElement, SymbolFunction};
use crate::error::{Error, Result};
use crate::moebius::LinearFractionalMap;

type Pair = [f64; 2];

fn cx(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Identity,
    Coeffs([Pair; 4]),
    Rho { zeta: Pair, a: Pair },
    Psi { zeta: Pair, t: f64 },
    Compose(Box<MapSpec>, Box<MapSpec>),
}

impl MapSpec {
    pub fn build(&self) -> Result<LinearFractionalMap> {
        match self {
            MapSpec::Identity => Ok(LinearFractionalMap::identity()),
            MapSpec::Coeffs(c) => LinearFractionalMap::from_coeffs(c.map(cx)),
            MapSpec::Rho { zeta, a } => LinearFractionalMap::rho(cx(*zeta), cx(*a)),
            MapSpec::Psi { zeta, t } => LinearFractionalMap::psi(cx(*zeta), *t),
            MapSpec::Compose(outer, inner) => Ok(outer.build()?.compose(&inner.build()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub c: Pair,
    pub a: Pair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    #[serde(rename = "const", default)]
    pub constant: Pair,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub zeta: Pair,
    pub t: f64,
    pub coeffs: BTreeMap<String, SymbolSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinationTerm {
    pub c: Pair,
    pub map: MapSpec,
    #[serde(default)]
    pub adjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinationSpec {
    #[serde(default)]
    pub scalar: Pair,
    #[serde(default)]
    pub terms: Vec<CombinationTerm>,
    pub base: Option<f64>,
    pub zeta: Option<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ElementInput {
    Combination { combination: CombinationSpec },
    Explicit(ElementSpec),
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_map(text: &str) -> Result<LinearFractionalMap> {
    let spec: MapSpec = serde_json::from_str(text).map_err(parse_err)?;
    spec.build()
}

pub fn parse_map_value(value: &Value) -> Result<LinearFractionalMap> {
    let spec: MapSpec = serde_json::from_value(value.clone()).map_err(parse_err)?;
    spec.build()
}

pub fn map_to_json(map: &LinearFractionalMap) -> Value {
    json!({ "coeffs": map.coeffs().map(pair) })
}

impl ElementSpec {
    pub fn build(&self) -> Result<CrossedProductElement> {
        let mut coeffs = BTreeMap::new();
        for (key, sym) in &self.coeffs {
            let n: i64 = key.trim().parse().map_err(|_| Error::Parse(format!("coefficient index {key:?} is not an integer")))?;
            let terms = sym.terms.iter().map(|t| (cx(t.c), cx(t.a))).collect();
            let f = SymbolFunction::new(cx(sym.constant), terms)?;
            if coeffs.insert(n, f).is_some() {
                return Err(Error::Parse(format!("coefficient index {n} given twice")));
            }
        }
        CrossedProductElement::new(cx(self.zeta), self.t, coeffs)
    }
}

impl CombinationSpec {
    /// Maps with their coefficients, adjoint terms included.
    pub fn maps(&self) -> Result<Vec<(Complex64, LinearFractionalMap, bool)>> {
        self.terms.iter().map(|t| Ok((cx(t.c), t.map.build()?, t.adjoint))).collect()
    }

    pub fn build(&self, base_override: Option<f64>) -> Result<CrossedProductElement> {
        let maps = self.maps()?;
        let mut zeta = self.zeta.map(cx);
        let mut derivatives = Vec::new();
        for (_, m, _) in &maps {
            let dec = m.canonical_decomposition()?;
            match zeta {
                Some(z) if (z - dec.zeta).norm() > 1e-9 => {
                    return Err(Error::PreconditionViolated(format!(
                        "terms touch the circle at different points {z} and {}",
                        dec.zeta
                    )))
                }
                _ => zeta = Some(dec.zeta),
            }
            derivatives.push(dec.t);
        }
        let zeta = zeta.unwrap_or(Complex64::new(1.0, 0.0));
        let base = match base_override.or(self.base) {
            Some(b) => b,
            None => derived_base(&derivatives)?,
        };
        let mut e = CrossedProductElement::scalar(zeta, base, cx(self.scalar))?;
        for (c, m, adjoint) in maps {
            let coset = if adjoint {
                CrossedProductElement::coset_of_adjoint(&m, base)?
            } else {
                CrossedProductElement::coset_of_composition(&m, base)?
            };
            e = e.add(&coset.scale(c))?;
        }
        Ok(e)
    }
}

/// A base of which every derivative is an integer power.
fn derived_base(derivatives: &[f64]) -> Result<f64> {
    let mut base: Option<f64> = None;
    for &d in derivatives.iter().filter(|d| (d.ln()).abs() > 1e-12) {
        base = Some(match base {
            None => d,
            Some(b) => common_base(b, d).map(|cb| cb.t).ok_or(Error::BaseIncompatible { derivative: d, base: b })?,
        });
    }
    Ok(base.map(|b| snap(if b < 1.0 { 1.0 / b } else { b })).unwrap_or(1.0))
}

/// Removes rounding noise such as `3.9999999999999987`.
pub fn snap(b: f64) -> f64 {
    let r = (b * 1e9).round() / 1e9;
    if (r - b).abs() <= 1e-11 * b {
        r
    } else {
        b
    }
}

/// Parses either element format; `base` overrides the base of a combination.
pub fn parse_element(text: &str, base: Option<f64>) -> Result<CrossedProductElement> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    parse_element_value(&value, base)
}

pub fn parse_element_value(value: &Value, base: Option<f64>) -> Result<CrossedProductElement> {
    let input: ElementInput = serde_json::from_value(value.clone())
        .map_err(|_| Error::Parse("expected an element {zeta, t, coeffs} or {combination: …}".into()))?;
    match input {
        ElementInput::Combination { combination } => combination.build(base),
        ElementInput::Explicit(spec) => match base {
            Some(b) => spec.build()?.rebase(b),
            None => spec.build(),
        },
    }
}

/// `(c_j, φ_j)` terms of a combination; adjoint terms are rejected.
pub fn parse_terms(text: &str) -> Result<Vec<(Complex64, LinearFractionalMap)>> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let spec: CombinationSpec = match value.get("combination") {
        Some(v) => serde_json::from_value(v.clone()).map_err(parse_err)?,
        None => serde_json::from_value(value).map_err(parse_err)?,
    };
    spec.maps()?
        .into_iter()
        .map(|(c, m, adj)| {
            if adj {
                Err(Error::Parse("adjoint terms are not accepted here".into()))
            } else {
                Ok((c, m))
            }
        })
        .collect()
}

pub fn symbol_to_json(f: &SymbolFunction) -> Value {
    json!({
        "const": pair(f.constant()),
        "terms": f.terms().iter().map(|(c, a)| json!({"c": pair(*c), "a": pair(*a)})).collect::<Vec<_>>(),
    })
}

pub fn element_to_json(e: &CrossedProductElement) -> Value {
    let coeffs: serde_json::Map<String, Value> =
        e.coeffs().iter().map(|(n, f)| (n.to_string(), symbol_to_json(f))).collect();
    json!({ "zeta": pair(e.zeta()), "t": e.base_t(), "coeffs": coeffs })
}
