//! Text, LaTeX and JSON emitters.
//!
//! Text output is the `Display` form of each value. The JSON form of a
//! curvature expansion is
//!
//! ```text
//! {"n":3,"mode":"root","rule":"prefix",
//!  "c":[{"k":2,"terms":[]}, ..., {"k":0,"terms":[{"s":[2],"coeff":[1]}, ...]}]}
//! ```
//!
//! with coefficients as ascending integer arrays.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curvature::{CurvatureExpansion, InfinitesimalCoefficients, Mode};
use crate::cyclo::QPoly;
use crate::freealg::{factor_runs, ElementPoly, Monomial};
use crate::paths::{Comp, WeightRule};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub s: Comp,
    pub coeff: QPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub k: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureJson {
    pub n: usize,
    pub mode: Mode,
    pub rule: WeightRule,
    pub c: Vec<CoefficientJson>,
}

impl From<&CurvatureExpansion> for CurvatureJson {
    fn from(exp: &CurvatureExpansion) -> Self {
        CurvatureJson {
            n: exp.n,
            mode: exp.mode,
            rule: exp.rule,
            c: exp
                .c
                .iter()
                .rev()
                .map(|(&k, elem)| CoefficientJson {
                    k,
                    terms: elem
                        .iter()
                        .map(|(m, coeff)| TermJson {
                            s: m.comp().clone(),
                            coeff: coeff.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<CurvatureJson> for CurvatureExpansion {
    type Error = Error;

    fn try_from(doc: CurvatureJson) -> Result<Self> {
        let mut c = BTreeMap::new();
        for entry in doc.c {
            let mut elem = ElementPoly::zero();
            for term in entry.terms {
                if term.s.degree() + entry.k != doc.n {
                    return Err(Error::Json(format!(
                        "term {} at k = {} does not have total degree {}",
                        term.s, entry.k, doc.n
                    )));
                }
                elem.add_term(Monomial::new(term.s), &term.coeff);
            }
            if c.insert(entry.k, elem).is_some() {
                return Err(Error::Json(format!("duplicate entry for k = {}", entry.k)));
            }
        }
        Ok(CurvatureExpansion {
            n: doc.n,
            mode: doc.mode,
            rule: doc.rule,
            c,
        })
    }
}

pub fn curvature_to_json(exp: &CurvatureExpansion) -> String {
    serde_json::to_string(&CurvatureJson::from(exp)).expect("curvature JSON serialises")
}

pub fn curvature_from_json(text: &str) -> Result<CurvatureExpansion> {
    let doc: CurvatureJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    doc.try_into()
}

/// One line per `k`, highest first: `c[k] = ...`.
pub fn curvature_text(exp: &CurvatureExpansion) -> String {
    exp.c
        .iter()
        .rev()
        .map(|(k, elem)| format!("c[{k}] = {elem}\n"))
        .collect()
}

pub fn latex_qpoly(p: &QPoly) -> String {
    let mut out = String::new();
    for (e, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        let body = match e {
            0 => abs.to_string(),
            _ => {
                let var = if e == 1 {
                    "q".to_string()
                } else {
                    format!("q^{{{e}}}")
                };
                if abs.is_one() {
                    var
                } else {
                    format!("{abs}{var}")
                }
            }
        };
        match (out.is_empty(), c.is_negative()) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `a`, `d_M(a)`, `d_M^{j}(a)`, with powers of repeated adjacent factors.
pub fn latex_monomial(m: &Monomial) -> String {
    if m.is_unit() {
        return "1".to_string();
    }
    factor_runs(m.comp())
        .into_iter()
        .map(|(j, count)| {
            let factor = match j {
                0 => "a".to_string(),
                1 => "d_M(a)".to_string(),
                _ => format!("d_M^{{{j}}}(a)"),
            };
            match (count, j) {
                (1, _) => factor,
                (_, 0) => format!("a^{{{count}}}"),
                _ => format!("({factor})^{{{count}}}"),
            }
        })
        .collect()
}

fn latex_coefficient_times(coeff: &QPoly, body: Option<String>) -> (bool, String) {
    match (coeff.as_constant(), body) {
        (Some(c), None) => (c.is_negative(), c.abs().to_string()),
        (Some(c), Some(b)) if c.abs().is_one() => (c.is_negative(), b),
        (Some(c), Some(b)) => (c.is_negative(), format!("{}{b}", c.abs())),
        (None, body) if coeff.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 => {
            let lead = coeff.leading().expect("nonzero");
            let unsigned = if lead.is_negative() {
                -coeff.clone()
            } else {
                coeff.clone()
            };
            let text = latex_qpoly(&unsigned);
            (
                lead.is_negative(),
                format!("{text}{}", body.unwrap_or_default()),
            )
        }
        (None, None) => (false, format!("({})", latex_qpoly(coeff))),
        (None, Some(b)) => (false, format!("({}){b}", latex_qpoly(coeff))),
    }
}

pub fn latex_element(elem: &ElementPoly) -> String {
    let mut out = String::new();
    for (m, coeff) in elem.iter() {
        let body = (!m.is_unit()).then(|| latex_monomial(m));
        let (negative, text) = latex_coefficient_times(coeff, body);
        match (out.is_empty(), negative) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        out.push_str(&text);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn latex_d_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "d_M".to_string(),
        _ => format!("d_M^{{{k}}}"),
    }
}

/// An `align*` block with one `c_k` per line and the assembled `D^N`.
pub fn curvature_latex(exp: &CurvatureExpansion) -> String {
    let mut lines = vec!["\\begin{align*}".to_string()];
    for (k, elem) in exp.c.iter().rev() {
        lines.push(format!("c_{{{k}}} &= {} \\\\", latex_element(elem)));
    }
    let mut total = Vec::new();
    for (&k, elem) in exp.c.iter().rev() {
        if elem.is_zero() {
            continue;
        }
        let text = latex_element(elem);
        total.push(if k == 0 {
            text
        } else if text == "1" {
            latex_d_power(k)
        } else if elem.len() == 1 {
            format!("{text}{}", latex_d_power(k))
        } else {
            format!("({text}){}", latex_d_power(k))
        });
    }
    let total = if total.is_empty() {
        "0".to_string()
    } else {
        total.join(" + ")
    };
    lines.push(format!("D^{{{}}} &= {total}", exp.n));
    lines.push("\\end{align*}".to_string());
    lines.join("\n") + "\n"
}

fn derivative_of_e(m: usize) -> String {
    match m {
        0 => "e".to_string(),
        1 => "d(e)".to_string(),
        _ => format!("d^{m}(e)"),
    }
}

fn d_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "*d".to_string(),
        _ => format!("*d^{k}"),
    }
}

/// One line per `m`: `m=0 e*d^2: 1 + q + q^2`.
pub fn infinitesimal_text(coeffs: &InfinitesimalCoefficients) -> String {
    coeffs
        .coeffs
        .iter()
        .enumerate()
        .map(|(m, c)| {
            format!(
                "m={m} {}{}: {c}\n",
                derivative_of_e(m),
                d_power(coeffs.n - 1 - m)
            )
        })
        .collect()
}

pub fn infinitesimal_latex(coeffs: &InfinitesimalCoefficients) -> String {
    let n = coeffs.n;
    let terms: Vec<String> = coeffs
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| {
            let e = match m {
                0 => "e".to_string(),
                1 => "d_{\\mathrm{End}}(e)".to_string(),
                _ => format!("d_{{\\mathrm{{End}}}}^{{{m}}}(e)"),
            };
            let (negative, body) =
                latex_coefficient_times(c, Some(format!("{e}{}", latex_d_power(n - 1 - m))));
            if negative {
                format!("-{body}")
            } else {
                body
            }
        })
        .collect();
    let body = if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    };
    format!("D^{{{n}}} = t\\left({body}\\right)\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{infinitesimal_coefficients, path_expansion, root_of_unity_expansion};

    #[test]
    fn n3_text() {
        let exp = root_of_unity_expansion(3, WeightRule::Prefix).unwrap();
        assert_eq!(
            curvature_text(&exp),
            "c[2] = 0\nc[1] = 0\nc[0] = d^2(a) + d(a)*a + (1+q)*a*d(a) + a^3\n"
        );
    }

    #[test]
    fn n3_json() {
        let exp = root_of_unity_expansion(3, WeightRule::Prefix).unwrap();
        assert_eq!(
            curvature_to_json(&exp),
            concat!(
                r#"{"n":3,"mode":"root","rule":"prefix","c":[{"k":2,"terms":[]},{"k":1,"terms":[]},"#,
                r#"{"k":0,"terms":[{"s":[2],"coeff":[1]},{"s":[1,0],"coeff":[1]},{"s":[0,1],"coeff":[1,1]},{"s":[0,0,0],"coeff":[1]}]}]}"#
            )
        );
    }

    #[test]
    fn json_round_trip() {
        for n in 1..=5 {
            let generic = path_expansion(n, WeightRule::Prefix).unwrap();
            assert_eq!(
                curvature_from_json(&curvature_to_json(&generic)).unwrap(),
                generic
            );
            if n >= 2 {
                let root = root_of_unity_expansion(n, WeightRule::Literal).unwrap();
                assert_eq!(
                    curvature_from_json(&curvature_to_json(&root)).unwrap(),
                    root
                );
            }
        }
    }

    #[test]
    fn json_rejects_inconsistent_documents() {
        let bad_degree = r#"{"n":2,"mode":"generic","rule":"prefix","c":[{"k":0,"terms":[{"s":[0],"coeff":[1]}]}]}"#;
        assert!(curvature_from_json(bad_degree).is_err());
        let dup = r#"{"n":2,"mode":"generic","rule":"prefix","c":[{"k":0,"terms":[]},{"k":0,"terms":[]}]}"#;
        assert!(curvature_from_json(dup).is_err());
        assert!(curvature_from_json("{").is_err());
        let bad_mode = r#"{"n":2,"mode":"complex","rule":"prefix","c":[]}"#;
        assert!(curvature_from_json(bad_mode).is_err());
    }

    #[test]
    fn latex_rendering() {
        assert_eq!(
            latex_qpoly(&QPoly::from_i64s(&[1, -1, 2])),
            "1 - q + 2q^{2}"
        );
        let exp = root_of_unity_expansion(3, WeightRule::Prefix).unwrap();
        let tex = curvature_latex(&exp);
        assert!(tex.contains("c_{0} &= d_M^{2}(a) + d_M(a)a + (1 + q)ad_M(a) + a^{3}"));
        assert!(tex.contains("c_{2} &= 0"));
        assert!(tex.contains("D^{3} &= d_M^{2}(a) + d_M(a)a + (1 + q)ad_M(a) + a^{3}"));
        let generic = path_expansion(2, WeightRule::Prefix).unwrap();
        assert!(
            curvature_latex(&generic).contains("D^{2} &= d_M^{2} + (1 + q)ad_M + d_M(a) + a^{2}")
        );
    }

    #[test]
    fn infinitesimal_rendering() {
        let coeffs = infinitesimal_coefficients(3, WeightRule::Prefix).unwrap();
        assert_eq!(
            infinitesimal_text(&coeffs),
            "m=0 e*d^2: 1 + q + q^2\nm=1 d(e)*d: 1 + q + q^2\nm=2 d^2(e): 1\n"
        );
        assert!(infinitesimal_latex(&coeffs).starts_with("D^{3} = t\\left((1 + q + q^{2})ed_M^{2}"));
    }
}
