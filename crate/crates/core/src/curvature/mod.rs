//! The N-curvature `D^N` of `D = d + a`, assembled from path sums, and the
//! first-order (`t^2 = 0`) coefficients of `D = d + t·e`.
//!
//! Index conventions: in a [`CurvatureExpansion`], `c[k]` multiplies `d^k`.
//! In [`InfinitesimalCoefficients`], entry `m` multiplies `d^m(e) · d^{n-1-m}`,
//! so `m = n - 1 - k`.

mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use verify::{
    arbitrate_rules, hand_listing_discrepancies, verify_suite, CheckResult, Counterexample,
    Discrepancy, Report, RuleArbitration, RuleFailure, Status, ARBITRATION_MAX,
};

use crate::cyclo::{q_binomial, CycloModulus, QPoly};
use crate::freealg::{maurer_cartan_element, ElementPoly, Monomial, OperatorPoly};
use crate::paths::{all_path_sums, residual_order, Comp, WeightRule};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Coefficients in ℤ[q], nothing truncated.
    Generic,
    /// Coefficients in ℤ[q]/Φ_N and `d^N = 0`.
    #[serde(rename = "root")]
    RootOfUnity,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Generic => "generic",
            Mode::RootOfUnity => "root",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "generic" => Ok(Mode::Generic),
            "root" => Ok(Mode::RootOfUnity),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// `D^n = Σ_k c[k] · d^k`.
///
/// Generic mode has `k = 0..=n` with `c[n] = 1`; root-of-unity mode has
/// `k = 0..n`, reduced coefficients, and no factor `d^j(a)` with `j >= n`.
/// Every `k` in range is present, possibly as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureExpansion {
    pub n: usize,
    pub mode: Mode,
    pub rule: WeightRule,
    pub c: BTreeMap<usize, ElementPoly>,
}

impl CurvatureExpansion {
    pub fn coefficient(&self, k: usize) -> ElementPoly {
        self.c.get(&k).cloned().unwrap_or_default()
    }

    pub fn to_operator(&self) -> OperatorPoly {
        self.c.iter().fold(OperatorPoly::zero(), |acc, (&k, elem)| {
            &acc + &elem.times_d(k)
        })
    }

    /// Total number of nonzero terms across all `c[k]`.
    pub fn term_count(&self) -> usize {
        self.c.values().map(ElementPoly::len).sum()
    }

    pub fn max_k(&self) -> usize {
        match self.mode {
            Mode::Generic => self.n,
            Mode::RootOfUnity => self.n - 1,
        }
    }
}

fn require(what: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::OrderTooSmall { what, min, n })
    } else {
        Ok(())
    }
}

/// Groups path sums by the accompanying power of `d`.
fn group_by_order(
    n: usize,
    max_k: usize,
    sums: impl IntoIterator<Item = (Comp, QPoly)>,
) -> BTreeMap<usize, ElementPoly> {
    let mut c: BTreeMap<usize, ElementPoly> =
        (0..=max_k).map(|k| (k, ElementPoly::zero())).collect();
    for (s, value) in sums {
        let k = residual_order(&s, n);
        if k < 0 || k as usize > max_k {
            continue;
        }
        c.get_mut(&(k as usize))
            .expect("all orders pre-seeded")
            .add_term(Monomial::new(s), &value);
    }
    c
}

/// `c[k] = Σ_{N(s) = k} c_q(s, n) · a^(s)` over ℤ[q], for `k = 0..=n`.
pub fn path_expansion(n: usize, rule: WeightRule) -> Result<CurvatureExpansion> {
    require("the generic expansion", n, 1)?;
    let sums = all_path_sums(n, rule, None);
    Ok(CurvatureExpansion {
        n,
        mode: Mode::Generic,
        rule,
        c: group_by_order(n, n, sums),
    })
}

/// The expansion at a primitive n-th root of unity: path sums are computed
/// directly in ℤ[q]/Φ_n, words with a factor `d^j(a)`, `j >= n`, are
/// dropped, and only `k <= n - 1` is kept.
pub fn root_of_unity_expansion(n: usize, rule: WeightRule) -> Result<CurvatureExpansion> {
    require("the root-of-unity expansion", n, 2)?;
    let modulus = CycloModulus::new(n)?;
    let sums = all_path_sums(n, rule, Some(&modulus))
        .into_iter()
        .filter(|(s, _)| s.max_entry().is_none_or(|j| j < n));
    Ok(CurvatureExpansion {
        n,
        mode: Mode::RootOfUnity,
        rule,
        c: group_by_order(n, n - 1, sums),
    })
}

/// Truncates and reduces a generic expansion to root-of-unity mode.
pub fn specialize(generic: &CurvatureExpansion) -> Result<CurvatureExpansion> {
    let n = generic.n;
    require("specialisation to a root of unity", n, 2)?;
    let modulus = CycloModulus::new(n)?;
    let c = (0..n)
        .map(|k| {
            (
                k,
                generic.coefficient(k).truncate_orders(n).reduce(&modulus),
            )
        })
        .collect();
    Ok(CurvatureExpansion {
        n,
        mode: Mode::RootOfUnity,
        rule: generic.rule,
        c,
    })
}

/// The binomial power formula over generic q:
///
/// ```text
/// D^n = d^n + Σ_{k=1}^{n-1} C(n,k)_q · (D^{k-1} a) · d^{n-k} + D^{n-1} a
/// ```
pub fn binomial_power_expansion(n: usize) -> Result<OperatorPoly> {
    require("the binomial power formula", n, 2)?;
    let mut out = OperatorPoly::from_term(QPoly::one(), Monomial::unit(), n);
    for k in 1..n {
        let coeff = q_binomial(n, k as i64);
        out = &out + &maurer_cartan_element(k).scale(&coeff).times_d(n - k);
    }
    Ok(&out + &maurer_cartan_element(n).times_d(0))
}

/// The rule that reproduces the operator expansion for every `n` up to
/// [`ARBITRATION_MAX`]. Computed once.
pub fn default_rule() -> WeightRule {
    static RULE: OnceLock<WeightRule> = OnceLock::new();
    *RULE.get_or_init(|| arbitrate_rules(ARBITRATION_MAX).selected)
}

/// Entry `m` is the coefficient of `t · d^m(e) · d^{n-1-m}` in `(d + t·e)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinitesimalCoefficients {
    pub n: usize,
    pub coeffs: Vec<QPoly>,
}

impl InfinitesimalCoefficients {
    pub fn reduce(&self, modulus: &CycloModulus) -> Self {
        InfinitesimalCoefficients {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| modulus.reduce(c)).collect(),
        }
    }
}

/// All weak compositions of `total` into `parts` nonnegative entries.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn fill(prefix: &mut Vec<usize>, left: usize, parts: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == parts {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            fill(prefix, left - v, parts, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(&mut Vec::with_capacity(parts), total, parts, &mut out);
    out
}

/// First-order coefficients from the path model.
///
/// Only words of length one survive `t^2 = 0`, so every contributing path
/// runs along the spine `∅ -> (0) -> (1) -> ... -> (m)`: `m + 1` moves and
/// `n - 1 - m` stays spread over the `m + 2` spine vertices. The entry is
/// the sum over all such spreads of the product of edge weights.
pub fn infinitesimal_coefficients(n: usize, rule: WeightRule) -> Result<InfinitesimalCoefficients> {
    require("the infinitesimal expansion", n, 2)?;
    let coeffs = (0..n)
        .map(|m| {
            let spine: Vec<Comp> = std::iter::once(Comp::empty())
                .chain((0..=m).map(|j| Comp::new(vec![j])))
                .collect();
            let move_exponent: usize = spine[1..spine.len() - 1]
                .iter()
                .map(|v| rule.increment_exponent(v, 1))
                .sum();
            let stay_exponents: Vec<usize> = spine.iter().map(|v| rule.stay_exponent(v)).collect();
            weak_compositions(n - 1 - m, spine.len())
                .into_iter()
                .map(|stays| {
                    let e: usize = stays.iter().zip(&stay_exponents).map(|(k, w)| k * w).sum();
                    QPoly::q_pow(move_exponent + e)
                })
                .sum()
        })
        .collect();
    Ok(InfinitesimalCoefficients { n, coeffs })
}

/// The same coefficients read off the nilpotent operator expansion.
pub fn infinitesimal_from_operator(n: usize) -> Result<InfinitesimalCoefficients> {
    require("the infinitesimal expansion", n, 2)?;
    let op = crate::freealg::expand_power_nilpotent(n);
    let coeffs = (0..n)
        .map(|m| op.coeff(&Monomial::derivative_of_a(m), n - 1 - m))
        .collect();
    Ok(InfinitesimalCoefficients { n, coeffs })
}

/// Readings of the closed-form composition sum
/// `Σ_v q^{|v| + w(v)}` with `|v| = v_1 + ... + v_last` and
/// `w(v) = Σ_i i·v_i`, which differ in what `v` ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiteralConvention {
    /// Entry `m` sums over `(v_0, ..., v_{n-m-1})` with `Σ v_i = n`: the
    /// index attached to `d^{n-1-m}`.
    StatementIndex,
    /// Entry `m` sums over `(v_0, ..., v_m)` with `Σ v_i = n`: the index
    /// attached to the target vertex `(m)`.
    VertexIndex,
    /// Entry `m` sums over the stay counts `(v_0, ..., v_{m+1})` at the
    /// spine vertices, with `Σ v_i = n - 1 - m`.
    StayCounts,
}

impl LiteralConvention {
    pub const ALL: [LiteralConvention; 3] = [
        LiteralConvention::StatementIndex,
        LiteralConvention::VertexIndex,
        LiteralConvention::StayCounts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LiteralConvention::StatementIndex => "statement-index",
            LiteralConvention::VertexIndex => "vertex-index",
            LiteralConvention::StayCounts => "stay-counts",
        }
    }

    fn index_set(self, n: usize, m: usize) -> Vec<Vec<usize>> {
        match self {
            LiteralConvention::StatementIndex => weak_compositions(n, n - m),
            LiteralConvention::VertexIndex => weak_compositions(n, m + 1),
            LiteralConvention::StayCounts => weak_compositions(n - 1 - m, m + 2),
        }
    }
}

impl fmt::Display for LiteralConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralEntry {
    pub m: usize,
    pub literal: QPoly,
    pub oracle: QPoly,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralComparison {
    pub n: usize,
    pub convention: LiteralConvention,
    pub entries: Vec<LiteralEntry>,
}

impl LiteralComparison {
    pub fn all_match(&self) -> bool {
        self.entries.iter().all(|e| e.matches)
    }
}

/// Evaluates the composition-sum formula under `convention` and compares
/// each entry with the nilpotent operator expansion.
pub fn infinitesimal_literal(n: usize, convention: LiteralConvention) -> Result<LiteralComparison> {
    let oracle = infinitesimal_from_operator(n)?;
    let entries = (0..n)
        .map(|m| {
            let literal: QPoly = convention
                .index_set(n, m)
                .into_iter()
                .map(|v| {
                    let size: usize = v.iter().skip(1).sum();
                    let weight: usize = v.iter().enumerate().map(|(i, x)| i * x).sum();
                    QPoly::q_pow(size + weight)
                })
                .sum();
            let oracle = oracle.coeffs[m].clone();
            LiteralEntry {
                m,
                matches: literal == oracle,
                literal,
                oracle,
            }
        })
        .collect();
    Ok(LiteralComparison {
        n,
        convention,
        entries,
    })
}
