//! Cross-checks between the path model, the operator algebra and the
//! closed formulas, plus a comparison against hand-computed listings of the
//! N = 3 and N = 4 curvatures.
//!
//! Check failures are data: the report records the first counterexample of
//! each failing check and never aborts early.

use serde::{Deserialize, Serialize};

use super::{
    binomial_power_expansion, infinitesimal_coefficients, infinitesimal_from_operator,
    infinitesimal_literal, path_expansion, root_of_unity_expansion, specialize, LiteralConvention,
};
use crate::cyclo::{q_binomial, q_binomial_by_division, CycloModulus, QPoly};
use crate::freealg::{
    expand_power, expand_power_nilpotent, maurer_cartan_element, ElementPoly, Monomial,
    OperatorPoly,
};
use crate::paths::{
    compositions_up_to, path_sum_dp, path_sum_dp_unpruned, path_sum_enum, Comp, WeightRule,
};

/// Rules are arbitrated against the operator expansion for `2..=6`.
pub const ARBITRATION_MAX: usize = 6;

/// Path enumeration is exponential; checks that use it stop here.
const ENUMERATION_MAX: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Comp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub expected: QPoly,
    pub actual: QPoly,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub n: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl CheckResult {
    fn from_outcome(check: &str, n: usize, outcome: Option<Counterexample>) -> Self {
        CheckResult {
            check: check.to_string(),
            n,
            status: if outcome.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            counterexample: outcome,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleFailure {
    pub rule: WeightRule,
    pub n: usize,
    pub s: Comp,
    pub k: usize,
    pub path_value: QPoly,
    pub oracle_value: QPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleArbitration {
    pub max_n: usize,
    pub passing: Vec<WeightRule>,
    pub selected: WeightRule,
    pub rejected: Vec<RuleFailure>,
}

/// A place where a hand listing and the computed value disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub topic: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Comp>,
    pub listed: QPoly,
    pub computed: QPoly,
    /// Whether the two sides coincide modulo Φ_n.
    pub agrees_at_root: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub n_max: usize,
    pub rule: WeightRule,
    pub checks: Vec<CheckResult>,
    pub arbitration: RuleArbitration,
    pub discrepancies: Vec<Discrepancy>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str, n: usize) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == name && c.n == n)
    }
}

/// First term, in canonical order, where two operators differ.
pub(crate) fn first_operator_difference(
    actual: &OperatorPoly,
    expected: &OperatorPoly,
) -> Option<Counterexample> {
    let diff = actual - expected;
    let (key, _) = diff.iter().next()?;
    Some(Counterexample {
        s: Some(key.mono.comp().clone()),
        k: Some(key.dpow),
        expected: expected.coeff(&key.mono, key.dpow),
        actual: actual.coeff(&key.mono, key.dpow),
        note: format!("coefficient of {}*d^{}", key.mono, key.dpow),
    })
}

fn first_element_difference(
    actual: &ElementPoly,
    expected: &ElementPoly,
    k: usize,
) -> Option<Counterexample> {
    first_operator_difference(&actual.times_d(k), &expected.times_d(k))
}

fn check_binomial_vanishing(n: usize) -> Option<Counterexample> {
    let modulus = CycloModulus::new(n).ok()?;
    (1..n).find_map(|k| {
        let reduced = modulus.reduce(&q_binomial(n, k as i64));
        (!reduced.is_zero()).then(|| Counterexample {
            s: None,
            k: Some(k),
            expected: QPoly::zero(),
            actual: reduced,
            note: format!("C({n},{k})_q mod Φ_{n}"),
        })
    })
}

fn check_binomial_division(n: usize) -> Option<Counterexample> {
    (0..=n).find_map(|k| {
        let recurrence = q_binomial(n, k as i64);
        let quotient = q_binomial_by_division(n, k).unwrap_or_default();
        (recurrence != quotient).then(|| Counterexample {
            s: None,
            k: Some(k),
            expected: quotient,
            actual: recurrence,
            note: format!("C({n},{k})_q recurrence vs factorial quotient"),
        })
    })
}

fn check_dp_vs_enum(n: usize, rule: WeightRule) -> Option<Counterexample> {
    compositions_up_to(n).into_iter().find_map(|s| {
        let by_enum = path_sum_enum(&s, n, rule);
        let by_dp = path_sum_dp(&s, n, rule);
        (by_enum != by_dp).then(|| Counterexample {
            s: Some(s),
            k: None,
            expected: by_enum,
            actual: by_dp,
            note: "dynamic programming vs enumeration".to_string(),
        })
    })
}

fn check_pruning(n: usize, rule: WeightRule) -> Option<Counterexample> {
    compositions_up_to(n).into_iter().find_map(|s| {
        let full = path_sum_dp_unpruned(&s, n, rule);
        let pruned = path_sum_dp(&s, n, rule);
        (full != pruned).then(|| Counterexample {
            s: Some(s),
            k: None,
            expected: full,
            actual: pruned,
            note: "pruned vs unpruned dynamic programming".to_string(),
        })
    })
}

fn check_oracle_equivalence(n: usize, rule: WeightRule) -> Option<Counterexample> {
    let paths = path_expansion(n, rule).ok()?.to_operator();
    first_operator_difference(&paths, &expand_power(n))
}

fn check_curvature_element(n: usize) -> Option<Counterexample> {
    let m = maurer_cartan_element(n);
    let recursed = &m.d_element() + &m.prepend_a();
    first_element_difference(&maurer_cartan_element(n + 1), &recursed, 0)
        .or_else(|| first_element_difference(&expand_power(n).dpow_part(0), &m, 0))
}

fn check_maurer_cartan(n: usize, rule: WeightRule) -> Option<Counterexample> {
    let modulus = CycloModulus::new(n).ok()?;
    let root = root_of_unity_expansion(n, rule).ok()?;
    for k in 1..n {
        let c = root.coefficient(k);
        if !c.is_zero() {
            return first_element_difference(&c, &ElementPoly::zero(), k);
        }
    }
    let expected = maurer_cartan_element(n).truncate_orders(n).reduce(&modulus);
    first_element_difference(&root.coefficient(0), &expected, 0)
}

fn check_binomial_power(n: usize) -> Option<Counterexample> {
    first_operator_difference(&binomial_power_expansion(n).ok()?, &expand_power(n))
}

fn check_reduction_commutes(n: usize, rule: WeightRule) -> Option<Counterexample> {
    let specialised = specialize(&path_expansion(n, rule).ok()?).ok()?;
    let direct = root_of_unity_expansion(n, rule).ok()?;
    first_operator_difference(&direct.to_operator(), &specialised.to_operator())
}

fn check_nilpotent_oracle(n: usize) -> Option<Counterexample> {
    let restricted = expand_power(n).filter(|key| key.mono.len() == 1);
    first_operator_difference(&expand_power_nilpotent(n), &restricted)
}

fn check_infinitesimal(n: usize, rule: WeightRule) -> Option<Counterexample> {
    let paths = infinitesimal_coefficients(n, rule).ok()?;
    let oracle = infinitesimal_from_operator(n).ok()?;
    let modulus = CycloModulus::new(n).ok()?;
    for m in 0..n {
        let entry = |expected: QPoly, note: &str| Counterexample {
            s: Some(Comp::new(vec![m])),
            k: Some(n - 1 - m),
            expected,
            actual: paths.coeffs[m].clone(),
            note: note.to_string(),
        };
        if paths.coeffs[m] != oracle.coeffs[m] {
            return Some(entry(
                oracle.coeffs[m].clone(),
                "path model vs nilpotent expansion",
            ));
        }
        let binomial = q_binomial(n, m as i64 + 1);
        if paths.coeffs[m] != binomial {
            return Some(entry(binomial, "path model vs Gaussian binomial C(n, m+1)"));
        }
        let reduced = modulus.reduce(&paths.coeffs[m]);
        let expected = if m == n - 1 {
            QPoly::one()
        } else {
            QPoly::zero()
        };
        if reduced != expected {
            return Some(Counterexample {
                actual: reduced,
                ..entry(expected, "reduction modulo Φ_n")
            });
        }
    }
    None
}

/// Runs every cross-check for `n = 2..=n_max` with the given rule.
pub fn verify_suite(n_max: usize, rule: WeightRule) -> Report {
    let mut checks = Vec::new();
    let mut record = |name: &str, n: usize, outcome: Option<Counterexample>| {
        checks.push(CheckResult::from_outcome(name, n, outcome));
    };
    for n in 2..=n_max {
        record("q_binomial_vanishing", n, check_binomial_vanishing(n));
        record("q_binomial_division", n, check_binomial_division(n));
        if n <= ENUMERATION_MAX {
            record("path_dp_vs_enum", n, check_dp_vs_enum(n, rule));
            record("path_dp_pruning", n, check_pruning(n, rule));
        }
        record("oracle_equivalence", n, check_oracle_equivalence(n, rule));
        record("curvature_element", n, check_curvature_element(n));
        record("maurer_cartan", n, check_maurer_cartan(n, rule));
        record("binomial_power_formula", n, check_binomial_power(n));
        record("reduction_commutes", n, check_reduction_commutes(n, rule));
        record("nilpotent_oracle", n, check_nilpotent_oracle(n));
        record("infinitesimal", n, check_infinitesimal(n, rule));
    }
    checks.sort_by(|a, b| a.check.cmp(&b.check).then(a.n.cmp(&b.n)));
    Report {
        n_max,
        rule,
        checks,
        arbitration: arbitrate_rules(ARBITRATION_MAX),
        discrepancies: hand_listing_discrepancies(rule),
    }
}

/// Decides which weight rule reproduces the operator expansion for every
/// `n` in `2..=max_n`. If both or neither pass, `Prefix` is selected.
pub fn arbitrate_rules(max_n: usize) -> RuleArbitration {
    let mut passing = Vec::new();
    let mut rejected = Vec::new();
    for rule in WeightRule::ALL {
        let failure = (2..=max_n).find_map(|n| {
            check_oracle_equivalence(n, rule).map(|cx| RuleFailure {
                rule,
                n,
                s: cx.s.unwrap_or_default(),
                k: cx.k.unwrap_or_default(),
                path_value: cx.actual,
                oracle_value: cx.expected,
            })
        });
        match failure {
            None => passing.push(rule),
            Some(f) => rejected.push(f),
        }
    }
    let selected = match passing.as_slice() {
        [only] => *only,
        _ => WeightRule::Prefix,
    };
    RuleArbitration {
        max_n,
        passing,
        selected,
        rejected,
    }
}

fn c(entries: &[usize]) -> Comp {
    Comp::new(entries.to_vec())
}

fn poly(coeffs: &[i64]) -> QPoly {
    QPoly::from_i64s(coeffs)
}

/// Per-word path sums `(k, s, c_q(s, N))` as computed by hand for N = 3.
fn listing_n3() -> Vec<(usize, Comp, QPoly)> {
    vec![
        (0, c(&[2]), poly(&[1])),
        (0, c(&[1, 0]), poly(&[1])),
        (0, c(&[0, 1]), poly(&[1, 1])),
        (0, c(&[0, 0, 0]), poly(&[1])),
        (1, c(&[1]), poly(&[1, 1, 1])),
        (1, c(&[0, 0]), poly(&[1, 1, 1])),
        (2, c(&[0]), poly(&[1, 1, 1])),
    ]
}

/// Per-word path sums `(k, s, c_q(s, N))` as computed by hand for N = 4.
fn listing_n4() -> Vec<(usize, Comp, QPoly)> {
    let q_number_4 = poly(&[1, 1, 1, 1]);
    vec![
        (3, c(&[0]), q_number_4.clone()),
        (2, c(&[0, 0]), poly(&[1, 0, 1])),
        (2, c(&[1]), poly(&[1, 0, 1])),
        (1, c(&[0, 0, 0]), q_number_4.clone()),
        (1, c(&[0, 1]), poly(&[2, 2, 2, 2])),
        (1, c(&[1, 0]), q_number_4.clone()),
        (1, c(&[2]), q_number_4),
        (0, c(&[0, 0, 0, 0]), poly(&[1])),
        (0, c(&[0, 0, 1]), poly(&[1, 1, 1])),
        (0, c(&[0, 1, 0]), poly(&[1, 1])),
        (0, c(&[1, 0, 0]), poly(&[1])),
        (0, c(&[2, 0]), poly(&[1])),
        (0, c(&[0, 2]), poly(&[1, 1, 1])),
        (0, c(&[1, 1]), poly(&[1, 0, 1])),
        (0, c(&[3]), poly(&[1])),
    ]
}

/// The closing N = 3 formula: only `c[0]` is nonzero.
fn closing_formula_n3() -> Vec<(usize, Comp, QPoly)> {
    vec![
        (0, c(&[2]), poly(&[1])),
        (0, c(&[1, 0]), poly(&[1])),
        (0, c(&[0, 1]), poly(&[1, 1])),
    ]
}

/// The closing N = 4 formula, `c[2] = (1+q^2)(a^2 + d(a))` and `c[0]`.
fn closing_formula_n4() -> Vec<(usize, Comp, QPoly)> {
    vec![
        (2, c(&[0, 0]), poly(&[1, 0, 1])),
        (2, c(&[1]), poly(&[1, 0, 1])),
        (0, c(&[0, 0, 0, 0]), poly(&[1])),
        (0, c(&[0, 0, 1]), poly(&[1, 1, 1])),
        (0, c(&[0, 1, 0]), poly(&[1, 1])),
        (0, c(&[1, 0, 0]), poly(&[1])),
        (0, c(&[2, 0]), poly(&[1])),
        (0, c(&[0, 2]), poly(&[1, 1, 1])),
        (0, c(&[1, 1]), poly(&[1])),
        (0, c(&[3]), poly(&[1])),
    ]
}

fn compare_listing(
    topic: &str,
    n: usize,
    listing: &[(usize, Comp, QPoly)],
    rule: WeightRule,
) -> Vec<Discrepancy> {
    let modulus = CycloModulus::new(n).expect("listings are for n >= 2");
    listing
        .iter()
        .filter_map(|(k, s, listed)| {
            let computed = path_sum_dp(s, n, rule);
            (listed != &computed).then(|| Discrepancy {
                topic: topic.to_string(),
                n,
                k: Some(*k),
                s: Some(s.clone()),
                agrees_at_root: modulus.reduce(listed) == modulus.reduce(&computed),
                listed: listed.clone(),
                computed,
            })
        })
        .collect()
}

/// Compares a closing formula against the root-of-unity expansion, word by
/// word over the union of both supports. `computed` is the reduced value.
fn compare_closing_formula(
    topic: &str,
    n: usize,
    listing: &[(usize, Comp, QPoly)],
    rule: WeightRule,
) -> Vec<Discrepancy> {
    let modulus = CycloModulus::new(n).expect("listings are for n >= 2");
    let Ok(root) = root_of_unity_expansion(n, rule) else {
        return Vec::new();
    };
    let mut listed_op = OperatorPoly::zero();
    for (k, s, value) in listing {
        listed_op.add_term(Monomial::new(s.clone()), *k, value);
    }
    let computed_op = root.to_operator();
    let mut keys: Vec<_> = listed_op.iter().map(|(key, _)| key.clone()).collect();
    keys.extend(computed_op.iter().map(|(key, _)| key.clone()));
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|key| {
            let listed = listed_op.coeff(&key.mono, key.dpow);
            let computed = computed_op.coeff(&key.mono, key.dpow);
            let agrees = modulus.reduce(&listed) == computed;
            (!agrees).then(|| Discrepancy {
                topic: topic.to_string(),
                n,
                k: Some(key.dpow),
                s: Some(key.mono.comp().clone()),
                listed,
                computed,
                agrees_at_root: false,
            })
        })
        .collect()
}

/// Every disagreement between the hand listings and what the path model
/// computes with `rule`, plus the literal-table edge weight and the
/// closed-form infinitesimal readings.
pub fn hand_listing_discrepancies(rule: WeightRule) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    out.extend(compare_listing("n3-word-listing", 3, &listing_n3(), rule));
    out.extend(compare_closing_formula(
        "n3-closing-formula",
        3,
        &closing_formula_n3(),
        rule,
    ));
    out.extend(compare_listing("n4-word-listing", 4, &listing_n4(), rule));
    out.extend(compare_closing_formula(
        "n4-closing-formula",
        4,
        &closing_formula_n4(),
        rule,
    ));

    // The single path ∅ -> (0) -> (1) -> (2) is listed with weight 1.
    let single_path = c(&[2]);
    let literal = path_sum_enum(&single_path, 3, WeightRule::Literal);
    if !literal.is_one() {
        let m3 = CycloModulus::new(3).expect("n = 3");
        out.push(Discrepancy {
            topic: "literal-table-path-weight".to_string(),
            n: 3,
            k: Some(0),
            s: Some(single_path),
            agrees_at_root: m3.reduce(&literal).is_one(),
            listed: QPoly::one(),
            computed: literal,
        });
    }

    for convention in LiteralConvention::ALL {
        for n in 3..=4 {
            let Ok(cmp) = infinitesimal_literal(n, convention) else {
                continue;
            };
            let modulus = CycloModulus::new(n).expect("n >= 3");
            for entry in cmp.entries.into_iter().filter(|e| !e.matches) {
                out.push(Discrepancy {
                    topic: format!("infinitesimal-closed-form/{convention}"),
                    n,
                    k: Some(n - 1 - entry.m),
                    s: Some(Comp::new(vec![entry.m])),
                    agrees_at_root: modulus.reduce(&entry.literal) == modulus.reduce(&entry.oracle),
                    listed: entry.literal,
                    computed: entry.oracle,
                });
            }
        }
    }
    out
}
