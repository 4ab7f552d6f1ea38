//! The free operator algebra generated by `d` and the left multiplications
//! `e_j = e_{d^j(a)}`, with `a` of degree 1.
//!
//! The only relation is the q-Leibniz rule, used as the rewrite
//!
//! ```text
//! d · e_j  ->  e_{j+1} + q^{j+1} · e_j · d
//! ```
//!
//! which pushes every `d` to the right. A normal-ordered operator is a sum of
//! terms `coeff · a^(s) · d^k`, where `a^(s) = d^{s_1}(a) ... d^{s_n}(a)`.
//! Nothing here knows about paths; this module is the brute-force reference
//! the path model is checked against.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::cyclo::{CycloModulus, QPoly};
use crate::paths::Comp;

/// The word `d^{s_1}(a) ... d^{s_n}(a)`; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Comp);

impl Monomial {
    pub fn new(s: Comp) -> Self {
        Monomial(s)
    }

    pub fn unit() -> Self {
        Monomial(Comp::empty())
    }

    /// The single factor `d^j(a)`.
    pub fn derivative_of_a(j: usize) -> Self {
        Monomial(Comp::new(vec![j]))
    }

    pub fn comp(&self) -> &Comp {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Same as [`Monomial::is_unit`]: the empty word.
    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    /// Each factor `d^j(a)` has degree `j + 1`.
    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.concat(&other.0))
    }
}

impl From<Comp> for Monomial {
    fn from(s: Comp) -> Self {
        Monomial(s)
    }
}

/// Consecutive equal factors as `(order, multiplicity)`.
pub fn factor_runs(s: &Comp) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &j in s.entries() {
        match runs.last_mut() {
            Some((last, count)) if *last == j => *count += 1,
            _ => runs.push((j, 1)),
        }
    }
    runs
}

/// `a`, `d(a)`, `d^j(a)` joined by `*`, with repeated adjacent factors
/// written as powers (`a^3`, `d(a)^2`); the unit renders as `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let factors: Vec<String> = factor_runs(&self.0)
            .into_iter()
            .map(|(j, count)| {
                let factor = match j {
                    0 => "a".to_string(),
                    1 => "d(a)".to_string(),
                    _ => format!("d^{j}(a)"),
                };
                if count == 1 {
                    factor
                } else {
                    format!("{factor}^{count}")
                }
            })
            .collect();
        f.write_str(&factors.join("*"))
    }
}

/// Renders `coeff*body`, dropping a unit coefficient and parenthesising
/// non-constant ones. Returns the sign separately so callers can join terms
/// with ` + ` / ` - `.
fn render_term(coeff: &QPoly, body: Option<String>) -> (bool, String) {
    use num_traits::{One, Signed};
    match (coeff.as_constant(), body) {
        (Some(c), None) => (c.is_negative(), c.abs().to_string()),
        (Some(c), Some(body)) if c.abs().is_one() => (c.is_negative(), body),
        (Some(c), Some(body)) => (c.is_negative(), format!("{}*{body}", c.abs())),
        (None, None) => (false, format!("({})", coeff.to_compact_string())),
        (None, Some(body)) => (false, format!("({})*{body}", coeff.to_compact_string())),
    }
}

fn join_terms(terms: impl Iterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (negative, body) in terms {
        match (out.is_empty(), negative) {
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

/// A formal element of the module: a noncommutative polynomial in the
/// `d^j(a)` with coefficients in ℤ[q].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElementPoly {
    terms: BTreeMap<Monomial, QPoly>,
}

impl ElementPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The element `a`.
    pub fn a() -> Self {
        Self::from_term(QPoly::one(), Monomial::derivative_of_a(0))
    }

    pub fn from_term(coeff: QPoly, mono: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(mono, &coeff);
        p
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: &QPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono.clone()).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &QPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> QPoly {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &QPoly) -> Self {
        self.map_coeffs(|x| x * c)
    }

    pub fn map_coeffs(&self, f: impl Fn(&QPoly) -> QPoly) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        ElementPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn reduce(&self, modulus: &CycloModulus) -> Self {
        self.map_coeffs(|c| modulus.reduce(c))
    }

    /// Drops every word containing a factor `d^j(a)` with `j >= n`
    /// (those vanish once `d^n = 0`).
    pub fn truncate_orders(&self, n: usize) -> Self {
        self.filter(|m| m.comp().max_entry().is_none_or(|j| j < n))
    }

    /// The q-Leibniz derivative: the factor at position `i` is
    /// differentiated with weight `q^{degree of the factors before it}`.
    pub fn d_element(&self) -> Self {
        let mut out = Self::zero();
        for (mono, coeff) in &self.terms {
            let s = mono.comp();
            let mut prefix_degree = 0;
            for (i, &entry) in s.entries().iter().enumerate() {
                out.add_term(Monomial(s.increment(i + 1)), &coeff.shift(prefix_degree));
                prefix_degree += entry + 1;
            }
        }
        out
    }

    /// Left multiplication by `a`.
    pub fn prepend_a(&self) -> Self {
        let mut out = Self::zero();
        for (mono, coeff) in &self.terms {
            out.add_term(Monomial(mono.comp().prepend_zero()), coeff);
        }
        out
    }

    /// The operator `self · d^k`.
    pub fn times_d(&self, k: usize) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (mono, coeff) in &self.terms {
            out.add_term(mono.clone(), k, coeff);
        }
        out
    }
}

impl Add for &ElementPoly {
    type Output = ElementPoly;

    fn add(self, rhs: &ElementPoly) -> ElementPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &ElementPoly {
    type Output = ElementPoly;

    fn sub(self, rhs: &ElementPoly) -> ElementPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl fmt::Display for ElementPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(m, c)| {
            let body = (!m.is_unit()).then(|| m.to_string());
            render_term(c, body)
        });
        f.write_str(&join_terms(terms))
    }
}

/// Ordered by `dpow` descending, then by word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermKey {
    pub dpow: usize,
    pub mono: Monomial,
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dpow
            .cmp(&self.dpow)
            .then_with(|| self.mono.cmp(&other.mono))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A normal-ordered operator: `Σ coeff · a^(s) · d^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorPoly {
    terms: BTreeMap<TermKey, QPoly>,
}

impl OperatorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_term(QPoly::one(), Monomial::unit(), 0)
    }

    pub fn d() -> Self {
        Self::from_term(QPoly::one(), Monomial::unit(), 1)
    }

    /// Left multiplication by `d^j(a)`.
    pub fn e(j: usize) -> Self {
        Self::from_term(QPoly::one(), Monomial::derivative_of_a(j), 0)
    }

    /// `d + a`.
    pub fn deformed_differential() -> Self {
        &Self::d() + &Self::e(0)
    }

    pub fn from_term(coeff: QPoly, mono: Monomial, dpow: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(mono, dpow, &coeff);
        p
    }

    pub fn add_term(&mut self, mono: Monomial, dpow: usize, coeff: &QPoly) {
        if coeff.is_zero() {
            return;
        }
        let key = TermKey { dpow, mono };
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &QPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial, dpow: usize) -> QPoly {
        self.terms
            .get(&TermKey {
                dpow,
                mono: mono.clone(),
            })
            .cloned()
            .unwrap_or_default()
    }

    pub fn max_dpow(&self) -> Option<usize> {
        self.terms.keys().next().map(|k| k.dpow)
    }

    /// The element multiplying `d^k`.
    pub fn dpow_part(&self, k: usize) -> ElementPoly {
        let mut out = ElementPoly::zero();
        for (key, c) in self.terms.iter().filter(|(key, _)| key.dpow == k) {
            out.add_term(key.mono.clone(), c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&QPoly) -> QPoly) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            out.add_term(key.mono.clone(), key.dpow, &f(c));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&TermKey) -> bool) -> Self {
        OperatorPoly {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// `d · self`, normal ordered: `d · m = d_element(m) + q^{deg m} · m · d`.
    pub fn left_mul_d(&self) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            let word = ElementPoly::from_term(c.clone(), key.mono.clone());
            for (m, dc) in word.d_element().iter() {
                out.add_term(m.clone(), key.dpow, dc);
            }
            out.add_term(key.mono.clone(), key.dpow + 1, &c.shift(key.mono.degree()));
        }
        out
    }

    /// `a^(s) · self`.
    fn left_mul_word(&self, word: &Monomial, coeff: &QPoly) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            out.add_term(word.concat(&key.mono), key.dpow, &(coeff * c));
        }
        out
    }

    /// Normal-ordered product.
    pub fn mul(&self, rhs: &OperatorPoly) -> OperatorPoly {
        let Some(top) = self.max_dpow() else {
            return Self::zero();
        };
        let mut d_powers = Vec::with_capacity(top + 1);
        d_powers.push(rhs.clone());
        for k in 1..=top {
            let next = d_powers[k - 1].left_mul_d();
            d_powers.push(next);
        }
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            let part = d_powers[key.dpow].left_mul_word(&key.mono, c);
            out = &out + &part;
        }
        out
    }

    pub fn from_word(word: &[Generator]) -> Self {
        word.iter()
            .fold(Self::one(), |acc, g| acc.mul(&g.to_operator()))
    }
}

impl Add for &OperatorPoly {
    type Output = OperatorPoly;

    fn add(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.mono.clone(), k.dpow, c);
        }
        out
    }
}

impl Sub for &OperatorPoly {
    type Output = OperatorPoly;

    fn sub(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.mono.clone(), k.dpow, &-c);
        }
        out
    }
}

impl Mul for &OperatorPoly {
    type Output = OperatorPoly;

    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        OperatorPoly::mul(self, rhs)
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(key, c)| {
            let mut factors = Vec::new();
            if !key.mono.is_unit() {
                factors.push(key.mono.to_string());
            }
            match key.dpow {
                0 => {}
                1 => factors.push("d".to_string()),
                k => factors.push(format!("d^{k}")),
            }
            let body = (!factors.is_empty()).then(|| factors.join("*"));
            render_term(c, body)
        });
        f.write_str(&join_terms(terms))
    }
}

/// A letter of an operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    D,
    /// Left multiplication by `d^j(a)`.
    E(usize),
}

impl Generator {
    pub fn to_operator(self) -> OperatorPoly {
        match self {
            Generator::D => OperatorPoly::d(),
            Generator::E(j) => OperatorPoly::e(j),
        }
    }
}

/// Which redex the rewriter contracts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

/// Normal form of a generator word by repeated application of
/// `d · e_j -> e_{j+1} + q^{j+1} · e_j · d`.
pub fn normal_order(word: &[Generator]) -> OperatorPoly {
    normal_order_with(word, RewriteOrder::Leftmost)
}

pub fn normal_order_with(word: &[Generator], order: RewriteOrder) -> OperatorPoly {
    let find_redex = |w: &[Generator]| {
        let mut positions = (0..w.len().saturating_sub(1))
            .filter(|&i| w[i] == Generator::D && matches!(w[i + 1], Generator::E(_)));
        match order {
            RewriteOrder::Leftmost => positions.next(),
            RewriteOrder::Rightmost => positions.next_back(),
        }
    };
    let mut out = OperatorPoly::zero();
    let mut pending = vec![(QPoly::one(), word.to_vec())];
    while let Some((coeff, w)) = pending.pop() {
        match find_redex(&w) {
            Some(i) => {
                let Generator::E(j) = w[i + 1] else {
                    unreachable!()
                };
                let mut raised = w[..i].to_vec();
                raised.push(Generator::E(j + 1));
                raised.extend_from_slice(&w[i + 2..]);
                pending.push((coeff.clone(), raised));

                let mut swapped = w[..i].to_vec();
                swapped.push(Generator::E(j));
                swapped.push(Generator::D);
                swapped.extend_from_slice(&w[i + 2..]);
                pending.push((coeff.shift(j + 1), swapped));
            }
            None => {
                let entries: Vec<usize> = w
                    .iter()
                    .filter_map(|g| match g {
                        Generator::E(j) => Some(*j),
                        Generator::D => None,
                    })
                    .collect();
                let dpow = w.len() - entries.len();
                out.add_term(Monomial(Comp::new(entries)), dpow, &coeff);
            }
        }
    }
    out
}

/// `(d + a)^n` in normal form over generic q. The `d^n` term is kept.
pub fn expand_power(n: usize) -> OperatorPoly {
    let deformed = OperatorPoly::deformed_differential();
    (0..n).fold(OperatorPoly::one(), |acc, _| deformed.mul(&acc))
}

/// The coefficient of `t` in `(d + t·e)^n` with `t^2 = 0`, where `e` is a
/// degree-one endomorphism obeying the same commutation rule with `d` as
/// multiplication by `a`. Here `e^{(j)}` is written as the one-letter word
/// `(j)`.
///
/// The grade in `t` is carried through the multiplication:
/// `(A0 + tA1)(B0 + tB1) = A0·B0 + t(A0·B1 + A1·B0)`.
pub fn expand_power_nilpotent(n: usize) -> OperatorPoly {
    let d = OperatorPoly::d();
    let e = OperatorPoly::e(0);
    let mut grade0 = OperatorPoly::one();
    let mut grade1 = OperatorPoly::zero();
    for _ in 0..n {
        let next1 = &d.mul(&grade1) + &e.mul(&grade0);
        grade0 = d.mul(&grade0);
        grade1 = next1;
    }
    grade1
}

/// `D^{n-1} a`, built by applying `x -> d(x) + a·x` to `a` repeatedly.
/// For `n = 1` this is `a` itself.
pub fn maurer_cartan_element(n: usize) -> ElementPoly {
    assert!(n >= 1, "the curvature element needs n >= 1");
    let mut x = ElementPoly::a();
    for _ in 1..n {
        x = &x.d_element() + &x.prepend_a();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Generator::{D, E};

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    fn mono(entries: &[usize]) -> Monomial {
        Monomial::new(Comp::new(entries.to_vec()))
    }

    fn term(coeff: &[i64], entries: &[usize], dpow: usize) -> OperatorPoly {
        OperatorPoly::from_term(p(coeff), mono(entries), dpow)
    }

    fn sum(terms: &[OperatorPoly]) -> OperatorPoly {
        terms.iter().fold(OperatorPoly::zero(), |acc, t| &acc + t)
    }

    #[test]
    fn monomial_rendering_and_degree() {
        assert_eq!(mono(&[]).to_string(), "1");
        assert_eq!(mono(&[0, 1, 3]).to_string(), "a*d(a)*d^3(a)");
        assert_eq!(mono(&[0, 0, 1, 1, 0]).to_string(), "a^2*d(a)^2*a");
        assert_eq!(mono(&[0, 1, 3]).degree(), 1 + 2 + 4);
        assert_eq!(mono(&[0]).concat(&mono(&[2])), mono(&[0, 2]));
    }

    #[test]
    fn normal_order_examples() {
        assert_eq!(
            normal_order(&[D, E(0)]),
            sum(&[term(&[1], &[1], 0), term(&[0, 1], &[0], 1)])
        );
        assert_eq!(normal_order(&[E(0), D]), term(&[1], &[0], 1));
        assert_eq!(
            normal_order(&[D, E(1)]),
            sum(&[term(&[1], &[2], 0), term(&[0, 0, 1], &[1], 1)])
        );
    }

    #[test]
    fn operator_rendering() {
        let op = sum(&[
            term(&[1, 1], &[0, 1], 0),
            term(&[1], &[], 2),
            term(&[-2], &[1], 1),
        ]);
        assert_eq!(op.to_string(), "d^2 - 2*d(a)*d + (1+q)*a*d(a)");
    }

    #[test]
    fn small_powers() {
        assert_eq!(
            expand_power(1),
            sum(&[term(&[1], &[], 1), term(&[1], &[0], 0)])
        );
        let two = sum(&[
            term(&[1], &[], 2),
            term(&[1, 1], &[0], 1),
            term(&[1], &[1], 0),
            term(&[1], &[0, 0], 0),
        ]);
        assert_eq!(expand_power(2), two);
        let three = sum(&[
            term(&[1], &[], 3),
            term(&[1, 1, 1], &[0], 2),
            term(&[1, 1, 1], &[1], 1),
            term(&[1, 1, 1], &[0, 0], 1),
            term(&[1], &[2], 0),
            term(&[1], &[1, 0], 0),
            term(&[1, 1], &[0, 1], 0),
            term(&[1], &[0, 0, 0], 0),
        ]);
        assert_eq!(expand_power(3), three);
        assert_eq!(expand_power(3).to_string(),
            "d^3 + (1+q+q^2)*a*d^2 + (1+q+q^2)*d(a)*d + (1+q+q^2)*a^2*d + d^2(a) + d(a)*a + (1+q)*a*d(a) + a^3");
    }

    #[test]
    fn fourth_power_matches_frozen_values() {
        // Frozen from an independent word-by-word rewrite of all 16 words
        // of (d + a)^4.
        let four = expand_power(4);
        assert_eq!(four.len(), 16);
        let expect = [
            (&[][..], 4, &[1][..]),
            (&[0], 3, &[1, 1, 1, 1]),
            (&[1], 2, &[1, 1, 2, 1, 1]),
            (&[0, 0], 2, &[1, 1, 2, 1, 1]),
            (&[2], 1, &[1, 1, 1, 1]),
            (&[0, 1], 1, &[1, 2, 2, 2, 1]),
            (&[1, 0], 1, &[1, 1, 1, 1]),
            (&[0, 0, 0], 1, &[1, 1, 1, 1]),
            (&[3], 0, &[1]),
            (&[0, 2], 0, &[1, 1, 1]),
            (&[1, 1], 0, &[1, 1, 1]),
            (&[2, 0], 0, &[1]),
            (&[0, 0, 1], 0, &[1, 1, 1]),
            (&[0, 1, 0], 0, &[1, 1]),
            (&[1, 0, 0], 0, &[1]),
            (&[0, 0, 0, 0], 0, &[1]),
        ];
        for (entries, dpow, coeff) in expect {
            assert_eq!(
                four.coeff(&mono(entries), dpow),
                p(coeff),
                "{entries:?} d^{dpow}"
            );
        }
    }

    #[test]
    fn power_equals_sum_of_rewritten_words() {
        for n in 1..=6 {
            let mut total = OperatorPoly::zero();
            for mask in 0u32..(1 << n) {
                let word: Vec<Generator> = (0..n)
                    .map(|i| if mask >> i & 1 == 1 { D } else { E(0) })
                    .collect();
                total = &total + &normal_order(&word);
            }
            assert_eq!(total, expand_power(n), "n={n}");
        }
    }

    #[test]
    fn graded_by_total_degree() {
        for n in 1..=6 {
            for (key, _) in expand_power(n).iter() {
                assert_eq!(key.mono.degree() + key.dpow, n);
            }
        }
    }

    #[test]
    fn d_element_examples() {
        let a = ElementPoly::a();
        assert_eq!(
            a.d_element(),
            ElementPoly::from_term(QPoly::one(), mono(&[1]))
        );
        let aa = ElementPoly::from_term(QPoly::one(), mono(&[0, 0]));
        let expected = &ElementPoly::from_term(QPoly::one(), mono(&[1, 0]))
            + &ElementPoly::from_term(QPoly::q_pow(1), mono(&[0, 1]));
        assert_eq!(aa.d_element(), expected);
        let da_a = ElementPoly::from_term(QPoly::one(), mono(&[1, 0]));
        let expected = &ElementPoly::from_term(QPoly::one(), mono(&[2, 0]))
            + &ElementPoly::from_term(QPoly::q_pow(2), mono(&[1, 1]));
        assert_eq!(da_a.d_element(), expected);
    }

    #[test]
    fn maurer_cartan_elements() {
        let two = maurer_cartan_element(2);
        assert_eq!(two.to_string(), "d(a) + a^2");
        let three = maurer_cartan_element(3);
        assert_eq!(three.to_string(), "d^2(a) + d(a)*a + (1+q)*a*d(a) + a^3");
        for n in 1..=7 {
            assert_eq!(
                maurer_cartan_element(n).coeff(&mono(&vec![0; n])),
                QPoly::one()
            );
        }
    }

    #[test]
    fn curvature_element_recursion_and_zero_order_part() {
        for n in 1..=6 {
            let m = maurer_cartan_element(n);
            let next = &m.d_element() + &m.prepend_a();
            assert_eq!(maurer_cartan_element(n + 1), next);
            assert_eq!(expand_power(n).dpow_part(0), m, "n={n}");
        }
    }

    #[test]
    fn nilpotent_expansion() {
        assert_eq!(expand_power_nilpotent(1), term(&[1], &[0], 0));
        assert_eq!(
            expand_power_nilpotent(2),
            sum(&[term(&[1, 1], &[0], 1), term(&[1], &[1], 0)])
        );
        assert_eq!(
            expand_power_nilpotent(3),
            sum(&[
                term(&[1, 1, 1], &[0], 2),
                term(&[1, 1, 1], &[1], 1),
                term(&[1], &[2], 0)
            ])
        );
        for n in 1..=6 {
            let restricted = expand_power(n).filter(|k| k.mono.len() == 1);
            assert_eq!(expand_power_nilpotent(n), restricted, "n={n}");
        }
    }

    #[test]
    fn leibniz_consistency() {
        for s in crate::paths::compositions_up_to(5) {
            let m = Monomial::new(s.clone());
            let mut word = vec![D];
            word.extend(s.entries().iter().map(|&j| E(j)));
            let lhs = normal_order(&word);
            let rhs = &ElementPoly::from_term(QPoly::one(), m.clone())
                .d_element()
                .times_d(0)
                + &OperatorPoly::from_term(QPoly::q_pow(m.degree()), m.clone(), 1);
            assert_eq!(lhs, rhs, "s={s}");
        }
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Vec<Generator>> {
        prop::collection::vec(prop_oneof![Just(D), (0usize..3).prop_map(E)], 0..=max)
    }

    proptest! {
        #[test]
        fn rewriting_is_confluent(w in arb_word(7)) {
            prop_assert_eq!(
                normal_order_with(&w, RewriteOrder::Leftmost),
                normal_order_with(&w, RewriteOrder::Rightmost)
            );
        }

        #[test]
        fn product_is_associative(u in arb_word(2), v in arb_word(2), w in arb_word(2)) {
            let (u, v, w) = (OperatorPoly::from_word(&u), OperatorPoly::from_word(&v), OperatorPoly::from_word(&w));
            prop_assert_eq!(u.mul(&v.mul(&w)), u.mul(&v).mul(&w));
        }

        #[test]
        fn algebraic_product_matches_rewriting(u in arb_word(3), v in arb_word(3)) {
            let mut joined = u.clone();
            joined.extend_from_slice(&v);
            let product = OperatorPoly::from_word(&u).mul(&OperatorPoly::from_word(&v));
            prop_assert_eq!(product, normal_order(&joined));
        }
    }
}
