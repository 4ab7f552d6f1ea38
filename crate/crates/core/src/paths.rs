//! Composition vectors and the weighted path graph.
//!
//! Vertices are compositions `s = (s_1, ..., s_n)`. From every vertex there
//! are three kinds of edges: prepend a zero, stay put, or increment one
//! coordinate. A length-`n` path from `∅` to `s` records one way in which
//! `(d + a)^n` produces the word `d^{s_1}(a)...d^{s_n}(a)`, and the sum of path
//! weights is that word's coefficient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloModulus, QPoly};
use crate::{Error, Result};

/// A finite tuple of nonnegative integers; the empty tuple is `∅`.
///
/// Ordered by length first, then lexicographically from the last entry
/// backwards, so `(1,0)` precedes `(0,1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Comp(Vec<usize>);

impl Comp {
    pub fn new(entries: Vec<usize>) -> Self {
        Comp(entries)
    }

    pub fn empty() -> Self {
        Comp(Vec::new())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// `|s| + l(s)`: every move edge raises it by one, stays keep it.
    pub fn degree(&self) -> usize {
        self.sum() + self.len()
    }

    /// `(s_1, ..., s_{i-1})` for 1-based `i`; `prefix(1)` is `∅`.
    pub fn prefix(&self, i: usize) -> Comp {
        assert!(
            i >= 1 && i <= self.len() + 1,
            "prefix index {i} out of range"
        );
        Comp(self.0[..i - 1].to_vec())
    }

    /// `(s_{i+1}, ..., s_n)` for 1-based `i`; `suffix(n)` is `∅`.
    pub fn suffix(&self, i: usize) -> Comp {
        assert!(i >= 1 && i <= self.len(), "suffix index {i} out of range");
        Comp(self.0[i..].to_vec())
    }

    /// `(0, s)`.
    pub fn prepend_zero(&self) -> Comp {
        let mut entries = Vec::with_capacity(self.len() + 1);
        entries.push(0);
        entries.extend_from_slice(&self.0);
        Comp(entries)
    }

    /// `s + e_i` for 1-based `i`.
    pub fn increment(&self, i: usize) -> Comp {
        let mut entries = self.0.clone();
        entries[i - 1] += 1;
        Comp(entries)
    }

    pub fn concat(&self, other: &Comp) -> Comp {
        let mut entries = self.0.clone();
        entries.extend_from_slice(&other.0);
        Comp(entries)
    }

    pub fn max_entry(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }
}

impl Ord for Comp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Comp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<usize>> for Comp {
    fn from(entries: Vec<usize>) -> Self {
        Comp(entries)
    }
}

impl fmt::Display for Comp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Accepts `0,1`, `(0,1)`, `∅` or the empty string.
impl FromStr for Comp {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let trimmed = input.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(trimmed)
            .trim();
        if inner.is_empty() || inner == "∅" {
            return Ok(Comp::empty());
        }
        inner
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidComp {
                        input: input.to_string(),
                        reason: format!("{:?} is not a nonnegative integer", part.trim()),
                    })
            })
            .collect::<Result<Vec<_>>>()
            .map(Comp)
    }
}

/// All compositions with `|s| + l(s) <= n`, in [`Comp`] order.
pub fn compositions_up_to(n: usize) -> Vec<Comp> {
    fn fill(prefix: &mut Vec<usize>, len: usize, budget: usize, out: &mut Vec<Comp>) {
        if prefix.len() == len {
            out.push(Comp(prefix.clone()));
            return;
        }
        for v in 0..=budget {
            prefix.push(v);
            fill(prefix, len, budget - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for len in 0..=n {
        fill(&mut Vec::with_capacity(len), len, n - len, &mut out);
    }
    out.sort();
    out
}

/// `n - |s| - l(s)`: the power of `d` that accompanies the word `a^(s)` in
/// the expansion of `D^n`. Negative when `s` is out of reach.
pub fn residual_order(s: &Comp, n: usize) -> i64 {
    n as i64 - s.degree() as i64
}

/// Convention for the exponent of an increment edge.
///
/// Both conventions agree on prepend (`1`) and stay (`q^{|s|+l(s)}`) edges.
/// For `s -> s + e_i`:
///
/// - `Literal`: `q^{|s| + i - 1}`,
/// - `Prefix`: `q^{|s_{<i}| + i - 1}`, the total degree of the factors to the
///   left of position `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightRule {
    Literal,
    Prefix,
}

impl WeightRule {
    pub const ALL: [WeightRule; 2] = [WeightRule::Literal, WeightRule::Prefix];

    pub fn name(self) -> &'static str {
        match self {
            WeightRule::Literal => "literal",
            WeightRule::Prefix => "prefix",
        }
    }

    pub fn stay_exponent(self, s: &Comp) -> usize {
        s.degree()
    }

    /// Exponent of the edge `s -> s + e_i`, 1-based `i`.
    pub fn increment_exponent(self, s: &Comp, i: usize) -> usize {
        match self {
            WeightRule::Literal => s.sum() + i - 1,
            WeightRule::Prefix => s.prefix(i).sum() + i - 1,
        }
    }
}

impl fmt::Display for WeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "literal" => Ok(WeightRule::Literal),
            "prefix" => Ok(WeightRule::Prefix),
            other => Err(format!("unknown weight rule {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Prepend,
    Stay,
    /// 1-based coordinate.
    Increment(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: Comp,
    pub target: Comp,
    pub kind: EdgeKind,
    /// The weight is `q^exponent`.
    pub exponent: usize,
}

impl Edge {
    pub fn weight(&self) -> QPoly {
        QPoly::q_pow(self.exponent)
    }
}

/// Outgoing edges in the order prepend, stay, increment(1), increment(2), ...
pub fn successors(s: &Comp, rule: WeightRule) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(s.len() + 2);
    edges.push(Edge {
        source: s.clone(),
        target: s.prepend_zero(),
        kind: EdgeKind::Prepend,
        exponent: 0,
    });
    edges.push(Edge {
        source: s.clone(),
        target: s.clone(),
        kind: EdgeKind::Stay,
        exponent: rule.stay_exponent(s),
    });
    for i in 1..=s.len() {
        edges.push(Edge {
            source: s.clone(),
            target: s.increment(i),
            kind: EdgeKind::Increment(i),
            exponent: rule.increment_exponent(s, i),
        });
    }
    edges
}

/// A vertex `v` at step `t` can still end at `target` at step `n` only if
/// the degree gap is nonnegative and coverable by the remaining moves.
fn can_reach(v: &Comp, target: &Comp, t: usize, n: usize) -> bool {
    v.degree() <= target.degree() && target.degree() - v.degree() <= n - t
}

/// A length-`n` path from `∅`, as its vertex sequence and total exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<Comp>,
    pub exponent: usize,
}

/// Every length-`n` path from `∅` to `s`, by depth-first search.
pub fn enumerate_paths(s: &Comp, n: usize, rule: WeightRule) -> Vec<Path> {
    fn walk(
        stack: &mut Vec<Comp>,
        exponent: usize,
        target: &Comp,
        n: usize,
        rule: WeightRule,
        out: &mut Vec<Path>,
    ) {
        let t = stack.len() - 1;
        let here = stack.last().expect("path starts at ∅").clone();
        if t == n {
            if &here == target {
                out.push(Path {
                    vertices: stack.clone(),
                    exponent,
                });
            }
            return;
        }
        for edge in successors(&here, rule) {
            if !can_reach(&edge.target, target, t + 1, n) {
                continue;
            }
            stack.push(edge.target);
            walk(stack, exponent + edge.exponent, target, n, rule, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    if can_reach(&Comp::empty(), s, 0, n) {
        walk(&mut vec![Comp::empty()], 0, s, n, rule, &mut out);
    }
    out
}

/// `c_q(s, n)` as an explicit sum over enumerated paths.
pub fn path_sum_enum(s: &Comp, n: usize, rule: WeightRule) -> QPoly {
    enumerate_paths(s, n, rule)
        .iter()
        .map(|p| QPoly::q_pow(p.exponent))
        .sum()
}

/// Path sums per vertex at a fixed step.
pub type Layer = BTreeMap<Comp, QPoly>;

/// One forward step: the value at `v` becomes the sum over edges `u -> v` of
/// `value(u) * weight(u -> v)`. Zero entries are dropped.
pub fn dp_step(
    layer: &Layer,
    rule: WeightRule,
    modulus: Option<&CycloModulus>,
    keep: impl Fn(&Comp) -> bool,
) -> Layer {
    let mut next = Layer::new();
    for (u, value) in layer {
        for edge in successors(u, rule) {
            if !keep(&edge.target) {
                continue;
            }
            let contribution = value.shift(edge.exponent);
            *next.entry(edge.target).or_default() += &contribution;
        }
    }
    next.into_iter()
        .filter_map(|(v, value)| {
            let value = match modulus {
                Some(m) => m.reduce(&value),
                None => value,
            };
            (!value.is_zero()).then_some((v, value))
        })
        .collect()
}

/// Every nonzero `c_q(s, n)` at once. With a modulus, each step is reduced
/// modulo Φ so that the computation happens in the quotient ring.
///
/// Vertices are restricted to `|s| + l(s) <= n`, which loses nothing since
/// no edge lowers that degree.
pub fn all_path_sums(n: usize, rule: WeightRule, modulus: Option<&CycloModulus>) -> Layer {
    let mut layer = Layer::from([(Comp::empty(), QPoly::one())]);
    for _ in 0..n {
        layer = dp_step(&layer, rule, modulus, |v| v.degree() <= n);
    }
    layer
}

/// `c_q(s, n)` by forward dynamic programming, keeping only vertices that
/// can still reach `s`.
pub fn path_sum_dp(s: &Comp, n: usize, rule: WeightRule) -> QPoly {
    let mut layer = Layer::from([(Comp::empty(), QPoly::one())]);
    if !can_reach(&Comp::empty(), s, 0, n) {
        return QPoly::zero();
    }
    for t in 0..n {
        layer = dp_step(&layer, rule, None, |v| can_reach(v, s, t + 1, n));
    }
    layer.remove(s).unwrap_or_default()
}

/// The same recursion with no vertex filtering at all.
pub fn path_sum_dp_unpruned(s: &Comp, n: usize, rule: WeightRule) -> QPoly {
    let mut layer = Layer::from([(Comp::empty(), QPoly::one())]);
    for _ in 0..n {
        layer = dp_step(&layer, rule, None, |_| true);
    }
    layer.remove(s).unwrap_or_default()
}

/// Number of length-`n` paths from `∅` to `s`, ignoring weights.
pub fn count_paths(s: &Comp, n: usize) -> u64 {
    fn count(v: &Comp, target: &Comp, remaining: usize) -> u64 {
        if remaining == 0 {
            return u64::from(v == target);
        }
        if v.degree() > target.degree() {
            return 0;
        }
        let mut total = count(&v.prepend_zero(), target, remaining - 1);
        total += count(v, target, remaining - 1);
        for i in 1..=v.len() {
            total += count(&v.increment(i), target, remaining - 1);
        }
        total
    }
    count(&Comp::empty(), s, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn c(entries: &[usize]) -> Comp {
        Comp::new(entries.to_vec())
    }

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::from_i64s(coeffs)
    }

    #[test]
    fn comp_accessors() {
        let s = c(&[2, 0, 3]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.sum(), 5);
        assert_eq!(s.prefix(1), Comp::empty());
        assert_eq!(s.prefix(3), c(&[2, 0]));
        assert_eq!(s.prefix(4), s);
        assert_eq!(s.suffix(1), c(&[0, 3]));
        assert_eq!(s.suffix(3), Comp::empty());
        assert_eq!(s.prepend_zero(), c(&[0, 2, 0, 3]));
        assert_eq!(s.increment(2), c(&[2, 1, 3]));
    }

    #[test]
    fn comp_order_is_length_then_reversed_lex() {
        let mut v = vec![
            c(&[0, 1]),
            c(&[2]),
            Comp::empty(),
            c(&[1, 0]),
            c(&[0, 0, 0]),
            c(&[0]),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Comp::empty(),
                c(&[0]),
                c(&[2]),
                c(&[1, 0]),
                c(&[0, 1]),
                c(&[0, 0, 0])
            ]
        );
        assert!(c(&[2, 0]) < c(&[1, 1]));
        assert!(c(&[1, 1]) < c(&[0, 2]));
    }

    #[test]
    fn e3_listing_order() {
        let e3: Vec<String> = compositions_up_to(3).iter().map(Comp::to_string).collect();
        assert_eq!(
            e3,
            ["∅", "(0)", "(1)", "(2)", "(0,0)", "(1,0)", "(0,1)", "(0,0,0)"]
        );
    }

    #[test]
    fn comp_text_syntax() {
        assert_eq!("0,1".parse::<Comp>().unwrap(), c(&[0, 1]));
        assert_eq!(" (2, 0) ".parse::<Comp>().unwrap(), c(&[2, 0]));
        assert_eq!("∅".parse::<Comp>().unwrap(), Comp::empty());
        assert_eq!("".parse::<Comp>().unwrap(), Comp::empty());
        assert!("0,x".parse::<Comp>().is_err());
        assert!("0,,1".parse::<Comp>().is_err());
        assert!("-1".parse::<Comp>().is_err());
        assert_eq!(c(&[0, 1]).to_string(), "(0,1)");
        assert_eq!(Comp::empty().to_string(), "∅");
    }

    #[test]
    fn bounded_compositions() {
        assert_eq!(compositions_up_to(1), vec![Comp::empty(), c(&[0])]);
        let e3 = compositions_up_to(3);
        let mut expected = vec![
            Comp::empty(),
            c(&[0]),
            c(&[1]),
            c(&[2]),
            c(&[0, 0]),
            c(&[1, 0]),
            c(&[0, 1]),
            c(&[0, 0, 0]),
        ];
        expected.sort();
        assert_eq!(e3, expected);
        assert_eq!(compositions_up_to(4).len(), 16);
        // 2^n compositions: one per subset of the n unit steps
        for n in 1..=8 {
            assert_eq!(compositions_up_to(n).len(), 1 << n);
        }
    }

    #[test]
    fn residual_orders() {
        assert_eq!(residual_order(&c(&[0, 1]), 3), 0);
        assert_eq!(residual_order(&Comp::empty(), 5), 5);
        assert_eq!(residual_order(&c(&[2]), 3), 0);
        assert_eq!(residual_order(&c(&[4]), 3), -2);
    }

    #[test]
    fn successor_edges() {
        let edges = successors(&Comp::empty(), WeightRule::Literal);
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[0].target, c(&[0]));
        assert_eq!(edges[0].exponent, 0);
        assert_eq!(edges[1].kind, EdgeKind::Stay);
        assert_eq!(edges[1].weight(), QPoly::one());

        let s = c(&[0, 1]);
        let literal = successors(&s, WeightRule::Literal);
        let summary: Vec<_> = literal
            .iter()
            .map(|e| (e.kind, e.target.clone(), e.exponent))
            .collect();
        assert_eq!(
            summary,
            vec![
                (EdgeKind::Prepend, c(&[0, 0, 1]), 0),
                (EdgeKind::Stay, s.clone(), 3),
                (EdgeKind::Increment(1), c(&[1, 1]), 1),
                (EdgeKind::Increment(2), c(&[0, 2]), 2),
            ]
        );
        let prefix = successors(&s, WeightRule::Prefix);
        let exps: Vec<_> = prefix.iter().map(|e| e.exponent).collect();
        assert_eq!(exps, vec![0, 3, 0, 1]);
    }

    #[test]
    fn edge_kinds_match_targets() {
        for s in compositions_up_to(5) {
            for rule in WeightRule::ALL {
                let edges = successors(&s, rule);
                assert_eq!(edges.len(), 2 + s.len());
                for e in edges {
                    match e.kind {
                        EdgeKind::Prepend => assert_eq!(e.target, s.prepend_zero()),
                        EdgeKind::Stay => assert_eq!(e.target, s),
                        EdgeKind::Increment(i) => assert_eq!(e.target, s.increment(i)),
                    }
                }
            }
        }
    }

    #[test]
    fn enumerated_path_sums() {
        use WeightRule::*;
        assert_eq!(path_sum_enum(&c(&[0, 1]), 3, Literal), p(&[1, 1]));
        assert_eq!(path_sum_enum(&c(&[0]), 3, Literal), p(&[1, 1, 1]));
        assert_eq!(path_sum_enum(&Comp::empty(), 4, Literal), QPoly::one());
        assert_eq!(path_sum_enum(&c(&[2]), 3, Prefix), QPoly::one());
        // the literal increment weight picks up q on (1) -> (2)
        assert_eq!(path_sum_enum(&c(&[2]), 3, Literal), QPoly::q_pow(1));
        assert_eq!(path_sum_enum(&c(&[0, 0, 0]), 3, Literal), QPoly::one());
    }

    #[test]
    fn explicit_paths_for_one_one() {
        let paths = enumerate_paths(&c(&[1, 1]), 4, WeightRule::Prefix);
        let mut seen: Vec<(Vec<Comp>, usize)> = paths
            .into_iter()
            .map(|p| (p.vertices, p.exponent))
            .collect();
        seen.sort();
        let e = Comp::empty;
        let mut expected = vec![
            (vec![e(), c(&[0]), c(&[0, 0]), c(&[1, 0]), c(&[1, 1])], 2),
            (vec![e(), c(&[0]), c(&[0, 0]), c(&[0, 1]), c(&[1, 1])], 1),
            (vec![e(), c(&[0]), c(&[1]), c(&[0, 1]), c(&[1, 1])], 0),
        ];
        expected.sort();
        assert_eq!(seen, expected);
    }

    #[test]
    fn dp_values() {
        use WeightRule::*;
        assert_eq!(path_sum_dp(&c(&[0, 1]), 3, Literal), p(&[1, 1]));
        assert_eq!(path_sum_dp(&c(&[1, 1]), 4, Prefix), p(&[1, 1, 1]));
        assert_eq!(path_sum_dp(&c(&[0, 0, 0]), 3, Literal), QPoly::one());
    }

    #[test]
    fn dp_matches_enumeration() {
        for n in 1..=5 {
            for s in compositions_up_to(n) {
                for rule in WeightRule::ALL {
                    let by_enum = path_sum_enum(&s, n, rule);
                    assert_eq!(path_sum_dp(&s, n, rule), by_enum, "s={s} n={n} {rule}");
                    assert_eq!(
                        path_sum_dp_unpruned(&s, n, rule),
                        by_enum,
                        "s={s} n={n} {rule}"
                    );
                    let all = all_path_sums(n, rule, None);
                    assert_eq!(all.get(&s).cloned().unwrap_or_default(), by_enum);
                }
            }
        }
    }

    #[test]
    fn unreachable_targets_are_zero() {
        for n in 1..=5 {
            for s in compositions_up_to(n + 2) {
                if s.degree() > n {
                    for rule in WeightRule::ALL {
                        assert!(path_sum_enum(&s, n, rule).is_zero());
                        assert!(path_sum_dp(&s, n, rule).is_zero());
                        assert!(path_sum_dp_unpruned(&s, n, rule).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn dp_step_identity() {
        // value at v after one more step = Σ over in-edges u -> v of value(u)·weight
        let rule = WeightRule::Prefix;
        for t in 1..=4 {
            let layer = {
                let mut l = Layer::from([(Comp::empty(), QPoly::one())]);
                for _ in 0..t {
                    l = dp_step(&l, rule, None, |_| true);
                }
                l
            };
            let next = dp_step(&layer, rule, None, |_| true);
            for v in compositions_up_to(t + 1) {
                let mut expected = QPoly::zero();
                for (u, value) in &layer {
                    for e in successors(u, rule).into_iter().filter(|e| e.target == v) {
                        expected += &(value * &e.weight());
                    }
                }
                assert_eq!(next.get(&v).cloned().unwrap_or_default(), expected);
            }
        }
    }

    #[test]
    fn path_sums_at_one_count_paths() {
        let one = BigInt::from(1);
        for n in 1..=5 {
            for s in compositions_up_to(n) {
                for rule in WeightRule::ALL {
                    let value = path_sum_enum(&s, n, rule).eval(&one);
                    assert_eq!(value, BigInt::from(count_paths(&s, n)));
                }
            }
        }
    }

    #[test]
    fn reduced_dp_matches_reduction_of_generic_dp() {
        for n in 2..=6 {
            let m = CycloModulus::new(n).unwrap();
            for rule in WeightRule::ALL {
                let generic = all_path_sums(n, rule, None);
                let reduced = all_path_sums(n, rule, Some(&m));
                let expected: Layer = generic
                    .into_iter()
                    .map(|(s, v)| (s, m.reduce(&v)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                assert_eq!(reduced, expected);
            }
        }
    }
}
