//! Simple functions and their integrals against the graph measure, the
//! `g_w`, monomial, polynomial and trigonometric families, subgraph
//! integrals, and truncated integrals against the extended measure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::diagram::{reduced_diagram, Diagram, DiagramMode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::measure::{MeasureContext, MeasureValue, NeighborhoodRule, SubgraphVariant};
use crate::rational::{to_pq, Rational};
use crate::word::{enumerate_words, Word};

/// A finite rational combination of indicator functions, `sum a_n 1_{S_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleFunction<T: Ord> {
    terms: Vec<(Rational, BTreeSet<T>)>,
}

impl<T: Ord + Clone> Default for SimpleFunction<T> {
    fn default() -> Self {
        SimpleFunction { terms: Vec::new() }
    }
}

impl<T: Ord> FromIterator<(Rational, BTreeSet<T>)> for SimpleFunction<T> {
    fn from_iter<I: IntoIterator<Item = (Rational, BTreeSet<T>)>>(iter: I) -> Self {
        SimpleFunction {
            terms: iter.into_iter().collect(),
        }
    }
}

impl<T: Ord + Clone> SimpleFunction<T> {
    /// The zero function.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn indicator(set: BTreeSet<T>) -> Self {
        Self::term(Rational::from_integer(1.into()), set)
    }

    pub fn term(coefficient: Rational, set: BTreeSet<T>) -> Self {
        SimpleFunction {
            terms: vec![(coefficient, set)],
        }
    }

    pub fn terms(&self) -> &[(Rational, BTreeSet<T>)] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SimpleFunction { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SimpleFunction {
            terms: self.terms.iter().map(|(a, s)| (a * c, s.clone())).collect(),
        }
    }

    /// Pointwise product: one term `(a * b, S ∩ T)` per pair of terms.
    pub fn product(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, s) in &self.terms {
            for (b, t) in &other.terms {
                terms.push((a * b, s.intersection(t).cloned().collect()));
            }
        }
        SimpleFunction { terms }
    }

    pub fn value_at(&self, x: &T) -> Rational {
        self.terms
            .iter()
            .filter(|(_, s)| s.contains(x))
            .fold(Rational::zero(), |acc, (a, _)| acc + a)
    }

    /// Union of the term supports; the function vanishes outside it.
    pub fn support(&self) -> BTreeSet<T> {
        self.terms.iter().flat_map(|(_, s)| s.iter().cloned()).collect()
    }

    /// The function as a map from points to nonzero values.
    pub fn pointwise(&self) -> BTreeMap<T, Rational> {
        let mut values: BTreeMap<T, Rational> = BTreeMap::new();
        for (a, s) in &self.terms {
            for x in s {
                *values.entry(x.clone()).or_insert_with(Rational::zero) += a;
            }
        }
        values.retain(|_, v| !v.is_zero());
        values
    }

    /// Disjoint-support representation: one term per distinct nonzero value.
    pub fn canonical(&self) -> Self {
        Self::from_values(self.pointwise())
    }

    fn from_values(values: BTreeMap<T, Rational>) -> Self {
        let mut level_sets: BTreeMap<Rational, BTreeSet<T>> = BTreeMap::new();
        for (x, v) in values {
            level_sets.entry(v).or_default().insert(x);
        }
        SimpleFunction {
            terms: level_sets.into_iter().collect(),
        }
    }

    fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let values = self
            .pointwise()
            .into_iter()
            .map(|(x, v)| (x, f(&v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Self::from_values(values)
    }

    /// `max(f, 0)`
    pub fn positive_part(&self) -> Self {
        self.map_values(|v| if v.is_positive() { v.clone() } else { Rational::zero() })
    }

    /// `max(-f, 0)`
    pub fn negative_part(&self) -> Self {
        self.map_values(|v| if v.is_negative() { -v } else { Rational::zero() })
    }

    pub fn abs(&self) -> Self {
        self.map_values(|v| v.abs())
    }

    /// Equal as functions, regardless of representation.
    pub fn same_function(&self, other: &Self) -> bool {
        self.pointwise() == other.pointwise()
    }
}

/// `sum a_n mu(S_n)` over the graph measure of the shadowed graph. For a
/// nonnegative function this is also the supremum over simple functions
/// below it, since the function is itself simple.
pub fn integrate(ctx: &MeasureContext, g: &SimpleFunction<Diagram>) -> Result<Rational> {
    g.terms
        .iter()
        .try_fold(Rational::zero(), |acc, (a, s)| Ok(acc + a * ctx.measure(s)?))
}

/// The diagram sets of the left and right admissibility neighborhoods of a
/// word: diagrams that can follow it and diagrams that can precede it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodSets {
    pub left: BTreeSet<Diagram>,
    pub right: BTreeSet<Diagram>,
}

impl NeighborhoodSets {
    pub fn union(&self) -> BTreeSet<Diagram> {
        self.left.union(&self.right).cloned().collect()
    }
}

/// Neighborhood sets of `w` within the context's domain, under the
/// context's neighborhood rule.
pub fn neighborhood(ctx: &MeasureContext, w: &Word) -> Result<NeighborhoodSets> {
    let w = w.reduce();
    let (source, range) = (w.source()?, w.range()?);
    let domain = ctx.reduced();
    match (ctx.options().neighborhood, &w) {
        (NeighborhoodRule::Cyclic, Word::Path(_)) => {
            let keep = |d: Diagram| ctx.in_reduced_domain(&d).then_some(d);
            let mut left: BTreeSet<Diagram> = keep(Diagram::vertex(range)).into_iter().collect();
            if w.is_loop() {
                left.extend(keep(reduced_diagram(&w)?));
            }
            let right = keep(Diagram::vertex(source)).into_iter().collect();
            Ok(NeighborhoodSets { left, right })
        }
        _ => Ok(NeighborhoodSets {
            left: domain.iter().filter(|d| d.source() == range).cloned().collect(),
            right: domain.iter().filter(|d| d.range() == source).cloned().collect(),
        }),
    }
}

/// Diagrams that can follow a word ending at `range` or precede one
/// starting at `source`.
fn adjacent_union(ctx: &MeasureContext, source: usize, range: usize) -> BTreeSet<Diagram> {
    ctx.reduced()
        .iter()
        .filter(|d| d.source() == range || d.range() == source)
        .cloned()
        .collect()
}

/// The indicator of the neighborhood sets of `w`.
pub fn g_w(ctx: &MeasureContext, w: &Word) -> Result<SimpleFunction<Diagram>> {
    Ok(SimpleFunction::indicator(neighborhood(ctx, w)?.union()))
}

/// `g_n(x) = g_{x^n}` summed over every `x` in the domain whose `n`-th power
/// is a word. For `|n| >= 2` only vertices and loops qualify. Equal
/// neighborhood sets are merged into one term weighted by multiplicity.
pub fn monomial(ctx: &MeasureContext, n: i64) -> Result<SimpleFunction<Diagram>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the zeroth power is the constant function 1".into(),
        ));
    }
    // Under the adjacent rule (and for vertex words under either rule) a
    // neighborhood depends only on the endpoints, so those are counted per
    // endpoint pair and their sets built once.
    let mut by_endpoints: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut counts: BTreeMap<BTreeSet<Diagram>, i64> = BTreeMap::new();
    for x in monomial_support(ctx, n) {
        let w = ctx
            .reduced()
            .witness(&x)
            .expect("domain diagrams carry witnesses")
            .power(n)
            .reduce();
        if ctx.options().neighborhood == NeighborhoodRule::Adjacent || !matches!(w, Word::Path(_)) {
            *by_endpoints.entry((w.source()?, w.range()?)).or_insert(0) += 1;
        } else {
            *counts.entry(neighborhood(ctx, &w)?.union()).or_insert(0) += 1;
        }
    }
    for ((source, range), k) in by_endpoints {
        *counts.entry(adjacent_union(ctx, source, range)).or_insert(0) += k;
    }
    Ok(counts
        .into_iter()
        .map(|(set, k)| (Rational::from_integer(k.into()), set))
        .collect())
}

/// Diagrams `x` with `x^n` defined: all of the domain for `|n| = 1`,
/// vertices and loops otherwise.
pub fn monomial_support(ctx: &MeasureContext, n: i64) -> BTreeSet<Diagram> {
    ctx.reduced()
        .iter()
        .filter(|d| n.abs() == 1 || d.is_vertex() || d.is_loop())
        .cloned()
        .collect()
}

/// Integral of `sum_{n=0}^{N} a_n g_n` where `g_0` is the constant 1:
/// `a_0 mu(D_r) + a_1 I(g_1) + (sum_{k>=2} a_k) I(g_2)`.
pub fn polynomial_integral(ctx: &MeasureContext, coeffs: &[Rational]) -> Result<Rational> {
    let by_power: BTreeMap<i64, Rational> = coeffs.iter().enumerate().map(|(k, a)| (k as i64, a.clone())).collect();
    trigonometric_integral(ctx, &by_power)
}

/// Integral of `sum_{n=-N}^{N} a_n g_n`: powers `±1` share `I(g_1)` and
/// every power with `|n| >= 2` shares `I(g_2)`.
pub fn trigonometric_integral(ctx: &MeasureContext, coeffs: &BTreeMap<i64, Rational>) -> Result<Rational> {
    let mut constant = Rational::zero();
    let mut linear = Rational::zero();
    let mut higher = Rational::zero();
    for (&k, a) in coeffs {
        match k.abs() {
            0 => constant += a,
            1 => linear += a,
            _ => higher += a,
        }
    }
    let mut total = Rational::zero();
    if !constant.is_zero() {
        total += constant * ctx.measure(&ctx.reduced().to_set())?;
    }
    if !linear.is_zero() {
        total += linear * integrate(ctx, &monomial(ctx, 1)?)?;
    }
    if !higher.is_zero() {
        total += higher * integrate(ctx, &monomial(ctx, 2)?)?;
    }
    Ok(total)
}

/// Integral of `a_0 + sum_{k>=1} a_k g_{w^k}` for a single word `w`. Powers
/// of a non-loop path are not words and contribute nothing; every power of
/// a loop has the same neighborhood measure.
pub fn non_loop_truncation(ctx: &MeasureContext, w: &Word, coeffs: &[Rational]) -> Result<Rational> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut total = Rational::zero();
    for (k, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if k == 0 {
            total += a * ctx.measure(&ctx.reduced().to_set())?;
            continue;
        }
        let power = w.power(k as i64);
        if power.is_empty() {
            continue;
        }
        total += a * integrate(ctx, &g_w(ctx, &power)?)?;
    }
    Ok(total)
}

/// `I_{G:H}(g_w)`: the chosen subgraph measure of the neighborhood set of `w`.
pub fn subgraph_integrate(ctx: &MeasureContext, h: &Graph, w: &Word, variant: SubgraphVariant) -> Result<Rational> {
    let set = neighborhood(ctx, w)?.union();
    Ok(ctx.subgraph_measure(h, &set, variant)?.total())
}

/// Support of one term of a function on words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordSupport {
    Explicit(BTreeSet<Word>),
    /// Every word that can follow or precede the given word; infinite as
    /// soon as the graph has an edge.
    Neighborhood(Word),
}

impl WordSupport {
    fn contains(&self, x: &Word) -> bool {
        match self {
            WordSupport::Explicit(set) => set.contains(x),
            WordSupport::Neighborhood(w) => match (w.source(), w.range(), x.source(), x.range()) {
                (Ok(ws), Ok(wr), Ok(xs), Ok(xr)) => xs == wr || xr == ws,
                _ => false,
            },
        }
    }
}

/// A simple function against the extended measure on words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtendedFunction {
    pub terms: Vec<(Rational, WordSupport)>,
}

impl ExtendedFunction {
    pub fn term(coefficient: Rational, support: WordSupport) -> Self {
        ExtendedFunction {
            terms: vec![(coefficient, support)],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ExtendedFunction { terms }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExtendedFunction {
            terms: self.terms.iter().map(|(a, s)| (a * c, s.clone())).collect(),
        }
    }

    fn is_finite(&self) -> bool {
        self.terms
            .iter()
            .all(|(a, s)| a.is_zero() || matches!(s, WordSupport::Explicit(_)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    /// Every support is finite; the value is exact.
    Exact,
    /// The last two length strata contribute nothing.
    Converged,
    /// The last three length strata each contribute a positive amount.
    Diverging,
    Inconclusive,
}

impl fmt::Display for Convergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convergence::Exact => "exact",
            Convergence::Converged => "converged",
            Convergence::Diverging => "diverging",
            Convergence::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedReport {
    /// The exact value, `Infinite` when diverging, otherwise the partial sum.
    pub value: MeasureValue,
    pub partial_sum: Rational,
    /// Contribution of words of each length `0..=max_len`.
    pub strata: Vec<Rational>,
    pub convergence: Convergence,
}

impl ExtendedReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value.to_string(),
            "partial_sum": to_pq(&self.partial_sum),
            "strata": self.strata.iter().map(to_pq).collect::<Vec<_>>(),
            "convergence": self.convergence.to_string(),
        })
    }
}

/// Integrates a function on words against the extended measure. Finite
/// supports are evaluated exactly; otherwise words over the shadowed graph
/// are enumerated up to `max_len` and summed by length, and the tail of the
/// strata decides the report. The divergence test is a heuristic: three
/// positive trailing strata.
pub fn extended_integrate(ctx: &MeasureContext, f: &ExtendedFunction, max_len: usize) -> Result<ExtendedReport> {
    if max_len < 1 {
        return Err(Error::InvalidArgument("max_len must be at least 1".into()));
    }
    if f.is_finite() {
        let mut strata = vec![Rational::zero(); max_len + 1];
        let mut total = Rational::zero();
        for (a, s) in &f.terms {
            let WordSupport::Explicit(set) = s else { continue };
            for w in set {
                let v = a * ctx.word_value(w)?;
                if let Some(cell) = strata.get_mut(w.len()) {
                    *cell += &v;
                }
                total += v;
            }
        }
        return Ok(ExtendedReport {
            value: MeasureValue::Finite(total.clone()),
            partial_sum: total,
            strata,
            convergence: Convergence::Exact,
        });
    }
    for (_, s) in &f.terms {
        match s {
            WordSupport::Explicit(set) if set.contains(&Word::Empty) => return Err(Error::EmptyWord),
            WordSupport::Neighborhood(Word::Empty) => return Err(Error::EmptyWord),
            _ => {}
        }
    }
    let mut strata = vec![Rational::zero(); max_len + 1];
    for x in enumerate_words(ctx.graph(), max_len, true) {
        let coefficient = f
            .terms
            .iter()
            .filter(|(_, s)| s.contains(&x))
            .fold(Rational::zero(), |acc, (a, _)| acc + a);
        if !coefficient.is_zero() {
            strata[x.len()] += coefficient * ctx.word_value(&x)?;
        }
    }
    let partial_sum = strata.iter().fold(Rational::zero(), |acc, s| acc + s);
    let tail = |k: usize| &strata[strata.len().saturating_sub(k)..];
    let convergence = if strata.len() >= 4 && tail(3).iter().all(Signed::is_positive) {
        Convergence::Diverging
    } else if tail(2).iter().all(Zero::is_zero) {
        Convergence::Converged
    } else {
        Convergence::Inconclusive
    };
    let value = match convergence {
        Convergence::Diverging => MeasureValue::Infinite,
        _ => MeasureValue::Finite(partial_sum.clone()),
    };
    Ok(ExtendedReport {
        value,
        partial_sum,
        strata,
        convergence,
    })
}

/// Words of length at most `max_len` over the shadowed graph whose `n`-th
/// power is a word: everything for `|n| = 1`, vertices and loop words
/// (including cancelling loops such as `e.e^-1`) otherwise.
pub fn extended_support(ctx: &MeasureContext, n: i64, max_len: usize) -> Result<BTreeSet<Word>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the zeroth power is the constant function 1".into(),
        ));
    }
    Ok(enumerate_words(ctx.graph(), max_len, true)
        .into_iter()
        .filter(|x| !x.power(n).is_empty())
        .collect())
}

/// Active-mode label, used in reports.
pub fn mode_label(mode: DiagramMode) -> &'static str {
    match mode {
        DiagramMode::Full => "full",
        DiagramMode::Generator => "generator",
    }
}
