//! Diagrams of words: the first-traversal trace of distinct signed edges
//! together with the word's endpoints.
//!
//! `D(G)` is the set of diagrams of forward words; `D_r(G^)` is the set of
//! diagrams of reduced words over the shadowed graph. Both are finite even
//! though the underlying word sets are not, and both are enumerated exactly
//! by a search over walk states `(source, position, last letter, trace)`.
//! That state space is finite because traces never repeat a letter.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, SignedEdge};
use crate::rational::Rational;
use crate::word::{enumerate_words, parse_signed_edge, parse_word, split_set_literal, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    source: usize,
    range: usize,
    trace: Vec<SignedEdge>,
}

impl Diagram {
    pub fn vertex(v: usize) -> Self {
        Diagram {
            source: v,
            range: v,
            trace: Vec::new(),
        }
    }

    /// Builds a diagram from parts. The trace must not repeat a letter and
    /// must be empty exactly when `source == range` is a vertex diagram.
    pub fn from_parts(g: &Graph, source: usize, range: usize, trace: Vec<SignedEdge>) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidWord {
            literal: format!("{} -> {}", source, range),
            reason: reason.to_string(),
        };
        if source >= g.vertex_count() || range >= g.vertex_count() {
            return Err(bad("vertex out of range"));
        }
        if trace.iter().any(|x| x.edge >= g.edge_count()) {
            return Err(bad("edge out of range"));
        }
        let distinct: HashSet<_> = trace.iter().collect();
        if distinct.len() != trace.len() {
            return Err(bad("trace repeats a signed edge"));
        }
        if trace.is_empty() && source != range {
            return Err(bad("a vertex diagram has equal endpoints"));
        }
        if let Some(first) = trace.first() {
            if first.source(g) != source {
                return Err(bad("trace does not start at the source"));
            }
        }
        Ok(Diagram { source, range, trace })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn trace(&self) -> &[SignedEdge] {
        &self.trace
    }

    /// Trace length; vertex diagrams have length 0.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.trace.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.trace.is_empty()
    }

    /// A positive-length diagram whose endpoints agree.
    pub fn is_loop(&self) -> bool {
        !self.trace.is_empty() && self.source == self.range
    }

    pub fn is_forward(&self) -> bool {
        self.trace.iter().all(|x| !x.inverse)
    }

    /// The trace read as a word, when it is admissible and ends at the
    /// diagram's range.
    pub fn trace_word(&self, g: &Graph) -> Option<Word> {
        if self.trace.is_empty() {
            return Some(Word::Vertex(self.source));
        }
        let w = Word::path(g, self.trace.clone()).ok()?;
        (w.range().ok()? == self.range).then_some(w)
    }

    /// Product of edge weights over the trace (inverse letters use the
    /// forward weight); 1 for vertex diagrams.
    pub fn weight(&self, g: &Graph) -> Rational {
        self.trace
            .iter()
            .fold(Rational::one(), |acc, x| acc * &g.edge(x.edge).weight)
    }

    /// `src -> dst : e1.e2^-1`
    pub fn line(&self, g: &Graph) -> String {
        let trace: Vec<String> = self.trace.iter().map(|x| x.literal(g)).collect();
        format!(
            "{} -> {} : {}",
            g.vertex_id(self.source),
            g.vertex_id(self.range),
            trace.join(".")
        )
        .trim_end()
        .to_string()
    }

    /// The shortest literal that denotes this diagram: the trace word when it
    /// reproduces the diagram, otherwise the explicit line form.
    pub fn literal(&self, g: &Graph) -> String {
        match self.trace_word(g) {
            Some(w) => w.literal(g),
            None => self.line(g),
        }
    }
}

impl Ord for Diagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.trace
            .len()
            .cmp(&other.trace.len())
            .then_with(|| self.trace.cmp(&other.trace))
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.range.cmp(&other.range))
    }
}

impl PartialOrd for Diagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The diagram of a word.
pub fn diagram(w: &Word) -> Result<Diagram> {
    match w {
        Word::Empty => Err(Error::EmptyWord),
        Word::Vertex(v) => Ok(Diagram::vertex(*v)),
        Word::Path(p) => {
            let mut seen = HashSet::new();
            let trace = p.edges().iter().copied().filter(|x| seen.insert(*x)).collect();
            Ok(Diagram {
                source: p.source(),
                range: p.range(),
                trace,
            })
        }
    }
}

/// The diagram of the reduced form of a word over the shadowed graph.
pub fn reduced_diagram(w: &Word) -> Result<Diagram> {
    diagram(&w.reduce())
}

/// A word is basic when no signed edge repeats, i.e. it is its own trace.
pub fn is_basic(w: &Word) -> Result<bool> {
    match w {
        Word::Empty => Err(Error::EmptyWord),
        _ => {
            let mut seen = HashSet::new();
            Ok(w.edges().iter().all(|x| seen.insert(*x)))
        }
    }
}

/// Every forward word of length at most `max_len` is basic. Holds for
/// directed trees at every length.
pub fn tree_coincidence_check(g: &Graph, max_len: usize) -> bool {
    enumerate_words(g, max_len, false)
        .iter()
        .all(|w| is_basic(w).unwrap_or(false))
}

/// Which diagrams an enumerated set keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagramMode {
    /// Every diagram.
    #[default]
    Full,
    /// Vertices and single signed edges only.
    Generator,
}

/// A finite, ordered set of diagrams, each with the shortest word (first in
/// enumeration order) that produces it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiagramSet {
    entries: BTreeMap<Diagram, Word>,
}

impl DiagramSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, d: &Diagram) -> bool {
        self.entries.contains_key(d)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Diagram> {
        self.entries.keys()
    }

    pub fn witness(&self, d: &Diagram) -> Option<&Word> {
        self.entries.get(d)
    }

    pub fn to_set(&self) -> BTreeSet<Diagram> {
        self.entries.keys().cloned().collect()
    }

    /// Cells `D_k` of the partition by length.
    pub fn by_length(&self) -> BTreeMap<usize, Vec<&Diagram>> {
        let mut cells: BTreeMap<usize, Vec<&Diagram>> = BTreeMap::new();
        for d in self.entries.keys() {
            cells.entry(d.len()).or_default().push(d);
        }
        cells
    }

    pub fn max_len(&self) -> usize {
        self.entries.keys().map(Diagram::len).max().unwrap_or(0)
    }

    pub fn restrict(&self, mode: DiagramMode) -> DiagramSet {
        match mode {
            DiagramMode::Full => self.clone(),
            DiagramMode::Generator => DiagramSet {
                entries: self
                    .entries
                    .iter()
                    .filter(|(d, _)| d.len() <= 1)
                    .map(|(d, w)| (d.clone(), w.clone()))
                    .collect(),
            },
        }
    }

    pub fn filter(&self, keep: impl Fn(&Diagram) -> bool) -> DiagramSet {
        DiagramSet {
            entries: self
                .entries
                .iter()
                .filter(|(d, _)| keep(d))
                .map(|(d, w)| (d.clone(), w.clone()))
                .collect(),
        }
    }

    /// Diagrams whose trace is not an admissible word ending at the range.
    pub fn inadmissible_traces<'a>(&'a self, g: &'a Graph) -> impl Iterator<Item = &'a Diagram> + 'a {
        self.entries.keys().filter(move |d| d.trace_word(g).is_none())
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let diagrams: Vec<String> = self.entries.keys().map(|d| d.line(g)).collect();
        let by_length: serde_json::Map<String, Value> = self
            .by_length()
            .into_iter()
            .map(|(k, ds)| (k.to_string(), json!(ds.iter().map(|d| d.line(g)).collect::<Vec<_>>())))
            .collect();
        json!({ "diagrams": diagrams, "by_length": by_length })
    }
}

/// `D(G)`: diagrams of all forward words, including those whose walk
/// revisits edges.
pub fn enumerate_diagrams(g: &Graph) -> DiagramSet {
    closure(g, false)
}

/// `D_r(G^)`: diagrams of all reduced words over the shadowed graph of `g`.
pub fn enumerate_reduced_diagrams(g: &Graph) -> DiagramSet {
    closure(g, true)
}

/// Whether `d` is the diagram of some forward word. Runs in time polynomial
/// in the graph size, without enumerating `D(G)`.
pub fn is_forward_diagram(g: &Graph, d: &Diagram) -> bool {
    d.is_forward() && realizable(g, d, false)
}

/// Whether `d` is the diagram of some reduced word over the shadowed graph.
/// Runs in time polynomial in the graph size, without enumerating `D_r(G^)`.
pub fn is_reduced_diagram(g: &Graph, d: &Diagram) -> bool {
    realizable(g, d, true)
}

/// Searches for a walk from `d.source` to `d.range` that only uses letters
/// of the trace and meets them for the first time in trace order. The state
/// is (position, number of trace letters met, last letter).
fn realizable(g: &Graph, d: &Diagram, signed: bool) -> bool {
    if d.source >= g.vertex_count() || d.range >= g.vertex_count() || d.trace.iter().any(|x| x.edge >= g.edge_count()) {
        return false;
    }
    if d.trace.is_empty() {
        return d.source == d.range;
    }
    let position: BTreeMap<SignedEdge, usize> = d.trace.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    if position.len() != d.trace.len() {
        return false;
    }
    let start = (d.source, 0usize, None::<SignedEdge>);
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some((at, met, last)) = stack.pop() {
        if met == d.trace.len() && at == d.range {
            return true;
        }
        for x in g.signed_out_edges(at, signed) {
            if signed && last == Some(x.inverted()) {
                continue;
            }
            let Some(&i) = position.get(&x) else { continue };
            let met = match i.cmp(&met) {
                Ordering::Less => met,
                Ordering::Equal => met + 1,
                Ordering::Greater => continue,
            };
            let next = (x.target(g), met, signed.then_some(x));
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    false
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct WalkState {
    source: usize,
    at: usize,
    last: Option<SignedEdge>,
    trace: Vec<SignedEdge>,
}

fn closure(g: &Graph, signed: bool) -> DiagramSet {
    let mut entries = BTreeMap::new();
    let leaving: Vec<Vec<SignedEdge>> = (0..g.vertex_count()).map(|v| g.signed_out_edges(v, signed)).collect();
    let mut seen: HashSet<WalkState> = HashSet::new();
    let mut queue: VecDeque<(WalkState, Vec<SignedEdge>)> = VecDeque::new();
    for v in 0..g.vertex_count() {
        entries.insert(Diagram::vertex(v), Word::Vertex(v));
        let start = WalkState {
            source: v,
            at: v,
            last: None,
            trace: Vec::new(),
        };
        seen.insert(start.clone());
        queue.push_back((start, Vec::new()));
    }
    while let Some((state, walk)) = queue.pop_front() {
        for &x in &leaving[state.at] {
            if signed && state.last == Some(x.inverted()) {
                continue;
            }
            let mut trace = state.trace.clone();
            if !trace.contains(&x) {
                trace.push(x);
            }
            let next = WalkState {
                source: state.source,
                at: x.target(g),
                // Forward walks never cancel, so the last letter is irrelevant.
                last: signed.then_some(x),
                trace,
            };
            if seen.contains(&next) {
                continue;
            }
            let mut longer = walk.clone();
            longer.push(x);
            let d = Diagram {
                source: next.source,
                range: next.at,
                trace: next.trace.clone(),
            };
            entries
                .entry(d)
                .or_insert_with(|| Word::path_unchecked(g, longer.clone()));
            seen.insert(next.clone());
            queue.push_back((next, longer));
        }
    }
    DiagramSet { entries }
}

/// Parses one diagram literal: a word literal (mapped through the reduced
/// diagram map) or an explicit `src -> dst : trace` line.
pub fn parse_diagram(g: &Graph, text: &str) -> Result<Diagram> {
    let text = text.trim();
    let Some((ends, trace)) = text.split_once(':') else {
        if text.contains("->") {
            return Err(Error::InvalidWord {
                literal: text.to_string(),
                reason: "expected `src -> dst : trace`".into(),
            });
        }
        return reduced_diagram(&parse_word(g, text)?);
    };
    let invalid = |reason: String| Error::InvalidWord {
        literal: text.to_string(),
        reason,
    };
    let (src, dst) = ends
        .split_once("->")
        .ok_or_else(|| invalid("expected `src -> dst : trace`".into()))?;
    let source = g.vertex(src.trim()).map_err(|e| invalid(e.to_string()))?;
    let range = g.vertex(dst.trim()).map_err(|e| invalid(e.to_string()))?;
    let trace = if trace.trim().is_empty() {
        Vec::new()
    } else {
        trace
            .split('.')
            .map(|t| parse_signed_edge(g, t.trim()).ok_or_else(|| invalid(format!("unknown edge `{}`", t.trim()))))
            .collect::<Result<Vec<_>>>()?
    };
    Diagram::from_parts(g, source, range, trace).map_err(|e| match e {
        Error::InvalidWord { reason, .. } => invalid(reason),
        other => other,
    })
}

/// Parses a `{...}` set literal of diagram literals.
pub fn parse_diagram_set(g: &Graph, text: &str) -> Result<BTreeSet<Diagram>> {
    split_set_literal(text)?
        .into_iter()
        .map(|item| parse_diagram(g, item))
        .collect()
}
