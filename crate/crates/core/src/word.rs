//! Words of the free semigroupoid of a graph and of its shadowed graph.
//!
//! A word is the empty word, a vertex, or a nonempty admissible sequence of
//! signed edges. Words over the graph itself use forward edges only; words
//! over the shadowed graph may mix orientations.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, SignedEdge, INVERSE_MARKER};

/// A nonempty admissible path. Endpoints are cached at construction so that
/// products and inverses never need the graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    source: usize,
    range: usize,
    edges: Vec<SignedEdge>,
}

impl Path {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Word {
    Empty,
    Vertex(usize),
    Path(Path),
}

impl Word {
    /// Checks admissibility of `edges` in `g`; an empty sequence is rejected.
    pub fn path(g: &Graph, edges: Vec<SignedEdge>) -> Result<Word> {
        let invalid = |reason: String| Error::InvalidWord {
            literal: format!("{edges:?}"),
            reason,
        };
        if edges.is_empty() {
            return Err(invalid("a path needs at least one edge".into()));
        }
        if let Some(x) = edges.iter().find(|x| x.edge >= g.edge_count()) {
            return Err(invalid(format!("edge index {} out of range", x.edge)));
        }
        for pair in edges.windows(2) {
            if pair[0].target(g) != pair[1].source(g) {
                return Err(invalid(format!(
                    "`{}` ends at `{}` but `{}` starts at `{}`",
                    pair[0].literal(g),
                    g.vertex_id(pair[0].target(g)),
                    pair[1].literal(g),
                    g.vertex_id(pair[1].source(g)),
                )));
            }
        }
        Ok(Word::path_unchecked(g, edges))
    }

    pub(crate) fn path_unchecked(g: &Graph, edges: Vec<SignedEdge>) -> Word {
        let source = edges[0].source(g);
        let range = edges[edges.len() - 1].target(g);
        Word::Path(Path { source, range, edges })
    }

    pub fn source(&self) -> Result<usize> {
        match self {
            Word::Empty => Err(Error::EmptyWord),
            Word::Vertex(v) => Ok(*v),
            Word::Path(p) => Ok(p.source),
        }
    }

    pub fn range(&self) -> Result<usize> {
        match self {
            Word::Empty => Err(Error::EmptyWord),
            Word::Vertex(v) => Ok(*v),
            Word::Path(p) => Ok(p.range),
        }
    }

    /// Number of edges; 0 for vertices and the empty word.
    pub fn len(&self) -> usize {
        match self {
            Word::Path(p) => p.edges.len(),
            _ => 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Word::Empty)
    }

    pub fn edges(&self) -> &[SignedEdge] {
        match self {
            Word::Path(p) => &p.edges,
            _ => &[],
        }
    }

    /// A path whose source equals its range.
    pub fn is_loop(&self) -> bool {
        matches!(self, Word::Path(p) if p.source == p.range)
    }

    pub fn is_forward(&self) -> bool {
        self.edges().iter().all(|x| !x.inverse)
    }

    /// The admissible product, or `Empty` when the endpoints do not meet.
    pub fn concat(&self, other: &Word) -> Word {
        match (self, other) {
            (Word::Empty, _) | (_, Word::Empty) => Word::Empty,
            (Word::Vertex(a), Word::Vertex(b)) => {
                if a == b {
                    Word::Vertex(*a)
                } else {
                    Word::Empty
                }
            }
            (Word::Vertex(v), Word::Path(p)) => {
                if p.source == *v {
                    other.clone()
                } else {
                    Word::Empty
                }
            }
            (Word::Path(p), Word::Vertex(v)) => {
                if p.range == *v {
                    self.clone()
                } else {
                    Word::Empty
                }
            }
            (Word::Path(p), Word::Path(q)) => {
                if p.range != q.source {
                    return Word::Empty;
                }
                let mut edges = p.edges.clone();
                edges.extend_from_slice(&q.edges);
                Word::Path(Path {
                    source: p.source,
                    range: q.range,
                    edges,
                })
            }
        }
    }

    /// Reverses the sequence and flips every orientation.
    pub fn inverse(&self) -> Word {
        match self {
            Word::Path(p) => Word::Path(Path {
                source: p.range,
                range: p.source,
                edges: p.edges.iter().rev().map(|x| x.inverted()).collect(),
            }),
            other => other.clone(),
        }
    }

    /// Free-groupoid normal form: adjacent `x x^-1` pairs are cancelled
    /// until none remain. A fully cancelled path becomes its source vertex.
    pub fn reduce(&self) -> Word {
        let Word::Path(p) = self else {
            return self.clone();
        };
        let mut stack: Vec<SignedEdge> = Vec::with_capacity(p.edges.len());
        for &x in &p.edges {
            if stack.last() == Some(&x.inverted()) {
                stack.pop();
            } else {
                stack.push(x);
            }
        }
        if stack.is_empty() {
            Word::Vertex(p.source)
        } else {
            Word::Path(Path {
                source: p.source,
                range: p.range,
                edges: stack,
            })
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.edges().windows(2).all(|w| w[1] != w[0].inverted())
    }

    /// `n`-fold product for `n > 0`, the `|n|`-fold product of the inverse
    /// for `n < 0`. Vertices are idempotent; a non-loop path has no powers
    /// beyond the first. `n = 0` yields `Empty`.
    pub fn power(&self, n: i64) -> Word {
        if n == 0 {
            return Word::Empty;
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = base.clone();
        for _ in 1..n.unsigned_abs() {
            out = out.concat(&base);
            if out.is_empty() {
                break;
            }
        }
        out
    }

    /// Word literal: a vertex id, or `.`-joined signed edges (`e1.e2^-1`).
    pub fn literal(&self, g: &Graph) -> String {
        match self {
            Word::Empty => "empty".to_string(),
            Word::Vertex(v) => g.vertex_id(*v).to_string(),
            Word::Path(p) => p.edges.iter().map(|x| x.literal(g)).collect::<Vec<_>>().join("."),
        }
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Word, &'a Graph);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.literal(self.1))
            }
        }
        D(self, g)
    }
}

impl Ord for Word {
    /// Empty first; then by length, by letter sequence, by source vertex.
    fn cmp(&self, other: &Self) -> Ordering {
        let rank = |w: &Word| match w {
            Word::Empty => 0,
            _ => 1,
        };
        rank(self)
            .cmp(&rank(other))
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.edges().cmp(other.edges()))
            .then_with(|| self.source().ok().cmp(&other.source().ok()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Resolves a single signed-edge token: `e` or `e^-1`.
pub fn parse_signed_edge(g: &Graph, token: &str) -> Option<SignedEdge> {
    if let Some(i) = g.find_edge(token) {
        return Some(SignedEdge::forward(i));
    }
    let base = token.strip_suffix(INVERSE_MARKER)?;
    g.find_edge(base).map(SignedEdge::backward)
}

/// Parses a word literal against `g`. Inverse letters are accepted, so the
/// result is a word of the shadowed graph.
pub fn parse_word(g: &Graph, text: &str) -> Result<Word> {
    let text = text.trim();
    let invalid = |reason: String| Error::InvalidWord {
        literal: text.to_string(),
        reason,
    };
    if text.is_empty() {
        return Err(invalid("empty literal".into()));
    }
    if let Ok(v) = g.vertex(text) {
        return Ok(Word::Vertex(v));
    }
    let mut edges = Vec::new();
    for token in text.split('.') {
        let token = token.trim();
        let x = parse_signed_edge(g, token).ok_or_else(|| invalid(format!("unknown vertex or edge `{token}`")))?;
        edges.push(x);
    }
    Word::path(g, edges).map_err(|e| match e {
        Error::InvalidWord { reason, .. } => invalid(reason),
        other => other,
    })
}

/// Splits a `{a, b, c}` set literal into trimmed element strings.
pub fn split_set_literal(text: &str) -> Result<Vec<&str>> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| Error::Syntax {
            line: 1,
            column: 1,
            message: format!("set literal must be enclosed in braces: `{trimmed}`"),
        })?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(str::trim).collect())
}

pub fn parse_word_set(g: &Graph, text: &str) -> Result<Vec<Word>> {
    split_set_literal(text)?
        .into_iter()
        .map(|item| parse_word(g, item))
        .collect()
}

/// All vertices followed by every admissible path of length `1..=max_len`,
/// ordered by length and then by letter sequence. With `signed`, paths run
/// over the shadowed graph (both orientations).
pub fn enumerate_words(g: &Graph, max_len: usize, signed: bool) -> Vec<Word> {
    let mut out: Vec<Word> = (0..g.vertex_count()).map(Word::Vertex).collect();
    let letters: Vec<SignedEdge> = (0..g.edge_count())
        .flat_map(|e| {
            let fwd = std::iter::once(SignedEdge::forward(e));
            let inv = signed.then_some(SignedEdge::backward(e));
            fwd.chain(inv)
        })
        .collect();
    // Letters leaving each vertex, in letter order.
    let mut leaving: Vec<Vec<SignedEdge>> = vec![Vec::new(); g.vertex_count()];
    for &x in &letters {
        leaving[x.source(g)].push(x);
    }
    let mut level: Vec<Vec<SignedEdge>> = letters.iter().map(|&x| vec![x]).collect();
    let mut len = 1;
    while len <= max_len && !level.is_empty() {
        let mut next = Vec::new();
        for edges in &level {
            let end = edges[edges.len() - 1].target(g);
            if len < max_len {
                for &x in &leaving[end] {
                    let mut longer = edges.clone();
                    longer.push(x);
                    next.push(longer);
                }
            }
        }
        out.extend(level.drain(..).map(|edges| Word::path_unchecked(g, edges)));
        level = next;
        len += 1;
    }
    out
}
