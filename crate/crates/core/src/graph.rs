//! Finite directed multigraphs with rational edge weights, their shadows
//! and shadowed graphs, full subgraphs, and the line-oriented graph file
//! format.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational, PQ};

/// Suffix carried by shadow edge ids.
pub const INVERSE_MARKER: &str = "^-1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub target: usize,
    pub weight: Rational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// An edge of a graph traversed either along or against its direction.
///
/// Ordered by `(edge index, orientation)` with forward before inverse, which
/// is the lexicographic letter order used for words and diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedEdge {
    pub edge: usize,
    pub inverse: bool,
}

impl SignedEdge {
    pub fn forward(edge: usize) -> Self {
        SignedEdge { edge, inverse: false }
    }

    pub fn backward(edge: usize) -> Self {
        SignedEdge { edge, inverse: true }
    }

    pub fn inverted(self) -> Self {
        SignedEdge {
            edge: self.edge,
            inverse: !self.inverse,
        }
    }

    pub fn source(self, g: &Graph) -> usize {
        let e = &g.edges[self.edge];
        if self.inverse {
            e.target
        } else {
            e.source
        }
    }

    pub fn target(self, g: &Graph) -> usize {
        let e = &g.edges[self.edge];
        if self.inverse {
            e.source
        } else {
            e.target
        }
    }

    pub fn literal(self, g: &Graph) -> String {
        let id = &g.edges[self.edge].id;
        if self.inverse {
            format!("{id}{INVERSE_MARKER}")
        } else {
            id.clone()
        }
    }
}

/// A finite directed multigraph. Vertices and edges keep their declaration
/// order; all other modules refer to them by index into that order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_lookup: HashMap<String, usize>,
    edge_lookup: HashMap<String, usize>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<usize> {
        if self.vertex_lookup.contains_key(id) || self.edge_lookup.contains_key(id) {
            return Err(Error::DuplicateId {
                id: id.to_string(),
                line: 0,
            });
        }
        let idx = self.vertices.len();
        self.vertices.push(id.to_string());
        self.vertex_lookup.insert(id.to_string(), idx);
        Ok(idx)
    }

    pub fn add_edge(&mut self, id: &str, source: &str, target: &str, weight: Rational) -> Result<usize> {
        if self.vertex_lookup.contains_key(id) || self.edge_lookup.contains_key(id) {
            return Err(Error::DuplicateId {
                id: id.to_string(),
                line: 0,
            });
        }
        // `x` and `x^-1` cannot coexist: the word literal `x^-1` would be ambiguous.
        let twin = match id.strip_suffix(INVERSE_MARKER) {
            Some(base) => base.to_string(),
            None => format!("{id}{INVERSE_MARKER}"),
        };
        if self.edge_lookup.contains_key(&twin) {
            return Err(Error::DuplicateId {
                id: id.to_string(),
                line: 0,
            });
        }
        let lookup = |v: &str| {
            self.vertex_lookup
                .get(v)
                .copied()
                .ok_or_else(|| Error::UnknownEndpoint {
                    edge: id.to_string(),
                    vertex: v.to_string(),
                    line: 0,
                })
        };
        let (s, t) = (lookup(source)?, lookup(target)?);
        if weight <= Rational::zero() || weight > Rational::one() {
            return Err(Error::WeightOutOfRange {
                edge: id.to_string(),
                weight: PQ(&weight).to_string(),
                line: 0,
            });
        }
        let idx = self.edges.len();
        self.edges.push(Edge {
            id: id.to_string(),
            source: s,
            target: t,
            weight,
        });
        self.edge_lookup.insert(id.to_string(), idx);
        Ok(idx)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    pub fn vertex_id(&self, idx: usize) -> &str {
        &self.vertices[idx]
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edge_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn find_edge(&self, id: &str) -> Option<usize> {
        self.edge_lookup.get(id).copied()
    }

    pub fn in_degree(&self, v: &str) -> Result<usize> {
        Ok(self.in_degree_at(self.vertex(v)?))
    }

    pub fn out_degree(&self, v: &str) -> Result<usize> {
        Ok(self.out_degree_at(self.vertex(v)?))
    }

    /// In-degree plus out-degree; a loop counts twice.
    pub fn degree(&self, v: &str) -> Result<usize> {
        Ok(self.degree_at(self.vertex(v)?))
    }

    pub fn in_degree_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.target == v).count()
    }

    pub fn out_degree_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.source == v).count()
    }

    pub fn degree_at(&self, v: usize) -> usize {
        self.in_degree_at(v) + self.out_degree_at(v)
    }

    /// Signed edges leaving `v`: forward edges with source `v`, then inverse
    /// edges of those with target `v`, interleaved in letter order.
    pub fn signed_out_edges(&self, v: usize, allow_inverse: bool) -> Vec<SignedEdge> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.source == v {
                out.push(SignedEdge::forward(i));
            }
            if allow_inverse && e.target == v {
                out.push(SignedEdge::backward(i));
            }
        }
        out
    }

    /// The opposite graph: same vertices, every edge reversed. Edge ids gain
    /// (or lose) the inverse marker so that `shadow` is an involution.
    pub fn shadow(&self) -> Graph {
        let mut g = Graph::new();
        for v in &self.vertices {
            g.add_vertex(v).expect("vertex ids are unique");
        }
        for e in &self.edges {
            g.push_edge_unchecked(Edge {
                id: flip_id(&e.id),
                source: e.target,
                target: e.source,
                weight: e.weight.clone(),
            });
        }
        g
    }

    /// The union of the graph and its shadow.
    pub fn shadowed(&self) -> ShadowedGraph {
        let mut graph = self.clone();
        let mut orientation: Vec<SignedEdge> = (0..self.edges.len()).map(SignedEdge::forward).collect();
        for (i, e) in self.edges.iter().enumerate() {
            graph.push_edge_unchecked(Edge {
                id: flip_id(&e.id),
                source: e.target,
                target: e.source,
                weight: e.weight.clone(),
            });
            orientation.push(SignedEdge::backward(i));
        }
        ShadowedGraph { graph, orientation }
    }

    /// The full subgraph on `vs`: those vertices (in this graph's order)
    /// and every edge with both endpoints among them.
    pub fn full_subgraph<S: AsRef<str>>(&self, vs: &[S]) -> Result<Graph> {
        let mut keep = vec![false; self.vertices.len()];
        for v in vs {
            keep[self.vertex(v.as_ref())?] = true;
        }
        let mut g = Graph::new();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            if keep[i] {
                remap[i] = g.add_vertex(v)?;
            }
        }
        for e in &self.edges {
            if keep[e.source] && keep[e.target] {
                g.push_edge_unchecked(Edge {
                    id: e.id.clone(),
                    source: remap[e.source],
                    target: remap[e.target],
                    weight: e.weight.clone(),
                });
            }
        }
        Ok(g)
    }

    /// Checks that `h` is the full subgraph of `self` on its own vertex set.
    pub fn is_full_subgraph(&self, h: &Graph) -> bool {
        match self.full_subgraph(h.vertices()) {
            Ok(sub) => sub == *h,
            Err(_) => false,
        }
    }

    fn push_edge_unchecked(&mut self, e: Edge) {
        self.edge_lookup.insert(e.id.clone(), self.edges.len());
        self.edges.push(e);
    }
}

fn flip_id(id: &str) -> String {
    match id.strip_suffix(INVERSE_MARKER) {
        Some(base) => base.to_string(),
        None => format!("{id}{INVERSE_MARKER}"),
    }
}

/// A shadowed graph together with the signed edge of the original graph
/// that each of its edges stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowedGraph {
    pub graph: Graph,
    pub orientation: Vec<SignedEdge>,
}

impl ShadowedGraph {
    pub fn signed_edge(&self, edge: usize) -> SignedEdge {
        self.orientation[edge]
    }

    pub fn forward_part(&self) -> Graph {
        self.part(false)
    }

    pub fn inverse_part(&self) -> Graph {
        self.part(true)
    }

    fn part(&self, inverse: bool) -> Graph {
        let mut g = Graph::new();
        for v in self.graph.vertices() {
            g.add_vertex(v).expect("vertex ids are unique");
        }
        for (i, e) in self.graph.edges().iter().enumerate() {
            if self.orientation[i].inverse == inverse {
                g.push_edge_unchecked(e.clone());
            }
        }
        g
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "vertex {v}")?;
        }
        for e in &self.edges {
            write!(
                f,
                "edge {} {} {}",
                e.id, self.vertices[e.source], self.vertices[e.target]
            )?;
            if !e.weight.is_one() {
                write!(f, " weight {}", PQ(&e.weight))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

fn is_id(token: &str, allow_marker: bool) -> bool {
    let base = if allow_marker {
        token.strip_suffix(INVERSE_MARKER).unwrap_or(token)
    } else {
        token
    };
    !base.is_empty() && base.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the graph file format:
///
/// ```text
/// # comment
/// vertex v1
/// vertex v2
/// edge e1 v1 v2 weight 1/2
/// ```
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let tokens = tokenize(content);
        let Some(&(col, head)) = tokens.first() else {
            continue;
        };
        let syntax = |column: usize, message: String| Error::Syntax {
            line: line_no,
            column,
            message,
        };
        let at_line = |e: Error| match e {
            Error::DuplicateId { id, .. } => Error::DuplicateId { id, line: line_no },
            Error::UnknownEndpoint { edge, vertex, .. } => Error::UnknownEndpoint {
                edge,
                vertex,
                line: line_no,
            },
            Error::WeightOutOfRange { edge, weight, .. } => Error::WeightOutOfRange {
                edge,
                weight,
                line: line_no,
            },
            other => other,
        };
        match head {
            "vertex" => {
                if tokens.len() != 2 {
                    return Err(syntax(col, "expected `vertex <id>`".into()));
                }
                let (c, id) = tokens[1];
                if !is_id(id, false) {
                    return Err(syntax(c, format!("invalid vertex id `{id}`")));
                }
                g.add_vertex(id).map_err(at_line)?;
            }
            "edge" => {
                if tokens.len() != 4 && tokens.len() != 6 {
                    return Err(syntax(col, "expected `edge <id> <src> <dst> [weight <p>/<q>]`".into()));
                }
                let (c, id) = tokens[1];
                if !is_id(id, true) {
                    return Err(syntax(c, format!("invalid edge id `{id}`")));
                }
                for &(c, v) in &tokens[2..4] {
                    if !is_id(v, false) {
                        return Err(syntax(c, format!("invalid vertex id `{v}`")));
                    }
                }
                let weight = if tokens.len() == 6 {
                    let (c, kw) = tokens[4];
                    if kw != "weight" {
                        return Err(syntax(c, format!("expected `weight`, found `{kw}`")));
                    }
                    let (c, w) = tokens[5];
                    parse_rational(w).ok_or_else(|| syntax(c, format!("invalid rational `{w}`")))?
                } else {
                    Rational::one()
                };
                g.add_edge(id, tokens[2].1, tokens[3].1, weight).map_err(at_line)?;
            }
            other => {
                return Err(syntax(col, format!("unknown directive `{other}`")));
            }
        }
    }
    Ok(g)
}

/// Whitespace-separated tokens with 1-based character columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut col_of = Vec::with_capacity(line.len() + 1);
    for (col, (b, ch)) in (1..).zip(line.char_indices()) {
        while col_of.len() <= b {
            col_of.push(col);
        }
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((col_of[s], &line[s..b]));
            }
        } else if start.is_none() {
            start = Some(b);
        }
    }
    if let Some(s) = start {
        out.push((col_of[s], &line[s..]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::samples::{lambda_tree, triangle};

    #[test]
    fn degrees_on_worked_graphs() {
        let t = lambda_tree();
        assert_eq!(t.in_degree("v1").unwrap(), 0);
        assert_eq!(t.out_degree("v1").unwrap(), 2);
        let d = triangle();
        assert_eq!(d.in_degree("v1").unwrap(), 1);
        assert_eq!(d.out_degree("v2").unwrap(), 1);
        assert_eq!(t.shadowed().graph.degree("v1").unwrap(), 4);
        assert_eq!(d.shadowed().graph.degree("v1").unwrap(), 4);
    }

    #[test]
    fn isolated_vertex_and_loop_degrees() {
        let g: Graph = "vertex a\nvertex b\nedge l a a\n".parse().unwrap();
        assert_eq!(g.degree("b").unwrap(), 0);
        assert_eq!(g.in_degree("b").unwrap(), 0);
        assert_eq!(g.out_degree("b").unwrap(), 0);
        assert_eq!(g.degree("a").unwrap(), 2);
        assert!(matches!(g.degree("zz"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn shadow_reverses_and_is_involutive() {
        let t = lambda_tree();
        let s = t.shadow();
        let e1 = s.edge(s.edge_index("e1^-1").unwrap());
        assert_eq!((s.vertex_id(e1.source), s.vertex_id(e1.target)), ("v2", "v1"));
        let e2 = s.edge(s.edge_index("e2^-1").unwrap());
        assert_eq!((s.vertex_id(e2.source), s.vertex_id(e2.target)), ("v3", "v1"));
        assert_eq!(s.shadow(), t);

        let l: Graph = "vertex v\nedge l v v\n".parse().unwrap();
        assert!(l.shadow().edge(0).is_loop());
    }

    #[test]
    fn shadowed_splits_into_graph_and_shadow() {
        for g in [lambda_tree(), triangle(), Graph::new()] {
            let sh = g.shadowed();
            assert_eq!(sh.graph.edge_count(), 2 * g.edge_count());
            assert_eq!(sh.forward_part(), g);
            assert_eq!(sh.inverse_part(), g.shadow());
        }
        let lone: Graph = "vertex v\n".parse().unwrap();
        assert_eq!(lone.shadowed().graph, lone);
    }

    #[test]
    fn full_subgraphs() {
        let d = triangle();
        let h = d.full_subgraph(&["v1", "v2"]).unwrap();
        assert_eq!(h.edges().iter().map(|e| e.id.as_str()).collect::<Vec<_>>(), ["e1"]);
        assert_eq!(d.full_subgraph(d.vertices()).unwrap(), d);
        assert_eq!(d.full_subgraph::<&str>(&[]).unwrap(), Graph::new());
        assert!(matches!(d.full_subgraph(&["v9"]), Err(Error::UnknownVertex(_))));
        assert!(d.is_full_subgraph(&h));
        let partial: Graph = "vertex v1\nvertex v2\n".parse().unwrap();
        assert!(!d.is_full_subgraph(&partial));
    }

    #[test]
    fn parse_lambda_file() {
        let text = "# the out-tree\nvertex v1\nvertex v2\nvertex v3\nedge e1 v1 v2\nedge e2 v1 v3 weight 1/2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge(1).weight, ratio(1, 2));
        assert_eq!(g.to_string().parse::<Graph>().unwrap(), g);
        assert_eq!(parse_graph("").unwrap(), Graph::new());
    }

    #[test]
    fn parse_errors_are_positioned() {
        assert_eq!(
            parse_graph("edge e1 v1 v2"),
            Err(Error::UnknownEndpoint {
                edge: "e1".into(),
                vertex: "v1".into(),
                line: 1
            })
        );
        assert_eq!(
            parse_graph("vertex a\nvertex a\n"),
            Err(Error::DuplicateId {
                id: "a".into(),
                line: 2
            })
        );
        assert!(matches!(
            parse_graph("vertex a\nedge e a a weight 3/2"),
            Err(Error::WeightOutOfRange { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("vertex a\nedge e a a weight 0"),
            Err(Error::WeightOutOfRange { .. })
        ));
        assert_eq!(
            parse_graph("vertex a\n  vortex b"),
            Err(Error::Syntax {
                line: 2,
                column: 3,
                message: "unknown directive `vortex`".into()
            })
        );
        assert!(matches!(
            parse_graph("vertex a\nedge e a a wait 1/2"),
            Err(Error::Syntax {
                line: 2,
                column: 12,
                ..
            })
        ));
        assert!(matches!(parse_graph("vertex a.b"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_graph("vertex a\nedge x a a\nedge x^-1 a a"),
            Err(Error::DuplicateId { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph("vertex a\nedge a a a"),
            Err(Error::DuplicateId { .. })
        ));
    }
}
