//! Degree, diagram-length and graph measures on the diagram sets of a graph
//! and its shadowed graph, subgraph measures, the extended measure on words,
//! and measure-space equivalence of isomorphic graphs.
//!
//! Every measure is the sum of a vertex part, `deg(v) / |V|` per vertex, and
//! a path part, `W(D) * |D|` per positive-length diagram `D`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::diagram::{
    enumerate_diagrams, enumerate_reduced_diagrams, is_forward_diagram, is_reduced_diagram, reduced_diagram, Diagram,
    DiagramMode, DiagramSet,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, ShadowedGraph, SignedEdge};
use crate::iso::{find_isomorphism_with, EdgeMatch};
use crate::rational::{int, to_pq, Rational};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// Every edge weight is taken to be 1.
    #[default]
    Unweighted,
    Weighted,
}

/// Graph whose degrees feed the vertex part of the measure on `D(G)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeSource {
    #[default]
    Shadowed,
    Forward,
}

/// How `g_w` chooses its set for a path word `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborhoodRule {
    /// Diagrams that can follow `w` (source = range of `w`) together with
    /// diagrams that can precede it (range = source of `w`).
    #[default]
    Adjacent,
    /// For path words only: the endpoint vertices of `w`, plus the reduced
    /// diagram of `w` when `w` is a loop (the diagrams of the powers of
    /// `w` that extend it). Vertex words use the adjacent rule. This is the
    /// convention behind the tabulated per-edge terms of the out-tree and
    /// triangle examples.
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MeasureOptions {
    pub mode: DiagramMode,
    pub weighting: Weighting,
    pub degrees: DegreeSource,
    pub neighborhood: NeighborhoodRule,
}

/// An exact measure value; `Infinite` only arises from extended integrals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureValue {
    Finite(Rational),
    Infinite,
}

impl MeasureValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            MeasureValue::Finite(r) => Some(r),
            MeasureValue::Infinite => None,
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Finite(r) => write!(f, "{}", to_pq(r)),
            MeasureValue::Infinite => f.write_str("inf"),
        }
    }
}

/// A measure evaluation split into its vertex and path parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Breakdown {
    pub vertex_part: Rational,
    pub path_part: Rational,
}

impl Breakdown {
    pub fn zero() -> Self {
        Breakdown {
            vertex_part: Rational::zero(),
            path_part: Rational::zero(),
        }
    }

    pub fn total(&self) -> Rational {
        &self.vertex_part + &self.path_part
    }

    /// `{"path_part", "set", "total", "vertex_part"}` with `p/q` strings.
    pub fn to_json(&self, set: &[String]) -> Value {
        json!({
            "set": set,
            "vertex_part": to_pq(&self.vertex_part),
            "path_part": to_pq(&self.path_part),
            "total": to_pq(&self.total()),
        })
    }
}

/// A graph together with its shadowed graph, both diagram sets (restricted
/// to the active diagram mode) and the options every evaluation uses.
///
/// The diagram sets are enumerated on first use. Their size can grow
/// factorially with the number of edges at a vertex, so evaluations that
/// only need membership (measures of given sets) never enumerate them.
#[derive(Debug, Clone)]
pub struct MeasureContext {
    graph: Graph,
    shadowed: ShadowedGraph,
    diagrams: OnceLock<DiagramSet>,
    reduced: OnceLock<DiagramSet>,
    options: MeasureOptions,
}

impl MeasureContext {
    pub fn new(graph: Graph, options: MeasureOptions) -> Self {
        let shadowed = graph.shadowed();
        MeasureContext {
            graph,
            shadowed,
            diagrams: OnceLock::new(),
            reduced: OnceLock::new(),
            options,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shadowed(&self) -> &ShadowedGraph {
        &self.shadowed
    }

    pub fn options(&self) -> MeasureOptions {
        self.options
    }

    /// `D(G)` under the active mode.
    pub fn diagrams(&self) -> &DiagramSet {
        self.diagrams
            .get_or_init(|| enumerate_diagrams(&self.graph).restrict(self.options.mode))
    }

    /// `D_r(G^)` under the active mode: the domain of the graph measure.
    pub fn reduced(&self) -> &DiagramSet {
        self.reduced
            .get_or_init(|| enumerate_reduced_diagrams(&self.graph).restrict(self.options.mode))
    }

    fn in_mode(&self, d: &Diagram) -> bool {
        self.options.mode == DiagramMode::Full || d.len() <= 1
    }

    /// Membership in `D_r(G^)` under the active mode. Uses the enumerated
    /// set when it exists and a direct search otherwise.
    pub fn in_reduced_domain(&self, d: &Diagram) -> bool {
        match self.reduced.get() {
            Some(set) => set.contains(d),
            None => self.in_mode(d) && is_reduced_diagram(&self.graph, d),
        }
    }

    /// Membership in `D(G)` under the active mode, as for the reduced set.
    pub fn in_forward_domain(&self, d: &Diagram) -> bool {
        match self.diagrams.get() {
            Some(set) => set.contains(d),
            None => self.in_mode(d) && is_forward_diagram(&self.graph, d),
        }
    }

    fn vertex_count(&self) -> Rational {
        int(self.graph.vertex_count() as i64)
    }

    /// `deg(v) / |V|` with the degree taken in the shadowed graph.
    pub fn degree_weight(&self, v: usize) -> Rational {
        int(self.shadowed.graph.degree_at(v) as i64) / self.vertex_count()
    }

    /// The degree measure of a vertex set, degrees in the shadowed graph.
    pub fn degree_measure(&self, vs: &BTreeSet<usize>) -> Result<Rational> {
        vs.iter().try_fold(Rational::zero(), |acc, &v| {
            if v >= self.graph.vertex_count() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            Ok(acc + self.degree_weight(v))
        })
    }

    pub fn degree_measure_of(&self, ids: &[&str]) -> Result<Rational> {
        let vs = ids.iter().map(|v| self.graph.vertex(v)).collect::<Result<_>>()?;
        self.degree_measure(&vs)
    }

    /// Total diagram length.
    pub fn diagram_length(&self, set: &BTreeSet<Diagram>) -> usize {
        set.iter().map(Diagram::len).sum()
    }

    /// Weight of a diagram under the active weighting.
    pub fn weight(&self, d: &Diagram) -> Rational {
        match self.options.weighting {
            Weighting::Unweighted => Rational::one(),
            Weighting::Weighted => d.weight(&self.graph),
        }
    }

    /// Weighted diagram length `sum W(D) * |D|`; equals the plain total
    /// length when unweighted.
    pub fn weighted_length(&self, set: &BTreeSet<Diagram>) -> Rational {
        set.iter().fold(Rational::zero(), |acc, d| acc + self.path_value(d))
    }

    fn path_value(&self, d: &Diagram) -> Rational {
        self.weight(d) * int(d.len() as i64)
    }

    fn split(&self, set: &BTreeSet<Diagram>, degree: impl Fn(usize) -> Rational) -> Breakdown {
        let mut out = Breakdown::zero();
        for d in set {
            if d.is_vertex() {
                out.vertex_part += degree(d.source());
            } else {
                out.path_part += self.path_value(d);
            }
        }
        out
    }

    fn check_domain(&self, set: &BTreeSet<Diagram>, member: impl Fn(&Diagram) -> bool) -> Result<()> {
        match set.iter().find(|d| !member(d)) {
            Some(d) => Err(Error::OutsideDomain(d.literal(&self.graph))),
            None => Ok(()),
        }
    }

    /// The graph measure of the shadowed graph on `D_r(G^)`.
    pub fn mu_shadowed(&self, set: &BTreeSet<Diagram>) -> Result<Breakdown> {
        self.check_domain(set, |d| self.in_reduced_domain(d))?;
        Ok(self.split(set, |v| self.degree_weight(v)))
    }

    /// The graph measure on `D(G)`; degrees come from the configured source.
    pub fn mu_graph(&self, set: &BTreeSet<Diagram>) -> Result<Breakdown> {
        self.check_domain(set, |d| self.in_forward_domain(d))?;
        Ok(match self.options.degrees {
            DegreeSource::Shadowed => self.split(set, |v| self.degree_weight(v)),
            DegreeSource::Forward => self.split(set, |v| int(self.graph.degree_at(v) as i64) / self.vertex_count()),
        })
    }

    pub fn measure(&self, set: &BTreeSet<Diagram>) -> Result<Rational> {
        Ok(self.mu_shadowed(set)?.total())
    }

    /// `D_r(H^)` as a subset of the active domain.
    pub fn subgraph_domain(&self, h: &Graph) -> Result<DiagramSet> {
        let (in_h_vertex, in_h_edge) = self.subgraph_masks(h)?;
        Ok(self.reduced().filter(|d| inside(&in_h_vertex, &in_h_edge, d)))
    }

    fn subgraph_masks(&self, h: &Graph) -> Result<(Vec<bool>, Vec<bool>)> {
        if !self.graph.is_full_subgraph(h) {
            return Err(Error::NotFullSubgraph(format!(
                "vertices {:?} with {} edges",
                h.vertices(),
                h.edge_count()
            )));
        }
        let mut vs = vec![false; self.graph.vertex_count()];
        for v in h.vertices() {
            vs[self.graph.vertex(v)?] = true;
        }
        let mut es = vec![false; self.graph.edge_count()];
        for e in h.edges() {
            es[self.graph.edge_index(&e.id)?] = true;
        }
        Ok((vs, es))
    }

    /// Measure of the full subgraph `h` evaluated on `set`.
    pub fn subgraph_measure(&self, h: &Graph, set: &BTreeSet<Diagram>, variant: SubgraphVariant) -> Result<Breakdown> {
        self.check_domain(set, |d| self.in_reduced_domain(d))?;
        let (in_h_vertex, in_h_edge) = self.subgraph_masks(h)?;
        let inside: BTreeSet<Diagram> = set
            .iter()
            .filter(|d| inside(&in_h_vertex, &in_h_edge, d))
            .cloned()
            .collect();
        match variant {
            SubgraphVariant::Restricted => self.mu_shadowed(&inside),
            SubgraphVariant::Defined(degrees) => {
                let h_shadow = h.shadowed();
                let h_size = int(h.vertex_count() as i64);
                Ok(self.split(&inside, |v| {
                    let deg = match degrees {
                        SubgraphDegrees::InSubgraph => {
                            let hv = h.vertex(self.graph.vertex_id(v)).expect("vertex of H");
                            h_shadow.graph.degree_at(hv)
                        }
                        SubgraphDegrees::InGraph => self.shadowed.graph.degree_at(v),
                    };
                    int(deg as i64) / &h_size
                }))
            }
        }
    }

    /// The extended measure of a finite set of words over the shadowed
    /// graph: vertices by degree, each path word by the weighted length of
    /// its reduced diagram. Distinct words count separately.
    pub fn extended_mu(&self, words: &BTreeSet<Word>) -> Result<Breakdown> {
        let mut out = Breakdown::zero();
        for w in words {
            match w {
                Word::Empty => return Err(Error::EmptyWord),
                Word::Vertex(v) => out.vertex_part += self.degree_weight(*v),
                Word::Path(_) => out.path_part += self.word_value(w)?,
            }
        }
        Ok(out)
    }

    pub(crate) fn word_value(&self, w: &Word) -> Result<Rational> {
        match w {
            Word::Empty => Err(Error::EmptyWord),
            Word::Vertex(v) => Ok(self.degree_weight(*v)),
            Word::Path(_) => Ok(self.path_value(&reduced_diagram(w)?)),
        }
    }
}

/// A reduced walk of `G^` whose letters all lie in a full subgraph `H` and
/// which starts in `H` stays in `H`, so this test describes `D_r(H^)`.
fn inside(vertices: &[bool], edges: &[bool], d: &Diagram) -> bool {
    vertices[d.source()] && d.trace().iter().all(|x| edges[x.edge])
}

/// Which reading of the subgraph measure to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgraphVariant {
    /// Vertex part divides by `|V(H)|`, degrees as selected.
    Defined(SubgraphDegrees),
    /// The graph measure of `G^` restricted to `D_r(H^)`.
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgraphDegrees {
    InSubgraph,
    InGraph,
}

/// Evidence that two graphs carry equivalent reduced-diagram measure spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub vertex_map: Vec<usize>,
    /// Image of each edge of the first graph as a signed edge of the second.
    pub edge_map: Vec<SignedEdge>,
    /// The underlying isomorphism goes to the shadow of the second graph.
    pub reverses_orientation: bool,
    pub diagram_map: Vec<(Diagram, Diagram)>,
    /// The diagram map is a bijection of domains preserving every singleton
    /// measure.
    pub measure_preserving: bool,
}

/// Looks for an isomorphism `g1 -> g2`, or failing that `g1 -> shadow(g2)`,
/// and transports it to the reduced diagram sets.
pub fn measure_spaces_equivalent(g1: &Graph, g2: &Graph, options: MeasureOptions) -> Option<EquivalenceCertificate> {
    let matching = match options.weighting {
        Weighting::Unweighted => EdgeMatch::Structure,
        Weighting::Weighted => EdgeMatch::Weights,
    };
    let (iso, reverses) = match find_isomorphism_with(g1, g2, matching) {
        Some(iso) => (iso, false),
        None => (find_isomorphism_with(g1, &g2.shadow(), matching)?, true),
    };
    // `shadow` keeps edge order, so shadow edge i stands for g2's edge i reversed.
    let edge_map: Vec<SignedEdge> = iso
        .edge_map
        .iter()
        .map(|&e| SignedEdge {
            edge: e,
            inverse: reverses,
        })
        .collect();
    let c1 = MeasureContext::new(g1.clone(), options);
    let c2 = MeasureContext::new(g2.clone(), options);
    let map_letter = |x: &SignedEdge| {
        let m = edge_map[x.edge];
        if x.inverse {
            m.inverted()
        } else {
            m
        }
    };
    let mut diagram_map = Vec::with_capacity(c1.reduced().len());
    let mut images = BTreeSet::new();
    let mut preserving = c1.reduced().len() == c2.reduced().len();
    for d in c1.reduced().iter() {
        let trace = d.trace().iter().map(map_letter).collect();
        let image = Diagram::from_parts(g2, iso.vertex_map[d.source()], iso.vertex_map[d.range()], trace)
            .expect("isomorphisms map diagrams to diagrams");
        let single = |x: &Diagram| BTreeSet::from([x.clone()]);
        match (c1.measure(&single(d)), c2.measure(&single(&image))) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => preserving = false,
        }
        preserving &= images.insert(image.clone());
        diagram_map.push((d.clone(), image));
    }
    Some(EquivalenceCertificate {
        vertex_map: iso.vertex_map,
        edge_map,
        reverses_orientation: reverses,
        diagram_map,
        measure_preserving: preserving,
    })
}
