//! Exact measures on the diagrams of finite directed graphs.
//!
//! A [`Graph`] is a finite directed multigraph with rational edge weights.
//! Its words (finite paths, possibly using reversed edges) map to diagrams,
//! and the graph measure assigns each diagram set a rational value: vertex
//! degrees over the vertex count plus weighted trace lengths. On top of that
//! sit simple-function integrals and an extended measure on words.
//!
//! ```
//! use graph_measure::{parse_diagram_set, samples, MeasureContext, MeasureOptions};
//!
//! let ctx = MeasureContext::new(samples::lambda_tree(), MeasureOptions::default());
//! let set = parse_diagram_set(ctx.graph(), "{v1, e1, e1^-1}").unwrap();
//! assert_eq!(ctx.measure(&set).unwrap().to_string(), "10/3");
//! ```

pub mod diagram;
pub mod error;
pub mod graph;
pub mod integrate;
pub mod iso;
pub mod measure;
pub mod rational;
pub mod samples;
pub mod word;

pub use diagram::{
    diagram, enumerate_diagrams, enumerate_reduced_diagrams, is_basic, parse_diagram, parse_diagram_set,
    reduced_diagram, tree_coincidence_check, Diagram, DiagramMode, DiagramSet,
};
pub use error::{Error, Result};
pub use graph::{parse_graph, Edge, Graph, ShadowedGraph, SignedEdge};
pub use integrate::{
    extended_integrate, extended_support, g_w, integrate, monomial, monomial_support, neighborhood,
    non_loop_truncation, polynomial_integral, subgraph_integrate, trigonometric_integral, Convergence,
    ExtendedFunction, ExtendedReport, NeighborhoodSets, SimpleFunction, WordSupport,
};
pub use iso::{find_isomorphism, find_isomorphism_with, EdgeMatch, Isomorphism};
pub use measure::{
    measure_spaces_equivalent, Breakdown, DegreeSource, EquivalenceCertificate, MeasureContext, MeasureOptions,
    MeasureValue, NeighborhoodRule, SubgraphDegrees, SubgraphVariant, Weighting,
};
pub use rational::{parse_rational, to_pq, Rational};
pub use word::{enumerate_words, parse_word, parse_word_set, Path, Word};
