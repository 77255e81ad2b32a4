//! Small named graphs and seeded random graph generators used by tests,
//! benchmarks and the acceptance suite.

use rand::Rng;

use crate::graph::Graph;
use crate::rational::{one, ratio, Rational};
use crate::word::Word;

/// The out-tree `e1: v1 -> v2`, `e2: v1 -> v3`.
pub fn lambda_tree() -> Graph {
    build(3, &[("e1", 0, 1), ("e2", 0, 2)])
}

/// The directed triangle `e1: v1 -> v2`, `e2: v2 -> v3`, `e3: v3 -> v1`.
pub fn triangle() -> Graph {
    build(3, &[("e1", 0, 1), ("e2", 1, 2), ("e3", 2, 0)])
}

/// One vertex `v` with a loop `l` of the given weight.
pub fn single_loop(weight: Rational) -> Graph {
    let mut g = Graph::new();
    g.add_vertex("v").unwrap();
    g.add_edge("l", "v", "v", weight).unwrap();
    g
}

/// Vertices `v1..vn` and unit-weight edges given by 0-based endpoint indices.
pub fn build(n: usize, edges: &[(&str, usize, usize)]) -> Graph {
    let mut g = Graph::new();
    for i in 1..=n {
        g.add_vertex(&format!("v{i}")).unwrap();
    }
    for &(id, s, t) in edges {
        g.add_edge(id, &format!("v{}", s + 1), &format!("v{}", t + 1), one())
            .unwrap();
    }
    g
}

/// A random multigraph with `1..=max_vertices` vertices and
/// `0..=max_edges` edges (loops and parallel edges allowed). When
/// `weighted`, weights are drawn from `{1/4, 1/3, 1/2, 2/3, 1}`.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize, weighted: bool) -> Graph {
    let n = rng.random_range(1..=max_vertices);
    let m = rng.random_range(0..=max_edges);
    let mut g = Graph::new();
    for i in 1..=n {
        g.add_vertex(&format!("v{i}")).unwrap();
    }
    for j in 1..=m {
        let s = rng.random_range(1..=n);
        let t = rng.random_range(1..=n);
        let w = if weighted { pick_weight(rng) } else { one() };
        g.add_edge(&format!("e{j}"), &format!("v{s}"), &format!("v{t}"), w)
            .unwrap();
    }
    g
}

/// A random directed tree on `n` vertices: each vertex after the first
/// gets exactly one edge to or from an earlier vertex.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let mut g = Graph::new();
    for i in 1..=n {
        g.add_vertex(&format!("v{i}")).unwrap();
    }
    for i in 2..=n {
        let parent = rng.random_range(1..i);
        let (s, t) = if rng.random_bool(0.5) { (parent, i) } else { (i, parent) };
        g.add_edge(&format!("e{}", i - 1), &format!("v{s}"), &format!("v{t}"), one())
            .unwrap();
    }
    g
}

/// A random reduced word over the shadowed graph: a random start vertex,
/// then up to `max_len` letters, never undoing the previous letter. Stops
/// early at a vertex with no way on.
pub fn random_reduced_word<R: Rng>(rng: &mut R, g: &Graph, max_len: usize) -> Word {
    let start = rng.random_range(0..g.vertex_count());
    let len = rng.random_range(0..=max_len);
    let mut at = start;
    let mut edges = Vec::with_capacity(len);
    for _ in 0..len {
        let last = edges.last().copied();
        let choices: Vec<_> = g
            .signed_out_edges(at, true)
            .into_iter()
            .filter(|x| Some(x.inverted()) != last)
            .collect();
        if choices.is_empty() {
            break;
        }
        let x = choices[rng.random_range(0..choices.len())];
        at = x.target(g);
        edges.push(x);
    }
    if edges.is_empty() {
        Word::Vertex(start)
    } else {
        Word::path(g, edges).expect("walks are admissible")
    }
}

fn pick_weight<R: Rng>(rng: &mut R) -> Rational {
    const CHOICES: [(i64, i64); 5] = [(1, 4), (1, 3), (1, 2), (2, 3), (1, 1)];
    let (p, q) = CHOICES[rng.random_range(0..CHOICES.len())];
    ratio(p, q)
}
