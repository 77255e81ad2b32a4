//! Exhaustive backtracking isomorphism search for small multigraphs.

use std::collections::BTreeMap;

use crate::graph::Graph;

/// A vertex and edge bijection `g1 -> g2` preserving sources and targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl Isomorphism {
    pub fn is_valid(&self, g1: &Graph, g2: &Graph) -> bool {
        if self.vertex_map.len() != g1.vertex_count()
            || self.edge_map.len() != g1.edge_count()
            || g1.vertex_count() != g2.vertex_count()
            || g1.edge_count() != g2.edge_count()
        {
            return false;
        }
        let mut seen_v = vec![false; g2.vertex_count()];
        for &v in &self.vertex_map {
            if v >= seen_v.len() || std::mem::replace(&mut seen_v[v], true) {
                return false;
            }
        }
        let mut seen_e = vec![false; g2.edge_count()];
        for (i, &e) in self.edge_map.iter().enumerate() {
            if e >= seen_e.len() || std::mem::replace(&mut seen_e[e], true) {
                return false;
            }
            let (a, b) = (g1.edge(i), g2.edge(e));
            if self.vertex_map[a.source] != b.source || self.vertex_map[a.target] != b.target {
                return false;
            }
        }
        true
    }
}

/// How edges must agree beyond their endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeMatch {
    Structure,
    Weights,
}

pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<Isomorphism> {
    find_isomorphism_with(g1, g2, EdgeMatch::Structure)
}

/// Deterministic for fixed input orderings: vertices of `g1` are matched in
/// a fixed order against candidates of `g2` in ascending index order.
pub fn find_isomorphism_with(g1: &Graph, g2: &Graph, edges: EdgeMatch) -> Option<Isomorphism> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let s1 = Side::new(g1, edges);
    let s2 = Side::new(g2, edges);
    let mut sig1: Vec<_> = s1.signature.clone();
    let mut sig2: Vec<_> = s2.signature.clone();
    sig1.sort();
    sig2.sort();
    if sig1 != sig2 {
        return None;
    }

    // Most constrained first: high degree, then declaration order.
    let mut order: Vec<usize> = (0..g1.vertex_count()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g1.degree_at(v)), v));

    let mut search = Search {
        s1: &s1,
        s2: &s2,
        order: &order,
        map: vec![usize::MAX; g1.vertex_count()],
        used: vec![false; g2.vertex_count()],
    };
    if !search.extend(0) {
        return None;
    }
    let vertex_map = search.map;

    // Pair parallel edge groups; the groups are equal as weight multisets.
    let mut edge_map = vec![usize::MAX; g1.edge_count()];
    for (&(a, b), group1) in &s1.groups {
        let group2 = &s2.groups[&(vertex_map[a], vertex_map[b])];
        let mut e1 = group1.clone();
        let mut e2 = group2.clone();
        if edges == EdgeMatch::Weights {
            e1.sort_by(|&x, &y| g1.edge(x).weight.cmp(&g1.edge(y).weight).then(x.cmp(&y)));
            e2.sort_by(|&x, &y| g2.edge(x).weight.cmp(&g2.edge(y).weight).then(x.cmp(&y)));
        }
        for (x, y) in e1.into_iter().zip(e2) {
            edge_map[x] = y;
        }
    }
    Some(Isomorphism { vertex_map, edge_map })
}

type Key = Vec<String>;

struct Side<'a> {
    graph: &'a Graph,
    mode: EdgeMatch,
    /// (in, out, loops) per vertex
    signature: Vec<(usize, usize, usize)>,
    /// edge indices per ordered endpoint pair
    groups: BTreeMap<(usize, usize), Vec<usize>>,
}

impl<'a> Side<'a> {
    fn new(graph: &'a Graph, mode: EdgeMatch) -> Self {
        let signature = (0..graph.vertex_count())
            .map(|v| {
                let loops = graph.edges().iter().filter(|e| e.is_loop() && e.source == v).count();
                (graph.in_degree_at(v), graph.out_degree_at(v), loops)
            })
            .collect();
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, e) in graph.edges().iter().enumerate() {
            groups.entry((e.source, e.target)).or_default().push(i);
        }
        Side {
            graph,
            mode,
            signature,
            groups,
        }
    }

    /// Comparable description of the edges from `a` to `b`.
    fn link(&self, a: usize, b: usize) -> Key {
        match self.groups.get(&(a, b)) {
            None => Vec::new(),
            Some(es) => {
                let mut key: Key = match self.mode {
                    EdgeMatch::Structure => es.iter().map(|_| String::new()).collect(),
                    EdgeMatch::Weights => es.iter().map(|&e| self.graph.edge(e).weight.to_string()).collect(),
                };
                key.sort();
                key
            }
        }
    }
}

struct Search<'a> {
    s1: &'a Side<'a>,
    s2: &'a Side<'a>,
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for c in 0..self.used.len() {
            if self.used[c] || self.s1.signature[v] != self.s2.signature[c] {
                continue;
            }
            if !self.consistent(v, c, depth) {
                continue;
            }
            self.map[v] = c;
            self.used[c] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[c] = false;
            self.map[v] = usize::MAX;
        }
        false
    }

    fn consistent(&self, v: usize, c: usize, depth: usize) -> bool {
        if self.s1.link(v, v) != self.s2.link(c, c) {
            return false;
        }
        self.order[..depth].iter().all(|&u| {
            let cu = self.map[u];
            self.s1.link(v, u) == self.s2.link(c, cu) && self.s1.link(u, v) == self.s2.link(cu, c)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, ratio};
    use crate::samples::{build, lambda_tree, triangle};

    #[test]
    fn relabeled_triangle() {
        let d = triangle();
        // v1 -> v3 -> v2 -> v1 under the relabeling v2 <-> v3
        let r = build(3, &[("a", 0, 2), ("b", 2, 1), ("c", 1, 0)]);
        let iso = find_isomorphism(&d, &r).unwrap();
        assert!(iso.is_valid(&d, &r));
        assert_eq!(iso.vertex_map, vec![0, 2, 1]);
        assert_eq!(iso.edge_map, vec![0, 1, 2]);
    }

    #[test]
    fn tree_and_triangle_differ() {
        assert!(find_isomorphism(&lambda_tree(), &triangle()).is_none());
        assert!(find_isomorphism(&triangle(), &lambda_tree()).is_none());
    }

    #[test]
    fn single_vertex() {
        let a = build(1, &[]);
        let iso = find_isomorphism(&a, &a).unwrap();
        assert_eq!(iso.vertex_map, vec![0]);
        assert!(iso.edge_map.is_empty());
    }

    #[test]
    fn out_tree_is_not_in_tree() {
        let t = lambda_tree();
        assert!(find_isomorphism(&t, &t.shadow()).is_none());
    }

    #[test]
    fn parallel_edges_and_weights() {
        let mut g1 = Graph::new();
        let mut g2 = Graph::new();
        for g in [&mut g1, &mut g2] {
            g.add_vertex("a").unwrap();
            g.add_vertex("b").unwrap();
        }
        g1.add_edge("x", "a", "b", ratio(1, 2)).unwrap();
        g1.add_edge("y", "a", "b", one()).unwrap();
        g2.add_edge("p", "b", "a", one()).unwrap();
        g2.add_edge("q", "b", "a", ratio(1, 2)).unwrap();
        let iso = find_isomorphism_with(&g1, &g2, EdgeMatch::Weights).unwrap();
        assert!(iso.is_valid(&g1, &g2));
        assert_eq!(iso.edge_map, vec![1, 0]);

        let mut g3 = Graph::new();
        g3.add_vertex("a").unwrap();
        g3.add_vertex("b").unwrap();
        g3.add_edge("p", "b", "a", one()).unwrap();
        g3.add_edge("q", "b", "a", one()).unwrap();
        assert!(find_isomorphism_with(&g1, &g3, EdgeMatch::Weights).is_none());
        assert!(find_isomorphism(&g1, &g3).is_some());
    }
}
