//! Algebraic laws checked on randomly generated graphs, words and functions.
//! Graphs come from a proptest-chosen seed so that failures shrink to a
//! reproducible seed.

use std::collections::BTreeSet;

use graph_measure::rational::int;
use graph_measure::samples::{random_graph, random_reduced_word, random_tree};
use graph_measure::{
    diagram, find_isomorphism, g_w, integrate, measure_spaces_equivalent, monomial, reduced_diagram,
    tree_coincidence_check, Diagram, DiagramMode, Graph, MeasureContext, MeasureOptions, NeighborhoodRule, Rational,
    SignedEdge, SimpleFunction, Weighting, Word,
};
use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weighted(g: Graph) -> MeasureContext {
    MeasureContext::new(
        g,
        MeasureOptions {
            weighting: Weighting::Weighted,
            ..Default::default()
        },
    )
}

fn sampled_diagrams(r: &mut ChaCha8Rng, g: &Graph, count: usize) -> BTreeSet<Diagram> {
    (0..count)
        .map(|_| reduced_diagram(&random_reduced_word(r, g, 8)).unwrap())
        .collect()
}

/// A word over the shadowed graph that backtracks often, so that reduction
/// has work to do.
fn random_walk(r: &mut ChaCha8Rng, g: &Graph, len: usize) -> Word {
    let start = r.random_range(0..g.vertex_count());
    let mut at = start;
    let mut edges: Vec<SignedEdge> = Vec::new();
    for _ in 0..len {
        let x = match edges.last() {
            Some(&last) if r.random_bool(0.4) => last.inverted(),
            _ => {
                let out = g.signed_out_edges(at, true);
                if out.is_empty() {
                    break;
                }
                out[r.random_range(0..out.len())]
            }
        };
        at = x.target(g);
        edges.push(x);
    }
    if edges.is_empty() {
        Word::Vertex(start)
    } else {
        Word::path(g, edges).unwrap()
    }
}

/// Cancels adjacent inverse pairs in random order until none remain.
fn reduce_in_random_order(r: &mut ChaCha8Rng, w: &Word) -> Vec<SignedEdge> {
    let mut letters = w.edges().to_vec();
    loop {
        let spots: Vec<usize> = (0..letters.len().saturating_sub(1))
            .filter(|&i| letters[i + 1] == letters[i].inverted())
            .collect();
        let Some(&i) = spots.choose(r) else { return letters };
        letters.drain(i..i + 2);
    }
}

fn random_function(r: &mut ChaCha8Rng, domain: &[Diagram], terms: usize) -> SimpleFunction<Diagram> {
    (0..terms).fold(SimpleFunction::zero(), |acc, _| {
        let set = domain.iter().filter(|_| r.random_bool(0.4)).cloned().collect();
        let c = Rational::new(r.random_range(-6i64..=6).into(), r.random_range(1i64..=4).into());
        acc.add(&SimpleFunction::term(c, set))
    })
}

/// Vertices and edges listed in a random order under fresh names.
fn relabel(r: &mut ChaCha8Rng, g: &Graph) -> Graph {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(r);
    let name = |v: usize| format!("x{}", order.iter().position(|&o| o == v).unwrap());
    let mut out = Graph::new();
    for i in 0..g.vertex_count() {
        out.add_vertex(&format!("x{i}")).unwrap();
    }
    let mut edges: Vec<usize> = (0..g.edge_count()).collect();
    edges.shuffle(r);
    for (k, &e) in edges.iter().enumerate() {
        let edge = g.edge(e);
        out.add_edge(
            &format!("f{k}"),
            &name(edge.source),
            &name(edge.target),
            edge.weight.clone(),
        )
        .unwrap();
    }
    out
}

/// Graphs small enough for their reduced diagram sets to be enumerated.
fn small_graph(seed: u64) -> Graph {
    random_graph(&mut rng(seed), 3, 3, true)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measure_is_additive_on_disjoint_families(seed in any::<u64>(), parts in 1usize..5) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 7, true);
        let ctx = weighted(g.clone());
        let pool = sampled_diagrams(&mut r, &g, 14);
        let mut families = vec![BTreeSet::new(); parts];
        for d in &pool {
            families[r.random_range(0..parts)].insert(d.clone());
        }
        let sum: Rational = families.iter().map(|s| ctx.measure(s).unwrap()).sum();
        prop_assert_eq!(ctx.measure(&pool).unwrap(), sum);
    }

    #[test]
    fn measure_is_positive_and_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 7, true);
        let ctx = weighted(g.clone());
        let big = sampled_diagrams(&mut r, &g, 10);
        let small: BTreeSet<Diagram> = big.iter().filter(|_| r.random_bool(0.5)).cloned().collect();
        let (mu_small, mu_big) = (ctx.measure(&small).unwrap(), ctx.measure(&big).unwrap());
        prop_assert!(mu_small >= int(0));
        prop_assert!(mu_small <= mu_big);
        let isolated = (0..g.vertex_count()).any(|v| g.degree_at(v) == 0);
        if !isolated {
            for d in &big {
                prop_assert!(ctx.measure(&BTreeSet::from([d.clone()])).unwrap() > int(0));
            }
        }
    }

    #[test]
    fn measure_is_bounded_by_the_whole_domain(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = small_graph(seed);
        let ctx = weighted(g.clone());
        let all = ctx.reduced().to_set();
        let some = sampled_diagrams(&mut r, &g, 6);
        prop_assert!(ctx.measure(&some).unwrap() <= ctx.measure(&all).unwrap());
    }

    #[test]
    fn reduction_is_confluent(seed in any::<u64>(), len in 0usize..16) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 5, false);
        let w = random_walk(&mut r, &g, len);
        let reduced = w.reduce();
        let shuffled = reduce_in_random_order(&mut r, &w);
        prop_assert_eq!(reduced.edges(), shuffled.as_slice());
        prop_assert!(reduced.is_reduced());
        prop_assert_eq!(reduced.reduce(), reduced.clone());
        prop_assert_eq!(reduced.source().unwrap(), w.source().unwrap());
    }

    #[test]
    fn concatenation_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 3, 4, false);
        let [a, b, c] = [0, 0, 0].map(|_| random_walk(&mut r, &g, 3));
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
    }

    #[test]
    fn inverse_is_an_involutive_anti_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 3, 4, false);
        let a = random_walk(&mut r, &g, 4);
        let b = random_walk(&mut r, &g, 4);
        prop_assert_eq!(a.inverse().inverse(), a.clone());
        let ab = a.concat(&b);
        if !ab.is_empty() {
            prop_assert_eq!(ab.inverse(), b.inverse().concat(&a.inverse()));
        }
        prop_assert_eq!(a.concat(&a.inverse()).reduce(), Word::Vertex(a.source().unwrap()));
    }

    #[test]
    fn diagrams_are_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 5, false);
        let w = random_walk(&mut r, &g, 10);
        prop_assert_eq!(reduced_diagram(&w).unwrap(), reduced_diagram(&w.reduce()).unwrap());
        let d = diagram(&w).unwrap();
        if let Some(t) = d.trace_word(&g) {
            prop_assert_eq!(diagram(&t).unwrap(), d);
        }
    }

    #[test]
    fn graphs_round_trip_through_text(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 5, 7, true);
        let text = g.to_string();
        prop_assert_eq!(text.parse::<Graph>().unwrap(), g.clone());
        prop_assert_eq!(g.shadow().shadow(), g.clone());
        let shadowed = g.shadowed();
        for v in 0..g.vertex_count() {
            prop_assert_eq!(shadowed.graph.degree_at(v), 2 * g.degree_at(v));
        }
    }

    #[test]
    fn isomorphism_search_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 7, false);
        let h = relabel(&mut r, &g);
        let there = find_isomorphism(&g, &h).unwrap();
        let back = find_isomorphism(&h, &g).unwrap();
        prop_assert!(there.is_valid(&g, &h));
        prop_assert!(back.is_valid(&h, &g));
    }

    #[test]
    fn restriction_to_forward_diagrams(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 7, true);
        let ctx = weighted(g.clone());
        let forward: BTreeSet<Diagram> = sampled_diagrams(&mut r, &g, 12)
            .into_iter()
            .filter(|d| ctx.in_forward_domain(d))
            .collect();
        prop_assert_eq!(ctx.mu_graph(&forward).unwrap(), ctx.mu_shadowed(&forward).unwrap());
    }

    #[test]
    fn extended_measure_agrees_with_reduced_diagrams(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 5, true);
        let ctx = weighted(g.clone());
        let mut seen = BTreeSet::new();
        let words: BTreeSet<Word> = (0..8)
            .map(|_| random_walk(&mut r, &g, 6))
            .filter(|w| {
                let d = reduced_diagram(w).unwrap();
                !d.is_vertex() && seen.insert(d)
            })
            .collect();
        let extended = ctx.extended_mu(&words).unwrap();
        prop_assert_eq!(extended.path_part, ctx.mu_shadowed(&seen).unwrap().path_part);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn integral_is_linear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = weighted(small_graph(seed));
        let domain: Vec<Diagram> = ctx.reduced().iter().cloned().collect();
        let f = random_function(&mut r, &domain, 3);
        let h = random_function(&mut r, &domain, 3);
        let c = Rational::new(r.random_range(-5i64..=5).into(), r.random_range(1i64..=3).into());
        let i = |x: &SimpleFunction<Diagram>| integrate(&ctx, x).unwrap();
        prop_assert_eq!(i(&f.add(&h)), i(&f) + i(&h));
        prop_assert_eq!(i(&f.scale(&c)), c * i(&f));
    }

    #[test]
    fn integral_ignores_representation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = weighted(small_graph(seed));
        let domain: Vec<Diagram> = ctx.reduced().iter().cloned().collect();
        let f = random_function(&mut r, &domain, 4);
        // Split every support in two at random; the function is unchanged.
        let split = f.terms().iter().fold(SimpleFunction::zero(), |acc, (a, s)| {
            let (x, y): (BTreeSet<Diagram>, BTreeSet<Diagram>) = s.iter().cloned().partition(|_| r.random_bool(0.5));
            acc.add(&SimpleFunction::term(a.clone(), x)).add(&SimpleFunction::term(a.clone(), y))
        });
        prop_assert!(split.same_function(&f));
        prop_assert_eq!(integrate(&ctx, &split).unwrap(), integrate(&ctx, &f).unwrap());
        prop_assert_eq!(integrate(&ctx, &f.canonical()).unwrap(), integrate(&ctx, &f).unwrap());
    }

    #[test]
    fn product_integral_is_the_double_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = weighted(small_graph(seed));
        let domain: Vec<Diagram> = ctx.reduced().iter().cloned().collect();
        let f = random_function(&mut r, &domain, 3);
        let h = random_function(&mut r, &domain, 3);
        let mut double_sum = int(0);
        for (a, s) in f.terms() {
            for (b, t) in h.terms() {
                let meet: BTreeSet<Diagram> = s.intersection(t).cloned().collect();
                double_sum += a * b * ctx.measure(&meet).unwrap();
            }
        }
        prop_assert_eq!(integrate(&ctx, &f.product(&h)).unwrap(), double_sum);
        for d in &domain {
            prop_assert_eq!(f.product(&h).value_at(d), f.value_at(d) * h.value_at(d));
        }
    }

    #[test]
    fn parts_decompose_the_integral(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = weighted(small_graph(seed));
        let domain: Vec<Diagram> = ctx.reduced().iter().cloned().collect();
        let f = random_function(&mut r, &domain, 4);
        let i = |x: &SimpleFunction<Diagram>| integrate(&ctx, x).unwrap();
        let (p, n) = (f.positive_part(), f.negative_part());
        prop_assert_eq!(i(&f.abs()), i(&p) + i(&n));
        prop_assert_eq!(i(&f), i(&p) - i(&n));
    }

    #[test]
    fn monomials_collapse_and_are_inversion_symmetric(seed in any::<u64>()) {
        let g = small_graph(seed);
        for mode in [DiagramMode::Full, DiagramMode::Generator] {
            for neighborhood in [NeighborhoodRule::Adjacent, NeighborhoodRule::Cyclic] {
                let ctx = MeasureContext::new(g.clone(), MeasureOptions { mode, neighborhood, ..Default::default() });
                let i = |n: i64| integrate(&ctx, &monomial(&ctx, n).unwrap()).unwrap();
                let second = i(2);
                for n in 2..=6 {
                    prop_assert_eq!(i(n), second.clone());
                    prop_assert_eq!(i(-n), second.clone());
                }
                // With ordered traces, full-mode adjacent neighborhoods of x
                // and x^-1 need not have equal measure; see the dedicated test.
                if (mode, neighborhood) != (DiagramMode::Full, NeighborhoodRule::Adjacent) {
                    prop_assert_eq!(i(-1), i(1));
                }
            }
        }
    }

    #[test]
    fn equivalence_with_shadow_and_relabeling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = small_graph(seed);
        let options = MeasureOptions { weighting: Weighting::Weighted, ..Default::default() };
        for other in [g.shadow(), relabel(&mut r, &g)] {
            let cert = measure_spaces_equivalent(&g, &other, options).unwrap();
            prop_assert!(cert.measure_preserving);
            let (a, b) = (weighted(g.clone()), weighted(other.clone()));
            let singletons = |c: &MeasureContext| {
                let mut v: Vec<Rational> = c
                    .reduced()
                    .iter()
                    .map(|d| c.measure(&BTreeSet::from([d.clone()])).unwrap())
                    .collect();
                v.sort();
                v
            };
            prop_assert_eq!(singletons(&a), singletons(&b));
        }
    }

    #[test]
    fn trees_have_only_basic_words(seed in any::<u64>(), n in 1usize..7) {
        let t = random_tree(&mut rng(seed), n);
        prop_assert!(tree_coincidence_check(&t, 6));
    }

    #[test]
    fn vertex_neighborhood_contains_the_vertex(seed in any::<u64>()) {
        let g = small_graph(seed);
        let ctx = MeasureContext::new(g.clone(), MeasureOptions::default());
        for v in 0..g.vertex_count() {
            let f = g_w(&ctx, &Word::Vertex(v)).unwrap();
            prop_assert!(f.support().contains(&Diagram::vertex(v)));
        }
    }
}

/// Reversing a reduced word need not map diagrams onto diagrams one to one:
/// two walks from v1 to v2 can meet their letters in the same order while
/// their reversals do not, and vice versa. Endpoint counts then differ, and
/// so do the first and minus-first monomial integrals under the adjacent
/// rule in full mode.
#[test]
fn inversion_asymmetry_of_ordered_traces() {
    let g: Graph = "vertex v1\nvertex v2\nedge e1 v1 v1\nedge e2 v1 v2\nedge e3 v1 v2\n"
        .parse()
        .unwrap();
    let ctx = MeasureContext::new(g, MeasureOptions::default());
    let count = |s: usize, r: usize| {
        ctx.reduced()
            .iter()
            .filter(|d| (d.source(), d.range()) == (s, r))
            .count()
    };
    assert_eq!((count(0, 1), count(1, 0)), (64, 68));
    let i = |n: i64| integrate(&ctx, &monomial(&ctx, n).unwrap()).unwrap();
    assert_eq!(i(1), int(232752));
    assert_eq!(i(-1), int(232880));
}

#[test]
fn inversion_symmetry_on_the_worked_graphs() {
    for g in [
        graph_measure::samples::lambda_tree(),
        graph_measure::samples::triangle(),
    ] {
        let ctx = MeasureContext::new(g, MeasureOptions::default());
        let i = |n: i64| integrate(&ctx, &monomial(&ctx, n).unwrap()).unwrap();
        assert_eq!(i(-1), i(1));
    }
}
