//! Fixture graphs shared by the benchmarks.

use graph_measure::{samples, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named graphs of increasing size: the two small worked graphs plus a few
/// seeded random multigraphs.
pub fn fixtures() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("out-tree".to_string(), samples::lambda_tree()),
        ("triangle".to_string(), samples::triangle()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..3 {
        out.push((format!("random-{i}"), samples::random_graph(&mut rng, 4, 5, true)));
    }
    out
}
