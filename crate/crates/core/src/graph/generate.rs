//! Seeded random graph generators for tests, benchmarks and synthetic
//! evaluation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DirectedGraph, NodeId};

/// Directed G(n, p): every ordered pair (u, v), u != v, is an edge with
/// probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random::<f64>() < p {
                edges.push((u as NodeId, v as NodeId));
            }
        }
    }
    DirectedGraph::from_edges(n, edges).expect("ids in range")
}

/// Directed G(n, p) with `p = mean_degree / (n - 1)`.
pub fn erdos_renyi_mean_degree(n: usize, mean_degree: f64, seed: u64) -> DirectedGraph {
    let p = if n > 1 { mean_degree / (n - 1) as f64 } else { 0.0 };
    erdos_renyi(n, p.min(1.0), seed)
}

/// Directed Chung-Lu graph with independent power-law out- and in-weights.
///
/// Node weights follow `w_i ∝ (i + 1)^(-1 / (exponent - 1))`, giving degree
/// tails with roughly the requested exponent. Out- and in-weights are
/// assigned through independent random permutations, so heavy broadcasters
/// are not necessarily heavy followers. Edge (u, v) appears with
/// probability `min(1, w_out[u] * w_in[v] / total)` scaled to the requested
/// mean degree.
pub fn chung_lu_directed(n: usize, mean_degree: f64, exponent: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = 1.0 / (exponent - 1.0);
    let base: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-gamma)).collect();
    let sum: f64 = base.iter().sum();
    // Scale so that the expected total edge count is n * mean_degree.
    let scale = mean_degree * n as f64 / sum;
    let weights: Vec<f64> = base.iter().map(|w| w * scale).collect();

    let shuffled = |rng: &mut ChaCha8Rng| {
        let mut w = weights.clone();
        for i in (1..w.len()).rev() {
            let j = rng.random_range(0..=i);
            w.swap(i, j);
        }
        w
    };
    let w_out = shuffled(&mut rng);
    let w_in = shuffled(&mut rng);
    let total = mean_degree * n as f64;

    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let p = (w_out[u] * w_in[v] / total).min(1.0);
            if rng.random::<f64>() < p {
                edges.push((u as NodeId, v as NodeId));
            }
        }
    }
    DirectedGraph::from_edges(n, edges).expect("ids in range")
}

/// Directed cycle 0 -> 1 -> ... -> n-1 -> 0.
pub fn cycle(n: usize) -> DirectedGraph {
    DirectedGraph::from_edges(n, (0..n).map(|i| (i as NodeId, ((i + 1) % n) as NodeId)))
        .expect("ids in range")
}

/// Complete graph with edges in both directions between every pair.
pub fn complete(n: usize) -> DirectedGraph {
    let edges = (0..n).flat_map(|u| (0..n).map(move |v| (u as NodeId, v as NodeId)));
    DirectedGraph::from_edges(n, edges).expect("ids in range")
}
