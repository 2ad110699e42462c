use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{DegreeConditioning, DirectedGraph};

/// Matrix whose spectral radius bounds the broadcast measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TransferMatrix {
    /// The adjacency matrix `A`.
    Adjacency,
    /// `A D_in^-1` with the given degree conditioning.
    LimitedAttention(DegreeConditioning),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub radius: f64,
    /// Relative change of the estimate over the last iteration.
    pub relative_change: f64,
    pub iterations: usize,
}

const STOP_RELATIVE_CHANGE: f64 = 1e-12;

/// Power-iteration estimate of the spectral radius of a non-negative
/// transfer matrix.
///
/// Iterates on `B + I` rather than `B`: for a non-negative matrix the
/// shift adds exactly one to the Perron root and removes the oscillation
/// that periodic graphs (cycles, bipartite graphs) cause in plain power
/// iteration. The start vector is strictly positive and drawn from `seed`,
/// so the result is deterministic.
pub fn spectral_radius(
    g: &DirectedGraph,
    matrix: TransferMatrix,
    max_iter: usize,
    seed: u64,
) -> SpectralEstimate {
    let n = g.node_count();
    if n == 0 || g.edge_count() == 0 {
        return SpectralEstimate {
            radius: 0.0,
            relative_change: 0.0,
            iterations: 0,
        };
    }

    // Column scaling for A D_in^-1. An empty column stays empty whatever
    // its conditioned degree, so zero-degree nodes never divide.
    let column_scale: Option<Vec<f64>> = match matrix {
        TransferMatrix::Adjacency => None,
        TransferMatrix::LimitedAttention(c) => Some(
            g.nodes()
                .map(|v| {
                    let d = g.in_degree(v);
                    let dc = c.apply(d);
                    if d == 0 || dc <= 0.0 {
                        0.0
                    } else {
                        1.0 / dc
                    }
                })
                .collect(),
        ),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| 0.5 + rng.random::<f64>()).collect();
    let total: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= total);
    let mut y = vec![0.0; n];

    let mut estimate = 0.0;
    let mut relative_change = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=max_iter.max(1) {
        iterations = it;
        for u in g.nodes() {
            let ui = u as usize;
            let mut acc = x[ui];
            match &column_scale {
                None => {
                    for &v in g.out_neighbors(u) {
                        acc += x[v as usize];
                    }
                }
                Some(scale) => {
                    for &v in g.out_neighbors(u) {
                        acc += x[v as usize] * scale[v as usize];
                    }
                }
            }
            y[ui] = acc;
        }
        // x has unit 1-norm and everything is non-negative.
        let norm: f64 = y.iter().sum();
        let next = norm - 1.0;
        relative_change = (next - estimate).abs() / next.abs().max(f64::MIN_POSITIVE);
        estimate = next;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
        if it > 1 && relative_change < STOP_RELATIVE_CHANGE {
            break;
        }
    }
    SpectralEstimate {
        radius: estimate.max(0.0),
        relative_change,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, cycle};

    fn radius(g: &DirectedGraph, m: TransferMatrix) -> f64 {
        spectral_radius(g, m, 5_000, 0).radius
    }

    #[test]
    fn cycles_have_unit_radius() {
        for n in [2, 3, 7] {
            let r = radius(&cycle(n), TransferMatrix::Adjacency);
            assert!((r - 1.0).abs() < 1e-9, "n={n}: {r}");
        }
    }

    #[test]
    fn complete_graph_radius_is_n_minus_one() {
        let r = radius(&complete(4), TransferMatrix::Adjacency);
        assert!((r - 3.0).abs() < 1e-9, "{r}");
    }

    #[test]
    fn limited_attention_matrix_is_column_substochastic() {
        let g = complete(5);
        let r = radius(&g, TransferMatrix::LimitedAttention(DegreeConditioning::none()));
        assert!((r - 1.0).abs() < 1e-9, "{r}");
        let r = radius(&g, TransferMatrix::LimitedAttention(DegreeConditioning::default()));
        assert!((r - 4.0 / 4.01).abs() < 1e-9, "{r}");
    }

    #[test]
    fn empty_and_acyclic_graphs() {
        let g = DirectedGraph::from_edges(3, []).unwrap();
        assert_eq!(radius(&g, TransferMatrix::Adjacency), 0.0);
        let dag = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let r = radius(&dag, TransferMatrix::Adjacency);
        assert!(r >= 0.0 && r < 0.01, "{r}");
    }

    #[test]
    fn deterministic_for_seed() {
        let g = crate::graph::generate::erdos_renyi(40, 0.1, 9);
        let a = spectral_radius(&g, TransferMatrix::Adjacency, 100, 5);
        let b = spectral_radius(&g, TransferMatrix::Adjacency, 100, 5);
        assert_eq!(a, b);
    }
}
