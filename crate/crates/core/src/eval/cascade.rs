use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::log::{BroadcastLog, BroadcastRecord};
use crate::error::{Error, Result};
use crate::graph::{condition_degrees, DegreeConditioning, DirectedGraph, NodeId};

/// Item id used by the simulator for item `k`.
pub fn item_label(k: usize) -> String {
    format!("item{k}")
}

/// Adopters of one item, in breadth-first adoption order.
///
/// A holder `i` passes the item to each not-yet-adopting out-neighbor `j`
/// with probability `min(1, alpha / d_in(j))`. The random stream is
/// `(seed, k)`, so the cascade depends only on the graph, `alpha`, the
/// seed and the item index.
pub fn simulate_item(
    g: &DirectedGraph,
    in_conditioned: &[f64],
    alpha: f64,
    submitter: NodeId,
    seed: u64,
    k: u64,
) -> Vec<NodeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let mut adopted = vec![false; g.node_count()];
    adopted[submitter as usize] = true;
    let mut order = vec![submitter];
    let mut queue = VecDeque::from([submitter]);
    while let Some(i) = queue.pop_front() {
        for &j in g.out_neighbors(i) {
            if adopted[j as usize] {
                continue;
            }
            let p = (alpha / in_conditioned[j as usize]).min(1.0);
            if rng.random::<f64>() < p {
                adopted[j as usize] = true;
                order.push(j);
                queue.push_back(j);
            }
        }
    }
    order
}

/// Synthetic broadcast log from a limited-attention epidemic: every node
/// submits `items_per_user` items, item `k` belonging to node
/// `k / items_per_user`, and each adopter rebroadcasts once. `seq` is the
/// adoption position within the item.
pub fn simulate_la_cascades(
    g: &DirectedGraph,
    alpha: f64,
    items_per_user: usize,
    seed: u64,
    conditioning: &DegreeConditioning,
) -> Result<BroadcastLog> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Param(format!("alpha must be in (0, 1], got {alpha}")));
    }
    if items_per_user == 0 {
        return Err(Error::Param("items_per_user must be positive".into()));
    }
    let degrees = condition_degrees(g, conditioning)?;
    let total = g.node_count() * items_per_user;
    let cascades: Vec<Vec<NodeId>> = (0..total)
        .into_par_iter()
        .map(|k| {
            let submitter = (k / items_per_user) as NodeId;
            simulate_item(g, &degrees.inn, alpha, submitter, seed, k as u64)
        })
        .collect();
    let records = cascades.iter().enumerate().flat_map(|(k, adopters)| {
        let item = item_label(k);
        adopters
            .iter()
            .enumerate()
            .map(move |(pos, &u)| BroadcastRecord {
                item_id: item.clone(),
                user_id: g.label(u).to_string(),
                seq: pos as u64,
            })
    });
    Ok(BroadcastLog::from_records(records))
}
