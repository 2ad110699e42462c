//! Immutable directed graphs in compressed sparse row form.
//!
//! A [`DirectedGraph`] keeps both the forward (out-neighbor) and reverse
//! (in-neighbor) adjacency so that solvers can walk edges in either
//! direction without materializing a transpose. The adjacency matrix is
//! binary and has a zero diagonal: parallel edges collapse and self-loops
//! are dropped at construction time.

mod degrees;
pub mod generate;
mod parse;

use std::collections::HashMap;
use std::fmt::Write as _;

pub use degrees::{condition_degrees, ConditionedDegrees, ConditioningMode, DegreeConditioning};
pub use parse::{parse_edge_list, EdgeListOptions, NodeIds, Separator};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// One direction of adjacency: neighbors of node `u` are
/// `targets[offsets[u]..offsets[u + 1]]`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    /// `edges` must be sorted by (row, column) and free of duplicates.
    fn from_sorted(node_count: usize, edges: impl Iterator<Item = (NodeId, NodeId)>) -> Self {
        let mut offsets = vec![0usize; node_count + 1];
        let mut targets = Vec::new();
        for (row, col) in edges {
            offsets[row as usize + 1] += 1;
            targets.push(col);
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, u: usize) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    fn len(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    labels: Vec<String>,
    out_adj: Csr,
    in_adj: Csr,
}

impl DirectedGraph {
    /// Builds a graph on `node_count` nodes labeled `0..node_count`.
    ///
    /// Duplicate edges are collapsed and self-loops dropped. Endpoints
    /// outside the node range are rejected.
    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    /// Builds a graph whose node `i` carries `labels[i]`.
    pub fn with_labels(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let n = labels.len();
        if n > NodeId::MAX as usize {
            return Err(Error::Param(format!("{n} nodes exceed the id range")));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Param(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u != v {
                list.push((u, v));
            }
        }
        list.sort_unstable();
        list.dedup();
        let out_adj = Csr::from_sorted(n, list.iter().copied());
        let mut reversed: Vec<_> = list.iter().map(|&(u, v)| (v, u)).collect();
        reversed.sort_unstable();
        let in_adj = Csr::from_sorted(n, reversed.into_iter());
        Ok(DirectedGraph {
            labels,
            out_adj,
            in_adj,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.targets.len()
    }

    #[inline]
    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        self.out_adj.row(u as usize)
    }

    #[inline]
    pub fn in_neighbors(&self, u: NodeId) -> &[NodeId] {
        self.in_adj.row(u as usize)
    }

    #[inline]
    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_adj.len(u as usize)
    }

    #[inline]
    pub fn in_degree(&self, u: NodeId) -> usize {
        self.in_adj.len(u as usize)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|u| self.out_adj.len(u)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|u| self.in_adj.len(u)).collect()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.node_count() as NodeId
    }

    /// All edges in (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes()
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u as usize]
    }

    /// Label to dense id lookup table.
    pub fn label_index(&self) -> HashMap<&str, NodeId> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as NodeId))
            .collect()
    }

    /// Reverses every edge. Labels and ids are preserved.
    pub fn transpose(&self) -> DirectedGraph {
        DirectedGraph {
            labels: self.labels.clone(),
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
        }
    }

    pub fn require_edges(&self) -> Result<()> {
        if self.edge_count() == 0 {
            Err(Error::EmptyGraph)
        } else {
            Ok(())
        }
    }

    /// Raw (unconditioned) maximum out- and in-degree.
    pub fn max_degrees(&self) -> Result<(usize, usize)> {
        self.require_edges()?;
        let max_out = (0..self.node_count()).map(|u| self.out_adj.len(u)).max();
        let max_in = (0..self.node_count()).map(|u| self.in_adj.len(u)).max();
        Ok((max_out.unwrap_or(0), max_in.unwrap_or(0)))
    }

    /// Edge list with one `src<TAB>dst` line per edge, sorted by
    /// (source id, target id), written with node labels.
    pub fn canonical_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{}\t{}", self.label(u), self.label(v));
        }
        out
    }

    /// Edge set expressed in labels, sorted. Two graphs with equal
    /// labeled edge sets describe the same network regardless of id order.
    pub fn labeled_edges(&self) -> Vec<(&str, &str)> {
        let mut edges: Vec<_> = self.edges().map(|(u, v)| (self.label(u), self.label(v))).collect();
        edges.sort_unstable();
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> DirectedGraph {
        DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn adjacency_views_agree() {
        let g = DirectedGraph::from_edges(4, [(0, 1), (0, 2), (2, 1), (3, 0), (1, 3)]).unwrap();
        for (u, v) in g.edges() {
            assert!(g.in_neighbors(v).contains(&u));
        }
        let total_in: usize = g.in_degrees().iter().sum();
        let total_out: usize = g.out_degrees().iter().sum();
        assert_eq!(total_in, g.edge_count());
        assert_eq!(total_out, g.edge_count());
        assert_eq!(g.in_neighbors(1), &[0, 2]);
    }

    #[test]
    fn duplicates_and_self_loops_are_dropped() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (0, 1), (1, 1), (2, 0)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(!g.has_edge(1, 1));
    }

    #[test]
    fn out_of_range_edge_is_rejected() {
        assert!(matches!(
            DirectedGraph::from_edges(2, [(0, 2)]),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn transpose_examples() {
        let g = two_cycle();
        assert_eq!(g.transpose(), g);

        let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let t = g.transpose();
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(1, 0)]);
        assert_eq!(t.transpose(), g);
    }

    #[test]
    fn max_degrees_examples() {
        assert_eq!(two_cycle().max_degrees().unwrap(), (1, 1));
        let star = DirectedGraph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        assert_eq!(star.max_degrees().unwrap(), (5, 1));
        let empty = DirectedGraph::from_edges(3, []).unwrap();
        assert!(matches!(empty.max_degrees(), Err(Error::EmptyGraph)));
    }
}
