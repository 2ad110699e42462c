use serde::{Deserialize, Serialize};

use super::DirectedGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditioningMode {
    /// Add the constant to every degree.
    #[default]
    AllDegrees,
    /// Replace only zero degrees by the constant.
    ZeroDegreesOnly,
}

/// Small constant that keeps degree inverses finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeConditioning {
    pub epsilon: f64,
    pub mode: ConditioningMode,
}

impl Default for DegreeConditioning {
    fn default() -> Self {
        DegreeConditioning {
            epsilon: 0.01,
            mode: ConditioningMode::AllDegrees,
        }
    }
}

impl DegreeConditioning {
    /// Raw degrees. Fails on any graph with a zero in- or out-degree node.
    pub fn none() -> Self {
        DegreeConditioning {
            epsilon: 0.0,
            mode: ConditioningMode::AllDegrees,
        }
    }

    pub fn zero_degrees_only(epsilon: f64) -> Self {
        DegreeConditioning {
            epsilon,
            mode: ConditioningMode::ZeroDegreesOnly,
        }
    }

    /// Conditioned value of a raw degree.
    pub fn apply(&self, d: usize) -> f64 {
        match self.mode {
            ConditioningMode::AllDegrees => d as f64 + self.epsilon,
            ConditioningMode::ZeroDegreesOnly if d == 0 => self.epsilon,
            ConditioningMode::ZeroDegreesOnly => d as f64,
        }
    }
}

/// Degree views used wherever a solver divides by a degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedDegrees {
    pub out: Vec<f64>,
    pub inn: Vec<f64>,
}

impl ConditionedDegrees {
    #[inline]
    pub fn out_inv(&self, u: usize) -> f64 {
        1.0 / self.out[u]
    }

    #[inline]
    pub fn in_inv(&self, u: usize) -> f64 {
        1.0 / self.inn[u]
    }
}

pub fn condition_degrees(g: &DirectedGraph, c: &DegreeConditioning) -> Result<ConditionedDegrees> {
    if !(c.epsilon.is_finite() && c.epsilon >= 0.0) {
        return Err(Error::Conditioning(format!(
            "epsilon must be finite and non-negative, got {}",
            c.epsilon
        )));
    }
    let out: Vec<f64> = g.out_degrees().into_iter().map(|d| c.apply(d)).collect();
    let inn: Vec<f64> = g.in_degrees().into_iter().map(|d| c.apply(d)).collect();
    for (name, view) in [("out", &out), ("in", &inn)] {
        if let Some(u) = view.iter().position(|&d| d <= 0.0) {
            return Err(Error::Conditioning(format!(
                "node {} has zero {name}-degree and epsilon is {}",
                g.label(u as u32),
                c.epsilon
            )));
        }
    }
    Ok(ConditionedDegrees { out, inn })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_degrees_mode_adds_constant() {
        let g = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let d = condition_degrees(&g, &DegreeConditioning::default()).unwrap();
        assert_eq!(d.inn, vec![1.01, 1.01]);
        assert_eq!(d.out, vec![1.01, 1.01]);
    }

    #[test]
    fn zero_only_mode_patches_zeros() {
        // d_in = (0, 2)
        let g = DirectedGraph::from_edges(3, [(0, 1), (2, 1), (1, 2)]).unwrap();
        let d = condition_degrees(&g, &DegreeConditioning::zero_degrees_only(0.01)).unwrap();
        assert_eq!(d.inn, vec![0.01, 2.0, 1.0]);
        assert_eq!(d.out, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_epsilon_with_source_node_fails() {
        let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert!(matches!(
            condition_degrees(&g, &DegreeConditioning::none()),
            Err(Error::Conditioning(_))
        ));
        let mut c = DegreeConditioning::default();
        c.epsilon = f64::NAN;
        assert!(condition_degrees(&g, &c).is_err());
    }

    #[test]
    fn conditioning_dominates_raw_degrees() {
        let g = DirectedGraph::from_edges(4, [(0, 1), (0, 2), (3, 1)]).unwrap();
        for c in [DegreeConditioning::default(), DegreeConditioning::zero_degrees_only(0.5)] {
            let d = condition_degrees(&g, &c).unwrap();
            for u in g.nodes() {
                assert!(d.out[u as usize] >= g.out_degree(u) as f64);
                assert!(d.inn[u as usize] >= g.in_degree(u) as f64);
                assert!(d.out[u as usize] > 0.0 && d.inn[u as usize] > 0.0);
            }
        }
    }
}
