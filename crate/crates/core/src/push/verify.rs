use serde::Serialize;

use super::PushSnapshot;
use crate::centrality::{dense_solve, max_abs_diff, Measure};
use crate::error::{Error, Result};
use crate::graph::{DegreeConditioning, DirectedGraph};

/// The exact solution a push run is checked against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactTarget {
    pub measure: Measure,
    pub alpha: f64,
    pub conditioning: DegreeConditioning,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantReport {
    /// `‖c̃r + cr(r) - cr(s)‖_∞`
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub pushes: u64,
}

/// Checks `c̃r = cr(s) - cr(r)` for a snapshot, solving both exact
/// systems with the dense solver. Passes when the defect is at most
/// `1e-8 · max(1, ‖cr(s)‖_∞)`.
pub fn verify_residual_invariant(
    g: &DirectedGraph,
    snapshot: &PushSnapshot,
    target: &ExactTarget,
) -> Result<InvariantReport> {
    if snapshot.measure != target.measure
        || snapshot.alpha != target.alpha
        || snapshot.conditioning != target.conditioning
    {
        return Err(Error::Param(format!(
            "snapshot ({}, alpha {}) does not match the exact target ({}, alpha {})",
            snapshot.measure, snapshot.alpha, target.measure, target.alpha
        )));
    }
    let solve = |v: &[f64]| dense_solve(g, target.measure, target.alpha, &target.conditioning, v);
    let from_source = solve(&snapshot.source)?;
    let from_residual = solve(&snapshot.residual)?;
    let reconstructed: Vec<f64> = snapshot
        .accumulator
        .iter()
        .zip(&from_residual)
        .map(|(a, r)| a + r)
        .collect();
    let defect = max_abs_diff(&reconstructed, &from_source);
    let scale = from_source.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tolerance = 1e-8 * scale;
    Ok(InvariantReport {
        defect,
        tolerance,
        pass: defect <= tolerance,
        pushes: snapshot.pushes,
    })
}
