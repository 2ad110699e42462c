use super::{
    max_abs_diff, spectral_radius, CentralityParams, Measure, Method, ParamsSnapshot, ScoreVector,
    TransferMatrix,
};
use crate::error::{Error, Result};
use crate::graph::{ConditionedDegrees, DirectedGraph};

/// Broadcast measures are rejected when `alpha >= DIVERGENCE_MARGIN / ρ̂`.
pub const DIVERGENCE_MARGIN: f64 = 0.99;

const SPECTRAL_ITERS: usize = 2_000;
const SPECTRAL_SEED: u64 = 0x5eed;

/// Rejects `alpha` values at or beyond the convergence boundary of the
/// broadcast measure's transfer matrix. Returns the spectral estimate used.
pub fn check_divergence(g: &DirectedGraph, matrix: TransferMatrix, alpha: f64) -> Result<f64> {
    let rho = spectral_radius(g, matrix, SPECTRAL_ITERS, SPECTRAL_SEED).radius;
    if rho > 0.0 && alpha * rho >= DIVERGENCE_MARGIN {
        return Err(Error::Divergence {
            alpha,
            spectral_radius: rho,
            threshold: DIVERGENCE_MARGIN / rho,
        });
    }
    Ok(rho)
}

/// One Jacobi sweep `next = base + α·T(x)` for the measure's transfer.
fn sweep(
    measure: Measure,
    g: &DirectedGraph,
    d: Option<&ConditionedDegrees>,
    alpha: f64,
    base: &[f64],
    x: &[f64],
    next: &mut [f64],
) {
    for u in g.nodes() {
        let ui = u as usize;
        let flow = match measure {
            Measure::Pr => {
                let d = d.expect("degrees");
                g.in_neighbors(u)
                    .iter()
                    .map(|&i| x[i as usize] * d.out_inv(i as usize))
                    .sum::<f64>()
            }
            Measure::LaPr => {
                let d = d.expect("degrees");
                let inflow: f64 = g
                    .in_neighbors(u)
                    .iter()
                    .map(|&i| x[i as usize] * d.out_inv(i as usize))
                    .sum();
                inflow * d.in_inv(ui)
            }
            Measure::Ac => g.out_neighbors(u).iter().map(|&j| x[j as usize]).sum(),
            Measure::LaAc => {
                let d = d.expect("degrees");
                g.out_neighbors(u)
                    .iter()
                    .map(|&j| x[j as usize] * d.in_inv(j as usize))
                    .sum()
            }
        };
        next[ui] = base[ui] + alpha * flow;
    }
}

/// Exact scores for any measure by fixed-point iteration.
///
/// Iterates full sweeps from `x = base` until the infinity-norm change
/// drops below `p.tol`. Broadcast measures are first checked against the
/// spectral radius of their transfer matrix.
pub fn exact_scores(g: &DirectedGraph, measure: Measure, p: &CentralityParams) -> Result<ScoreVector> {
    g.require_edges()?;
    p.validate(measure)?;
    match measure {
        Measure::Ac => {
            check_divergence(g, TransferMatrix::Adjacency, p.alpha)?;
        }
        Measure::LaAc => {
            check_divergence(g, TransferMatrix::LimitedAttention(p.conditioning), p.alpha)?;
        }
        _ => {}
    }
    let degrees = p.degrees_for(measure, g)?;
    let s = p.starting.resolve(measure, g, degrees.as_ref())?;
    let base: Vec<f64> = if measure.is_walk() {
        s.iter().map(|v| (1.0 - p.alpha) * v).collect()
    } else {
        s
    };

    let mut x = base.clone();
    let mut next = vec![0.0; x.len()];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < p.max_iter {
        iterations += 1;
        sweep(measure, g, degrees.as_ref(), p.alpha, &base, &x, &mut next);
        let change = max_abs_diff(&x, &next);
        std::mem::swap(&mut x, &mut next);
        if change < p.tol {
            converged = true;
            break;
        }
        if !change.is_finite() {
            break;
        }
    }

    let result = ScoreVector {
        measure,
        scores: x,
        params: ParamsSnapshot::exact(Method::Iterative, measure, p),
        iterations,
        converged,
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NotConverged(Box::new(result)))
    }
}

/// Classical PageRank; default start is uniform.
pub fn pagerank_exact(g: &DirectedGraph, p: &CentralityParams) -> Result<ScoreVector> {
    exact_scores(g, Measure::Pr, p)
}

/// Limited-attention PageRank: the walker entering `j` along one in-link is
/// additionally damped by `1/d_in(j)`.
pub fn la_pagerank_exact(g: &DirectedGraph, p: &CentralityParams) -> Result<ScoreVector> {
    exact_scores(g, Measure::LaPr, p)
}

/// Alpha-Centrality; default start is the out-degree vector.
pub fn alpha_centrality_exact(g: &DirectedGraph, p: &CentralityParams) -> Result<ScoreVector> {
    exact_scores(g, Measure::Ac, p)
}

/// Limited-attention Alpha-Centrality over `A D_in^-1`.
pub fn la_alpha_centrality_exact(g: &DirectedGraph, p: &CentralityParams) -> Result<ScoreVector> {
    exact_scores(g, Measure::LaAc, p)
}
