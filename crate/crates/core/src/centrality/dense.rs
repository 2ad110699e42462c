//! Dense direct solver used as a test oracle.
//!
//! Materializes `K = I - α T` for the measure's transfer matrix `T` and
//! solves `K x = b` by Gaussian elimination with partial pivoting. It
//! shares nothing with the sparse iteration beyond the graph and degree
//! views, which is what makes it useful as an independent check.

use super::{validate_source, CentralityParams, Measure, Method, ParamsSnapshot, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{condition_degrees, DegreeConditioning, DirectedGraph};

pub const DENSE_NODE_LIMIT: usize = 2_000;

/// Solves the measure's linear system for an explicit source vector `s`.
///
/// The source is taken as-is (walk measures scale it by `1 - α`). No
/// divergence check is made; a singular or near-singular `K` is reported
/// as [`Error::SingularSystem`].
pub fn dense_solve(
    g: &DirectedGraph,
    measure: Measure,
    alpha: f64,
    conditioning: &DegreeConditioning,
    s: &[f64],
) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n > DENSE_NODE_LIMIT {
        return Err(Error::TooLarge {
            nodes: n,
            limit: DENSE_NODE_LIMIT,
        });
    }
    if s.len() != n {
        return Err(Error::Shape {
            expected: n,
            found: s.len(),
        });
    }
    let needs_degrees = measure != Measure::Ac;
    let d = if needs_degrees {
        Some(condition_degrees(g, conditioning)?)
    } else {
        None
    };

    // Row-major K, identity first.
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        k[i * n + i] = 1.0;
    }
    for (u, v) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        match measure {
            // x[v] depends on x[u]
            Measure::Pr => {
                let d = d.as_ref().unwrap();
                k[v * n + u] -= alpha / d.out[u];
            }
            Measure::LaPr => {
                let d = d.as_ref().unwrap();
                k[v * n + u] -= alpha / (d.out[u] * d.inn[v]);
            }
            // x[u] depends on x[v]
            Measure::Ac => k[u * n + v] -= alpha,
            Measure::LaAc => {
                let d = d.as_ref().unwrap();
                k[u * n + v] -= alpha / d.inn[v];
            }
        }
    }
    let mut b: Vec<f64> = if measure.is_walk() {
        s.iter().map(|x| (1.0 - alpha) * x).collect()
    } else {
        s.to_vec()
    };
    gaussian_elimination(&mut k, &mut b, n)?;
    Ok(b)
}

/// In-place solve; on success `b` holds the solution.
fn gaussian_elimination(a: &mut [f64], b: &mut [f64], n: usize) -> Result<()> {
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let singular = scale * 1e-13;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap();
        if a[pivot_row * n + col].abs() <= singular {
            return Err(Error::SingularSystem);
        }
        if pivot_row != col {
            for c in 0..n {
                a.swap(col * n + c, pivot_row * n + c);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for c in col + 1..n {
                a[row * n + c] -= factor * a[col * n + c];
            }
            b[row] -= factor * b[col];
        }
    }
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row * n + c] * b[c];
        }
        b[row] = acc / a[row * n + row];
    }
    Ok(())
}

/// Dense counterpart of [`super::exact_scores`] for graphs up to
/// [`DENSE_NODE_LIMIT`] nodes.
pub fn dense_solve_oracle(
    g: &DirectedGraph,
    measure: Measure,
    p: &CentralityParams,
) -> Result<ScoreVector> {
    p.validate(measure)?;
    let degrees = p.degrees_for(measure, g)?;
    let s = p.starting.resolve(measure, g, degrees.as_ref())?;
    validate_source(&s, g.node_count())?;
    let scores = dense_solve(g, measure, p.alpha, &p.conditioning, &s)?;
    Ok(ScoreVector {
        measure,
        scores,
        params: ParamsSnapshot::exact(Method::Dense, measure, p),
        iterations: 0,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::StartingVector;
    use crate::graph::generate::cycle;

    #[test]
    fn two_cycle_la_alpha_centrality_matches_geometric_series() {
        // s = (1, 1), x = s / (1 - α)
        let x = dense_solve(&cycle(2), Measure::LaAc, 0.5, &DegreeConditioning::none(), &[1.0, 1.0])
            .unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        let sv = dense_solve_oracle(
            &cycle(2),
            Measure::LaAc,
            &CentralityParams::with_alpha(0.5).conditioning(DegreeConditioning::none()),
        )
        .unwrap();
        assert_eq!(sv.scores, x);
    }

    #[test]
    fn alpha_zero_is_identity_solve() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let s = [0.2, 0.3, 0.5];
        for m in [Measure::Ac, Measure::LaAc] {
            assert_eq!(dense_solve(&g, m, 0.0, &DegreeConditioning::default(), &s).unwrap(), s);
        }
        // walk measures return (1 - α) s = s
        let x = dense_solve(&g, Measure::Pr, 0.0, &DegreeConditioning::default(), &s).unwrap();
        assert_eq!(x, s);
    }

    #[test]
    fn chain_pagerank_hand_solution() {
        // 0 -> 1 -> 2 with d_out conditioned by 0.01; node 2 dangles.
        // x0 = (1-α)s0, x1 = (1-α)s1 + α x0/1.01, x2 = (1-α)s2 + α x1/1.01
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let a = 0.5;
        let s = 1.0 / 3.0;
        let x0 = (1.0 - a) * s;
        let x1 = (1.0 - a) * s + a * x0 / 1.01;
        let x2 = (1.0 - a) * s + a * x1 / 1.01;
        let sv = dense_solve_oracle(&g, Measure::Pr, &CentralityParams::with_alpha(a)).unwrap();
        for (got, want) in sv.scores.iter().zip([x0, x1, x2]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn singular_system_detected() {
        // α = 1 on the 2-cycle AC system: I - A is singular.
        let err = dense_solve(&cycle(2), Measure::Ac, 1.0, &DegreeConditioning::none(), &[1.0, 1.0])
            .unwrap_err();
        assert!(matches!(err, Error::SingularSystem));
    }

    #[test]
    fn size_and_shape_limits() {
        let big = DirectedGraph::from_edges(DENSE_NODE_LIMIT + 1, [(0, 1)]).unwrap();
        let s = vec![1.0; DENSE_NODE_LIMIT + 1];
        assert!(matches!(
            dense_solve(&big, Measure::Ac, 0.1, &DegreeConditioning::default(), &s),
            Err(Error::TooLarge { .. })
        ));
        let p = CentralityParams::with_alpha(0.1).starting(StartingVector::Custom(vec![1.0]));
        assert!(matches!(
            dense_solve_oracle(&cycle(2), Measure::Ac, &p),
            Err(Error::Shape { .. })
        ));
    }
}
