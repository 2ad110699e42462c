//! Residual-push approximations of laPR, laAC and AC.
//!
//! Every run starts from `r = s`, `c̃r = 0` and repeatedly pops a queued
//! node `i`, moves its residual into the accumulator and spreads the
//! remainder to its neighbors:
//!
//! | measure | accumulate      | spread to       | each neighbor receives |
//! |---------|-----------------|-----------------|------------------------|
//! | laPR    | `(1-α) r[i]`    | `j ∈ N_out(i)`  | `α r[i] / (d_out(i) d_in(j))` |
//! | laAC    | `r[i]`          | `j ∈ N_in(i)`   | `α r[i] / d_in(i)` |
//! | AC      | `r[i]`          | `j ∈ N_in(i)`   | `α r[i]` |
//!
//! A node is queued while `r[i] / d_max > ε` with
//! `ε = δ ‖s‖₁ / (|V| d_max)`; `d_max` is the raw maximum out-degree for
//! laPR and the raw maximum in-degree otherwise. Throughout a run
//! `c̃r = cr(s) - cr(r)` holds exactly (by linearity of the exact
//! solution in `s`), so at termination, for a uniform `s`, every node
//! satisfies `cr(s)[i] ≥ c̃r[i] ≥ (1 - δ) cr(s)[i]`.
//!
//! The AC variant follows the same scheme with an undamped push weight;
//! its residual mass can grow per push when `α d_in(i) > 1`, so the
//! closed-form push bound is only reported when `α · d_max < 1`.

mod verify;

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

pub use verify::{verify_residual_invariant, ExactTarget, InvariantReport};

use crate::centrality::{
    check_divergence, Measure, Method, ParamsSnapshot, ScoreVector, StartingVector,
    TransferMatrix,
};
use crate::error::{Error, Result};
use crate::graph::{condition_degrees, ConditionedDegrees, DegreeConditioning, DirectedGraph, NodeId};

/// Incremental residual sums are recomputed from scratch this often.
const RESUM_INTERVAL: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PopOrder {
    #[default]
    Fifo,
    /// Pop a uniformly random queued node, seeded.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PushParams {
    pub alpha: f64,
    pub delta: f64,
    pub starting: StartingVector,
    pub conditioning: DegreeConditioning,
    pub order: PopOrder,
    /// Verify residual decrease after every push.
    pub check_invariants: bool,
}

impl PushParams {
    pub fn new(alpha: f64, delta: f64) -> Self {
        PushParams {
            alpha,
            delta,
            starting: StartingVector::MeasureDefault,
            conditioning: DegreeConditioning::default(),
            order: PopOrder::Fifo,
            check_invariants: false,
        }
    }

    pub fn starting(mut self, starting: StartingVector) -> Self {
        self.starting = starting;
        self
    }

    pub fn conditioning(mut self, conditioning: DegreeConditioning) -> Self {
        self.conditioning = conditioning;
        self
    }

    pub fn order(mut self, order: PopOrder) -> Self {
        self.order = order;
        self
    }

    pub fn checked(mut self, check: bool) -> Self {
        self.check_invariants = check;
        self
    }
}

/// Moving parts of a push run.
#[derive(Debug, Clone)]
pub struct PushState {
    residual: Vec<f64>,
    accumulator: Vec<f64>,
    queue: VecDeque<NodeId>,
    queued: Vec<bool>,
    epsilon: f64,
    pushes: u64,
    residual_l1: f64,
}

impl PushState {
    pub fn residual(&self) -> &[f64] {
        &self.residual
    }

    pub fn accumulator(&self) -> &[f64] {
        &self.accumulator
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn pushes(&self) -> u64 {
        self.pushes
    }

    /// Incrementally maintained `Σ r`.
    pub fn residual_l1(&self) -> f64 {
        self.residual_l1
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_queued(&self, u: NodeId) -> bool {
        self.queued[u as usize]
    }

    pub fn queued_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.queue.iter().copied()
    }
}

/// Copy of the vectors needed to check the residual invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct PushSnapshot {
    pub measure: Measure,
    pub alpha: f64,
    pub conditioning: DegreeConditioning,
    pub source: Vec<f64>,
    pub residual: Vec<f64>,
    pub accumulator: Vec<f64>,
    pub pushes: u64,
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushStats {
    pub measure: Measure,
    pub alpha: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub pushes: u64,
    /// Upper bound on `pushes`, when one is available for the parameters.
    pub theoretical_bound: Option<f64>,
    /// How the bound was derived.
    pub bound_basis: &'static str,
    pub residual_l1_final: f64,
    #[serde(rename = "wall_time_ms", serialize_with = "as_millis")]
    pub wall_time: Duration,
}

impl PushStats {
    pub fn within_bound(&self) -> bool {
        self.theoretical_bound
            .map_or(true, |b| (self.pushes as f64) < b)
    }
}

/// A residual-push computation that can be driven one push at a time.
pub struct PushRun<'g> {
    graph: &'g DirectedGraph,
    measure: Measure,
    params: PushParams,
    degrees: Option<ConditionedDegrees>,
    d_max: f64,
    source: Vec<f64>,
    source_l1: f64,
    state: PushState,
    rng: Option<ChaCha8Rng>,
    started: Instant,
}

impl<'g> PushRun<'g> {
    pub fn new(g: &'g DirectedGraph, measure: Measure, params: &PushParams) -> Result<Self> {
        g.require_edges()?;
        let alpha = params.alpha;
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Param(format!(
                "alpha must be finite and non-negative, got {alpha}"
            )));
        }
        if !(params.delta > 0.0 && params.delta <= 1.0) {
            return Err(Error::Param(format!(
                "delta must lie in (0, 1], got {}",
                params.delta
            )));
        }
        match measure {
            Measure::Pr => {
                return Err(Error::Param(
                    "no push approximation for classical PageRank".into(),
                ))
            }
            Measure::LaPr if alpha >= 1.0 => {
                return Err(Error::Param(format!("alpha must lie in [0, 1), got {alpha}")))
            }
            Measure::LaPr => {}
            Measure::LaAc => {
                check_divergence(
                    g,
                    TransferMatrix::LimitedAttention(params.conditioning),
                    alpha,
                )?;
                if alpha >= 1.0 {
                    return Err(Error::Param(format!("alpha must be below 1, got {alpha}")));
                }
            }
            Measure::Ac => {
                check_divergence(g, TransferMatrix::Adjacency, alpha)?;
            }
        }

        let starting = params.starting.for_measure(measure);
        let needs_degrees = measure != Measure::Ac
            || matches!(
                starting,
                StartingVector::IndegreeInverse | StartingVector::LaOutDegree
            );
        let degrees = if needs_degrees {
            Some(condition_degrees(g, &params.conditioning)?)
        } else {
            None
        };
        let source = starting.resolve(measure, g, degrees.as_ref())?;
        let source_l1: f64 = source.iter().sum();

        let (max_out, max_in) = g.max_degrees()?;
        let d_max = if measure == Measure::LaPr { max_out } else { max_in } as f64;
        let epsilon = params.delta * source_l1 / (g.node_count() as f64 * d_max);

        let n = g.node_count();
        let mut queue = VecDeque::new();
        let mut queued = vec![false; n];
        for (i, &r) in source.iter().enumerate() {
            if r / d_max > epsilon {
                queue.push_back(i as NodeId);
                queued[i] = true;
            }
        }
        let state = PushState {
            residual: source.clone(),
            accumulator: vec![0.0; n],
            queue,
            queued,
            epsilon,
            pushes: 0,
            residual_l1: source_l1,
        };
        let rng = match params.order {
            PopOrder::Fifo => None,
            PopOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Ok(PushRun {
            graph: g,
            measure,
            params: params.clone(),
            degrees,
            d_max,
            source,
            source_l1,
            state,
            rng,
            started: Instant::now(),
        })
    }

    pub fn state(&self) -> &PushState {
        &self.state
    }

    pub fn source(&self) -> &[f64] {
        &self.source
    }

    /// Raw maximum degree used in the threshold.
    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn snapshot(&self) -> PushSnapshot {
        PushSnapshot {
            measure: self.measure,
            alpha: self.params.alpha,
            conditioning: self.params.conditioning,
            source: self.source.clone(),
            residual: self.state.residual.clone(),
            accumulator: self.state.accumulator.clone(),
            pushes: self.state.pushes,
        }
    }

    fn pop(&mut self) -> Option<NodeId> {
        let q = &mut self.state.queue;
        let i = match self.rng.as_mut() {
            None => q.pop_front(),
            Some(rng) if !q.is_empty() => {
                let k = rng.random_range(0..q.len());
                q.swap_remove_back(k)
            }
            Some(_) => None,
        }?;
        self.state.queued[i as usize] = false;
        Some(i)
    }

    #[inline]
    fn offer(state: &mut PushState, j: NodeId, d_max: f64) {
        let ju = j as usize;
        if !state.queued[ju] && state.residual[ju] / d_max > state.epsilon {
            state.queued[ju] = true;
            state.queue.push_back(j);
        }
    }

    /// Performs one push. Returns the popped node, or `None` once the queue
    /// is empty.
    pub fn step(&mut self) -> Result<Option<NodeId>> {
        let Some(i) = self.pop() else {
            return Ok(None);
        };
        let iu = i as usize;
        let g = self.graph;
        let alpha = self.params.alpha;
        let d_max = self.d_max;
        let decay = self.decay_rate();
        let st = &mut self.state;
        let r_i = st.residual[iu];
        st.residual[iu] = 0.0;
        let mut added = 0.0;
        match self.measure {
            Measure::LaPr => {
                let d = self.degrees.as_ref().expect("degrees");
                st.accumulator[iu] += (1.0 - alpha) * r_i;
                let t = alpha * r_i * d.out_inv(iu);
                for &j in g.out_neighbors(i) {
                    let inc = t * d.in_inv(j as usize);
                    st.residual[j as usize] += inc;
                    added += inc;
                    Self::offer(st, j, d_max);
                }
            }
            Measure::LaAc | Measure::Ac => {
                st.accumulator[iu] += r_i;
                let t = match self.measure {
                    Measure::LaAc => alpha * r_i * self.degrees.as_ref().expect("degrees").in_inv(iu),
                    _ => alpha * r_i,
                };
                for &j in g.in_neighbors(i) {
                    st.residual[j as usize] += t;
                    added += t;
                    Self::offer(st, j, d_max);
                }
            }
            Measure::Pr => unreachable!("rejected in new"),
        }
        st.pushes += 1;
        st.residual_l1 += added - r_i;
        if st.pushes % RESUM_INTERVAL == 0 {
            st.residual_l1 = st.residual.iter().sum();
        }

        if self.params.check_invariants {
            let removed = r_i - added;
            if let Some(rate) = decay {
                let floor = rate * st.epsilon * d_max;
                if !(removed > 0.0 && removed > floor) {
                    return Err(Error::InvariantViolation {
                        push: st.pushes,
                        detail: format!(
                            "residual mass dropped by {removed}, expected more than {floor}"
                        ),
                    });
                }
            }
        }
        Ok(Some(i))
    }

    /// Guaranteed fraction of a popped residual that leaves the residual
    /// vector, when there is one.
    fn decay_rate(&self) -> Option<f64> {
        let alpha = self.params.alpha;
        match self.measure {
            Measure::LaPr | Measure::LaAc => Some(1.0 - alpha),
            Measure::Ac if alpha * self.d_max < 1.0 => Some(1.0 - alpha * self.d_max),
            _ => None,
        }
    }

    fn bound(&self) -> (Option<f64>, &'static str) {
        let basis = match self.measure {
            Measure::LaPr => "residual decay, c = alpha, d_max = max out-degree",
            Measure::LaAc => "residual decay, c = alpha, d_max = max in-degree",
            Measure::Ac if self.decay_rate().is_some() => {
                "residual decay, c = alpha * d_max, d_max = max in-degree"
            }
            _ => "none: residual mass may grow when alpha * d_max >= 1",
        };
        let bound = self
            .decay_rate()
            .map(|rate| self.source_l1 / (rate * self.state.epsilon * self.d_max));
        (bound, basis)
    }

    pub fn run_to_end(&mut self) -> Result<()> {
        while self.step()?.is_some() {}
        if self.params.check_invariants {
            let limit = self.state.epsilon * self.d_max;
            if let Some(u) = self.state.residual.iter().position(|&r| r / self.d_max > self.state.epsilon) {
                return Err(Error::InvariantViolation {
                    push: self.state.pushes,
                    detail: format!(
                        "node {u} keeps residual {} above {limit} at termination",
                        self.state.residual[u]
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<(ScoreVector, PushStats)> {
        self.run_to_end()?;
        let wall_time = self.started.elapsed();
        let (theoretical_bound, bound_basis) = self.bound();
        let stats = PushStats {
            measure: self.measure,
            alpha: self.params.alpha,
            delta: self.params.delta,
            epsilon: self.state.epsilon,
            pushes: self.state.pushes,
            theoretical_bound,
            bound_basis,
            residual_l1_final: self.state.residual.iter().sum(),
            wall_time,
        };
        let starting = self.params.starting.for_measure(self.measure);
        let sv = ScoreVector {
            measure: self.measure,
            scores: self.state.accumulator,
            params: ParamsSnapshot {
                method: Method::Push,
                alpha: self.params.alpha,
                delta: Some(self.params.delta),
                starting: starting.name().to_string(),
                conditioning: self.params.conditioning,
                tol: None,
                max_iter: None,
            },
            iterations: stats.pushes as usize,
            converged: true,
        };
        Ok((sv, stats))
    }
}

/// Runs a push approximation to completion.
pub fn approximate(
    g: &DirectedGraph,
    measure: Measure,
    params: &PushParams,
) -> Result<(ScoreVector, PushStats)> {
    PushRun::new(g, measure, params)?.finish()
}

/// Approximate limited-attention PageRank; default start is uniform.
pub fn approx_la_pagerank(g: &DirectedGraph, params: &PushParams) -> Result<(ScoreVector, PushStats)> {
    approximate(g, Measure::LaPr, params)
}

/// Approximate limited-attention Alpha-Centrality.
pub fn approx_la_alpha_centrality(
    g: &DirectedGraph,
    params: &PushParams,
) -> Result<(ScoreVector, PushStats)> {
    approximate(g, Measure::LaAc, params)
}

/// Approximate Alpha-Centrality, pushing `α r[i]` to every in-neighbor.
pub fn approx_alpha_centrality(
    g: &DirectedGraph,
    params: &PushParams,
) -> Result<(ScoreVector, PushStats)> {
    approximate(g, Measure::Ac, params)
}
