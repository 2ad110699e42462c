use lacent::centrality::{exact_scores, CentralityParams};
use lacent::graph::generate::{complete, cycle};
use lacent::push::{approximate, verify_residual_invariant, ExactTarget, PushParams, PushRun};
use lacent::{DegreeConditioning, Error, Measure, StartingVector};

#[test]
fn two_cycle_la_pagerank_trace() {
    let p = PushParams::new(0.5, 0.5)
        .starting(StartingVector::Uniform)
        .conditioning(DegreeConditioning::none());
    let g = cycle(2);
    let mut run = PushRun::new(&g, Measure::LaPr, &p).unwrap();
    assert_eq!(run.state().epsilon(), 0.25);
    let mut popped = vec![];
    while let Some(u) = run.step().unwrap() {
        popped.push(u);
    }
    assert_eq!(popped, vec![0, 1, 0]);
    assert_eq!(run.state().residual_l1(), 0.1875);
    let (sv, stats) = run.finish().unwrap();
    assert_eq!(sv.scores, vec![0.4375, 0.375]);
    assert_eq!(stats.pushes, 3);
}

#[test]
fn two_cycle_la_alpha_centrality_trace() {
    let p = PushParams::new(0.5, 0.5).conditioning(DegreeConditioning::none());
    let (sv, stats) = approximate(&cycle(2), Measure::LaAc, &p).unwrap();
    assert_eq!(sv.scores, vec![1.75, 1.5]);
    assert_eq!(stats.pushes, 3);
    assert_eq!(stats.epsilon, 0.5);
}

#[test]
fn invariant_holds_along_a_trace() {
    let g = complete(6);
    let c = DegreeConditioning::default();
    let p = PushParams::new(0.7, 0.01).conditioning(c);
    let target = ExactTarget { measure: Measure::LaAc, alpha: 0.7, conditioning: c };
    let mut run = PushRun::new(&g, Measure::LaAc, &p).unwrap();
    loop {
        let rep = verify_residual_invariant(&g, &run.snapshot(), &target).unwrap();
        assert!(rep.pass, "{rep:?}");
        if run.step().unwrap().is_none() {
            break;
        }
    }
}

#[test]
fn gate_rejects_divergent_attenuation() {
    for (g, m, alpha) in [(cycle(2), Measure::Ac, 1.0), (cycle(2), Measure::LaAc, 1.0), (complete(4), Measure::Ac, 0.6)] {
        assert!(matches!(exact_scores(&g, m, &CentralityParams::with_alpha(alpha)), Err(Error::Divergence { .. })));
        assert!(matches!(approximate(&g, m, &PushParams::new(alpha, 0.1)), Err(Error::Divergence { .. })));
    }
    assert!(exact_scores(&complete(4), Measure::Ac, &CentralityParams::with_alpha(0.3)).is_ok());
}
