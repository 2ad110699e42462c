use std::collections::BTreeMap;

use lacent::centrality::{dense_solve, exact_scores, CentralityParams};
use lacent::eval::{empirical_influence, parse_broadcast_log, spearman_paired, write_broadcast_log, BroadcastLog, BroadcastRecord, InfluenceFilter};
use lacent::graph::generate::erdos_renyi;
use lacent::graph::{condition_degrees, parse_edge_list, EdgeListOptions};
use lacent::push::{approximate, PopOrder, PushParams};
use lacent::{DegreeConditioning, DirectedGraph, Measure, StartingVector};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = DirectedGraph> {
    (3usize..40, 0.05f64..0.4, any::<u64>())
        .prop_map(|(n, p, seed)| erdos_renyi(n, p, seed))
        .prop_filter("needs edges", |g| g.edge_count() > 0)
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Attenuation that keeps `alpha * max in-degree` at `f`.
fn ac_alpha(g: &DirectedGraph, f: f64) -> f64 {
    f / g.max_degrees().unwrap().1 as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in graph()) {
        let text = g.canonical_edge_list();
        let back = parse_edge_list(&text, &EdgeListOptions::default()).unwrap();
        prop_assert_eq!(back.labeled_edges(), g.labeled_edges());
    }

    #[test]
    fn transpose_swaps_degrees(g in graph()) {
        let t = g.transpose();
        prop_assert_eq!(t.out_degrees(), g.in_degrees());
        prop_assert_eq!(t.in_degrees(), g.out_degrees());
        prop_assert_eq!(t.transpose(), g);
    }

    #[test]
    fn iterative_matches_dense(g in graph(), a in 0.05f64..0.9) {
        let cond = DegreeConditioning::default();
        for m in [Measure::Pr, Measure::LaPr, Measure::LaAc, Measure::Ac] {
            let alpha = if m == Measure::Ac { ac_alpha(&g, a) } else { a };
            let p = CentralityParams::with_alpha(alpha).tol(1e-13).max_iter(100_000);
            let it = exact_scores(&g, m, &p).unwrap();
            let degs = condition_degrees(&g, &cond).unwrap();
            let s = StartingVector::MeasureDefault.resolve(m, &g, Some(&degs)).unwrap();
            let dense = dense_solve(&g, m, alpha, &cond, &s).unwrap();
            let scale = dense.iter().fold(1.0f64, |x, y| x.max(y.abs()));
            prop_assert!(linf(&it.scores, &dense) <= 1e-9 * scale, "{m}");
        }
    }

    #[test]
    fn la_alpha_centrality_is_the_attenuated_series(g in graph(), a in 0.05f64..0.8) {
        // sum_k a^k M^k s with M = A D_in^-1, evaluated term by term
        let cond = DegreeConditioning::default();
        let d = condition_degrees(&g, &cond).unwrap();
        let s: Vec<f64> = StartingVector::MeasureDefault.resolve(Measure::LaAc, &g, Some(&d)).unwrap();
        let mut term = s.clone();
        let mut total = s.clone();
        for _ in 0..400 {
            let mut next = vec![0.0; g.node_count()];
            for u in g.nodes() {
                next[u as usize] = a * g.out_neighbors(u).iter().map(|&v| term[v as usize] / d.inn[v as usize]).sum::<f64>();
            }
            for (t, x) in total.iter_mut().zip(&next) {
                *t += x;
            }
            term = next;
        }
        let exact = exact_scores(&g, Measure::LaAc, &CentralityParams::with_alpha(a).tol(1e-13)).unwrap();
        let scale = total.iter().fold(1.0f64, |x, y| x.max(y.abs()));
        prop_assert!(linf(&exact.scores, &total) <= 1e-9 * scale);
    }

    #[test]
    fn linear_in_the_starting_vector(g in graph(), a in 0.05f64..0.9, c1 in 0.1f64..5.0, c2 in 0.1f64..5.0, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = g.node_count();
        let s1: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let s2: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let mix: Vec<f64> = s1.iter().zip(&s2).map(|(x, y)| c1 * x + c2 * y).collect();
        for m in [Measure::LaPr, Measure::LaAc] {
            let solve = |s: &[f64]| {
                let p = CentralityParams::with_alpha(a).tol(1e-13).starting(StartingVector::Custom(s.to_vec()));
                exact_scores(&g, m, &p).unwrap().scores
            };
            let (x1, x2, xm) = (solve(&s1), solve(&s2), solve(&mix));
            let combo: Vec<f64> = x1.iter().zip(&x2).map(|(x, y)| c1 * x + c2 * y).collect();
            let scale = combo.iter().fold(1.0f64, |x, y| x.max(y.abs()));
            prop_assert!(linf(&combo, &xm) <= 1e-9 * scale, "{m}");
        }
    }

    #[test]
    fn broadcast_scores_grow_with_alpha(g in graph(), a in 0.05f64..0.4, b in 0.0f64..0.4) {
        let hi = a + b;
        for m in [Measure::LaAc, Measure::Ac] {
            let (lo_a, hi_a) = if m == Measure::Ac { (ac_alpha(&g, a), ac_alpha(&g, hi)) } else { (a, hi) };
            let lo = exact_scores(&g, m, &CentralityParams::with_alpha(lo_a)).unwrap();
            let up = exact_scores(&g, m, &CentralityParams::with_alpha(hi_a)).unwrap();
            for (x, y) in lo.scores.iter().zip(&up.scores) {
                prop_assert!(*y >= *x - 1e-9 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn push_guarantee_holds_per_node(
        g in graph(),
        a in 0.05f64..0.9,
        delta in 0.01f64..1.0,
        random_order in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let cond = DegreeConditioning::default();
        let n = g.node_count();
        let s = vec![1.0 / n as f64; n];
        let order = if random_order { PopOrder::Random(seed) } else { PopOrder::Fifo };
        for m in [Measure::LaPr, Measure::LaAc, Measure::Ac] {
            let alpha = if m == Measure::Ac { ac_alpha(&g, a) } else { a };
            let exact = dense_solve(&g, m, alpha, &cond, &s).unwrap();
            let p = PushParams::new(alpha, delta)
                .starting(StartingVector::Uniform)
                .order(order)
                .checked(true);
            let (sv, stats) = approximate(&g, m, &p).unwrap();
            prop_assert!(stats.within_bound(), "{m}: {stats:?}");
            for (&x, &e) in sv.scores.iter().zip(&exact) {
                let slack = 1e-9 * e;
                prop_assert!(x <= e + slack && x >= (1.0 - delta) * e - slack, "{m}: {x} vs {e}");
            }
        }
    }

    #[test]
    fn push_never_overshoots_with_degree_starts(g in graph(), a in 0.05f64..0.9, delta in 0.01f64..1.0) {
        let cond = DegreeConditioning::default();
        let d = condition_degrees(&g, &cond).unwrap();
        for m in [Measure::LaAc, Measure::Ac] {
            let alpha = if m == Measure::Ac { ac_alpha(&g, a) } else { a };
            let s = StartingVector::MeasureDefault.resolve(m, &g, Some(&d)).unwrap();
            let exact = dense_solve(&g, m, alpha, &cond, &s).unwrap();
            let (sv, _) = approximate(&g, m, &PushParams::new(alpha, delta)).unwrap();
            for (&x, &e) in sv.scores.iter().zip(&exact) {
                prop_assert!(x <= e + 1e-9 * e.max(1.0));
            }
        }
    }

    #[test]
    fn spearman_symmetric_and_monotone_invariant(
        xs in prop::collection::vec(-1e3f64..1e3, 3..40),
        seed in any::<u64>(),
        shift in -10.0f64..10.0,
        scale in 0.01f64..100.0,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ys: Vec<f64> = xs.iter().map(|_| rng.random_range(-5.0..5.0f64).round()).collect();
        let r = spearman_paired(&xs, &ys).unwrap();
        let r_sym = spearman_paired(&ys, &xs).unwrap();
        prop_assert_eq!(r.is_defined(), r_sym.is_defined());
        if r.is_defined() {
            prop_assert!((r.value() - r_sym.value()).abs() < 1e-12);
            // strictly increasing maps keep every rank
            let fx: Vec<f64> = xs.iter().map(|x| (x / 1e3).exp() * scale + shift).collect();
            let fy: Vec<f64> = ys.iter().map(|y| y * y * y + shift).collect();
            prop_assert!((spearman_paired(&fx, &fy).unwrap().value() - r.value()).abs() < 1e-12);
            prop_assert!((-1.0..=1.0).contains(&r.value()));
        }
        let distinct: std::collections::BTreeSet<u64> = xs.iter().map(|x| x.to_bits()).collect();
        if distinct.len() > 1 {
            prop_assert_eq!(spearman_paired(&xs, &xs).unwrap().value(), 1.0);
        }
    }

    #[test]
    fn influence_ignores_order_after_the_submitter(
        g in graph(),
        users in prop::collection::vec(0usize..40, 2..30),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let n = g.node_count();
        let users: Vec<String> = users.iter().map(|u| g.label((u % n) as u32).to_string()).collect();
        let rec = |item: &str, u: &str, seq| BroadcastRecord { item_id: item.into(), user_id: u.into(), seq };
        let mut a = vec![];
        let mut b = vec![];
        for (item, chunk) in users.chunks(5).enumerate() {
            let item = format!("i{item}");
            a.push(rec(&item, &chunk[0], 0));
            b.push(rec(&item, &chunk[0], 0));
            let mut rest: Vec<&String> = chunk[1..].iter().collect();
            for (k, u) in rest.iter().enumerate() {
                a.push(rec(&item, u, k as u64 + 1));
            }
            rest.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            for (k, u) in rest.iter().enumerate() {
                b.push(rec(&item, u, k as u64 + 1));
            }
        }
        let f = InfluenceFilter::new(1, 0);
        let ia = empirical_influence(&BroadcastLog::from_records(a), &g, &f).unwrap();
        let ib = empirical_influence(&BroadcastLog::from_records(b), &g, &f).unwrap();
        prop_assert_eq!(ia, ib);
    }

    #[test]
    fn broadcast_log_round_trip(
        recs in prop::collection::vec(("[a-z]{1,4}", "[a-zA-Z0-9_,\" ]{1,6}", 0u64..1000), 1..40)
    ) {
        let recs: Vec<BroadcastRecord> = recs
            .into_iter()
            .filter(|(_, u, _)| !u.trim().is_empty() && u.trim() == u && !u.starts_with('#'))
            .map(|(i, u, s)| BroadcastRecord { item_id: i, user_id: u, seq: s })
            .collect();
        let log = BroadcastLog::from_records(recs);
        let mut buf = Vec::new();
        write_broadcast_log(&log, &mut buf).unwrap();
        let back = parse_broadcast_log(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, log);
    }
}

#[test]
fn influence_map_feeds_spearman() {
    let x: BTreeMap<String, f64> = (0..5).map(|i| (format!("u{i}"), i as f64)).collect();
    let y = x.clone();
    assert_eq!(lacent::eval::spearman(&x, &y).unwrap().value(), 1.0);
}
