mod common;

use dicut_core::graph::{dicut_value, expected_dicut, DirectedMultigraph};
use dicut_core::reduce::{
    expand_cut, lift_cut, make_approx_degrees, multiplicity, trevisan_reduce, ApproxDegrees,
    DegreeMode,
};
use dicut_core::graph::Dicut;
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = DirectedMultigraph> {
    (2usize..8).prop_flat_map(|n| {
        prop::collection::vec((0..n, 1..n), 1..10).prop_map(move |pairs| {
            let edges = pairs.into_iter().map(|(u, k)| (u, (u + k) % n)).collect();
            DirectedMultigraph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_graph_invariants(g in graph(), seed in any::<u64>(), eps in prop::sample::select(vec![0.5, 1.0])) {
        let ad = make_approx_degrees(&g, 0.5, eps, DegreeMode::Exact, seed).unwrap();
        let r = trevisan_reduce(&g, &ad, eps, seed).unwrap();
        let d = multiplicity(eps);
        prop_assert_eq!(r.graph.n(), 2 * g.m());
        prop_assert!(r.graph.degrees().iter().all(|&x| x as u64 <= 11 * d));
        prop_assert!(r.graph.m() as u64 <= d * g.m() as u64);
        // Exact degrees accept every draw.
        prop_assert_eq!(r.sampled_edges as u64, d * g.m() as u64);
        for (id, c) in r.copies.iter().enumerate() {
            prop_assert!(c.index < g.degrees()[c.parent]);
            prop_assert_eq!(r.copy_id(*c), id);
        }
    }

    #[test]
    fn cuts_transfer_between_graphs(g in graph(), seed in any::<u64>(), bits in prop::collection::vec(any::<bool>(), 8)) {
        let ad = make_approx_degrees(&g, 0.5, 1.0, DegreeMode::Exact, seed).unwrap();
        let r = trevisan_reduce(&g, &ad, 1.0, seed).unwrap();
        let cut = Dicut::new(bits[..g.n()].to_vec());
        let expanded = expand_cut(&r, &cut);
        let lifted = lift_cut(&g, &r, &expanded).unwrap();
        // Lifting an expanded integral cut recovers it on every non-isolated vertex.
        let back = expected_dicut(&g, &lifted).unwrap();
        prop_assert!((back - dicut_value(&g, &cut).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn approximate_degrees_stay_in_band(
        degs in prop::collection::vec(0usize..3000, 2..6),
        seed in any::<u64>(),
    ) {
        let mut edges = Vec::new();
        for (v, &k) in degs.iter().enumerate() {
            let w = (v + 1) % degs.len();
            edges.extend(std::iter::repeat_n((v, w), k));
        }
        prop_assume!(!edges.is_empty());
        let g = DirectedMultigraph::new(degs.len(), edges).unwrap();
        let ad = make_approx_degrees(&g, 0.5, 1.0, DegreeMode::Perturbed, seed).unwrap();
        prop_assert!(ad.validate(&g).is_ok());
        let thr = (g.n() as f64).sqrt();
        for (v, &deg) in g.degrees().iter().enumerate() {
            let a = ad.get(v) as f64;
            if (deg as f64) < thr {
                prop_assert_eq!(a, deg as f64);
            } else {
                prop_assert!(a >= 0.99 * deg as f64 - 1e-9 && a <= 1.01 * deg as f64 + 1e-9);
            }
        }
    }
}

/// Inflated estimates reject a round with probability
/// `1 − (deg(u)/ad[u])·(deg(v)/ad[v])`.
#[test]
fn rejection_rate_matches_inflation() {
    let g = DirectedMultigraph::new(2, vec![(0, 1); 200]).unwrap();
    let ad = ApproxDegrees::from_values(vec![202, 201], 0.5, 1.0);
    ad.validate(&g).unwrap();
    let mut accepted = 0u64;
    let mut rounds = 0u64;
    for seed in 0..4 {
        let r = trevisan_reduce(&g, &ad, 1.0, seed).unwrap();
        accepted += r.sampled_edges as u64;
        rounds += multiplicity(1.0) * g.m() as u64;
    }
    let p = (200.0 / 202.0) * (200.0 / 201.0);
    let sigma = (p * (1.0 - p) / rounds as f64).sqrt();
    let rate = accepted as f64 / rounds as f64;
    assert!(rounds >= 10_000);
    assert!((rate - p).abs() <= 3.0 * sigma, "rate {rate}, expected {p} ± {}", 3.0 * sigma);
}
