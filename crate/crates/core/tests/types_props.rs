mod common;

use std::collections::HashMap;

use dicut_core::graph::{generate, DirectedMultigraph, GeneratorKind, GeneratorParams};
use dicut_core::types::{
    canonicalize, edge_type_counts, edge_type_distribution, rescaled_distribution,
    sampled_type_counts, tv_distance, BallExtractor, BallGraph, TypeDistribution, TypeId,
};
use proptest::prelude::*;

/// Root-, label-, flag- and direction-preserving isomorphism by trying
/// every ordering of the non-root vertices.
fn isomorphic(a: &BallGraph, b: &BallGraph) -> bool {
    if a.len() != b.len() || a.edges().len() != b.edges().len() {
        return false;
    }
    let mut target: Vec<(usize, usize)> = b.edges().to_vec();
    target.sort_unstable();
    let mut rest: Vec<usize> = (2..a.len()).collect();
    permutations(&mut rest, 0, &mut |tail| {
        let perm: Vec<usize> = [0, 1].iter().chain(tail.iter()).copied().collect();
        let same_vertices = (0..a.len()).all(|v| {
            a.labels()[v] == b.labels()[perm[v]] && a.complete()[v] == b.complete()[perm[v]]
        });
        if !same_vertices {
            return false;
        }
        let mut mapped: Vec<(usize, usize)> =
            a.edges().iter().map(|&(t, h)| (perm[t], perm[h])).collect();
        mapped.sort_unstable();
        mapped == target
    })
}

fn permutations(xs: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == xs.len() {
        return f(xs);
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        if permutations(xs, k + 1, f) {
            xs.swap(k, i);
            return true;
        }
        xs.swap(k, i);
    }
    false
}

fn small_ball() -> impl Strategy<Value = BallGraph> {
    (2usize..7).prop_flat_map(|n| {
        (
            prop::collection::vec(0u64..2, n),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec((0..n, 1..n), 0..7),
        )
            .prop_map(move |(labels, complete, pairs)| {
                let mut edges = vec![(0, 1)];
                edges.extend(pairs.into_iter().map(|(u, k)| (u, (u + k) % n)));
                BallGraph::from_parts(labels, complete, edges, 2, 16).unwrap()
            })
    })
}

fn shuffle(b: &BallGraph, keys: &[u32]) -> BallGraph {
    let mut rest: Vec<usize> = (2..b.len()).collect();
    rest.sort_by_key(|&v| keys[v % keys.len()] ^ v as u32);
    let mut perm = vec![0, 1];
    perm.resize(b.len(), 0);
    for (new, &old) in rest.iter().enumerate() {
        perm[old] = new + 2;
    }
    b.permuted(&perm)
}

fn graph(n: usize, m: usize, seed: u64) -> DirectedMultigraph {
    let p = GeneratorParams { max_degree: Some(4) };
    generate(GeneratorKind::UniformRandom, n, m, &p, seed).unwrap().graph
}

fn full_degrees(g: &DirectedMultigraph) -> HashMap<usize, u64> {
    g.degrees().into_iter().enumerate().map(|(v, d)| (v, d as u64)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonical_form_decides_isomorphism(
        a in small_ball(),
        b in small_ball(),
        keys in prop::collection::vec(any::<u32>(), 8),
        relabel in any::<bool>(),
    ) {
        let b = if relabel { shuffle(&a, &keys) } else { b };
        prop_assert_eq!(canonicalize(&a) == canonicalize(&b), isomorphic(&a, &b));
    }

    #[test]
    fn type_id_round_trips(a in small_ball()) {
        let id = canonicalize(&a);
        prop_assert_eq!(id.size(), a.len());
        let back = id.to_ball().unwrap();
        prop_assert!(isomorphic(&a, &back));
        prop_assert_eq!(canonicalize(&back), id.clone());
        prop_assert_eq!(TypeId::from_hex(&id.to_hex()).unwrap(), id);
    }

    #[test]
    fn extracted_balls_are_permutation_invariant(
        seed in any::<u64>(),
        ell in 1usize..4,
        keys in prop::collection::vec(any::<u32>(), 8),
    ) {
        let g = graph(30, 40, seed);
        let labels: Vec<u64> = (0..30).map(|v| (v as u64 * 7 + seed) % 3).collect();
        let mut ex = BallExtractor::new(&g, &labels, ell, 4);
        let b = ex.extract(seed as usize % g.m()).unwrap();
        prop_assert_eq!(canonicalize(&shuffle(&b, &keys)), canonicalize(&b));
    }

    #[test]
    fn full_sample_reproduces_exact_distribution(seed in any::<u64>(), ell in 1usize..3) {
        let g = graph(25, 30, seed);
        let labels = vec![1u64; 25];
        let all: Vec<usize> = (0..25).collect();
        let counts = sampled_type_counts(&g, &all, &labels, ell, 4, &full_degrees(&g)).unwrap();
        prop_assert_eq!(&counts, &edge_type_counts(&g, &labels, ell, 4).unwrap());
        let exact = edge_type_distribution(&g, &labels, ell, 4).unwrap();
        prop_assert!(tv_distance(&rescaled_distribution(&counts, 1.0).unwrap(), &exact) < 1e-12);
    }

    #[test]
    fn distributions_are_normalized(seed in any::<u64>(), p in 0.05f64..=1.0) {
        let g = graph(60, 60, seed);
        let labels = vec![0u64; 60];
        let sampled: Vec<usize> = (0..60).filter(|v| !(v * 31 + seed as usize).is_multiple_of(3)).collect();
        let counts = sampled_type_counts(&g, &sampled, &labels, 1, 4, &full_degrees(&g)).unwrap();
        if let Ok(d) = rescaled_distribution(&counts, p) {
            let total: f64 = d.iter().map(|(_, m)| m).sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            prop_assert!(d.iter().all(|(_, m)| m >= 0.0));
            let exact = edge_type_distribution(&g, &labels, 1, 4).unwrap();
            let tv = tv_distance(&d, &exact);
            prop_assert!((0.0..=1.0).contains(&tv));
            prop_assert!((tv - tv_distance(&exact, &d)).abs() < 1e-12);
            prop_assert!((tv - common::tv(&masses(&d), &masses(&exact))).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_round_trip(seed in any::<u64>()) {
        let g = graph(20, 20, seed);
        let d = edge_type_distribution(&g, &[0; 20], 1, 4).unwrap();
        prop_assert_eq!(TypeDistribution::from_csv(&d.to_csv()).unwrap(), d);
    }
}

fn masses(d: &TypeDistribution) -> HashMap<String, f64> {
    d.iter().map(|(t, p)| (t.to_hex(), p)).collect()
}
