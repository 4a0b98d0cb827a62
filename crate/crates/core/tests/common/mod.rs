//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

/// Max-DICUT fraction by walking every subset of the non-isolated vertices
/// in Gray-code order, updating the cut one flip at a time.
pub fn brute_max_dicut(edges: &[(usize, usize)]) -> f64 {
    assert!(!edges.is_empty());
    let mut id = HashMap::new();
    for &(u, v) in edges {
        for x in [u, v] {
            let k = id.len();
            id.entry(x).or_insert(k);
        }
    }
    let k = id.len();
    assert!(k <= 26, "too many vertices for enumeration");
    let mut weight: HashMap<(usize, usize), i64> = HashMap::new();
    for &(u, v) in edges {
        if u != v {
            *weight.entry((id[&u], id[&v])).or_insert(0) += 1;
        }
    }
    let mut out = vec![Vec::new(); k];
    let mut inc = vec![Vec::new(); k];
    for (&(a, b), &w) in &weight {
        out[a].push((b, w));
        inc[b].push((a, w));
    }
    let mut left = vec![false; k];
    let mut cut = 0i64;
    let mut best = 0i64;
    for step in 1u64..(1u64 << k) {
        let a = step.trailing_zeros() as usize;
        let to_right: i64 = out[a].iter().filter(|&&(b, _)| !left[b]).map(|&(_, w)| w).sum();
        let from_left: i64 = inc[a].iter().filter(|&&(b, _)| left[b]).map(|&(_, w)| w).sum();
        if left[a] {
            cut += from_left - to_right;
        } else {
            cut += to_right - from_left;
        }
        left[a] = !left[a];
        best = best.max(cut);
    }
    best as f64 / edges.len() as f64
}

/// Maps `f` over `items` on all cores, keeping input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

/// Fraction of edges leaving `left` for its complement.
pub fn cut_fraction(edges: &[(usize, usize)], left: &[bool]) -> f64 {
    let hits = edges.iter().filter(|&&(u, v)| left[u] && !left[v]).count();
    hits as f64 / edges.len() as f64
}

/// Total-variation distance between two mass maps.
pub fn tv<K: std::hash::Hash + Eq + Clone>(a: &HashMap<K, f64>, b: &HashMap<K, f64>) -> f64 {
    let mut keys: Vec<&K> = a.keys().collect();
    keys.extend(b.keys().filter(|k| !a.contains_key(*k)));
    keys.iter()
        .map(|k| (a.get(*k).unwrap_or(&0.0) - b.get(*k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
        / 2.0
}
