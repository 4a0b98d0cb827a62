//! Uniform edge-sampling core-set for dense streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{max_dicut_exact_with_cap, max_dicut_localsearch, DirectedMultigraph, DEFAULT_EXACT_CAP};
use crate::stream::EdgeStream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreSet {
    pub edges: Vec<(usize, usize)>,
    /// Stream length.
    pub m: u64,
    /// Reservoir capacity.
    pub k: usize,
}

/// Reservoir of `k` uniform edges (algorithm R).
#[derive(Debug, Clone)]
pub struct Reservoir {
    core: CoreSet,
    rng: ChaCha8Rng,
}

impl Reservoir {
    pub fn new(k: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameters("core-set size must be positive".into()));
        }
        Ok(Self {
            core: CoreSet {
                edges: Vec::new(),
                m: 0,
                k,
            },
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn offer(&mut self, edge: (usize, usize)) {
        let c = &mut self.core;
        c.m += 1;
        if c.edges.len() < c.k {
            c.edges.push(edge);
        } else {
            let j = self.rng.gen_range(0..c.m);
            if (j as usize) < c.k {
                c.edges[j as usize] = edge;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.core.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.edges.is_empty()
    }

    pub fn finish(self) -> CoreSet {
        self.core
    }
}

pub fn coreset_pass1(stream: &mut EdgeStream<'_>, k: usize, seed: u64) -> Result<CoreSet> {
    let mut r = Reservoir::new(k, seed)?;
    for (_, e) in stream.pass() {
        r.offer(e);
    }
    Ok(r.finish())
}

/// Max-DICUT of the graph formed by the sampled edges, vertices relabeled
/// densely: exhaustive up to the default oracle cap, local search beyond.
pub fn coreset_estimate(cs: &CoreSet) -> Result<f64> {
    coreset_estimate_with(cs, DEFAULT_EXACT_CAP, 8, 0)
}

pub fn coreset_estimate_with(
    cs: &CoreSet,
    exact_cap: usize,
    restarts: usize,
    seed: u64,
) -> Result<f64> {
    if cs.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut ids = std::collections::HashMap::new();
    let edges: Vec<(usize, usize)> = cs
        .edges
        .iter()
        .map(|&(u, v)| {
            let next = ids.len();
            let a = *ids.entry(u).or_insert(next);
            let next = ids.len();
            let b = *ids.entry(v).or_insert(next);
            (a, b)
        })
        .collect();
    let g = DirectedMultigraph::new(ids.len(), edges)?;
    if g.n() <= exact_cap.min(62) {
        Ok(max_dicut_exact_with_cap(&g, exact_cap)?.value.as_f64())
    } else {
        Ok(max_dicut_localsearch(&g, restarts, seed)?.value.as_f64())
    }
}
