//! Degree reduction: replace every vertex `v` by `deg(v)` copies and every
//! edge by `d` randomly wired copy edges, then drop all edges touching copies
//! whose degree exceeds `11d`.
//!
//! Copy indices are drawn from `[approx-deg(v)]` rather than `[deg(v)]`, and a
//! draw landing at or above `deg(v)` is rejected. With exact degrees every
//! draw is accepted.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Dicut, DirectedMultigraph, FractionalAssignment};
use crate::tape::{Purpose, Side, Tape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    Exact,
    Perturbed,
}

/// A degree oracle: exact below `n^ζ`, within a `1 ± ε′/100` factor above.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxDegrees {
    values: Vec<u64>,
    zeta: f64,
    epsilon_prime: f64,
}

impl ApproxDegrees {
    pub fn from_values(values: Vec<u64>, zeta: f64, epsilon_prime: f64) -> Self {
        Self {
            values,
            zeta,
            epsilon_prime,
        }
    }

    pub fn get(&self, v: usize) -> u64 {
        self.values[v]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn epsilon_prime(&self) -> f64 {
        self.epsilon_prime
    }

    /// Checks the oracle invariants against the true degrees of `g`.
    pub fn validate(&self, g: &DirectedMultigraph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDegreeOracle(msg));
        if self.values.len() != g.n() {
            return bad(format!(
                "{} entries for {} vertices",
                self.values.len(),
                g.n()
            ));
        }
        let threshold = (g.n() as f64).powf(self.zeta);
        let slack = self.epsilon_prime / 100.0;
        for (v, (&ad, deg)) in self.values.iter().zip(g.degrees()).enumerate() {
            let deg_f = deg as f64;
            if deg_f < threshold {
                if ad != deg as u64 {
                    return bad(format!("vertex {v}: low degree {deg} but oracle says {ad}"));
                }
            } else {
                let lo = (1.0 - slack) * deg_f;
                let hi = (1.0 + slack) * deg_f;
                if (ad as f64) < lo - 1e-9 || (ad as f64) > hi + 1e-9 {
                    return bad(format!(
                        "vertex {v}: {ad} outside [{lo}, {hi}] for degree {deg}"
                    ));
                }
            }
            if deg > 0 && ad == 0 {
                return bad(format!("vertex {v}: zero estimate for degree {deg}"));
            }
        }
        Ok(())
    }
}

pub fn make_approx_degrees(
    g: &DirectedMultigraph,
    zeta: f64,
    epsilon_prime: f64,
    mode: DegreeMode,
    seed: u64,
) -> Result<ApproxDegrees> {
    check_epsilon_prime(epsilon_prime)?;
    if zeta.is_nan() || zeta <= 0.0 {
        return Err(Error::InvalidParameters(format!("zeta {zeta} must be positive")));
    }
    let threshold = (g.n() as f64).powf(zeta);
    let slack = epsilon_prime / 100.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = g
        .degrees()
        .into_iter()
        .map(|deg| {
            let deg_f = deg as f64;
            if mode == DegreeMode::Exact || deg_f < threshold {
                return deg as u64;
            }
            let factor = rng.gen_range((1.0 - slack)..=(1.0 + slack));
            // Rounding can step just outside the band; clamp to the integers inside it.
            let lo = ((1.0 - slack) * deg_f - 1e-9).ceil();
            let hi = ((1.0 + slack) * deg_f + 1e-9).floor();
            (deg_f * factor).round().clamp(lo, hi) as u64
        })
        .collect();
    Ok(ApproxDegrees {
        values,
        zeta,
        epsilon_prime,
    })
}

fn check_epsilon_prime(epsilon_prime: f64) -> Result<()> {
    if epsilon_prime > 0.0 && epsilon_prime <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "epsilon' {epsilon_prime} outside (0, 1]"
        )))
    }
}

/// Sampling multiplicity `d = ceil(80/ε′²)`.
pub fn multiplicity(epsilon_prime: f64) -> u64 {
    (80.0 / (epsilon_prime * epsilon_prime) - 1e-9).ceil() as u64
}

/// The `i`-th copy of a source vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CopyVertex {
    pub parent: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedGraph {
    /// Graph over dense copy ids.
    pub graph: DirectedMultigraph,
    /// `copies[id]` is the copy vertex with dense id `id`.
    pub copies: Vec<CopyVertex>,
    /// `offsets[v]` is the dense id of `(v, 0)`.
    pub offsets: Vec<usize>,
    pub d: u64,
    pub degree_cap: u64,
    /// Edges accepted before capping.
    pub sampled_edges: usize,
    /// Edges removed by the degree cap.
    pub deleted_edges: usize,
}

impl ReducedGraph {
    pub fn copy_id(&self, copy: CopyVertex) -> usize {
        self.offsets[copy.parent] + copy.index
    }

    /// Edge list with a leading `# copy-map` line listing `parent:index` per id.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::from("# copy-map");
        for c in &self.copies {
            let _ = write!(out, " {}:{}", c.parent, c.index);
        }
        out.push('\n');
        let mut body = Vec::new();
        crate::graph::write_edge_list(&self.graph, &[], &mut body).expect("write to Vec");
        out.push_str(std::str::from_utf8(&body).expect("utf8"));
        out
    }

    /// Inverse of [`ReducedGraph::to_edge_list`], returning the graph and copy map.
    pub fn parse_edge_list(text: &str) -> Result<(DirectedMultigraph, Vec<CopyVertex>)> {
        let map_line = text
            .lines()
            .find_map(|l| l.trim().strip_prefix("# copy-map"))
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "missing copy-map line".into(),
            })?;
        let copies = map_line
            .split_whitespace()
            .map(|tok| {
                let (p, i) = tok.split_once(':')?;
                Some(CopyVertex {
                    parent: p.parse().ok()?,
                    index: i.parse().ok()?,
                })
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "malformed copy-map entry".into(),
            })?;
        let parsed = crate::graph::parse_edge_list(text)?;
        if parsed.graph.n() != copies.len() {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "copy-map lists {} copies for {} vertices",
                    copies.len(),
                    parsed.graph.n()
                ),
            });
        }
        Ok((parsed.graph, copies))
    }
}

pub fn trevisan_reduce(
    g: &DirectedMultigraph,
    ad: &ApproxDegrees,
    epsilon_prime: f64,
    seed: u64,
) -> Result<ReducedGraph> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    check_epsilon_prime(epsilon_prime)?;
    ad.validate(g)?;
    let deg = g.degrees();
    let d = multiplicity(epsilon_prime);
    let degree_cap = 11 * d;

    let mut offsets = Vec::with_capacity(g.n());
    let mut copies = Vec::with_capacity(2 * g.m());
    for (v, &dv) in deg.iter().enumerate() {
        offsets.push(copies.len());
        copies.extend((0..dv).map(|index| CopyVertex { parent: v, index }));
    }

    let tape = Tape::new(seed);
    let mut sampled = Vec::new();
    for (pos, &(u, v)) in g.edges().iter().enumerate() {
        let pos = pos as u64;
        for round in 0..d {
            let i1 = tape.uniform(Purpose::EdgeCopy, pos, round, Side::Tail, ad.get(u));
            let i2 = tape.uniform(Purpose::EdgeCopy, pos, round, Side::Head, ad.get(v));
            if (i1 as usize) < deg[u] && (i2 as usize) < deg[v] {
                sampled.push((offsets[u] + i1 as usize, offsets[v] + i2 as usize));
            }
        }
    }

    let mut copy_degree = vec![0u64; copies.len()];
    for &(a, b) in &sampled {
        copy_degree[a] += 1;
        copy_degree[b] += 1;
    }
    let over: Vec<bool> = copy_degree.iter().map(|&x| x > degree_cap).collect();
    let sampled_edges = sampled.len();
    let kept: Vec<_> = sampled
        .into_iter()
        .filter(|&(a, b)| !over[a] && !over[b])
        .collect();
    let deleted_edges = sampled_edges - kept.len();
    Ok(ReducedGraph {
        graph: DirectedMultigraph::new(copies.len(), kept)?,
        copies,
        offsets,
        d,
        degree_cap,
        sampled_edges,
        deleted_edges,
    })
}

/// `ρ(v)` is the fraction of copies of `v` on the left; isolated vertices get 1/2.
pub fn lift_cut(
    g: &DirectedMultigraph,
    reduced: &ReducedGraph,
    cut: &Dicut,
) -> Result<FractionalAssignment> {
    let rho = g
        .degrees()
        .into_iter()
        .enumerate()
        .map(|(v, dv)| {
            if dv == 0 {
                return 0.5;
            }
            let left = (0..dv)
                .filter(|&i| cut.is_left(reduced.offsets[v] + i))
                .count();
            left as f64 / dv as f64
        })
        .collect();
    FractionalAssignment::new(rho)
}

/// Puts every copy of `v` on the side of `v` in `cut`.
pub fn expand_cut(reduced: &ReducedGraph, cut: &Dicut) -> Dicut {
    Dicut::new(reduced.copies.iter().map(|c| cut.is_left(c.parent)).collect())
}
