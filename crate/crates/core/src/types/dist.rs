use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::ball::BallExtractor;
use super::canon::{canonicalize, TypeId};
use crate::error::{Error, Result};
use crate::graph::DirectedMultigraph;

/// Number of edges per type.
pub type TypeCounts = BTreeMap<TypeId, u64>;

#[derive(Debug, Clone, PartialEq)]
pub struct TypeDistribution {
    mass: BTreeMap<TypeId, f64>,
}

impl TypeDistribution {
    /// Validates non-negative masses summing to 1 within `1e-9`.
    pub fn new(mass: BTreeMap<TypeId, f64>) -> Result<Self> {
        if mass.values().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidParameters("negative or non-finite mass".into()));
        }
        let total: f64 = mass.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameters(format!("masses sum to {total}")));
        }
        Ok(Self { mass })
    }

    /// Normalized counts.
    pub fn from_counts(counts: &TypeCounts) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::EmptySample);
        }
        let mass = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| (t.clone(), c as f64 / total as f64))
            .collect();
        Ok(Self { mass })
    }

    pub fn point(t: TypeId) -> Self {
        Self {
            mass: BTreeMap::from([(t, 1.0)]),
        }
    }

    pub fn get(&self, t: &TypeId) -> f64 {
        self.mass.get(t).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TypeId, f64)> {
        self.mass.iter().map(|(t, &p)| (t, p))
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// `type-id-hex,size,mass` rows under a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("type-id-hex,size,mass\n");
        for (t, p) in self.iter() {
            writeln!(out, "{},{},{}", t.to_hex(), t.size(), p).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut mass = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (idx == 0 && line.starts_with("type-id-hex")) {
                continue;
            }
            let err = |message: &str| Error::Parse {
                line: idx + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split(',').collect();
            let [id, size, p] = fields[..] else {
                return Err(err("expected three fields"));
            };
            let t = TypeId::from_hex(id)?;
            if size.parse::<usize>().ok() != Some(t.size()) {
                return Err(err("size column disagrees with type id"));
            }
            let p: f64 = p.parse().map_err(|_| err("bad mass"))?;
            *mass.entry(t).or_insert(0.0) += p;
        }
        Self::new(mass)
    }
}

/// Exact per-type edge counts of `g`.
pub fn edge_type_counts(
    g: &DirectedMultigraph,
    labels: &[u64],
    ell: usize,
    degree_bound: usize,
) -> Result<TypeCounts> {
    let mut ex = BallExtractor::new(g, labels, ell, degree_bound);
    let mut counts = TypeCounts::new();
    for e in 0..g.m() {
        *counts.entry(canonicalize(&ex.extract(e)?)).or_insert(0) += 1;
    }
    Ok(counts)
}

pub fn edge_type_distribution(
    g: &DirectedMultigraph,
    labels: &[u64],
    ell: usize,
    degree_bound: usize,
) -> Result<TypeDistribution> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    TypeDistribution::from_counts(&edge_type_counts(g, labels, ell, degree_bound)?)
}

pub fn tv_distance(a: &TypeDistribution, b: &TypeDistribution) -> f64 {
    let mut sum = 0.0;
    for (t, p) in a.iter() {
        sum += (p - b.get(t)).abs();
    }
    for (t, q) in b.iter() {
        if !a.mass.contains_key(t) {
            sum += q;
        }
    }
    (sum / 2.0).min(1.0)
}

/// Reweights counts from a vertex sample kept with probability `p`:
/// `mass(T) ∝ a_T · p^{−|T|}`.
pub fn rescaled_distribution(counts: &TypeCounts, p: f64) -> Result<TypeDistribution> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    // Work in log space: p^{-|T|} overflows for large balls.
    let logs: Vec<(&TypeId, f64)> = counts
        .iter()
        .filter(|(_, &a)| a > 0)
        .map(|(t, &a)| (t, (a as f64).ln() - t.size() as f64 * p.ln()))
        .collect();
    let Some(top) = logs.iter().map(|&(_, l)| l).reduce(f64::max) else {
        return Err(Error::EmptySample);
    };
    let total: f64 = logs.iter().map(|&(_, l)| (l - top).exp()).sum();
    let mass = logs
        .into_iter()
        .map(|(t, l)| (t.clone(), (l - top).exp() / total))
        .collect();
    Ok(TypeDistribution { mass })
}

/// Counts the edges of a sampled subgraph whose whole ball is certified to
/// be present: every vertex within `ell − 1` of an endpoint must have its
/// full degree `full_degree[v]` inside `sub`.
pub fn count_complete_types(
    sub: &DirectedMultigraph,
    labels: &[u64],
    ell: usize,
    degree_bound: usize,
    full_degree: &[u64],
) -> Result<TypeCounts> {
    let mut ex = BallExtractor::new(sub, labels, ell, degree_bound);
    let mut counts = TypeCounts::new();
    for e in 0..sub.m() {
        let inner = ex.within(e, ell.saturating_sub(1));
        if inner
            .iter()
            .all(|&(v, _)| ex.degree(v) as u64 == full_degree[v])
        {
            *counts.entry(canonicalize(&ex.extract(e)?)).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Type counts `a_T` from the subgraph of `g` induced on `sampled`.
/// `full_degree` must hold the degree in `g` of every sampled vertex.
pub fn sampled_type_counts(
    g: &DirectedMultigraph,
    sampled: &[usize],
    labels: &[u64],
    ell: usize,
    degree_bound: usize,
    full_degree: &HashMap<usize, u64>,
) -> Result<TypeCounts> {
    let mut vertices = sampled.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let degrees = vertices
        .iter()
        .map(|&v| full_degree.get(&v).copied().ok_or(Error::MissingDegree(v)))
        .collect::<Result<Vec<u64>>>()?;
    let (sub, origin) = g.induced(&vertices);
    let sub_labels: Vec<u64> = origin.iter().map(|&v| labels[v]).collect();
    count_complete_types(&sub, &sub_labels, ell, degree_bound, &degrees)
}
