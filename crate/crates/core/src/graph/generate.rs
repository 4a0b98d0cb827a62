use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CutValue, Dicut, DirectedMultigraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    /// Each edge picks an ordered pair of distinct vertices uniformly.
    UniformRandom,
    /// A random half `L` is chosen; `ceil(plant·m)` edges go `L→R`, the rest
    /// are uniform among the other directions.
    PlantedDicut { plant: f64 },
    /// Chung–Lu style sampling with weights `(i+1)^{-1/(exponent-1)}`.
    PowerLaw { exponent: f64 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeneratorParams {
    /// Reject edges that would push an endpoint above this degree.
    pub max_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedGraph {
    pub graph: DirectedMultigraph,
    /// For planted instances: the planted cut and its exact value.
    pub planted: Option<(Dicut, CutValue)>,
}

const MAX_ATTEMPTS_PER_EDGE: usize = 10_000;

pub fn generate(
    kind: GeneratorKind,
    n: usize,
    m: usize,
    params: &GeneratorParams,
    seed: u64,
) -> Result<GeneratedGraph> {
    if m > 0 && n < 2 {
        return Err(Error::InvalidGenerator(format!(
            "{m} edges need at least 2 vertices, got {n}"
        )));
    }
    if let Some(0) = params.max_degree {
        if m > 0 {
            return Err(Error::InvalidGenerator("max degree 0 with edges".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = Builder::new(n, m, params.max_degree);
    let planted = match kind {
        GeneratorKind::UniformRandom => {
            builder.fill(&mut rng, |rng| {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                (u, v)
            })?;
            None
        }
        GeneratorKind::PlantedDicut { plant } => {
            if !(0.0..=1.0).contains(&plant) {
                return Err(Error::InvalidGenerator(format!(
                    "plant fraction {plant} outside [0, 1]"
                )));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let half = (n / 2).max(1);
            let (left, right) = order.split_at(half);
            let cut = Dicut::from_left_set(n, left.iter().copied());
            let planted_edges = ((plant * m as f64) - 1e-9).ceil().max(0.0) as usize;
            builder.target = planted_edges.min(m);
            builder.fill(&mut rng, |rng| {
                (*left.choose(rng).unwrap(), *right.choose(rng).unwrap())
            })?;
            builder.target = m;
            builder.fill(&mut rng, |rng| loop {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if !(cut.is_left(u) && !cut.is_left(v)) {
                    return (u, v);
                }
            })?;
            builder.edges.shuffle(&mut rng);
            let value = CutValue {
                cut: planted_edges.min(m) as u64,
                total: m as u64,
            };
            Some((cut, value))
        }
        GeneratorKind::PowerLaw { exponent } => {
            if exponent <= 1.0 {
                return Err(Error::InvalidGenerator(format!(
                    "power-law exponent {exponent} must exceed 1"
                )));
            }
            let alpha = 1.0 / (exponent - 1.0);
            let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-alpha)).collect();
            let dist = WeightedIndex::new(&weights)
                .map_err(|e| Error::InvalidGenerator(e.to_string()))?;
            builder.fill(&mut rng, |rng| (dist.sample(rng), dist.sample(rng)))?;
            None
        }
    };
    let graph = DirectedMultigraph::new(n, builder.edges)?;
    Ok(GeneratedGraph { graph, planted })
}

struct Builder {
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
    max_degree: Option<usize>,
    target: usize,
}

impl Builder {
    fn new(n: usize, m: usize, max_degree: Option<usize>) -> Self {
        Self {
            edges: Vec::with_capacity(m),
            degree: vec![0; n],
            max_degree,
            target: m,
        }
    }

    fn fill<R: Rng>(
        &mut self,
        rng: &mut R,
        mut draw: impl FnMut(&mut R) -> (usize, usize),
    ) -> Result<()> {
        let mut attempts = 0usize;
        let budget = MAX_ATTEMPTS_PER_EDGE * self.target.max(1);
        while self.edges.len() < self.target {
            attempts += 1;
            if attempts > budget {
                return Err(Error::InvalidGenerator(format!(
                    "could not place {} edges under the degree bound",
                    self.target
                )));
            }
            let (u, v) = draw(rng);
            if u == v {
                continue;
            }
            if let Some(cap) = self.max_degree {
                if self.degree[u] >= cap || self.degree[v] >= cap {
                    continue;
                }
            }
            self.degree[u] += 1;
            self.degree[v] += 1;
            self.edges.push((u, v));
        }
        Ok(())
    }
}
