//! Directed multigraphs, dicut evaluation and the Max-DICUT oracles.
//!
//! Vertices are dense ids in `[0, n)`. The edge list keeps the order it was
//! built in, which is the order the streaming estimators replay it.

mod generate;
mod io;
mod oracle;

pub use generate::{generate, GeneratedGraph, GeneratorKind, GeneratorParams};
pub use io::{parse_edge_list, read_edge_list, write_edge_list, ParsedGraph};
pub use oracle::{
    max_dicut_exact, max_dicut_exact_with_cap, max_dicut_localsearch, CutResult,
    DEFAULT_EXACT_CAP,
};

use crate::error::{Error, Result};

/// A directed multigraph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedMultigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedMultigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (index, &(tail, head)) in edges.iter().enumerate() {
            if tail >= n || head >= n {
                return Err(Error::VertexOutOfRange {
                    index,
                    tail,
                    head,
                    n,
                });
            }
            if tail == head {
                return Err(Error::SelfLoop {
                    index,
                    vertex: tail,
                });
            }
        }
        Ok(Self { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Per-vertex incidence lists: `(neighbor, edge index, outgoing?)`.
    pub fn incidence(&self) -> Vec<Vec<Incidence>> {
        let mut inc = vec![Vec::new(); self.n];
        for (idx, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(Incidence {
                neighbor: v,
                edge: idx,
                outgoing: true,
            });
            inc[v].push(Incidence {
                neighbor: u,
                edge: idx,
                outgoing: false,
            });
        }
        inc
    }

    /// Subgraph induced on `vertices`, relabeled densely in the given order.
    /// Edge order follows the source edge order.
    pub fn induced(&self, vertices: &[usize]) -> (DirectedMultigraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        (
            DirectedMultigraph {
                n: vertices.len(),
                edges,
            },
            vertices.to_vec(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: usize,
    pub edge: usize,
    pub outgoing: bool,
}

/// An ordered bipartition `L ⊔ R`, stored as the membership predicate of `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dicut {
    left: Vec<bool>,
}

impl Dicut {
    pub fn new(left: Vec<bool>) -> Self {
        Self { left }
    }

    pub fn from_left_set(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut left = vec![false; n];
        for v in members {
            left[v] = true;
        }
        Self { left }
    }

    pub fn is_left(&self, v: usize) -> bool {
        self.left.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn left_members(&self) -> impl Iterator<Item = usize> + '_ {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(v, &l)| l.then_some(v))
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.left
    }
}

/// Per-vertex probability of landing in `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalAssignment {
    rho: Vec<f64>,
}

impl FractionalAssignment {
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        for (vertex, &value) in rho.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::AssignmentRange { vertex, value });
            }
        }
        Ok(Self { rho })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn from_cut(cut: &Dicut) -> Self {
        Self {
            rho: cut
                .as_slice()
                .iter()
                .map(|&l| if l { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    pub fn get(&self, v: usize) -> f64 {
        self.rho[v]
    }

    pub fn values(&self) -> &[f64] {
        &self.rho
    }
}

/// Exact cut value as a count of cut edges over the total edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CutValue {
    pub cut: u64,
    pub total: u64,
}

impl CutValue {
    pub fn as_f64(self) -> f64 {
        self.cut as f64 / self.total as f64
    }
}

impl PartialOrd for CutValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CutValue {
    // cross-multiplied comparison of the two fractions
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.cut as u128 * other.total as u128).cmp(&(other.cut as u128 * self.total as u128))
    }
}

pub fn dicut_count(g: &DirectedMultigraph, cut: &Dicut) -> Result<CutValue> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let cut_edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| cut.is_left(u) && !cut.is_left(v))
        .count();
    Ok(CutValue {
        cut: cut_edges as u64,
        total: g.m() as u64,
    })
}

/// Fraction of edges directed from `L` to `R`.
pub fn dicut_value(g: &DirectedMultigraph, cut: &Dicut) -> Result<f64> {
    dicut_count(g, cut).map(CutValue::as_f64)
}

/// `Σ_{u→v} ρ(u)(1−ρ(v)) / m`.
pub fn expected_dicut(g: &DirectedMultigraph, rho: &FractionalAssignment) -> Result<f64> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    if rho.values().len() != g.n() {
        return Err(Error::AssignmentLength {
            expected: g.n(),
            got: rho.values().len(),
        });
    }
    let total: f64 = g
        .edges()
        .iter()
        .map(|&(u, v)| rho.get(u) * (1.0 - rho.get(v)))
        .sum();
    Ok(total / g.m() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> DirectedMultigraph {
        DirectedMultigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn rejects_self_loops_and_out_of_range() {
        assert!(matches!(
            DirectedMultigraph::new(2, vec![(1, 1)]),
            Err(Error::SelfLoop { .. })
        ));
        assert!(matches!(
            DirectedMultigraph::new(2, vec![(0, 2)]),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn dicut_examples() {
        let single = DirectedMultigraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(dicut_value(&single, &Dicut::from_left_set(2, [0])).unwrap(), 1.0);

        let both = DirectedMultigraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(dicut_value(&both, &Dicut::from_left_set(2, [0])).unwrap(), 0.5);

        let c = cycle3();
        let v = dicut_count(&c, &Dicut::from_left_set(3, [0])).unwrap();
        assert_eq!((v.cut, v.total), (1, 3));
    }

    #[test]
    fn empty_graph_is_an_error() {
        let g = DirectedMultigraph::empty(3);
        assert_eq!(
            dicut_value(&g, &Dicut::from_left_set(3, [])),
            Err(Error::EmptyGraph)
        );
        let rho = FractionalAssignment::constant(3, 0.5).unwrap();
        assert_eq!(expected_dicut(&g, &rho), Err(Error::EmptyGraph));
    }

    #[test]
    fn expected_dicut_examples() {
        let c = cycle3();
        let half = FractionalAssignment::constant(3, 0.5).unwrap();
        assert!((expected_dicut(&c, &half).unwrap() - 0.25).abs() < 1e-15);

        let rho = FractionalAssignment::new(vec![1.0, 0.0, 0.5]).unwrap();
        assert!((expected_dicut(&c, &rho).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn assignment_range_checked() {
        assert!(FractionalAssignment::new(vec![0.5, 1.5]).is_err());
        let c = cycle3();
        let short = FractionalAssignment::constant(2, 0.5).unwrap();
        assert!(matches!(
            expected_dicut(&c, &short),
            Err(Error::AssignmentLength { .. })
        ));
    }

    #[test]
    fn cut_value_ordering_is_exact() {
        let a = CutValue { cut: 1, total: 3 };
        let b = CutValue { cut: 2, total: 6 };
        let c = CutValue { cut: 1, total: 2 };
        assert_eq!(a.cmp(&b), std::cmp::Ordering::Equal);
        assert!(c > a);
    }
}
