use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, Incidence};

/// A doubly rooted, labeled neighborhood around one edge.
///
/// Local vertex 0 is the tail root and local vertex 1 the head root.
/// `complete[v]` is true iff `v` sits strictly inside the radius, so all of
/// its neighbors in the source graph are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallGraph {
    pub(crate) labels: Vec<u64>,
    pub(crate) complete: Vec<bool>,
    pub(crate) edges: Vec<(usize, usize)>,
    pub(crate) ell: usize,
    pub(crate) degree_bound: usize,
    /// Source vertex per local vertex; not part of the type.
    pub(crate) origin: Vec<usize>,
}

impl BallGraph {
    /// Builds a ball from parts. Roots must be local vertices 0 and 1 and
    /// joined by at least one edge.
    pub fn from_parts(
        labels: Vec<u64>,
        complete: Vec<bool>,
        edges: Vec<(usize, usize)>,
        ell: usize,
        degree_bound: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n < 2 || complete.len() != n {
            return Err(Error::InvalidParameters(
                "ball needs two roots and one flag per vertex".into(),
            ));
        }
        for (index, &(t, h)) in edges.iter().enumerate() {
            if t >= n || h >= n {
                return Err(Error::VertexOutOfRange {
                    index,
                    tail: t,
                    head: h,
                    n,
                });
            }
            if t == h {
                return Err(Error::SelfLoop { index, vertex: t });
            }
        }
        if !edges.contains(&(0, 1)) {
            return Err(Error::InvalidParameters(
                "roots must be joined by a tail→head edge".into(),
            ));
        }
        Ok(Self {
            labels,
            complete,
            edges,
            ell,
            degree_bound,
            origin: (0..n).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn complete(&self) -> &[bool] {
        &self.complete
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn roots(&self) -> (usize, usize) {
        (0, 1)
    }

    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    /// Undirected BFS distance from the nearer root.
    pub fn root_distances(&self) -> Vec<usize> {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for &(t, h) in &self.edges {
            adj[t].push(h);
            adj[h].push(t);
        }
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::from([0, 1]);
        dist[0] = 0;
        dist[1] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Returns a copy with non-root vertices reordered: `perm[old] = new`.
    /// `perm` must fix 0 and 1.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.len());
        assert!(perm[0] == 0 && perm[1] == 1, "roots must stay fixed");
        let n = self.len();
        let mut labels = vec![0; n];
        let mut complete = vec![false; n];
        let mut origin = vec![0; n];
        for old in 0..n {
            labels[perm[old]] = self.labels[old];
            complete[perm[old]] = self.complete[old];
            origin[perm[old]] = self.origin[old];
        }
        let edges = self.edges.iter().map(|&(t, h)| (perm[t], perm[h])).collect();
        Self {
            labels,
            complete,
            edges,
            ell: self.ell,
            degree_bound: self.degree_bound,
            origin,
        }
    }
}

/// Extracts balls from one graph, reusing its incidence lists.
pub struct BallExtractor<'a> {
    graph: &'a DirectedMultigraph,
    labels: &'a [u64],
    incidence: Vec<Vec<Incidence>>,
    ell: usize,
    degree_bound: usize,
    // Scratch: local index per source vertex, reset after each extraction.
    local: Vec<usize>,
    dist: Vec<usize>,
}

impl<'a> BallExtractor<'a> {
    pub fn new(graph: &'a DirectedMultigraph, labels: &'a [u64], ell: usize, degree_bound: usize) -> Self {
        assert_eq!(labels.len(), graph.n(), "one label per vertex");
        Self {
            graph,
            labels,
            incidence: graph.incidence(),
            ell,
            degree_bound,
            local: vec![usize::MAX; graph.n()],
            dist: vec![usize::MAX; graph.n()],
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Vertices within `radius` of either endpoint of edge `e`, in BFS order
    /// starting with tail and head.
    pub fn within(&mut self, e: usize, radius: usize) -> Vec<(usize, usize)> {
        let (t, h) = self.graph.edges()[e];
        let mut order = vec![(t, 0), (h, 0)];
        self.dist[t] = 0;
        self.dist[h] = 0;
        let mut head = 0;
        while head < order.len() {
            let (v, dv) = order[head];
            head += 1;
            if dv == radius {
                continue;
            }
            for inc in &self.incidence[v] {
                let w = inc.neighbor;
                if self.dist[w] == usize::MAX {
                    self.dist[w] = dv + 1;
                    order.push((w, dv + 1));
                }
            }
        }
        for &(v, _) in &order {
            self.dist[v] = usize::MAX;
        }
        order
    }

    pub fn extract(&mut self, e: usize) -> Result<BallGraph> {
        if e >= self.graph.m() {
            return Err(Error::EdgeIndexOutOfRange {
                index: e,
                edges: self.graph.m(),
            });
        }
        let members = self.within(e, self.ell);
        for &(v, _) in &members {
            let degree = self.degree(v);
            if degree > self.degree_bound {
                return Err(Error::DegreeBoundExceeded {
                    vertex: v,
                    degree,
                    bound: self.degree_bound,
                });
            }
        }
        for (i, &(v, _)) in members.iter().enumerate() {
            self.local[v] = i;
        }
        let mut edges = Vec::new();
        for &(v, _) in &members {
            for inc in &self.incidence[v] {
                if inc.outgoing && self.local[inc.neighbor] != usize::MAX {
                    edges.push((self.local[v], self.local[inc.neighbor]));
                }
            }
        }
        for &(v, _) in &members {
            self.local[v] = usize::MAX;
        }
        Ok(BallGraph {
            labels: members.iter().map(|&(v, _)| self.labels[v]).collect(),
            complete: members.iter().map(|&(_, d)| d < self.ell).collect(),
            edges,
            ell: self.ell,
            degree_bound: self.degree_bound,
            origin: members.iter().map(|&(v, _)| v).collect(),
        })
    }
}

/// The radius-`ell` ball around edge `e` of `g`.
pub fn ball_extract(
    g: &DirectedMultigraph,
    labels: &[u64],
    ell: usize,
    degree_bound: usize,
    e: usize,
) -> Result<BallGraph> {
    BallExtractor::new(g, labels, ell, degree_bound).extract(e)
}
