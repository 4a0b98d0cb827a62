//! Canonical forms for doubly rooted balls.
//!
//! The canonical form is the lexicographically least serialization over all
//! vertex orders that keep the tail root first and the head root second.
//! The search individualizes one vertex at a time and refines the partition
//! by neighbor colors (direction and multiplicity included). Branches are
//! skipped when they are images of an explored branch under a known
//! automorphism: transpositions of structural twins, and automorphisms found
//! when two leaves serialize identically.

use std::fmt;

use super::ball::BallGraph;
use crate::error::{Error, Result};

/// Identifier of an isomorphism class of balls.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId {
    bytes: Vec<u8>,
    size: usize,
}

impl TypeId {
    /// Number of vertices in the class representative.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        let words = decode_words(&bytes)?;
        let size = *words
            .get(1)
            .ok_or_else(|| Error::MalformedTypeId("truncated header".into()))?
            as usize;
        let id = Self { bytes, size };
        id.to_ball()?;
        Ok(id)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::MalformedTypeId(e.to_string()))?;
        Self::from_bytes(bytes)
    }

    /// The class representative in canonical vertex order.
    pub fn to_ball(&self) -> Result<BallGraph> {
        let bad = |m: &str| Error::MalformedTypeId(m.to_string());
        let words = decode_words(&self.bytes)?;
        let mut it = words.into_iter();
        let mut next = || it.next().ok_or_else(|| bad("truncated"));
        let ell = next()? as usize;
        let n = next()? as usize;
        let mut labels = Vec::with_capacity(n);
        let mut complete = Vec::with_capacity(n);
        for _ in 0..n {
            labels.push(next()?);
            complete.push(next()? == 1);
        }
        let m = next()? as usize;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            edges.push((next()? as usize, next()? as usize));
        }
        let mut deg = vec![0usize; n];
        for &(t, h) in &edges {
            if t < n && h < n {
                deg[t] += 1;
                deg[h] += 1;
            }
        }
        let bound = deg.into_iter().max().unwrap_or(0);
        BallGraph::from_parts(labels, complete, edges, ell, bound)
    }
}

impl fmt::Debug for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TypeId(|T|={}, {})", self.size, self.to_hex())
    }
}

fn encode_words(words: &[u64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(words.len() * 2);
    for &w in words {
        let mut w = w;
        loop {
            let byte = (w & 0x7f) as u8;
            w >>= 7;
            if w == 0 {
                out.push(byte);
                break;
            }
            out.push(byte | 0x80);
        }
    }
    out
}

fn decode_words(bytes: &[u8]) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut acc = 0u64;
    let mut shift = 0u32;
    for &b in bytes {
        if shift >= 64 {
            return Err(Error::MalformedTypeId("varint overflow".into()));
        }
        acc |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            out.push(acc);
            acc = 0;
            shift = 0;
        } else {
            shift += 7;
        }
    }
    if shift != 0 {
        return Err(Error::MalformedTypeId("dangling varint".into()));
    }
    Ok(out)
}

pub fn canonicalize(b: &BallGraph) -> TypeId {
    canonical_labeling(b).0
}

/// The type of `b` together with the vertex order realizing it:
/// `order[k]` is the vertex of `b` at canonical position `k`.
pub fn canonical_labeling(b: &BallGraph) -> (TypeId, Vec<usize>) {
    let (words, order) = Canonicalizer::new(b).run();
    let id = TypeId {
        bytes: encode_words(&words),
        size: b.len(),
    };
    (id, order)
}

/// A vertex colour with its sorted `(neighbour colour, out, in)` multiset.
type Signature = (u32, Vec<(u32, u32, u32)>);

struct Canonicalizer<'a> {
    ball: &'a BallGraph,
    /// Sorted `(neighbor, out-multiplicity, in-multiplicity)` per vertex.
    adj: Vec<Vec<(usize, u32, u32)>>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl<'a> Canonicalizer<'a> {
    fn new(ball: &'a BallGraph) -> Self {
        let n = ball.len();
        let mut maps: Vec<std::collections::BTreeMap<usize, (u32, u32)>> = vec![Default::default(); n];
        for &(t, h) in &ball.edges {
            maps[t].entry(h).or_default().0 += 1;
            maps[h].entry(t).or_default().1 += 1;
        }
        let adj = maps
            .into_iter()
            .map(|m| m.into_iter().map(|(w, (o, i))| (w, o, i)).collect())
            .collect();
        Self {
            ball,
            adj,
            best: None,
            automorphisms: Vec::new(),
        }
    }

    fn run(mut self) -> (Vec<u64>, Vec<usize>) {
        let n = self.ball.len();
        let dist = self.ball.root_distances();
        let mut in_deg = vec![0u64; n];
        let mut out_deg = vec![0u64; n];
        for &(t, h) in &self.ball.edges {
            out_deg[t] += 1;
            in_deg[h] += 1;
        }
        let keys: Vec<[u64; 6]> = (0..n)
            .map(|v| {
                [
                    v.min(2) as u64,
                    self.ball.labels[v],
                    self.ball.complete[v] as u64,
                    dist[v] as u64,
                    in_deg[v],
                    out_deg[v],
                ]
            })
            .collect();
        let colors = rank(&keys);
        let mut path = Vec::new();
        self.search(colors, &mut path);
        self.best.expect("search reaches a leaf")
    }

    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<Signature> = (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<_> = self.adj[v]
                        .iter()
                        .map(|&(w, o, i)| (colors[w], o, i))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            let next_classes = count_classes(&next);
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn search(&mut self, colors: Vec<u32>, path: &mut Vec<usize>) {
        let colors = self.refine(colors);
        let n = colors.len();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
            self.leaf(&colors);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&t| self.twins(t, v)) || self.same_orbit(path, &tried, v) {
                continue;
            }
            tried.push(v);
            let next = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + (u != v) as u32)
                .collect();
            path.push(v);
            self.search(next, path);
            path.pop();
        }
    }

    fn leaf(&mut self, colors: &[u32]) {
        let n = colors.len();
        let mut at = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            at[c as usize] = v;
        }
        let mut words = Vec::with_capacity(3 + 2 * n + 2 * self.ball.edges.len());
        words.push(self.ball.ell as u64);
        words.push(n as u64);
        for &v in &at {
            words.push(self.ball.labels[v]);
            words.push(self.ball.complete[v] as u64);
        }
        let mut edges: Vec<(u64, u64)> = self
            .ball
            .edges
            .iter()
            .map(|&(t, h)| (colors[t] as u64, colors[h] as u64))
            .collect();
        edges.sort_unstable();
        words.push(edges.len() as u64);
        for (t, h) in edges {
            words.push(t);
            words.push(h);
        }
        match &self.best {
            Some((best, best_at)) if *best == words => {
                let gamma: Vec<usize> = (0..n).map(|v| best_at[colors[v] as usize]).collect();
                if gamma.iter().enumerate().any(|(v, &g)| v != g) {
                    self.automorphisms.push(gamma);
                }
            }
            Some((best, _)) if *best < words => {}
            _ => self.best = Some((words, at)),
        }
    }

    /// Whether swapping `a` and `b` is an automorphism, given equal colors.
    fn twins(&self, a: usize, b: usize) -> bool {
        let strip = |v: usize, other: usize| {
            self.adj[v]
                .iter()
                .filter(move |&&(w, _, _)| w != other)
                .copied()
        };
        if !strip(a, b).eq(strip(b, a)) {
            return false;
        }
        let between = self.adj[a].iter().find(|&&(w, _, _)| w == b);
        between.is_none_or(|&(_, o, i)| o == i)
    }

    /// Whether `v` lies in the orbit of an already tried vertex under the
    /// known automorphisms that fix every individualized vertex.
    fn same_orbit(&self, path: &[usize], tried: &[usize], v: usize) -> bool {
        if tried.is_empty() || self.automorphisms.is_empty() {
            return false;
        }
        let n = self.ball.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for gamma in &self.automorphisms {
            if path.iter().any(|&p| gamma[p] != p) {
                continue;
            }
            for (x, &y) in gamma.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }
}

fn rank<K: Ord>(keys: &[K]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut colors = vec![0u32; keys.len()];
    let mut next = 0u32;
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keys[order[i - 1]] != keys[v] {
            next = i as u32;
        }
        colors[v] = next;
    }
    colors
}

fn count_classes(colors: &[u32]) -> usize {
    let mut seen = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedMultigraph;
    use crate::types::ball_extract;

    fn ball(labels: Vec<u64>, complete: Vec<bool>, edges: Vec<(usize, usize)>) -> BallGraph {
        BallGraph::from_parts(labels, complete, edges, 1, 8).unwrap()
    }

    #[test]
    fn permutation_invariance_small() {
        let b = ball(
            vec![0, 0, 1, 1, 2],
            vec![true, true, false, false, false],
            vec![(0, 1), (2, 0), (3, 0), (1, 4), (4, 1)],
        );
        let id = canonicalize(&b);
        for perm in [[0, 1, 2, 3, 4], [0, 1, 3, 2, 4], [0, 1, 4, 3, 2], [0, 1, 3, 4, 2]] {
            assert_eq!(canonicalize(&b.permuted(&perm)), id);
        }
    }

    #[test]
    fn labels_distinguish() {
        let ab = ball(vec![3, 5], vec![true, true], vec![(0, 1)]);
        let ba = ball(vec![5, 3], vec![true, true], vec![(0, 1)]);
        assert_ne!(canonicalize(&ab), canonicalize(&ba));
    }

    #[test]
    fn root_order_matters() {
        // 0→1 plus a pendant out-edge from the tail, versus the same shape
        // hanging off the head.
        let on_tail = ball(vec![0; 3], vec![true, true, false], vec![(0, 1), (0, 2)]);
        let on_head = ball(vec![0; 3], vec![true, true, false], vec![(0, 1), (1, 2)]);
        assert_ne!(canonicalize(&on_tail), canonicalize(&on_head));

        // The edges u→v and v→u in a 2-path: reversing which edge is rooted changes the type.
        let g = DirectedMultigraph::new(3, vec![(0, 1), (2, 1)]).unwrap();
        let first = canonicalize(&ball_extract(&g, &[0; 3], 1, 4, 0).unwrap());
        let second = canonicalize(&ball_extract(&g, &[0; 3], 1, 4, 1).unwrap());
        assert_eq!(first, second);
        let h = DirectedMultigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let a = canonicalize(&ball_extract(&h, &[0; 3], 1, 4, 0).unwrap());
        let b = canonicalize(&ball_extract(&h, &[0; 3], 1, 4, 1).unwrap());
        assert_ne!(a, b);
    }

    #[test]
    fn complete_flags_distinguish() {
        let a = ball(vec![0; 2], vec![true, true], vec![(0, 1)]);
        let b = ball(vec![0; 2], vec![true, false], vec![(0, 1)]);
        assert_ne!(canonicalize(&a), canonicalize(&b));
    }

    #[test]
    fn hex_round_trip_and_decode() {
        let b = ball(
            vec![7, 1, 300, 2],
            vec![true, true, false, false],
            vec![(0, 1), (2, 1), (0, 3), (0, 3)],
        );
        let id = canonicalize(&b);
        assert_eq!(id.size(), 4);
        let back = TypeId::from_hex(&id.to_hex()).unwrap();
        assert_eq!(back, id);
        assert_eq!(canonicalize(&id.to_ball().unwrap()), id);
        assert!(TypeId::from_hex("zz").is_err());
        assert!(TypeId::from_bytes(vec![0x80]).is_err());
    }

    #[test]
    fn symmetric_star_is_fast() {
        // 40 identical leaves on each root: twin pruning keeps this linear.
        let mut edges = vec![(0, 1)];
        for i in 0..40 {
            edges.push((0, 2 + i));
            edges.push((42 + i, 1));
        }
        let n = 82;
        let mut complete = vec![false; n];
        complete[0] = true;
        complete[1] = true;
        let b = BallGraph::from_parts(vec![0; n], complete, edges, 1, 64).unwrap();
        let id = canonicalize(&b);
        let mut perm: Vec<usize> = (0..n).collect();
        perm[2..].reverse();
        assert_eq!(canonicalize(&b.permuted(&perm)), id);
    }

    #[test]
    fn symmetric_subtrees_are_fast() {
        // Ten identical two-vertex arms off the tail: needs orbit pruning.
        let mut edges = vec![(0, 1)];
        let mut n = 2;
        for _ in 0..10 {
            edges.push((0, n));
            edges.push((n, n + 1));
            n += 2;
        }
        let mut complete = vec![false; n];
        for v in 0..n {
            complete[v] = v < 2 || (v % 2 == 0);
        }
        let b = BallGraph::from_parts(vec![0; n], complete, edges, 2, 16).unwrap();
        let id = canonicalize(&b);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(2, 4);
        perm.swap(3, 5);
        assert_eq!(canonicalize(&b.permuted(&perm)), id);
    }
}
