use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CutValue, Dicut, DirectedMultigraph};
use crate::error::{Error, Result};

/// Largest number of non-isolated vertices the exhaustive oracle accepts by default.
pub const DEFAULT_EXACT_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub value: CutValue,
    pub witness: Dicut,
}

/// Multi-edges collapsed into weighted arcs over the non-isolated vertices.
struct Compact {
    /// Source vertex id per compact index.
    vertices: Vec<usize>,
    /// `(neighbor, weight of u→nbr, weight of nbr→u)`.
    arcs: Vec<Vec<(usize, u64, u64)>>,
}

impl Compact {
    fn build(g: &DirectedMultigraph) -> Self {
        let deg = g.degrees();
        let mut index = vec![usize::MAX; g.n()];
        let mut vertices = Vec::new();
        for (v, &dv) in deg.iter().enumerate() {
            if dv > 0 {
                index[v] = vertices.len();
                vertices.push(v);
            }
        }
        let k = vertices.len();
        let mut weights: Vec<std::collections::BTreeMap<usize, (u64, u64)>> =
            vec![Default::default(); k];
        for &(u, v) in g.edges() {
            let (a, b) = (index[u], index[v]);
            weights[a].entry(b).or_default().0 += 1;
            weights[b].entry(a).or_default().1 += 1;
        }
        let arcs = weights
            .into_iter()
            .map(|m| m.into_iter().map(|(nb, (o, i))| (nb, o, i)).collect())
            .collect();
        Self { vertices, arcs }
    }

    fn gain_if_flipped(&self, side: &[bool], v: usize) -> i64 {
        // Change in cut edges if v switches sides.
        let mut out_to_right = 0i64;
        let mut in_from_left = 0i64;
        for &(nb, out_w, in_w) in &self.arcs[v] {
            if side[nb] {
                in_from_left += in_w as i64;
            } else {
                out_to_right += out_w as i64;
            }
        }
        if side[v] {
            in_from_left - out_to_right
        } else {
            out_to_right - in_from_left
        }
    }

    fn witness(&self, n: usize, side: &[bool]) -> Dicut {
        Dicut::from_left_set(
            n,
            self.vertices
                .iter()
                .zip(side)
                .filter_map(|(&v, &l)| l.then_some(v)),
        )
    }
}

pub fn max_dicut_exact(g: &DirectedMultigraph) -> Result<CutResult> {
    max_dicut_exact_with_cap(g, DEFAULT_EXACT_CAP)
}

/// Exhaustive Max-DICUT over all ordered bipartitions of the non-isolated
/// vertices, visited in Gray-code order with incremental cut maintenance.
pub fn max_dicut_exact_with_cap(g: &DirectedMultigraph, cap: usize) -> Result<CutResult> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let compact = Compact::build(g);
    let k = compact.vertices.len();
    if k > cap || k >= 63 {
        return Err(Error::TooLargeForExact {
            vertices: k,
            cap: cap.min(62),
        });
    }
    let mut side = vec![false; k];
    let mut current = 0i64;
    let mut best = 0i64;
    let mut best_mask = 0u64;
    let mut mask = 0u64;
    for step in 1u64..(1u64 << k) {
        let j = step.trailing_zeros() as usize;
        current += compact.gain_if_flipped(&side, j);
        side[j] = !side[j];
        mask ^= 1 << j;
        if current > best {
            best = current;
            best_mask = mask;
        }
    }
    let best_side: Vec<bool> = (0..k).map(|j| best_mask >> j & 1 == 1).collect();
    Ok(CutResult {
        value: CutValue {
            cut: best as u64,
            total: g.m() as u64,
        },
        witness: compact.witness(g.n(), &best_side),
    })
}

/// Best 1-flip local optimum over `restarts` random starting cuts.
pub fn max_dicut_localsearch(
    g: &DirectedMultigraph,
    restarts: usize,
    seed: u64,
) -> Result<CutResult> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let compact = Compact::build(g);
    let k = compact.vertices.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(i64, Vec<bool>)> = None;
    for _ in 0..restarts.max(1) {
        let mut side: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
        let mut value: i64 = compact
            .arcs
            .iter()
            .enumerate()
            .map(|(u, arcs)| {
                arcs.iter()
                    .filter(|&&(nb, _, _)| side[u] && !side[nb])
                    .map(|&(_, out_w, _)| out_w as i64)
                    .sum::<i64>()
            })
            .sum();
        loop {
            let mut improved = false;
            for v in 0..k {
                let gain = compact.gain_if_flipped(&side, v);
                if gain > 0 {
                    side[v] = !side[v];
                    value += gain;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, side));
        }
    }
    let (value, side) = best.expect("at least one restart");
    Ok(CutResult {
        value: CutValue {
            cut: value as u64,
            total: g.m() as u64,
        },
        witness: compact.witness(g.n(), &side),
    })
}
