//! Shared post-processing: degree capping of sampled copies, type counting
//! over the sampled graph, rescaling, and evaluation of the local rule.

use std::collections::{BTreeSet, HashMap};

use super::state::{CopyEdge, SamplerState};
use super::Termination;
use crate::error::{Error, Result};
use crate::graph::DirectedMultigraph;
use crate::local::{estimate, sample_hash};
use crate::params::ParameterSet;
use crate::reduce::CopyVertex;
use crate::tape::{Purpose, Side};
use crate::types::{count_complete_types, rescaled_distribution, TypeCounts};

/// Deletes every edge touching a copy whose counter exceeds the cap,
/// decrementing both endpoints, then zeroes the counters of those copies.
/// The set of over-cap copies is fixed before any deletion.
pub fn cap_copy_degrees(st: &mut SamplerState, edges: Vec<CopyEdge>) -> Vec<CopyEdge> {
    let cap = st.thresholds.degree_cap;
    let over: BTreeSet<CopyVertex> = st
        .vprime
        .iter()
        .filter(|c| st.dcount.get(c).copied().unwrap_or(0) > cap)
        .copied()
        .collect();
    let is_over = |e: &super::Endpoint| e.as_copy().is_some_and(|c| over.contains(&c));
    let mut kept = Vec::with_capacity(edges.len());
    for e in edges {
        if is_over(&e.tail) || is_over(&e.head) {
            st.unbump(e.tail);
            st.unbump(e.head);
        } else {
            kept.push(e);
        }
    }
    for c in over {
        st.dcount.insert(c, 0);
    }
    kept
}

/// Type counts `a_T` over the graph on `V′` with the given edges, labels
/// drawn from a fresh pairwise independent hash of the copy codes.
pub fn type_counts_of_sample(
    st: &SamplerState,
    edges: &[CopyEdge],
    params: &ParameterSet,
) -> Result<TypeCounts> {
    let max_copies = st.count.values().copied().max().unwrap_or(0).max(1) as u64;
    let domain = (2 * st.m).max(st.n as u64 * max_copies).max(2);
    let hash_seed = st.tape.word(Purpose::LabelHash, 0, 0, Side::Tail);
    let h = sample_hash(domain, params.c, hash_seed)?;

    let local: HashMap<CopyVertex, usize> = st
        .vprime
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let labels: Vec<u64> = st
        .vprime
        .iter()
        .map(|c| h.hash(c.parent as u64 * max_copies + c.index as u64))
        .collect();
    let full: Vec<u64> = st
        .vprime
        .iter()
        .map(|c| st.dcount.get(c).copied().unwrap_or(0))
        .collect();
    let mut pairs = Vec::with_capacity(edges.len());
    for e in edges {
        let (Some(a), Some(b)) = (e.tail.as_copy(), e.head.as_copy()) else {
            return Err(Error::InvalidParameters("sentinel edge reached type counting".into()));
        };
        pairs.push((local[&a], local[&b]));
    }
    let sub = DirectedMultigraph::new(st.vprime.len(), pairs)?;
    count_complete_types(
        &sub,
        &labels,
        params.ell,
        st.thresholds.ball_degree_bound,
        &full,
    )
}

/// Steps shared by both estimators once the sampled edge set is final.
pub(crate) fn finish(
    st: &mut SamplerState,
    edges: Vec<CopyEdge>,
    params: &ParameterSet,
) -> Result<std::result::Result<f64, Termination>> {
    let kept = cap_copy_degrees(st, edges);
    let counts = type_counts_of_sample(st, &kept, params)?;
    let dist = match rescaled_distribution(&counts, st.thresholds.sample_prob) {
        Ok(d) => d,
        Err(Error::EmptySample) => return Ok(Err(Termination::EmptySample)),
        Err(e) => return Err(e),
    };
    Ok(Ok(estimate(&dist, &params.rule())?))
}
