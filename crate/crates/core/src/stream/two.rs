use super::state::{
    estimate_range, pass1_sample, require_edges, CopyEdge, Endpoint, SamplerState, StoredEdge,
    Variant,
};
use super::three::{report_from, store_all, SampleOutcome};
use super::{Branch, EdgeStream, EstimateReport, Termination};
use crate::error::Result;
use crate::params::ParameterSet;
use crate::reduce::CopyVertex;
use crate::tape::{Purpose, Side};

/// Second pass and the first post-processing stage, starting from a
/// completed first pass. Returns `E′′` before degree capping.
pub(crate) fn continue_two_pass(
    stream: &mut EdgeStream<'_>,
    mut st: SamplerState,
    params: &ParameterSet,
) -> Result<(SamplerState, SampleOutcome)> {
    require_edges(&st)?;
    if let Some(t) = st.terminated {
        return Ok((st, SampleOutcome::Terminated(t)));
    }
    if st.m as f64 <= st.thresholds.small_m {
        let g = store_all(stream, &mut st)?;
        return Ok((st, SampleOutcome::Stored(g)));
    }
    if let Some(t) = second_pass(stream, &mut st, params) {
        return Ok((st, SampleOutcome::Terminated(t)));
    }
    resample_low_degree(&mut st, params);
    let edges = st.edoubleprime.clone();
    Ok((st, SampleOutcome::Sampled(edges)))
}

fn second_pass(
    stream: &mut EdgeStream<'_>,
    st: &mut SamplerState,
    params: &ParameterSet,
) -> Option<Termination> {
    let threshold = st.thresholds.storedeg_threshold;
    for (pos, (u, v)) in stream.pass() {
        let (cu, cv) = (st.count(u), st.count(v));
        let mut stored = false;
        for w in [u, v] {
            if st.count(w) > 0 && (st.store_deg(w) as f64) < threshold {
                if !stored {
                    st.ehat.push(StoredEdge {
                        position: pos,
                        tail: u,
                        head: v,
                    });
                    stored = true;
                }
                *st.store_deg.entry(w).or_insert(0) += 1;
            }
        }

        let (eu, ev) = (st.est_deg(u), st.est_deg(v));
        for round in 0..params.d {
            let draw = |st: &SamplerState, c: usize, est: f64, side: Side| {
                (c > 0 && est > 0.0).then(|| {
                    st.tape
                        .uniform(Purpose::EdgeCopy, pos, round, side, estimate_range(est))
                        as usize
                })
            };
            let i1 = draw(st, cu, eu, Side::Tail);
            let i2 = draw(st, cv, ev, Side::Head);
            let hit_u = i1.is_some_and(|i| i < cu);
            let hit_v = i2.is_some_and(|i| i < cv);
            if hit_u {
                st.bump(CopyVertex { parent: u, index: i1.unwrap() });
            }
            if hit_v {
                st.bump(CopyVertex { parent: v, index: i2.unwrap() });
            }
            if !(hit_u || hit_v) {
                continue;
            }
            // An index that was never drawn is drawn now when possible, else
            // left as the sentinel; either way the endpoint lies outside V′
            // and the edge is dropped at the end of post-processing.
            let opposite = |st: &SamplerState, drawn: Option<usize>, est: f64, side: Side| {
                drawn.or_else(|| {
                    (est > 0.0).then(|| {
                        st.tape
                            .uniform(Purpose::OppositeCopy, pos, round, side, estimate_range(est))
                            as usize
                    })
                })
            };
            let edge = CopyEdge {
                tail: Endpoint {
                    parent: u,
                    index: opposite(st, i1, eu, Side::Tail),
                },
                head: Endpoint {
                    parent: v,
                    index: opposite(st, i2, ev, Side::Head),
                },
            };
            if !st.admit(st.eprime.len(), st.thresholds.eprime_cap, Termination::EPrimeCap) {
                st.record_peaks();
                return Some(Termination::EPrimeCap);
            }
            st.eprime.push(edge);
        }
        st.record_peaks();
    }
    None
}

/// Replaces every sampled edge at a low-degree vertex by a fresh sample
/// drawn from the stored edges with exact degrees, then drops edges with an
/// endpoint outside `V′`.
fn resample_low_degree(st: &mut SamplerState, params: &ParameterSet) {
    let eprime = std::mem::take(&mut st.eprime);
    let mut kept = Vec::with_capacity(eprime.len());
    for e in &eprime {
        if st.is_low(e.tail.parent) || st.is_low(e.head.parent) {
            st.unbump(e.tail);
            st.unbump(e.head);
        } else {
            kept.push(*e);
        }
    }
    st.eprime = eprime;
    st.edoubleprime = kept;
    st.record_peaks();

    let ehat = st.ehat.clone();
    for StoredEdge {
        position: pos,
        tail: u,
        head: v,
    } in ehat
    {
        let (cu, cv) = (st.count(u), st.count(v));
        for round in 0..params.d {
            let draw = |st: &SamplerState, w: usize, side: Side| -> Option<usize> {
                let k = if st.is_low(w) {
                    st.store_deg(w)
                } else {
                    let est = st.est_deg(w);
                    if est <= 0.0 {
                        return None;
                    }
                    estimate_range(est)
                };
                Some(st.tape.uniform(Purpose::EdgeCopy, pos, round, side, k) as usize)
            };
            if st.is_low(u) {
                let j1 = draw(st, u, Side::Tail);
                let hit_u = j1.filter(|&j| j < cu);
                if let Some(j) = hit_u {
                    st.bump(CopyVertex { parent: u, index: j });
                }
                if cv > 0 {
                    if let Some(j2) = draw(st, v, Side::Head).filter(|&j| j < cv) {
                        st.bump(CopyVertex { parent: v, index: j2 });
                        if let Some(j1) = hit_u {
                            st.edoubleprime.push(CopyEdge {
                                tail: Endpoint::copy(u, j1),
                                head: Endpoint::copy(v, j2),
                            });
                        }
                    }
                }
            } else if st.is_low(v) {
                let hit_v = draw(st, v, Side::Head).filter(|&j| j < cv);
                if let Some(j) = hit_v {
                    st.bump(CopyVertex { parent: v, index: j });
                }
                if cu > 0 {
                    if let Some(j1) = draw(st, u, Side::Tail).filter(|&j| j < cu) {
                        st.bump(CopyVertex { parent: u, index: j1 });
                        if let Some(j2) = hit_v {
                            st.edoubleprime.push(CopyEdge {
                                tail: Endpoint::copy(u, j1),
                                head: Endpoint::copy(v, j2),
                            });
                        }
                    }
                }
            }
        }
        st.record_peaks();
    }

    let edd = std::mem::take(&mut st.edoubleprime);
    st.edoubleprime = edd
        .into_iter()
        .filter(|e| st.in_vprime(e.tail) && st.in_vprime(e.head))
        .collect();
}

/// Runs both passes and the first post-processing stage.
pub fn two_pass_sample(
    stream: &mut EdgeStream<'_>,
    params: &ParameterSet,
    seed: u64,
) -> Result<(SamplerState, SampleOutcome)> {
    let st = pass1_sample(stream, params, seed, Variant::TwoPass)?;
    continue_two_pass(stream, st, params)
}

pub fn two_pass_estimate(
    stream: &mut EdgeStream<'_>,
    params: &ParameterSet,
    seed: u64,
) -> Result<EstimateReport> {
    let (st, outcome) = two_pass_sample(stream, params, seed)?;
    report_from(st, outcome, Branch::TwoPass, params, seed)
}
