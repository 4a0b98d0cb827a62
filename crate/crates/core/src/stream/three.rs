use super::post::finish;
use super::state::{pass1_sample, require_edges, CopyEdge, Endpoint, SamplerState, Variant};
use super::{solve_stored, Branch, EdgeStream, EstimateReport, Termination};
use crate::error::Result;
use crate::graph::DirectedMultigraph;
use crate::params::ParameterSet;
use crate::reduce::CopyVertex;
use crate::tape::{Purpose, Side};

/// What the passes produced before post-processing.
#[derive(Debug, Clone)]
pub enum SampleOutcome {
    /// Few enough edges to keep them all.
    Stored(DirectedMultigraph),
    /// The sampled copy graph, uncapped.
    Sampled(Vec<CopyEdge>),
    Terminated(Termination),
}

pub(crate) fn store_all(stream: &mut EdgeStream<'_>, st: &mut SamplerState) -> Result<DirectedMultigraph> {
    let edges: Vec<(usize, usize)> = stream.pass().map(|(_, e)| e).collect();
    st.peaks.stored_edges = edges.len();
    DirectedMultigraph::new(stream.n(), edges)
}

/// Runs all three passes and returns the state with the uncapped `E′`.
pub fn three_pass_sample(
    stream: &mut EdgeStream<'_>,
    params: &ParameterSet,
    seed: u64,
) -> Result<(SamplerState, SampleOutcome)> {
    let mut st = pass1_sample(stream, params, seed, Variant::ThreePass)?;
    require_edges(&st)?;
    if let Some(t) = st.terminated {
        return Ok((st, SampleOutcome::Terminated(t)));
    }
    if st.m as f64 <= st.thresholds.small_m {
        let g = store_all(stream, &mut st)?;
        return Ok((st, SampleOutcome::Stored(g)));
    }

    for (_, (u, v)) in stream.pass() {
        for w in [u, v] {
            if st.count(w) > 0 {
                *st.degree.entry(w).or_insert(0) += 1;
            }
        }
    }

    let d = params.d;
    for (pos, (u, v)) in stream.pass() {
        let (cu, cv) = (st.count(u), st.count(v));
        for round in 0..d {
            let draw = |st: &SamplerState, w: usize, c: usize, side: Side| {
                (c > 0).then(|| st.tape.uniform(Purpose::EdgeCopy, pos, round, side, st.degree[&w]) as usize)
            };
            let i1 = draw(&st, u, cu, Side::Tail).filter(|&i| i < cu);
            let i2 = draw(&st, v, cv, Side::Head).filter(|&i| i < cv);
            if let Some(i) = i1 {
                st.bump(CopyVertex { parent: u, index: i });
            }
            if let Some(i) = i2 {
                st.bump(CopyVertex { parent: v, index: i });
            }
            if let (Some(i1), Some(i2)) = (i1, i2) {
                if !st.admit(st.eprime.len(), st.thresholds.eprime_cap, Termination::EPrimeCap) {
                    st.record_peaks();
                    return Ok((st, SampleOutcome::Terminated(Termination::EPrimeCap)));
                }
                st.eprime.push(CopyEdge {
                    tail: Endpoint::copy(u, i1),
                    head: Endpoint::copy(v, i2),
                });
            }
        }
        st.record_peaks();
    }
    let edges = st.eprime.clone();
    Ok((st, SampleOutcome::Sampled(edges)))
}

pub(crate) fn report_from(
    mut st: SamplerState,
    outcome: SampleOutcome,
    branch: Branch,
    params: &ParameterSet,
    seed: u64,
) -> Result<EstimateReport> {
    let mut report = EstimateReport {
        seed,
        branch,
        value: None,
        terminated: None,
        peaks: st.peaks,
        limits: st.limits(),
        final_vprime: st.vprime.len(),
        heuristic: false,
        m: st.m,
        n: st.n,
    };
    match outcome {
        SampleOutcome::Terminated(t) => report.terminated = Some(t),
        SampleOutcome::Stored(g) => {
            let (value, heuristic) =
                solve_stored(&g, params.exact_cap, params.localsearch_restarts, seed)?;
            report.branch = Branch::ExactSmall;
            report.value = Some(value);
            report.heuristic = heuristic;
        }
        SampleOutcome::Sampled(edges) => match finish(&mut st, edges, params)? {
            Ok(v) => report.value = Some(v),
            Err(t) => report.terminated = Some(t),
        },
    }
    report.peaks = st.peaks;
    Ok(report)
}

pub fn three_pass_estimate(
    stream: &mut EdgeStream<'_>,
    params: &ParameterSet,
    seed: u64,
) -> Result<EstimateReport> {
    let (st, outcome) = three_pass_sample(stream, params, seed)?;
    report_from(st, outcome, Branch::ThreePass, params, seed)
}
