use super::state::{SamplerState, Variant};
use super::three::report_from;
use super::two::continue_two_pass;
use super::{Branch, EdgeStream, EstimateReport};
use crate::dense::{coreset_estimate_with, Reservoir};
use crate::error::Result;
use crate::params::ParameterSet;
use crate::tape::{Purpose, Side, Tape};

/// Runs the two-pass first pass and the core-set reservoir side by side,
/// then continues whichever branch the edge count selects: two-pass when
/// `m` is at most the dense threshold, the core-set otherwise.
pub fn meta_estimate(
    stream: &mut EdgeStream<'_>,
    params: &ParameterSet,
    seed: u64,
) -> Result<EstimateReport> {
    params.validate()?;
    let n = stream.n();
    let thresholds = params.thresholds(n);
    let reservoir_seed = Tape::new(seed).word(Purpose::Reservoir, 0, 0, Side::Tail);
    let mut reservoir = Reservoir::new(thresholds.coreset_size, reservoir_seed)?;
    let mut st = SamplerState::new(n, thresholds.clone(), seed);
    let mut sparse_alive = true;
    let mut m = 0u64;
    for (pos, (u, v)) in stream.pass() {
        m += 1;
        if sparse_alive {
            sparse_alive = st.pass1_edge(Variant::TwoPass, pos, u, v);
        }
        reservoir.offer((u, v));
    }

    if m as f64 <= thresholds.dense_threshold {
        let (st, outcome) = continue_two_pass(stream, st, params)?;
        let mut report = report_from(st, outcome, Branch::TwoPass, params, seed)?;
        report.m = m;
        return Ok(report);
    }

    let core = reservoir.finish();
    let value = coreset_estimate_with(&core, params.exact_cap, params.localsearch_restarts, seed)?;
    let mut peaks = st.peaks;
    peaks.stored_edges = core.edges.len();
    Ok(EstimateReport {
        seed,
        branch: Branch::Dense,
        value: Some(value),
        terminated: None,
        peaks,
        limits: st.limits(),
        final_vprime: st.vprime.len(),
        heuristic: core.edges.len() < core.m as usize,
        m,
        n,
    })
}
