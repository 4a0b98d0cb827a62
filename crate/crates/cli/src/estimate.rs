//! Estimator dispatch and the trial worker pool.

use std::fmt;
use std::str::FromStr;

use dicut_core::dense::{coreset_estimate_with, coreset_pass1};
use dicut_core::graph::{max_dicut_exact_with_cap, max_dicut_localsearch, DirectedMultigraph};
use dicut_core::params::ParameterSet;
use dicut_core::stream::{
    meta_estimate, three_pass_estimate, two_pass_estimate, Branch, CapLimits, EdgeStream,
    EstimateReport, MemoryPeaks,
};
use rayon::prelude::*;

use crate::error::CliError;

pub const THREADS_ENV: &str = "DICUT_STREAM_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    TwoPass,
    ThreePass,
    Meta,
    Exact,
    Coreset,
}

impl Estimator {
    pub const ALL: [Estimator; 5] = [
        Estimator::TwoPass,
        Estimator::ThreePass,
        Estimator::Meta,
        Estimator::Exact,
        Estimator::Coreset,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::TwoPass => "two-pass",
            Estimator::ThreePass => "three-pass",
            Estimator::Meta => "meta",
            Estimator::Exact => "exact",
            Estimator::Coreset => "coreset",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown estimator {s:?}")))
    }
}

fn offline_report(g: &DirectedMultigraph, branch: Branch, value: f64, heuristic: bool, seed: u64, stored: usize) -> EstimateReport {
    EstimateReport {
        seed,
        branch,
        value: Some(value),
        terminated: None,
        peaks: MemoryPeaks {
            stored_edges: stored,
            ..Default::default()
        },
        limits: CapLimits {
            vprime: f64::INFINITY,
            eprime: f64::INFINITY,
            estdeg_nonzero: f64::INFINITY,
            storedeg: f64::INFINITY,
            enabled: false,
        },
        final_vprime: 0,
        heuristic,
        m: g.m() as u64,
        n: g.n(),
    }
}

/// One trial of `estimator` on `g`.
pub fn run_trial(
    g: &DirectedMultigraph,
    estimator: Estimator,
    params: &ParameterSet,
    seed: u64,
) -> Result<EstimateReport, CliError> {
    let mut stream = EdgeStream::new(g);
    Ok(match estimator {
        Estimator::TwoPass => two_pass_estimate(&mut stream, params, seed)?,
        Estimator::ThreePass => three_pass_estimate(&mut stream, params, seed)?,
        Estimator::Meta => meta_estimate(&mut stream, params, seed)?,
        Estimator::Exact => {
            let active = g.degrees().iter().filter(|&&d| d > 0).count();
            let (value, heuristic) = if active <= params.exact_cap {
                (max_dicut_exact_with_cap(g, params.exact_cap)?.value.as_f64(), false)
            } else {
                let r = max_dicut_localsearch(g, params.localsearch_restarts, seed)?;
                (r.value.as_f64(), true)
            };
            offline_report(g, Branch::ExactSmall, value, heuristic, seed, g.m())
        }
        Estimator::Coreset => {
            let k = params.thresholds(g.n()).coreset_size;
            let cs = coreset_pass1(&mut stream, k, seed)?;
            let value =
                coreset_estimate_with(&cs, params.exact_cap, params.localsearch_restarts, seed)?;
            let heuristic = cs.edges.len() < g.m();
            offline_report(g, Branch::Dense, value, heuristic, seed, cs.edges.len())
        }
    })
}

/// Worker pool sized by `DICUT_STREAM_THREADS`, else by the machine.
pub fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV}={v:?} is not a positive integer")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Usage(format!("worker pool: {e}")))
}

/// Runs trials with seeds `base_seed + i`; rows come back in trial order.
pub fn run_trials(
    g: &DirectedMultigraph,
    estimator: Estimator,
    params: &ParameterSet,
    trials: usize,
    base_seed: u64,
) -> Result<Vec<EstimateReport>, CliError> {
    let pool = pool()?;
    pool.install(|| {
        (0..trials as u64)
            .into_par_iter()
            .map(|i| run_trial(g, estimator, params, base_seed.wrapping_add(i)))
            .collect()
    })
}
