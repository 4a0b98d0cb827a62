//! Multi-pass streaming estimators.
//!
//! Each estimator sees the edges only through [`EdgeStream`] passes and keeps
//! its bookkeeping in a [`SamplerState`]. Runs that hit a space cap stop and
//! report which cap fired instead of a value.

mod meta;
mod post;
mod state;
mod three;
mod two;

use std::fmt;

use crate::graph::{max_dicut_exact_with_cap, max_dicut_localsearch, DirectedMultigraph};
use crate::error::{Error, Result};

pub use meta::meta_estimate;
pub use post::{cap_copy_degrees, type_counts_of_sample};
pub use state::{pass1_sample, CopyEdge, Endpoint, SamplerState, StoredEdge, Variant};
pub use three::{three_pass_estimate, three_pass_sample, SampleOutcome};
pub use two::{two_pass_estimate, two_pass_sample};

/// A replayable edge stream. Every pass yields the same sequence.
#[derive(Debug)]
pub struct EdgeStream<'a> {
    graph: &'a DirectedMultigraph,
    passes: usize,
}

impl<'a> EdgeStream<'a> {
    pub fn new(graph: &'a DirectedMultigraph) -> Self {
        Self { graph, passes: 0 }
    }

    /// Vertex count, known before the first pass.
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn passes(&self) -> usize {
        self.passes
    }

    /// Starts a new pass over `(position, (tail, head))`.
    pub fn pass(&mut self) -> impl Iterator<Item = (u64, (usize, usize))> + 'a {
        self.passes += 1;
        self.graph
            .edges()
            .iter()
            .enumerate()
            .map(|(pos, &e)| (pos as u64, e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    ExactSmall,
    TwoPass,
    ThreePass,
    Dense,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::ExactSmall => "exact-small",
            Branch::TwoPass => "two-pass",
            Branch::ThreePass => "three-pass",
            Branch::Dense => "dense",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a run stopped without a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    VPrimeCap,
    EPrimeCap,
    EstDegCap,
    /// No edge of the sample had a certified complete ball.
    EmptySample,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::VPrimeCap => "vprime-cap",
            Termination::EPrimeCap => "eprime-cap",
            Termination::EstDegCap => "estdeg-cap",
            Termination::EmptySample => "empty-sample",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Largest size each structure reached during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MemoryPeaks {
    pub vprime: usize,
    pub eprime: usize,
    pub edoubleprime: usize,
    pub ehat: usize,
    pub estdeg_nonzero: usize,
    pub storedeg_nonzero: usize,
    pub count_nonzero: usize,
    /// Edges held by the exact branch or the core-set.
    pub stored_edges: usize,
}

/// The limits a run was held to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapLimits {
    pub vprime: f64,
    pub eprime: f64,
    pub estdeg_nonzero: f64,
    /// Per-vertex allowance `n^{2β/3}` for `Ê`.
    pub storedeg: f64,
    pub enabled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub seed: u64,
    pub branch: Branch,
    pub value: Option<f64>,
    pub terminated: Option<Termination>,
    pub peaks: MemoryPeaks,
    pub limits: CapLimits,
    /// `|V′|` when the run ended.
    pub final_vprime: usize,
    /// The exact branch fell back to local search.
    pub heuristic: bool,
    pub m: u64,
    pub n: usize,
}

impl EstimateReport {
    pub const CSV_HEADER: &'static str = "seed,branch,value,terminated,peakV,peakE,peakEhat,m,n";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.branch,
            self.value.map(|v| format!("{v:.6}")).unwrap_or_default(),
            self.terminated.map_or("none", Termination::name),
            self.peaks.vprime,
            self.peaks.eprime.max(self.peaks.edoubleprime),
            self.peaks.ehat,
            self.m,
            self.n
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryAudit {
    pub peaks: MemoryPeaks,
    pub limits: CapLimits,
    pub caps_disabled: bool,
    /// Human-readable description of every exceeded limit.
    pub violations: Vec<String>,
}

impl MemoryAudit {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every recorded peak against its limit.
pub fn memory_audit(report: &EstimateReport) -> MemoryAudit {
    let p = report.peaks;
    let l = report.limits;
    let mut violations = Vec::new();
    let mut check = |name: &str, peak: usize, cap: f64| {
        if peak as f64 > cap {
            violations.push(format!("{name}: peak {peak} exceeds {cap:.3}"));
        }
    };
    check("V′", p.vprime, l.vprime);
    check("E′", p.eprime, l.eprime);
    check("est-deg nonzero", p.estdeg_nonzero, l.estdeg_nonzero);
    check("Ê", p.ehat, report.final_vprime as f64 * l.storedeg);
    MemoryAudit {
        peaks: p,
        limits: l,
        caps_disabled: !l.enabled,
        violations,
    }
}

/// Max-DICUT of a stored graph: exhaustive when small enough, otherwise
/// local search. The flag is true for the heuristic.
pub(crate) fn solve_stored(
    g: &DirectedMultigraph,
    exact_cap: usize,
    restarts: usize,
    seed: u64,
) -> Result<(f64, bool)> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let active = g.degrees().iter().filter(|&&d| d > 0).count();
    if active <= exact_cap.min(62) {
        Ok((max_dicut_exact_with_cap(g, exact_cap)?.value.as_f64(), false))
    } else {
        Ok((max_dicut_localsearch(g, restarts, seed)?.value.as_f64(), true))
    }
}
