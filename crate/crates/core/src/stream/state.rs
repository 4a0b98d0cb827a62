use std::collections::BTreeMap;

use super::{CapLimits, EdgeStream, MemoryPeaks, Termination};
use crate::error::{Error, Result};
use crate::params::{ParameterSet, Thresholds};
use crate::reduce::CopyVertex;
use crate::tape::{Purpose, Side, Tape};

/// One end of a sampled copy edge. `index` is `None` for the sentinel used
/// when no copy index was drawn for that side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub parent: usize,
    pub index: Option<usize>,
}

impl Endpoint {
    pub fn copy(parent: usize, index: usize) -> Self {
        Self {
            parent,
            index: Some(index),
        }
    }

    pub fn as_copy(&self) -> Option<CopyVertex> {
        self.index.map(|index| CopyVertex {
            parent: self.parent,
            index,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CopyEdge {
    pub tail: Endpoint,
    pub head: Endpoint,
}

/// A raw edge kept in `Ê`, with its stream position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoredEdge {
    pub position: u64,
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Copy sampling only.
    ThreePass,
    /// Copy sampling plus the degree estimates.
    TwoPass,
}

/// Bookkeeping shared by the streaming estimators. Maps are sparse: a
/// vertex appears only once its entry is non-zero.
#[derive(Debug, Clone)]
pub struct SamplerState {
    pub n: usize,
    pub m: u64,
    pub count: BTreeMap<usize, usize>,
    pub est_deg: BTreeMap<usize, f64>,
    pub store_deg: BTreeMap<usize, u64>,
    /// Exact degrees recorded by the three-pass second pass.
    pub degree: BTreeMap<usize, u64>,
    pub vprime: Vec<CopyVertex>,
    pub eprime: Vec<CopyEdge>,
    pub edoubleprime: Vec<CopyEdge>,
    pub ehat: Vec<StoredEdge>,
    /// `d(v, i)` for sampled copies.
    pub dcount: BTreeMap<CopyVertex, u64>,
    pub peaks: MemoryPeaks,
    pub terminated: Option<Termination>,
    pub(crate) thresholds: Thresholds,
    pub(crate) tape: Tape,
}

impl SamplerState {
    pub fn new(n: usize, thresholds: Thresholds, seed: u64) -> Self {
        Self {
            n,
            m: 0,
            count: BTreeMap::new(),
            est_deg: BTreeMap::new(),
            store_deg: BTreeMap::new(),
            degree: BTreeMap::new(),
            vprime: Vec::new(),
            eprime: Vec::new(),
            edoubleprime: Vec::new(),
            ehat: Vec::new(),
            dcount: BTreeMap::new(),
            peaks: MemoryPeaks::default(),
            terminated: None,
            thresholds,
            tape: Tape::new(seed),
        }
    }

    pub fn thresholds(&self) -> &Thresholds {
        &self.thresholds
    }

    pub fn count(&self, v: usize) -> usize {
        self.count.get(&v).copied().unwrap_or(0)
    }

    pub fn est_deg(&self, v: usize) -> f64 {
        self.est_deg.get(&v).copied().unwrap_or(0.0)
    }

    pub fn store_deg(&self, v: usize) -> u64 {
        self.store_deg.get(&v).copied().unwrap_or(0)
    }

    /// Whether `v` keeps all its edges in `Ê`.
    pub fn is_low(&self, v: usize) -> bool {
        self.count(v) > 0 && (self.store_deg(v) as f64) < self.thresholds.storedeg_threshold
    }

    pub fn in_vprime(&self, e: Endpoint) -> bool {
        e.index.is_some_and(|i| i < self.count(e.parent))
    }

    pub fn limits(&self) -> CapLimits {
        let t = &self.thresholds;
        CapLimits {
            vprime: t.vprime_cap,
            eprime: t.eprime_cap,
            estdeg_nonzero: t.estdeg_nonzero_cap,
            storedeg: t.storedeg_threshold,
            enabled: t.caps_enabled,
        }
    }

    pub(crate) fn bump(&mut self, copy: CopyVertex) {
        *self.dcount.entry(copy).or_insert(0) += 1;
    }

    pub(crate) fn unbump(&mut self, e: Endpoint) {
        if !self.in_vprime(e) {
            return;
        }
        if let Some(c) = e.as_copy() {
            if let Some(d) = self.dcount.get_mut(&c) {
                *d = d.saturating_sub(1);
            }
        }
    }

    pub(crate) fn record_peaks(&mut self) {
        let p = &mut self.peaks;
        p.vprime = p.vprime.max(self.vprime.len());
        p.eprime = p.eprime.max(self.eprime.len());
        p.edoubleprime = p.edoubleprime.max(self.edoubleprime.len());
        p.ehat = p.ehat.max(self.ehat.len());
        p.estdeg_nonzero = p.estdeg_nonzero.max(self.est_deg.len());
        p.storedeg_nonzero = p.storedeg_nonzero.max(self.store_deg.len());
        p.count_nonzero = p.count_nonzero.max(self.count.len());
    }

    /// Stops the run if one more item would push a structure past `cap`.
    /// Returns true when the item may be stored.
    pub(crate) fn admit(&mut self, current: usize, cap: f64, cause: Termination) -> bool {
        if self.thresholds.caps_enabled && (current + 1) as f64 > cap {
            self.terminated = Some(cause);
            return false;
        }
        true
    }

    fn sample_copy(&mut self, pos: u64, side: Side, v: usize) -> bool {
        let p = self.thresholds.sample_prob;
        if !self.tape.bernoulli(Purpose::CopySample, pos, 0, side, p) {
            return true;
        }
        if !self.admit(self.vprime.len(), self.thresholds.vprime_cap, Termination::VPrimeCap) {
            return false;
        }
        let c = self.count.entry(v).or_insert(0);
        self.vprime.push(CopyVertex {
            parent: v,
            index: *c,
        });
        *c += 1;
        true
    }

    fn estimate_degree(&mut self, pos: u64, side: Side, v: usize) -> bool {
        let t = &self.thresholds;
        if !self.tape.bernoulli(Purpose::DegreeEstimate, pos, 0, side, t.estdeg_prob) {
            return true;
        }
        let inc = t.estdeg_increment;
        if !self.est_deg.contains_key(&v)
            && !self.admit(self.est_deg.len(), self.thresholds.estdeg_nonzero_cap, Termination::EstDegCap)
        {
            return false;
        }
        *self.est_deg.entry(v).or_insert(0.0) += inc;
        true
    }

    /// First-pass work for one edge. Returns false once the run terminates.
    pub(crate) fn pass1_edge(&mut self, variant: Variant, pos: u64, u: usize, v: usize) -> bool {
        self.m += 1;
        let ok = self.sample_copy(pos, Side::Tail, u)
            && self.sample_copy(pos, Side::Head, v)
            && (variant == Variant::ThreePass
                || (self.estimate_degree(pos, Side::Tail, u)
                    && self.estimate_degree(pos, Side::Head, v)));
        self.record_peaks();
        ok
    }
}

/// First pass: copy sampling, and for the two-pass variant the degree
/// estimates. Stops early when a cap fires; `m` then counts the edges seen.
pub fn pass1_sample(
    stream: &mut EdgeStream<'_>,
    params: &ParameterSet,
    seed: u64,
    variant: Variant,
) -> Result<SamplerState> {
    params.validate()?;
    let mut st = SamplerState::new(stream.n(), params.thresholds(stream.n()), seed);
    for (pos, (u, v)) in stream.pass() {
        if !st.pass1_edge(variant, pos, u, v) {
            break;
        }
    }
    Ok(st)
}

/// `Unif[est]` needs an integer range.
pub(crate) fn estimate_range(est: f64) -> u64 {
    (est.round() as u64).max(1)
}

pub(crate) fn require_edges(st: &SamplerState) -> Result<()> {
    if st.m == 0 && st.terminated.is_none() {
        return Err(Error::EmptyGraph);
    }
    Ok(())
}
