//! Estimator parameters and the thresholds they induce for a given `n`.

use crate::error::{Error, Result};
use crate::graph::DEFAULT_EXACT_CAP;
use crate::local::{LocalRule, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every quantity derived from `ε` by the asymptotic formulas.
    PaperFaithful,
    /// Formulas with direct overrides for desk-scale runs.
    Practical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    pub epsilon: f64,
    pub mode: Mode,
    /// Vertex-copy sampling exponent: copies survive with probability `n^{−β}`.
    pub beta: f64,
    pub delta: f64,
    /// Sampling rounds per edge.
    pub d: u64,
    pub ell: usize,
    /// Label width.
    pub c: u32,
    pub rule: RuleKind,
    pub priority_bits: u32,
    pub small_m_threshold: Option<f64>,
    pub vprime_cap: Option<f64>,
    pub eprime_cap: Option<f64>,
    pub storedeg_threshold: Option<f64>,
    pub estdeg_nonzero_cap: Option<f64>,
    pub dense_threshold: Option<f64>,
    pub degree_cap: Option<u64>,
    /// When false, no cap terminates a run (audits still record peaks).
    pub caps_enabled: bool,
    /// Reservoir size for the dense branch; `20·n·ln n` when unset.
    pub coreset_size: Option<usize>,
    pub exact_cap: usize,
    pub localsearch_restarts: usize,
}

/// `ε^{k/ε}`.
fn eps_tower(eps: f64, k: f64) -> f64 {
    eps.powf(k / eps)
}

impl ParameterSet {
    pub fn paper(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        let label_bits = 2 * (8.0 / epsilon).log2().ceil() as u32;
        let c = label_bits.clamp(2, 32);
        Ok(Self {
            epsilon,
            mode: Mode::PaperFaithful,
            beta: eps_tower(epsilon, 20.0),
            delta: eps_tower(epsilon, 25.0),
            d: (320.0 / (epsilon * epsilon)).ceil() as u64,
            ell: (8.0 / epsilon).ceil() as usize,
            c,
            rule: RuleKind::PriorityDoubleGreedy,
            priority_bits: c.div_ceil(2),
            small_m_threshold: None,
            vprime_cap: None,
            eprime_cap: None,
            storedeg_threshold: None,
            estdeg_nonzero_cap: None,
            dense_threshold: None,
            degree_cap: None,
            caps_enabled: true,
            coreset_size: None,
            exact_cap: DEFAULT_EXACT_CAP,
            localsearch_restarts: 8,
        })
    }

    /// Practical mode with the given `β`, `d`, `ℓ` and `c`; everything else
    /// follows the formulas until overridden.
    pub fn practical(epsilon: f64, beta: f64, d: u64, ell: usize, c: u32) -> Result<Self> {
        let mut p = Self::paper(epsilon)?;
        p.mode = Mode::Practical;
        p.beta = beta;
        p.d = d;
        p.ell = ell;
        p.c = c;
        p.priority_bits = c.div_ceil(2);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if !(0.0..1.0).contains(&self.beta) {
            return bad(format!("β = {} outside [0, 1)", self.beta));
        }
        if self.d < 1 {
            return bad("d must be at least 1".into());
        }
        if self.ell < 1 {
            return bad("ℓ must be at least 1".into());
        }
        if self.priority_bits == 0 || self.priority_bits > self.c || !(1..=32).contains(&self.c) {
            return bad(format!("bad label split {} of {}", self.priority_bits, self.c));
        }
        for (name, cap) in [
            ("small-m threshold", self.small_m_threshold),
            ("V′ cap", self.vprime_cap),
            ("E′ cap", self.eprime_cap),
            ("store-deg threshold", self.storedeg_threshold),
            ("est-deg nonzero cap", self.estdeg_nonzero_cap),
            ("dense threshold", self.dense_threshold),
        ] {
            if let Some(v) = cap {
                if self.mode == Mode::PaperFaithful {
                    return bad(format!("{name} override needs practical mode"));
                }
                if v.is_nan() || v < 1.0 {
                    return bad(format!("{name} = {v} must be at least 1"));
                }
            }
        }
        if self.degree_cap == Some(0) {
            return bad("degree cap must be at least 1".into());
        }
        Ok(())
    }

    pub fn rule(&self) -> LocalRule {
        LocalRule {
            kind: self.rule,
            priority_bits: self.priority_bits,
            coin_bits: self.c - self.priority_bits,
        }
    }

    pub fn thresholds(&self, n: usize) -> Thresholds {
        let nf = (n.max(2)) as f64;
        let eps = self.epsilon;
        let beta = self.beta;
        let degree_cap = self.degree_cap.unwrap_or(11 * self.d);
        Thresholds {
            n,
            sample_prob: nf.powf(-beta),
            small_m: self
                .small_m_threshold
                .unwrap_or_else(|| nf.powf(1.0 - eps_tower(eps, 1.0))),
            vprime_cap: self.vprime_cap.unwrap_or_else(|| nf.powf(1.0 - 0.75 * beta)),
            eprime_cap: self
                .eprime_cap
                .unwrap_or_else(|| nf.powf(1.0 - eps_tower(eps, 25.0))),
            estdeg_increment: nf.powf(beta / 4.0),
            estdeg_prob: nf.powf(-beta / 4.0),
            storedeg_threshold: self
                .storedeg_threshold
                .unwrap_or_else(|| nf.powf(2.0 * beta / 3.0)),
            estdeg_nonzero_cap: self
                .estdeg_nonzero_cap
                .unwrap_or_else(|| nf.powf(1.0 - beta / 8.0)),
            dense_threshold: self
                .dense_threshold
                .unwrap_or_else(|| nf.powf(1.0 + eps_tower(eps, 4.0))),
            degree_cap,
            ball_degree_bound: degree_cap as usize,
            coreset_size: self
                .coreset_size
                .unwrap_or_else(|| (20.0 * nf * nf.ln()).ceil() as usize)
                .max(1),
            caps_enabled: self.caps_enabled,
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameters(format!("ε = {epsilon} outside (0, 1/2)")));
    }
    Ok(())
}

/// Absolute thresholds for an `n`-vertex stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds {
    pub n: usize,
    /// `n^{−β}`.
    pub sample_prob: f64,
    pub small_m: f64,
    pub vprime_cap: f64,
    pub eprime_cap: f64,
    /// `n^{β/4}`, added to an estimate on each success.
    pub estdeg_increment: f64,
    /// `n^{−β/4}`.
    pub estdeg_prob: f64,
    /// `n^{2β/3}`.
    pub storedeg_threshold: f64,
    pub estdeg_nonzero_cap: f64,
    pub dense_threshold: f64,
    pub degree_cap: u64,
    pub ball_degree_bound: usize,
    pub coreset_size: usize,
    pub caps_enabled: bool,
}
