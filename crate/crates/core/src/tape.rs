//! Position-keyed randomness.
//!
//! Every random draw made by the reduction and the streaming estimators is a
//! pure function of `(seed, purpose, stream position, round, side)`. Two
//! algorithms that draw "the same" sample for the same edge therefore see the
//! same value, which turns the coupling arguments between them into literal
//! equalities that tests can check.

/// What a draw is used for; each purpose is an independent substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    /// Pass-1 Bernoulli choice of copy vertices.
    CopySample = 1,
    /// Pass-1 Bernoulli increments of the degree estimates.
    DegreeEstimate = 2,
    /// Copy indices drawn for the d rounds of an edge.
    EdgeCopy = 3,
    /// Indices drawn for an endpoint whose clause failed in the two-pass E′ line.
    OppositeCopy = 4,
    /// Seed of the label hash drawn after the passes.
    LabelHash = 5,
    /// Reservoir replacement draws of the core-set.
    Reservoir = 6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Side {
    Tail = 0,
    Head = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tape {
    seed: u64,
}

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Tape {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn word(&self, purpose: Purpose, position: u64, round: u64, side: Side) -> u64 {
        let mut h = mix(self.seed.wrapping_add(GAMMA));
        for part in [purpose as u64, position, round, side as u64] {
            h = mix(h.wrapping_add(GAMMA) ^ part);
        }
        h
    }

    /// Uniform draw from `[k] = {0, …, k−1}`; `k` must be positive.
    pub fn uniform(&self, purpose: Purpose, position: u64, round: u64, side: Side, k: u64) -> u64 {
        debug_assert!(k > 0);
        ((self.word(purpose, position, round, side) as u128 * k as u128) >> 64) as u64
    }

    pub fn bernoulli(&self, purpose: Purpose, position: u64, round: u64, side: Side, p: f64) -> bool {
        if p >= 1.0 {
            return true;
        }
        if p <= 0.0 {
            return false;
        }
        let unit = (self.word(purpose, position, round, side) >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        unit < p
    }
}
