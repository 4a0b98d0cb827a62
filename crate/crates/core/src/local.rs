//! Ball-local rounding.
//!
//! Every vertex carries a `c`-bit label drawn from a pairwise independent
//! hash. The default rule reads the high bits as a priority and the low bits
//! as a coin, then runs randomized double greedy in priority order inside
//! the ball. A vertex is decided only when it and every earlier neighbor in
//! its dependency chain lie strictly inside the ball; otherwise it rounds to
//! 1/2.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{canonical_labeling, BallGraph, TypeDistribution, TypeId};

/// `h(x) = ((a·x + b) mod q) mod 2^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairwiseHash {
    q: u64,
    a: u64,
    b: u64,
    c: u32,
}

impl PairwiseHash {
    pub fn new(q: u64, a: u64, b: u64, c: u32) -> Result<Self> {
        if !(1..=32).contains(&c) {
            return Err(Error::InvalidParameters(format!("hash width {c} outside 1..=32")));
        }
        if !is_prime(q) || q < (1u64 << c) {
            return Err(Error::InvalidParameters(format!(
                "modulus {q} must be a prime ≥ 2^{c}"
            )));
        }
        if a >= q || b >= q {
            return Err(Error::InvalidParameters("coefficients must be below q".into()));
        }
        Ok(Self { q, a, b, c })
    }

    pub fn hash(&self, x: u64) -> u64 {
        let v = (self.a as u128 * (x % self.q) as u128 + self.b as u128) % self.q as u128;
        (v as u64) & ((1u64 << self.c) - 1)
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coefficients(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn bits(&self) -> u32 {
        self.c
    }
}

/// Draws a member of the family for inputs in `[0, domain)`.
pub fn sample_hash(domain: u64, c: u32, seed: u64) -> Result<PairwiseHash> {
    if !(1..=32).contains(&c) {
        return Err(Error::InvalidParameters(format!("hash width {c} outside 1..=32")));
    }
    let q = next_prime(domain.max(1u64 << c));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.gen_range(0..q);
    let b = rng.gen_range(0..q);
    PairwiseHash::new(q, a, b, c)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let pow = |mut base: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // Deterministic for all 64-bit inputs with these bases.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n += 1;
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    PriorityDoubleGreedy,
    ObliviousBias,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalRule {
    pub kind: RuleKind,
    pub priority_bits: u32,
    pub coin_bits: u32,
}

impl LocalRule {
    pub fn new(kind: RuleKind, priority_bits: u32, coin_bits: u32) -> Result<Self> {
        if priority_bits == 0 || priority_bits + coin_bits > 32 {
            return Err(Error::InvalidParameters(format!(
                "bad label split {priority_bits}+{coin_bits}"
            )));
        }
        Ok(Self {
            kind,
            priority_bits,
            coin_bits,
        })
    }

    /// Priority-ordered double greedy with `c` label bits, the upper half
    /// (rounded up) used for priority.
    pub fn double_greedy(c: u32) -> Result<Self> {
        Self::new(RuleKind::PriorityDoubleGreedy, c.div_ceil(2), c / 2)
    }

    pub fn label_bits(&self) -> u32 {
        self.priority_bits + self.coin_bits
    }

    fn priority(&self, label: u64) -> u64 {
        (label >> self.coin_bits) & ((1u64 << self.priority_bits) - 1)
    }

    fn coin(&self, label: u64) -> f64 {
        let mask = (1u64 << self.coin_bits) - 1;
        (label & mask) as f64 / (1u64 << self.coin_bits) as f64
    }
}

/// Rounding values on a ball already in canonical vertex order.
fn resolve_ordered(b: &BallGraph, rule: &LocalRule) -> Vec<f64> {
    match rule.kind {
        RuleKind::PriorityDoubleGreedy => double_greedy(b, rule),
        RuleKind::ObliviousBias => oblivious_bias(b),
    }
}

fn double_greedy(b: &BallGraph, rule: &LocalRule) -> Vec<f64> {
    let n = b.len();
    let mut out_nb: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut in_nb: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(t, h) in b.edges() {
        out_nb[t].push(h);
        in_nb[h].push(t);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (rule.priority(b.labels()[v]), v));
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    let mut resolvable = vec![false; n];
    for &v in &order {
        resolvable[v] = b.complete()[v]
            && out_nb[v]
                .iter()
                .chain(&in_nb[v])
                .all(|&w| rank[w] > rank[v] || resolvable[w]);
    }

    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Open,
        Left,
        Right,
    }
    let mut state = vec![State::Open; n];
    for &v in &order {
        if !resolvable[v] {
            continue;
        }
        let mut a = 0i64;
        let mut bm = 0i64;
        for &u in &out_nb[v] {
            a += (state[u] != State::Left) as i64;
            bm -= (state[u] == State::Right) as i64;
        }
        for &u in &in_nb[v] {
            a -= (state[u] == State::Left) as i64;
            bm += (state[u] != State::Right) as i64;
        }
        let (a, bm) = (a.max(0) as f64, bm.max(0) as f64);
        let left = a + bm == 0.0 || rule.coin(b.labels()[v]) < a / (a + bm);
        state[v] = if left { State::Left } else { State::Right };
    }
    state
        .into_iter()
        .map(|s| match s {
            State::Left => 1.0,
            State::Right => 0.0,
            State::Open => 0.5,
        })
        .collect()
}

fn oblivious_bias(b: &BallGraph) -> Vec<f64> {
    let n = b.len();
    let mut balance = vec![0i64; n];
    for &(t, h) in b.edges() {
        balance[t] += 1;
        balance[h] -= 1;
    }
    (0..n)
        .map(|v| match (b.complete()[v], balance[v].signum()) {
            (true, 1) => 1.0,
            (true, -1) => 0.0,
            _ => 0.5,
        })
        .collect()
}

/// Rounding value in `{0, 1/2, 1}` for every vertex of `b`.
pub fn resolve_assignments(b: &BallGraph, rule: &LocalRule) -> Vec<f64> {
    let (id, order) = canonical_labeling(b);
    let canonical = id.to_ball().expect("canonical form decodes");
    let values = resolve_ordered(&canonical, rule);
    let mut out = vec![0.5; b.len()];
    for (pos, &v) in order.iter().enumerate() {
        out[v] = values[pos];
    }
    out
}

/// `ρ(tail)·(1 − ρ(head))` for the rooted edge.
pub fn local_eval(b: &BallGraph, rule: &LocalRule) -> f64 {
    let (id, _) = canonical_labeling(b);
    eval_canonical(&id.to_ball().expect("canonical form decodes"), rule)
}

fn eval_canonical(canonical: &BallGraph, rule: &LocalRule) -> f64 {
    let rho = resolve_ordered(canonical, rule);
    rho[0] * (1.0 - rho[1])
}

/// Memoized evaluation of types under one rule.
#[derive(Debug, Clone)]
pub struct LocalEvaluator {
    rule: LocalRule,
    memo: HashMap<TypeId, f64>,
}

impl LocalEvaluator {
    pub fn new(rule: LocalRule) -> Self {
        Self {
            rule,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, t: &TypeId) -> Result<f64> {
        if let Some(&v) = self.memo.get(t) {
            return Ok(v);
        }
        let v = eval_canonical(&t.to_ball()?, &self.rule);
        self.memo.insert(t.clone(), v);
        Ok(v)
    }

    pub fn estimate(&mut self, d: &TypeDistribution) -> Result<f64> {
        let mut total = 0.0;
        for (t, p) in d.iter() {
            total += p * self.eval(t)?;
        }
        Ok(total.clamp(0.0, 1.0))
    }
}

/// `E_{T∼d}[Local(T)]`.
pub fn estimate(d: &TypeDistribution, rule: &LocalRule) -> Result<f64> {
    LocalEvaluator::new(*rule).estimate(d)
}
