//! Fixed-seed property suites behind the `validate` verb.

use std::collections::HashMap;
use std::str::FromStr;

use dicut_core::graph::{
    generate, max_dicut_exact, DirectedMultigraph, GeneratorKind, GeneratorParams,
};
use dicut_core::local::{local_eval, sample_hash, LocalRule};
use dicut_core::params::ParameterSet;
use dicut_core::reduce::{make_approx_degrees, multiplicity, trevisan_reduce, DegreeMode};
use dicut_core::stream::{
    memory_audit, meta_estimate, three_pass_estimate, three_pass_sample, two_pass_sample,
    EdgeStream, SampleOutcome,
};
use dicut_core::types::{
    canonicalize, edge_type_distribution, rescaled_distribution, sampled_type_counts,
    tv_distance, BallExtractor, BallGraph, TypeDistribution,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Reduction,
    Types,
    Local,
    Stream,
    All,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "reduction" => Suite::Reduction,
            "types" => Suite::Types,
            "local" => Suite::Local,
            "stream" => Suite::Stream,
            "all" => Suite::All,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown suite {other:?}; expected reduction, types, local, stream or all"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub stats: String,
}

fn check(suite: &'static str, name: &'static str, passed: bool, stats: String) -> Check {
    Check {
        suite,
        name,
        passed,
        stats,
    }
}

fn uniform(n: usize, m: usize, max_degree: Option<usize>, seed: u64) -> DirectedMultigraph {
    generate(GeneratorKind::UniformRandom, n, m, &GeneratorParams { max_degree }, seed)
        .expect("valid generator")
        .graph
}

fn full_degrees(g: &DirectedMultigraph) -> HashMap<usize, u64> {
    g.degrees().into_iter().enumerate().map(|(v, d)| (v, d as u64)).collect()
}

fn shuffled(b: &BallGraph, rng: &mut ChaCha8Rng) -> BallGraph {
    let mut rest: Vec<usize> = (2..b.len()).collect();
    rest.shuffle(rng);
    let perm: Vec<usize> = [0, 1].into_iter().chain(rest).collect();
    b.permuted(&perm)
}

fn reduction() -> Result<Vec<Check>, CliError> {
    let mut shape_ok = 0;
    let mut exact_accept = 0;
    let mut close = 0;
    let trials = 30;
    for seed in 0..trials {
        let n = 2 + seed as usize % 7;
        let g = uniform(n, 1 + seed as usize % 8, None, seed);
        let ad = make_approx_degrees(&g, 0.5, 1.0, DegreeMode::Exact, seed)?;
        let r = trevisan_reduce(&g, &ad, 1.0, seed)?;
        let d = multiplicity(1.0);
        if r.graph.n() == 2 * g.m()
            && r.graph.degrees().iter().all(|&x| x as u64 <= 11 * d)
            && r.graph.m() as u64 <= d * g.m() as u64
        {
            shape_ok += 1;
        }
        if r.sampled_edges as u64 == d * g.m() as u64 {
            exact_accept += 1;
        }
        let gap = (max_dicut_exact(&r.graph)?.value.as_f64() - max_dicut_exact(&g)?.value.as_f64()).abs();
        if gap <= 0.25 {
            close += 1;
        }
    }
    Ok(vec![
        check("reduction", "shape", shape_ok == trials, format!("{shape_ok}/{trials} graphs")),
        check(
            "reduction",
            "exact degrees accept every draw",
            exact_accept == trials,
            format!("{exact_accept}/{trials} graphs"),
        ),
        check(
            "reduction",
            "value preserved within 0.25",
            close * 6 >= trials * 5,
            format!("{close}/{trials} graphs"),
        ),
    ])
}

fn types() -> Result<Vec<Check>, CliError> {
    let mut consistent = 0;
    for seed in 0..10 {
        let g = uniform(30, 40, Some(4), seed);
        let labels: Vec<u64> = (0..30).map(|v| v % 3).collect();
        let all: Vec<usize> = (0..30).collect();
        let counts = sampled_type_counts(&g, &all, &labels, 2, 4, &full_degrees(&g))?;
        let exact = edge_type_distribution(&g, &labels, 2, 4)?;
        if tv_distance(&rescaled_distribution(&counts, 1.0)?, &exact) < 1e-12 {
            consistent += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut invariant = 0;
    let perms = 200;
    for i in 0..perms {
        let g = uniform(25, 35, Some(4), 100 + i as u64 / 20);
        let labels: Vec<u64> = (0..25).map(|v| v % 2).collect();
        let b = BallExtractor::new(&g, &labels, 2, 4).extract(i % g.m())?;
        if canonicalize(&shuffled(&b, &mut rng)) == canonicalize(&b) {
            invariant += 1;
        }
    }
    let mut normalized = 0;
    for seed in 0..10 {
        let g = uniform(40, 40, Some(3), 200 + seed);
        let d = edge_type_distribution(&g, &[0; 40], 1, 3)?;
        let total: f64 = d.iter().map(|(_, m)| m).sum();
        if (total - 1.0).abs() < 1e-9 && TypeDistribution::from_csv(&d.to_csv())? == d {
            normalized += 1;
        }
    }
    Ok(vec![
        check("types", "full-sample consistency", consistent == 10, format!("{consistent}/10 graphs")),
        check("types", "permutation invariance", invariant == perms, format!("{invariant}/{perms} permutations")),
        check("types", "normalized and serializable", normalized == 10, format!("{normalized}/10 distributions")),
    ])
}

fn local() -> Result<Vec<Check>, CliError> {
    let rule = LocalRule::double_greedy(8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut invariant, mut in_set, mut evaluated) = (0, 0, 0);
    for seed in 0..10u64 {
        let g = uniform(60, 70, Some(3), seed);
        let h = sample_hash(60, 8, seed)?;
        let labels: Vec<u64> = (0..60).map(|v| h.hash(v)).collect();
        let mut ex = BallExtractor::new(&g, &labels, 3, 3);
        for e in 0..g.m() {
            let b = ex.extract(e)?;
            let v = local_eval(&b, &rule);
            evaluated += 1;
            if [0.0, 0.25, 0.5, 1.0].contains(&v) {
                in_set += 1;
            }
            if e < 5 && local_eval(&shuffled(&b, &mut rng), &rule) == v {
                invariant += 1;
            }
        }
    }
    let iso = BallGraph::from_parts(vec![0, 0], vec![true, true], vec![(0, 1)], 1, 3)?;
    let isolated = local_eval(&iso, &rule);
    Ok(vec![
        check("local", "permutation invariance", invariant == 50, format!("{invariant}/50 balls")),
        check("local", "values in {0, 1/4, 1/2, 1}", in_set == evaluated, format!("{in_set}/{evaluated} balls")),
        check("local", "isolated edge evaluates to 1", isolated == 1.0, format!("value {isolated}")),
    ])
}

fn stream() -> Result<Vec<Check>, CliError> {
    let mut coupled = ParameterSet::practical(0.25, 0.0, 16, 1, 8)?;
    coupled.small_m_threshold = Some(1.0);
    coupled.storedeg_threshold = Some(6.0);
    coupled.caps_enabled = false;
    let mut equal = 0;
    let mut exact_store = 0;
    for seed in 0..20 {
        let g = uniform(20, 28, Some(5), 300 + seed);
        let (st, a) = two_pass_sample(&mut EdgeStream::new(&g), &coupled, seed)?;
        let (_, b) = three_pass_sample(&mut EdgeStream::new(&g), &coupled, seed)?;
        if let (SampleOutcome::Sampled(mut a), SampleOutcome::Sampled(mut b)) = (a, b) {
            a.sort_unstable();
            b.sort_unstable();
            equal += usize::from(a == b);
        }
        let deg = g.degrees();
        if (0..20).all(|v| st.count(v) == 0 || deg[v] >= 6 || st.store_deg(v) == deg[v] as u64) {
            exact_store += 1;
        }
    }

    let mut small = ParameterSet::practical(0.25, 0.15, 8, 1, 8)?;
    small.small_m_threshold = Some(30.0);
    small.caps_enabled = false;
    let mut exact_branch = 0;
    for seed in 0..10 {
        let g = uniform(12, 20, None, 400 + seed);
        let r = three_pass_estimate(&mut EdgeStream::new(&g), &small, seed)?;
        if r.value == Some(max_dicut_exact(&g)?.value.as_f64()) {
            exact_branch += 1;
        }
    }

    let practical = ParameterSet::practical(0.25, 0.3, 8, 2, 8)?;
    let (mut consistent, mut audited) = (0, 0);
    for seed in 0..20 {
        let g = uniform(200, 300, None, 500 + seed);
        let r = meta_estimate(&mut EdgeStream::new(&g), &practical, seed)?;
        consistent += usize::from(r.value.is_some() == r.terminated.is_none());
        audited += usize::from(memory_audit(&r).ok());
    }
    Ok(vec![
        check("stream", "two-pass equals three-pass at β = 0", equal == 20, format!("{equal}/20 seeds")),
        check("stream", "store-deg exact below threshold", exact_store == 20, format!("{exact_store}/20 seeds")),
        check("stream", "small streams solved exactly", exact_branch == 10, format!("{exact_branch}/10 graphs")),
        check("stream", "value present iff not terminated", consistent == 20, format!("{consistent}/20 runs")),
        check("stream", "caps respected", audited == 20, format!("{audited}/20 runs")),
    ])
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>, CliError> {
    Ok(match suite {
        Suite::Reduction => reduction()?,
        Suite::Types => types()?,
        Suite::Local => local()?,
        Suite::Stream => stream()?,
        Suite::All => {
            let mut all = reduction()?;
            all.extend(types()?);
            all.extend(local()?);
            all.extend(stream()?);
            all
        }
    })
}
