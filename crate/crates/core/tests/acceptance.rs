//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::HashMap;
use std::time::Instant;

use dicut_core::graph::{
    dicut_value, expected_dicut, generate, Dicut, DirectedMultigraph, FractionalAssignment,
    GeneratorKind, GeneratorParams,
};
use dicut_core::params::ParameterSet;
use dicut_core::reduce::{make_approx_degrees, trevisan_reduce, DegreeMode};
use dicut_core::stream::{
    memory_audit, meta_estimate, pass1_sample, three_pass_sample, two_pass_sample, Branch,
    EdgeStream, EstimateReport, SampleOutcome, Variant,
};
use dicut_core::types::{
    canonicalize, edge_type_distribution, rescaled_distribution, sampled_type_counts,
    BallExtractor, TypeDistribution,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use common::{brute_max_dicut, cut_fraction, par_map};

struct Outcome {
    pass: bool,
    detail: String,
}

fn uniform(n: usize, m: usize, max_degree: Option<usize>, seed: u64) -> DirectedMultigraph {
    generate(GeneratorKind::UniformRandom, n, m, &GeneratorParams { max_degree }, seed)
        .unwrap()
        .graph
}

fn full_degrees(g: &DirectedMultigraph) -> HashMap<usize, u64> {
    g.degrees().into_iter().enumerate().map(|(v, d)| (v, d as u64)).collect()
}

fn masses(d: &TypeDistribution) -> HashMap<String, f64> {
    d.iter().map(|(t, p)| (t.to_hex(), p)).collect()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut cut_mismatch = 0;
    for seed in 0..200 {
        let n = rng.gen_range(2..12);
        let g = uniform(n, rng.gen_range(1..20), None, seed);
        let left: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let cut = Dicut::new(left.clone());
        let a = dicut_value(&g, &cut).unwrap();
        let b = expected_dicut(&g, &FractionalAssignment::from_cut(&cut)).unwrap();
        if a != b || a != cut_fraction(g.edges(), &left) {
            cut_mismatch += 1;
        }
    }

    let mut sample_mismatch = 0;
    for seed in 0..20 {
        let g = uniform(40, 60, Some(4), 100 + seed);
        let labels: Vec<u64> = (0..40).map(|v| (v % 3) as u64).collect();
        for ell in 1..=2 {
            let exact = edge_type_distribution(&g, &labels, ell, 4).unwrap();
            let all: Vec<usize> = (0..40).collect();
            let counts =
                sampled_type_counts(&g, &all, &labels, ell, 4, &full_degrees(&g)).unwrap();
            let rescaled = rescaled_distribution(&counts, 1.0).unwrap();
            let (x, y) = (masses(&exact), masses(&rescaled));
            let same = x.len() == y.len()
                && x.iter().all(|(k, p)| y.get(k).is_some_and(|q| (p - q).abs() < 1e-12));
            if !same {
                sample_mismatch += 1;
            }
        }
    }

    let mut canon_mismatch = 0;
    let mut perms = 0;
    let mut seed = 0;
    while perms < 1000 {
        let g = uniform(30, 45, Some(5), 500 + seed);
        let labels: Vec<u64> = (0..30).map(|v| (v % 2) as u64).collect();
        let mut ex = BallExtractor::new(&g, &labels, 2, 5);
        let ball = ex.extract(seed as usize % g.m()).unwrap();
        let id = canonicalize(&ball);
        for _ in 0..50 {
            let mut rest: Vec<usize> = (2..ball.len()).collect();
            rest.shuffle(&mut rng);
            let perm: Vec<usize> = [0, 1].into_iter().chain(rest).collect();
            if canonicalize(&ball.permuted(&perm)) != id {
                canon_mismatch += 1;
            }
            perms += 1;
        }
        seed += 1;
    }
    Outcome {
        pass: cut_mismatch + sample_mismatch + canon_mismatch == 0,
        detail: format!(
            "cut mismatches {cut_mismatch}/200, full-sample mismatches {sample_mismatch}/40, \
             canonical mismatches {canon_mismatch}/{perms}"
        ),
    }
}

fn reduction_trials(mode: DegreeMode) -> Outcome {
    let eps = 0.25;
    let seeds: Vec<u64> = (0..100).collect();
    let rows = par_map(&seeds, |&seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=8);
        let g = uniform(n, m, None, seed);
        let ad = make_approx_degrees(&g, 0.5, eps, mode, seed).unwrap();
        let perturbed = ad
            .values()
            .iter()
            .zip(g.degrees())
            .filter(|&(&a, d)| a != d as u64)
            .count();
        let reduced = trevisan_reduce(&g, &ad, eps, seed).unwrap();
        let opt = brute_max_dicut(g.edges());
        let opt_bar = brute_max_dicut(reduced.graph.edges());
        ((opt_bar - opt).abs() <= eps, perturbed)
    });
    let good = rows.iter().filter(|r| r.0).count();
    let perturbed: usize = rows.iter().map(|r| r.1).sum();
    Outcome {
        pass: good >= 83,
        detail: format!("{good}/100 within 0.25 (need 83); {perturbed} estimates differ from the true degree"),
    }
}

fn criterion_4() -> Outcome {
    let n = 2000;
    let p = 0.3;
    let seeds: Vec<u64> = (0..100).collect();
    let rows = par_map(&seeds, |&seed| {
        let g = uniform(n, n, Some(3), 4000 + seed);
        let labels = vec![0u64; n];
        let exact = edge_type_distribution(&g, &labels, 1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sampled: Vec<usize> = (0..n).filter(|_| rng.gen_bool(p)).collect();
        let counts = sampled_type_counts(&g, &sampled, &labels, 1, 3, &full_degrees(&g)).unwrap();
        // Unnormalized estimate of each type's edge fraction, for the bias check.
        let raw: HashMap<String, f64> = counts
            .iter()
            .map(|(t, &a)| (t.to_hex(), a as f64 * p.powi(-(t.size() as i32)) / g.m() as f64))
            .collect();
        let tv = match rescaled_distribution(&counts, p) {
            Ok(d) => common::tv(&masses(&exact), &masses(&d)),
            Err(_) => 1.0,
        };
        (tv, raw, masses(&exact))
    });
    let tvs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let good = tvs.iter().filter(|&&t| t <= 0.1).count();
    let mut sorted = tvs.clone();
    sorted.sort_by(f64::total_cmp);
    // Averaging the per-trial estimates should recover the averaged exact
    // distribution if the rescaling is unbiased.
    let mut mean_est: HashMap<String, f64> = HashMap::new();
    let mut mean_exact: HashMap<String, f64> = HashMap::new();
    for (_, raw, exact) in &rows {
        for (k, v) in raw {
            *mean_est.entry(k.clone()).or_insert(0.0) += v / 100.0;
        }
        for (k, v) in exact {
            *mean_exact.entry(k.clone()).or_insert(0.0) += v / 100.0;
        }
    }
    Outcome {
        pass: good >= 85,
        detail: format!(
            "{good}/100 with TV ≤ 0.1 (need 85); median TV {:.4}, max {:.4}; TV of the 100-trial mean {:.4}",
            sorted[50],
            sorted[99],
            common::tv(&mean_est, &mean_exact)
        ),
    }
}

fn criterion_5() -> Outcome {
    let edges = vec![
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 0),
        (0, 2), (0, 3), (0, 4), (1, 5), (2, 6), (3, 7), (4, 8), (5, 9), (6, 0), (7, 0),
    ];
    let g = DirectedMultigraph::new(10, edges).unwrap();
    let beta = 2f64.ln() / 10f64.ln();
    let mut params = ParameterSet::practical(0.25, beta, 4, 1, 8).unwrap();
    params.caps_enabled = false;
    let trials = 10_000u64;
    let deg = g.degrees();
    let mut hist: Vec<Vec<u64>> = deg.iter().map(|&d| vec![0; d + 1]).collect();
    let mut malformed = 0;
    for seed in 0..trials {
        let st = pass1_sample(&mut EdgeStream::new(&g), &params, seed, Variant::ThreePass).unwrap();
        let mut expect: Vec<_> = Vec::new();
        for v in 0..10 {
            let c = st.count(v);
            hist[v][c] += 1;
            expect.extend((0..c).map(|i| (v, i)));
        }
        let mut got: Vec<_> = st.vprime.iter().map(|c| (c.parent, c.index)).collect();
        got.sort_unstable();
        if got != expect {
            malformed += 1;
        }
    }
    // Direct sampling keeps each of the deg(v) copies with probability 1/2,
    // so count(v) is Binomial(deg(v), 1/2), independently across vertices.
    let mut stat = 0.0;
    let mut dof = 0usize;
    for (v, h) in hist.iter().enumerate() {
        let law = Binomial::new(0.5, deg[v] as u64).unwrap();
        let mut bins: Vec<(f64, f64)> = Vec::new();
        let (mut obs, mut exp) = (0.0, 0.0);
        for (k, &o) in h.iter().enumerate() {
            obs += o as f64;
            exp += law.pmf(k as u64) * trials as f64;
            if exp >= 5.0 {
                bins.push((obs, exp));
                obs = 0.0;
                exp = 0.0;
            }
        }
        if let Some(last) = bins.last_mut() {
            last.0 += obs;
            last.1 += exp;
        }
        stat += bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum::<f64>();
        dof += bins.len() - 1;
    }
    let p_value = 1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat);
    Outcome {
        pass: p_value > 0.01 && malformed == 0,
        detail: format!("chi² = {stat:.2} on {dof} dof, p = {p_value:.4}; copy sets off-pattern {malformed}"),
    }
}

fn criterion_6() -> Outcome {
    let mut params = ParameterSet::practical(0.25, 0.0, 32, 2, 8).unwrap();
    params.small_m_threshold = Some(1.0);
    params.storedeg_threshold = Some(7.0);
    params.caps_enabled = false;
    let mut equal = 0;
    let mut total_edges = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(8..40);
        let g = uniform(n, n + n / 2, Some(6), 6000 + seed);
        let (_, two) = two_pass_sample(&mut EdgeStream::new(&g), &params, seed).unwrap();
        let (_, three) = three_pass_sample(&mut EdgeStream::new(&g), &params, seed).unwrap();
        if let (SampleOutcome::Sampled(mut a), SampleOutcome::Sampled(mut b)) = (two, three) {
            a.sort_unstable();
            b.sort_unstable();
            total_edges += a.len();
            if a == b {
                equal += 1;
            }
        }
    }
    Outcome {
        pass: equal == 100,
        detail: format!("{equal}/100 identical edge multisets ({total_edges} edges compared)"),
    }
}

struct SuiteRun {
    opt: f64,
    report: EstimateReport,
}

fn end_to_end_suite(caps: bool) -> Vec<SuiteRun> {
    let mut params = ParameterSet::practical(0.25, 0.15, 32, 2, 8).unwrap();
    params.caps_enabled = caps;
    let seeds: Vec<u64> = (0..100).collect();
    par_map(&seeds, |&seed| {
        let (g, opt) = if seed < 50 {
            let n = 10 + (seed as usize % 13);
            let g = uniform(n, n, None, 7000 + seed);
            let opt = brute_max_dicut(g.edges());
            (g, opt)
        } else {
            let gen = generate(
                GeneratorKind::PlantedDicut { plant: 1.0 },
                2000,
                2000,
                &GeneratorParams::default(),
                7000 + seed,
            )
            .unwrap();
            let opt = gen.planted.as_ref().unwrap().1.as_f64();
            (gen.graph, opt)
        };
        let report = meta_estimate(&mut EdgeStream::new(&g), &params, seed).unwrap();
        SuiteRun { opt, report }
    })
}

fn criterion_7(runs: &[SuiteRun]) -> Outcome {
    let terminated = runs.iter().filter(|r| r.report.terminated.is_some()).count();
    let in_range = runs
        .iter()
        .filter(|r| {
            r.report
                .value
                .is_some_and(|v| v >= r.opt / 2.0 - 0.15 && v <= r.opt + 0.1)
        })
        .count();
    let mut causes: HashMap<&str, usize> = HashMap::new();
    for r in runs {
        if let Some(t) = r.report.terminated {
            *causes.entry(t.name()).or_insert(0) += 1;
        }
    }
    let mut causes: Vec<_> = causes.into_iter().collect();
    causes.sort();
    let small_ok = runs[..50].iter().filter(|r| r.report.value.is_some()).count();
    let planted_ok = runs[50..].iter().filter(|r| r.report.value.is_some()).count();
    Outcome {
        pass: terminated <= 10 && in_range >= 85,
        detail: format!(
            "{in_range}/100 in range (need 85), {terminated}/100 terminated (max 10); causes {causes:?}; \
             values from {small_ok}/50 small and {planted_ok}/50 planted runs"
        ),
    }
}

fn criterion_8(runs: &[SuiteRun]) -> Outcome {
    let mut bad = Vec::new();
    for (i, r) in runs.iter().enumerate() {
        let audit = memory_audit(&r.report);
        if !audit.ok() || audit.caps_disabled {
            bad.push(format!("run {i}: {:?}", audit.violations));
        }
    }
    let ehat_peak = runs.iter().map(|r| r.report.peaks.ehat).max().unwrap_or(0);
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} runs audited, {} with violations; largest |Ê| {ehat_peak} {}",
            runs.len(),
            bad.len(),
            bad.first().cloned().unwrap_or_default()
        ),
    }
}

fn criterion_9() -> Outcome {
    let n = 1000;
    let m = (n as f64).powf(1.5).ceil() as usize;
    let params = ParameterSet::practical(0.25, 0.15, 32, 2, 8).unwrap();
    let seeds: Vec<u64> = (0..100).collect();
    let rows = par_map(&seeds, |&seed| {
        let g = generate(
            GeneratorKind::PlantedDicut { plant: 0.9 },
            n,
            m,
            &GeneratorParams::default(),
            9000 + seed,
        )
        .unwrap()
        .graph;
        let r = meta_estimate(&mut EdgeStream::new(&g), &params, seed).unwrap();
        (r.branch == Branch::Dense, r.value.unwrap_or(0.0))
    });
    let dense = rows.iter().filter(|r| r.0).count();
    let good = rows.iter().filter(|r| r.0 && r.1 >= 0.8).count();
    let low = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Outcome {
        pass: dense == 100 && good >= 90,
        detail: format!(
            "dense branch chosen {dense}/100, estimate ≥ 0.8 in {good}/100 (need 90); lowest {low:.4}; k = {}",
            params.thresholds(n).coreset_size
        ),
    }
}

fn report(id: &str, name: &str, start: Instant, o: &Outcome) -> bool {
    println!(
        "criterion {id} {name}: {} ({}; {:.1}s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed().as_secs_f64()
    );
    o.pass
}

fn main() {
    let mut all = true;
    let t = Instant::now();
    all &= report("1", "oracle identities", t, &criterion_1());
    let t = Instant::now();
    all &= report("2", "reduction fidelity", t, &reduction_trials(DegreeMode::Exact));
    let t = Instant::now();
    all &= report("3", "approximate degrees", t, &reduction_trials(DegreeMode::Perturbed));
    let t = Instant::now();
    all &= report("4", "type distribution", t, &criterion_4());
    let t = Instant::now();
    all &= report("5", "relabeling coupling", t, &criterion_5());
    let t = Instant::now();
    all &= report("6", "two-pass coupling", t, &criterion_6());
    let t = Instant::now();
    let runs = end_to_end_suite(true);
    all &= report("7", "end-to-end", t, &criterion_7(&runs));
    all &= report("8", "space accounting", t, &criterion_8(&runs));
    let t = Instant::now();
    let uncapped = end_to_end_suite(false);
    report("7", "diagnostic, caps off", t, &criterion_7(&uncapped));
    let t = Instant::now();
    all &= report("9", "dense branch", t, &criterion_9());
    if !all {
        std::process::exit(1);
    }
}
