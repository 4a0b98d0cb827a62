//! Parameter sweeps over generated instances.

use std::collections::BTreeMap;
use std::path::Path;

use dicut_core::graph::{generate, max_dicut_exact_with_cap, GeneratorKind, GeneratorParams};
use serde::Deserialize;

use crate::config::Settings;
use crate::error::CliError;
use crate::estimate::{run_trials, Estimator};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "planted")]
    pub generator: String,
    #[serde(default = "full_plant")]
    pub plant: f64,
    #[serde(default = "default_exponent")]
    pub exponent: f64,
    pub max_degree: Option<usize>,
    pub n: Vec<usize>,
    /// Edges per vertex: `m = round(density·n)`.
    pub density: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub estimator: Vec<String>,
    #[serde(default)]
    pub params: Settings,
}

fn one() -> usize {
    1
}

fn planted() -> String {
    "planted".into()
}

fn full_plant() -> f64 {
    1.0
}

fn default_exponent() -> f64 {
    2.5
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let spec: Self =
            toml::from_str(text).map_err(|e| CliError::Usage(format!("experiment: {}", e.message())))?;
        if spec.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        for e in &spec.estimator {
            e.parse::<Estimator>()?;
        }
        spec.kind()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("experiment {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    fn kind(&self) -> Result<GeneratorKind, CliError> {
        match self.generator.as_str() {
            "uniform" => Ok(GeneratorKind::UniformRandom),
            "planted" => Ok(GeneratorKind::PlantedDicut { plant: self.plant }),
            "power-law" => Ok(GeneratorKind::PowerLaw {
                exponent: self.exponent,
            }),
            other => Err(CliError::Usage(format!("unknown generator {other:?}"))),
        }
    }
}

/// One grid cell's aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRow {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub estimator: String,
    pub trials: usize,
    pub completed: usize,
    pub mean: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub opt: Option<f64>,
    pub opt_source: &'static str,
    pub termination_rate: f64,
    pub peak_vprime: usize,
    pub peak_eprime: usize,
    pub peak_ehat: usize,
    pub status: String,
}

impl CellRow {
    pub const CSV_HEADER: &'static str = "n,m,epsilon,estimator,trials,completed,mean,min,max,opt,opt_source,ratio,termination_rate,peak_vprime,peak_eprime,peak_ehat,status";

    pub fn ratio(&self) -> Option<f64> {
        match (self.mean, self.opt) {
            (Some(v), Some(o)) if o > 0.0 => Some(v / o),
            _ => None,
        }
    }

    pub fn csv_row(&self) -> String {
        let f = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{:.4},{},{},{},{}",
            self.n,
            self.m,
            self.epsilon,
            self.estimator,
            self.trials,
            self.completed,
            f(self.mean),
            f(self.min),
            f(self.max),
            f(self.opt),
            self.opt_source,
            f(self.ratio()),
            self.termination_rate,
            self.peak_vprime,
            self.peak_eprime,
            self.peak_ehat,
            self.status
        )
    }
}

fn failed_cell(n: usize, m: usize, epsilon: f64, estimator: &str, trials: usize, err: &CliError) -> CellRow {
    CellRow {
        n,
        m,
        epsilon,
        estimator: estimator.to_string(),
        trials,
        completed: 0,
        mean: None,
        min: None,
        max: None,
        opt: None,
        opt_source: "none",
        termination_rate: 0.0,
        peak_vprime: 0,
        peak_eprime: 0,
        peak_ehat: 0,
        status: format!("failed: {}", err.to_string().replace(',', ";")),
    }
}

fn run_cell(spec: &ExperimentSpec, n: usize, m: usize, epsilon: f64, estimator: &str) -> Result<CellRow, CliError> {
    let est: Estimator = estimator.parse()?;
    let mut settings = spec.params.clone();
    settings.epsilon = Some(epsilon);
    let params = settings.to_params()?;
    let params_graph = GeneratorParams {
        max_degree: spec.max_degree,
    };
    let generated = generate(spec.kind()?, n, m, &params_graph, spec.seed)?;
    let g = &generated.graph;
    let active = g.degrees().iter().filter(|&&d| d > 0).count();
    let (opt, opt_source) = if m > 0 && active <= params.exact_cap {
        (Some(max_dicut_exact_with_cap(g, params.exact_cap)?.value.as_f64()), "oracle")
    } else if let Some((_, v)) = &generated.planted {
        (Some(v.as_f64()), "planted")
    } else {
        (None, "none")
    };
    let rows = run_trials(g, est, &params, spec.trials, spec.seed)?;
    let values: Vec<f64> = rows.iter().filter_map(|r| r.value).collect();
    let terminated = rows.iter().filter(|r| r.terminated.is_some()).count();
    let mean = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
    Ok(CellRow {
        n,
        m,
        epsilon,
        estimator: estimator.to_string(),
        trials: spec.trials,
        completed: values.len(),
        mean,
        min: values.iter().copied().reduce(f64::min),
        max: values.iter().copied().reduce(f64::max),
        opt,
        opt_source,
        termination_rate: terminated as f64 / spec.trials as f64,
        peak_vprime: rows.iter().map(|r| r.peaks.vprime).max().unwrap_or(0),
        peak_eprime: rows
            .iter()
            .map(|r| r.peaks.eprime.max(r.peaks.edoubleprime))
            .max()
            .unwrap_or(0),
        peak_ehat: rows.iter().map(|r| r.peaks.ehat).max().unwrap_or(0),
        status: "ok".into(),
    })
}

/// Runs every cell of the grid. A failing cell is reported in its row and
/// the sweep continues.
pub fn run_experiment(spec: &ExperimentSpec) -> Vec<CellRow> {
    let mut rows = Vec::new();
    for &n in &spec.n {
        for &density in &spec.density {
            let m = (density * n as f64).round() as usize;
            for &epsilon in &spec.epsilon {
                for estimator in &spec.estimator {
                    rows.push(
                        run_cell(spec, n, m, epsilon, estimator).unwrap_or_else(|e| {
                            failed_cell(n, m, epsilon, estimator, spec.trials, &e)
                        }),
                    );
                }
            }
        }
    }
    rows
}

pub fn to_csv(rows: &[CellRow]) -> String {
    let mut out = String::from(CellRow::CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Mean ratio and termination rate per estimator.
pub fn summary(rows: &[CellRow]) -> String {
    let mut by: BTreeMap<&str, (Vec<f64>, f64, usize, usize)> = BTreeMap::new();
    for r in rows {
        let e = by.entry(r.estimator.as_str()).or_default();
        if let Some(x) = r.ratio() {
            e.0.push(x);
        }
        e.1 += r.termination_rate;
        e.2 += 1;
        e.3 += usize::from(r.status != "ok");
    }
    let failed: usize = by.values().map(|v| v.3).sum();
    let mut out = format!("{} cells, {failed} failed\n", rows.len());
    for (name, (ratios, term, cells, _)) in by {
        let mean = if ratios.is_empty() {
            "n/a".to_string()
        } else {
            format!("{:.4}", ratios.iter().sum::<f64>() / ratios.len() as f64)
        };
        out.push_str(&format!(
            "{name}: mean ratio {mean}, termination rate {:.4}\n",
            term / cells as f64
        ));
    }
    out
}
