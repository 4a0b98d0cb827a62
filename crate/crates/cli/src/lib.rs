//! Command-line front end: instance generation, estimation, property
//! suites, parameter sweeps and plots.
//!
//! Exit codes: 0 on success, 1 when every trial terminated early or a
//! suite failed, 2 on bad usage.

pub mod config;
pub mod error;
pub mod estimate;
pub mod experiment;
pub mod plot;
pub mod validate;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dicut_core::graph::{generate, read_edge_list, write_edge_list, GeneratorKind, GeneratorParams};
use dicut_core::stream::EstimateReport;

use config::Settings;
pub use error::CliError;
use estimate::{run_trials, Estimator};
use experiment::{run_experiment, ExperimentSpec};
use validate::{run_suite, Suite};

#[derive(Debug, Parser)]
#[command(name = "dicut-stream", version, about = "Streaming Max-DICUT estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance in edge-list form.
    Generate(GenerateArgs),
    /// Run an estimator on an edge-list file, one CSV row per trial.
    Estimate(EstimateArgs),
    /// Run fixed-seed property suites: reduction, types, local, stream or all.
    Validate {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Sweep a grid described by a TOML spec file.
    Experiment {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render ratio-versus-epsilon curves from an experiment table.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// uniform, planted or power-law.
    #[arg(long, default_value = "planted")]
    pub kind: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub plant: f64,
    #[arg(long, default_value_t = 2.5)]
    pub exponent: f64,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// two-pass, three-pass, meta, exact or coreset.
    #[arg(long)]
    pub estimator: Option<String>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// practical or paper.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub c: Option<u32>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file of parameter keys; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl EstimateArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        let flags = Settings {
            epsilon: self.epsilon,
            mode: self.mode.clone(),
            beta: self.beta,
            d: self.d,
            ell: self.ell,
            c: self.c,
            estimator: self.estimator.clone(),
            trials: self.trials,
            seed: self.seed,
            ..Default::default()
        };
        Ok(file.overlay(&flags))
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let kind = match a.kind.as_str() {
        "uniform" => GeneratorKind::UniformRandom,
        "planted" => GeneratorKind::PlantedDicut { plant: a.plant },
        "power-law" => GeneratorKind::PowerLaw { exponent: a.exponent },
        other => return Err(CliError::Usage(format!("unknown generator {other:?}"))),
    };
    let params = GeneratorParams {
        max_degree: a.max_degree,
    };
    let g = generate(kind, a.n, a.m, &params, a.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = Vec::new();
    write_edge_list(&g.graph, &[], &mut text)?;
    let planted = g
        .planted
        .as_ref()
        .map(|(_, v)| format!(" planted={:.6}", v.as_f64()))
        .unwrap_or_default();
    let meta = format!("n={} m={}{planted}\n", g.graph.n(), g.graph.m());
    match &a.out {
        Some(p) => {
            std::fs::write(p, &text)?;
            out.write_all(meta.as_bytes())?;
        }
        None => {
            out.write_all(&text)?;
            eprint!("{meta}");
        }
    }
    Ok(0)
}

pub fn cmd_estimate(a: &EstimateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = a.settings()?;
    let params = settings.to_params()?;
    let estimator: Estimator = settings.estimator.as_deref().unwrap_or("meta").parse()?;
    let trials = settings.trials.unwrap_or(1);
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let parsed = read_edge_list(&a.input)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.input.display())))?
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.input.display())))?;
    let rows = run_trials(&parsed.graph, estimator, &params, trials, settings.seed.unwrap_or(0))?;
    let mut text = format!("{}\n", EstimateReport::CSV_HEADER);
    for r in &rows {
        text.push_str(&r.csv_row());
        text.push('\n');
    }
    emit(a.out.as_deref(), &text, out)?;
    Ok(if rows.iter().all(|r| r.terminated.is_some()) { 1 } else { 0 })
}

pub fn cmd_validate(suite: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let suite: Suite = suite.parse()?;
    let checks = run_suite(suite)?;
    let mut failed = 0;
    for c in &checks {
        failed += usize::from(!c.passed);
        writeln!(
            out,
            "{}/{}: {} ({})",
            c.suite,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.stats
        )?;
    }
    writeln!(out, "{} checks, {failed} failed", checks.len())?;
    Ok(if failed == 0 { 0 } else { 1 })
}

pub fn cmd_experiment(spec: &Path, csv_out: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = ExperimentSpec::from_file(spec)?;
    let rows = run_experiment(&spec);
    emit(csv_out, &experiment::to_csv(&rows), out)?;
    let summary = experiment::summary(&rows);
    if csv_out.is_some() {
        out.write_all(summary.as_bytes())?;
    } else {
        eprint!("{summary}");
    }
    Ok(if rows.iter().all(|r| r.status != "ok") { 1 } else { 0 })
}

pub fn cmd_plot(input: &Path, svg_out: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let csv = std::fs::read_to_string(input)
        .map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
    let svg = plot::render_svg(&plot::ratio_series(&csv)?);
    emit(svg_out, &svg, out)?;
    Ok(0)
}

/// Parses `args` (program name first) and runs the verb. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Estimate(a) => cmd_estimate(a, out),
        Command::Validate { suite } => cmd_validate(suite, out),
        Command::Experiment { spec, out: csv } => cmd_experiment(spec, csv.as_deref(), out),
        Command::Plot { input, out: svg } => cmd_plot(input, svg.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
