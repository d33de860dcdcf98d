//! Command-line front end for the curve-evolution solver.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use curveflow::RedistMode;
use curveflow_cli::config::{parse_redistribution, ConfigOverlay, CurveSpec, ExperimentConfig};
use curveflow_cli::presets::{self, Preset};
use curveflow_cli::runner::{self, RunOutput};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "curveflow",
    version,
    about = "Evolve closed plane curves by curvature-driven flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by flags and/or a config file.
    ///
    /// Command-line flags override config-file keys, which override the
    /// built-in defaults (a unit circle under curve shortening).
    Run(RunArgs),
    /// Run a named preset: a published evolution figure or refinement table.
    Preset(PresetArgs),
    /// List the available presets.
    ListPresets,
}

#[derive(Args)]
struct RunArgs {
    /// Config file with `key = value` lines (`#` comments allowed).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run name; also the default output subdirectory.
    #[arg(long)]
    name: Option<String>,
    /// Flow model: mean_curvature, affine, anisotropic, surface_diffusion
    /// or willmore_backward.
    #[arg(long)]
    model: Option<String>,
    /// Curvature-diffusion weight (models with a free delta).
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Constant normal forcing (models with a free F).
    #[arg(long, allow_hyphen_values = true)]
    force: Option<f64>,
    /// Initial curve: ellipse[:a:b], circle[:radius] or spiral.
    #[arg(long, value_parser = CurveSpec::parse)]
    curve: Option<CurveSpec>,
    /// Number of grid points.
    #[arg(long)]
    n: Option<usize>,
    /// Time step.
    #[arg(long)]
    tau: Option<f64>,
    /// Number of time steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Tangential redistribution: autr, rll or none.
    #[arg(long, value_parser = parse_redistribution)]
    redistribution: Option<RedistMode>,
    /// Uniformity-forcing strength of the redistribution.
    #[arg(long)]
    kappa1: Option<f64>,
    /// Curve-shrinkage coupling of the redistribution.
    #[arg(long)]
    kappa2: Option<f64>,
    /// SOR relaxation parameter, in (0, 2).
    #[arg(long)]
    sor_relax: Option<f64>,
    /// SOR convergence tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// SOR sweep cap per solve (default: 10 n).
    #[arg(long)]
    max_iters: Option<usize>,
    /// Output directory (overrides $CURVEFLOW_OUT/<name>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a curve snapshot every this many steps.
    #[arg(long)]
    snapshot_every: Option<usize>,
    /// Write a metrics row every this many steps.
    #[arg(long)]
    metrics_every: Option<usize>,
    /// Also render the snapshots into curves.svg.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    svg: Option<bool>,
}

impl RunArgs {
    fn overlay(&self) -> ConfigOverlay {
        ConfigOverlay {
            name: self.name.clone(),
            model: self.model.clone(),
            delta: self.delta,
            force: self.force,
            curve: self.curve.clone(),
            n: self.n,
            tau: self.tau,
            steps: self.steps,
            redistribution: self.redistribution,
            kappa1: self.kappa1,
            kappa2: self.kappa2,
            sor_relax: self.sor_relax,
            tol: self.tol,
            max_iters: self.max_iters,
            out: self.out.clone(),
            snapshot_every: self.snapshot_every,
            metrics_every: self.metrics_every,
            svg: self.svg,
        }
    }
}

#[derive(Args)]
struct PresetArgs {
    /// Preset name (see `list-presets`).
    name: String,
    /// Divide step counts and output cadences by this factor for a quick,
    /// shorter-horizon rendition of the preset.
    #[arg(long, default_value_t = 1)]
    scale: usize,
    /// Output root (overrides $CURVEFLOW_OUT, default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run_cli() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run_cli() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Preset(args) => cmd_preset(args),
        Command::ListPresets => {
            for (name, summary) in presets::summaries() {
                println!("{name:<20} {summary}");
            }
            Ok(())
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::defaults("run");
    if let Some(path) = &args.config {
        ConfigOverlay::from_file(path)?.apply(&mut cfg);
    }
    args.overlay().apply(&mut cfg);
    let output = runner::run_and_write(&cfg)?;
    print_run_line(&cfg.name, &output);
    Ok(())
}

fn print_run_line(label: &str, output: &RunOutput) {
    let last = output.metrics.last().expect("at least the initial row");
    println!(
        "{label}: {} steps in {:.2?}, L = {:.6}, A = {:.6} -> {}",
        last.j,
        output.elapsed,
        last.length,
        last.area,
        runner::output_dir(&output.config).display()
    );
}

fn cmd_preset(args: PresetArgs) -> Result<()> {
    let mut preset = presets::build(&args.name, args.scale)?;

    // Group all runs of the preset under one directory.
    let root = args
        .out
        .or_else(|| std::env::var_os("CURVEFLOW_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let preset_dir = root.join(&preset.name);
    for run in &mut preset.runs {
        run.config.out = Some(if run.label.is_empty() {
            preset_dir.clone()
        } else {
            preset_dir.join(&run.label)
        });
    }

    let results = execute_runs(&preset);

    let mut failures = Vec::new();
    for (run, result) in preset.runs.iter().zip(&results) {
        let label = if run.label.is_empty() {
            preset.name.as_str()
        } else {
            run.label.as_str()
        };
        match result {
            Ok(output) => print_run_line(label, output),
            Err(e) => {
                eprintln!("{label}: {e:#}");
                failures.push(label.to_string());
            }
        }
    }

    if failures.is_empty() {
        if let Some(study) = &preset.study {
            let outputs: Vec<&RunOutput> = results
                .iter()
                .map(|r| r.as_ref().expect("no failures"))
                .collect();
            let table = refinement_table(&outputs, study.exact_area)?;
            print!("{table}");
            let path = preset_dir.join("table.txt");
            std::fs::write(&path, &table)
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(())
    } else {
        bail!("{} run(s) failed: {}", failures.len(), failures.join(", "))
    }
}

/// Runs every run of a preset, in parallel when the `parallel` feature is
/// enabled. Result order matches `preset.runs`.
fn execute_runs(preset: &Preset) -> Vec<Result<RunOutput>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        preset
            .runs
            .par_iter()
            .map(|run| runner::run_and_write(&run.config))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    preset
        .runs
        .iter()
        .map(|run| runner::run_and_write(&run.config))
        .collect()
}

/// Formats the grid-refinement table: per run the time-discrete L2 area
/// error against the exact area, and the order of convergence between
/// successive grids.
fn refinement_table(outputs: &[&RunOutput], exact_area: f64) -> Result<String> {
    let mut table = format!("{:>6} {:>10} {:>14} {:>7}\n", "n", "tau", "error", "eoc");
    let mut prev_error: Option<f64> = None;
    for output in outputs {
        let cfg = &output.config;
        let error = output.metrics.area_error(exact_area, cfg.tau);
        let eoc = match prev_error {
            Some(coarse) => format!("{:7.3}", curveflow::eoc(coarse, error)?),
            None => format!("{:>7}", "-"),
        };
        table.push_str(&format!(
            "{:>6} {:>10.2e} {:>14.6e} {eoc}\n",
            cfg.n, cfg.tau, error
        ));
        prev_error = Some(error);
    }
    Ok(table)
}
