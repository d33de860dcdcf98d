//! Experiment execution and on-disk output.
//!
//! A run advances the curve `steps` times, recording scalar diagnostics and
//! curve snapshots at the configured cadences. Setup problems (a bad curve
//! or flow) fail immediately; a solver failure mid-run is captured in the
//! output so the partial results can still be written and inspected.

use crate::config::ExperimentConfig;
use crate::csv;
use crate::svg;
use anyhow::{bail, Context, Result};
use curveflow::{
    compute_geometry, polygon_area, step, theta_max, uniformity_deviation, Curve, RunMetrics,
    StepRecord, StepStats,
};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

/// Everything produced by one run.
#[derive(Debug)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub metrics: RunMetrics,
    /// `(step index, curve)` snapshots, in step order.
    pub snapshots: Vec<(usize, Curve)>,
    /// Per-step solver statistics for the recorded metrics rows (`j >= 1`).
    pub stats: Vec<StepStats>,
    /// Step index and error of an aborted run; `None` when all steps ran.
    pub error: Option<(usize, curveflow::Error)>,
    /// How many steps needed the halved-time-step rescue (all steps, not
    /// just recorded ones).
    pub retried_steps: usize,
    pub elapsed: Duration,
}

impl RunOutput {
    pub fn completed(&self) -> bool {
        self.error.is_none()
    }
}

/// Runs the experiment. Returns `Err` only for setup problems; solver
/// failures during stepping are reported through [`RunOutput::error`].
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let flow = cfg.flow()?;
    let redist = cfg.redist_params()?;
    let params = cfg.step_params();
    let snapshot_every = cfg.effective_snapshot_every();

    let mut curve = cfg
        .curve
        .build(cfg.n)
        .with_context(|| format!("cannot build initial curve {}", cfg.curve.describe()))?;

    let mut metrics = RunMetrics::new();
    let mut snapshots = Vec::new();
    let mut stats = Vec::new();
    let mut error = None;
    let mut retried_steps = 0usize;

    let record_row = |curve: &Curve, j: usize, kbeta: f64, sor: usize| -> Result<StepRecord> {
        let geom = compute_geometry(curve)?;
        Ok(StepRecord {
            j,
            t: j as f64 * cfg.tau,
            length: geom.length,
            area: polygon_area(curve),
            kbeta_avg: kbeta,
            uniformity: uniformity_deviation(&geom),
            theta_max: theta_max(&geom),
            sor_iterations: sor,
        })
    };

    let started = Instant::now();
    metrics.push(record_row(&curve, 0, 0.0, 0)?);
    snapshots.push((0, curve.clone()));

    for j in 1..=cfg.steps {
        match step(&curve, &flow, &redist, &params) {
            Ok((next, step_stats)) => {
                curve = next;
                retried_steps += step_stats.retried as usize;
                let last = j == cfg.steps;
                if j % cfg.metrics_every == 0 || last {
                    metrics.push(record_row(
                        &curve,
                        j,
                        step_stats.kbeta_avg,
                        step_stats.sor_iterations,
                    )?);
                    stats.push(step_stats);
                }
                if j % snapshot_every == 0 || last {
                    snapshots.push((j, curve.clone()));
                }
            }
            Err(e) => {
                error = Some((j, e));
                break;
            }
        }
    }

    if retried_steps > 0 {
        let attempted = error.as_ref().map_or(cfg.steps, |(j, _)| *j);
        log::warn!(
            "{}: {retried_steps} of {attempted} attempted steps needed a halved-time-step rescue",
            cfg.name
        );
    }

    Ok(RunOutput {
        config: cfg.clone(),
        metrics,
        snapshots,
        stats,
        error,
        retried_steps,
        elapsed: started.elapsed(),
    })
}

/// Resolves the output directory for a run: the explicit `out` setting, or
/// `$CURVEFLOW_OUT/<name>`, or `out/<name>`.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    match &cfg.out {
        Some(dir) => dir.clone(),
        None => {
            let root = std::env::var_os("CURVEFLOW_OUT")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("out"));
            root.join(&cfg.name)
        }
    }
}

/// Writes `metrics.csv`, one `curve_{j}.csv` per snapshot and, when enabled,
/// a `curves.svg` overlay into `dir`.
pub fn write_output(output: &RunOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    csv::write_metrics_csv(&output.metrics, &dir.join("metrics.csv"))?;
    for (j, curve) in &output.snapshots {
        csv::write_curve_csv(curve, &dir.join(format!("curve_{j}.csv")))?;
    }
    if output.config.svg {
        svg::write_svg(&output.snapshots, &dir.join("curves.svg"))?;
    }
    Ok(())
}

/// Runs an experiment and writes its output directory. Partial results of an
/// aborted run are written before the error is reported.
pub fn run_and_write(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let output = run(cfg)?;
    let dir = output_dir(cfg);
    write_output(&output, &dir)?;
    log::info!(
        "{}: {} steps in {:.2?} -> {}",
        cfg.name,
        output.metrics.last().map_or(0, |r| r.j),
        output.elapsed,
        dir.display()
    );
    if let Some((j, e)) = &output.error {
        bail!(
            "{}: aborted at step {j}: {e} (partial output in {})",
            cfg.name,
            dir.display()
        );
    }
    Ok(output)
}
