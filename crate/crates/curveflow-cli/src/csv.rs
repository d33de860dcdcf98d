//! CSV output for metrics and curve snapshots.
//!
//! Floats are written with 17 significant digits so that reading a file back
//! reproduces the original `f64` values bitwise; files use `\n` line endings
//! on every platform.

use anyhow::{bail, Context, Result};
use curveflow::{Curve, RunMetrics, Vec2};
use std::path::Path;

/// Shortest-guaranteed-round-trip formatting for `f64`.
fn fmt(value: f64) -> String {
    format!("{value:.16e}")
}

/// Writes the per-step diagnostics table.
///
/// Columns: step index `j`, nominal time `t`, curve length `L`, enclosed
/// area `A`, curve-averaged `k * beta` `B`, worst relative segment-length
/// deviation `uniformity`, its logarithmic variant `theta_max`, and the SOR
/// sweep count `sor_iters`.
pub fn write_metrics_csv(metrics: &RunMetrics, path: &Path) -> Result<()> {
    let mut text = String::from("j,t,L,A,B,uniformity,theta_max,sor_iters\n");
    for rec in &metrics.records {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            rec.j,
            fmt(rec.t),
            fmt(rec.length),
            fmt(rec.area),
            fmt(rec.kbeta_avg),
            fmt(rec.uniformity),
            fmt(rec.theta_max),
            rec.sor_iterations,
        ));
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes a curve snapshot with 1-based point indices.
pub fn write_curve_csv(curve: &Curve, path: &Path) -> Result<()> {
    let mut text = String::from("i,x,y\n");
    for (p, point) in curve.points().iter().enumerate() {
        text.push_str(&format!("{},{},{}\n", p + 1, fmt(point.x), fmt(point.y)));
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Reads a curve snapshot written by [`write_curve_csv`].
pub fn read_curve_csv(path: &Path) -> Result<Curve> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("i,x,y") => {}
        other => bail!(
            "{}: expected header `i,x,y`, got {:?}",
            path.display(),
            other
        ),
    }
    let mut points = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let [_, x, y] = fields.as_slice() else {
            bail!("{}:{}: expected 3 fields", path.display(), lineno + 2);
        };
        let parse = |s: &str| -> Result<f64> {
            s.parse()
                .with_context(|| format!("{}:{}: bad number `{s}`", path.display(), lineno + 2))
        };
        points.push(Vec2::new(parse(x)?, parse(y)?));
    }
    Curve::new(points).with_context(|| format!("{}: invalid curve", path.display()))
}
