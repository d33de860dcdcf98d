//! Run-level diagnostics: per-step records, the discrete-in-time area error
//! norm used by the refinement studies, convergence orders and grid
//! uniformity measures.

use crate::curve::GeometryCache;
use crate::error::{Error, Result};

/// Snapshot of scalar diagnostics after step `j` (row `j = 0` describes the
/// initial curve, with the solver fields zeroed).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub j: usize,
    /// Nominal time `j * tau` of the requested step size (a one-off halved
    /// retry does not shift the nominal time line).
    pub t: f64,
    /// Total curve length.
    pub length: f64,
    /// Signed enclosed area.
    pub area: f64,
    /// Curve average of `k * beta` from the step that produced this state.
    pub kbeta_avg: f64,
    /// `max_i |n r_i / L - 1|`.
    pub uniformity: f64,
    /// `max_i |ln(n r_i / L)|`.
    pub theta_max: f64,
    /// SOR sweeps of the producing step.
    pub sor_iterations: usize,
}

/// Diagnostics for a whole run, ordered by step index.
#[derive(Clone, Debug, Default)]
pub struct RunMetrics {
    pub records: Vec<StepRecord>,
}

impl RunMetrics {
    pub fn new() -> Self {
        RunMetrics::default()
    }

    pub fn push(&mut self, record: StepRecord) {
        if let Some(last) = self.records.last() {
            debug_assert!(record.j > last.j, "records must be pushed in step order");
        }
        self.records.push(record);
    }

    pub fn last(&self) -> Option<&StepRecord> {
        self.records.last()
    }

    /// Time-discrete L2 area error against a constant exact area, taken
    /// over all recorded steps with `j >= 1`.
    pub fn area_error(&self, exact_area: f64, tau: f64) -> f64 {
        let areas: Vec<f64> = self
            .records
            .iter()
            .filter(|rec| rec.j >= 1)
            .map(|rec| rec.area)
            .collect();
        area_error_norm(&areas, exact_area, tau)
    }
}

/// `(sum_j (A_j - exact)^2 * tau)^(1/2)`: the time-discrete L2 norm of the
/// area error over the given per-step areas.
pub fn area_error_norm(areas: &[f64], exact_area: f64, tau: f64) -> f64 {
    let sum: f64 = areas
        .iter()
        .map(|&a| {
            let e = a - exact_area;
            e * e
        })
        .sum();
    (sum * tau).sqrt()
}

/// Experimental order of convergence between two errors measured at grid
/// sizes differing by a factor of two: `log2(coarse / fine)`.
pub fn eoc(coarse: f64, fine: f64) -> Result<f64> {
    if !(coarse > 0.0 && fine > 0.0) {
        return Err(Error::NonPositiveError { coarse, fine });
    }
    Ok((coarse / fine).log2())
}

/// Worst relative deviation of the segment lengths from uniform,
/// `max_i |n r_i / L - 1|`; zero for a perfectly uniform grid.
pub fn uniformity_deviation(geom: &GeometryCache) -> f64 {
    let scale = geom.n() as f64 / geom.length;
    geom.r
        .iter()
        .fold(0.0_f64, |m, &r| m.max((scale * r - 1.0).abs()))
}

/// Logarithmic version of the uniformity deviation, `max_i |ln(n r_i / L)|`,
/// which weights compression and stretching symmetrically.
pub fn theta_max(geom: &GeometryCache) -> f64 {
    let scale = geom.n() as f64 / geom.length;
    geom.r
        .iter()
        .fold(0.0_f64, |m, &r| m.max((scale * r).ln().abs()))
}
