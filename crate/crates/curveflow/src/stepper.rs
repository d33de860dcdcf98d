//! One semi-implicit time step of the curve evolution.
//!
//! Geometry, velocities and matrix coefficients are all evaluated on the
//! previous time level; only the new positions are implicit. Each step
//! assembles one cyclic penta-diagonal matrix (tri-diagonal when the
//! curvature-diffusion weight `delta` is zero) shared by the x and y
//! coordinate solves, and runs SOR warm-started from the previous positions.
//!
//! If SOR hits its iteration cap the step is retried once with the time step
//! halved; a second failure with a large iterate difference aborts with
//! [`Error::SolverDiverged`].

use crate::curve::{compute_geometry, Curve, GeometryCache};
use crate::error::{Error, Result};
use crate::flow::{eval_beta, eval_phi, normal_vector, FlowSpec};
use crate::parallel::map_indices;
use crate::redistribution::{alpha_update, curve_average_kbeta, RedistParams};
use crate::solver::{diagonal_dominance_violations, sor_solve, BandSystem};
use crate::vec2::Vec2;

/// Time-stepping parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepParams {
    /// Time step.
    pub tau: f64,
    /// SOR relaxation factor in (0, 2); 1 is Gauss-Seidel.
    pub sor_relax: f64,
    /// Stopping tolerance on the max-norm difference of SOR iterates.
    pub tol: f64,
    /// Sweep cap per solve; defaults to `10 * n` when `None`.
    pub max_iters: Option<usize>,
}

impl StepParams {
    pub fn new(tau: f64) -> Self {
        StepParams {
            tau,
            sor_relax: 1.6,
            tol: 1e-10,
            max_iters: None,
        }
    }

    pub fn max_iters_for(&self, n: usize) -> usize {
        self.max_iters.unwrap_or(10 * n)
    }
}

/// Diagnostics recorded by [`step`].
#[derive(Clone, Copy, Debug)]
pub struct StepStats {
    /// Time step actually taken (half of the requested one after a retry).
    pub tau_used: f64,
    /// Whether the solve had to be retried with a halved time step.
    pub retried: bool,
    /// SOR sweeps, the maximum over the x and y solves.
    pub sor_iterations: usize,
    /// Max-norm residual of the accepted solution over both coordinates.
    pub residual: f64,
    /// Residual relative to the max-norm of the right-hand sides.
    pub residual_rel: f64,
    /// Rows without diagonal dominance in the accepted system.
    pub dominance_violations: usize,
    /// Curve average of `k * beta` (the length-shrinkage rate).
    pub kbeta_avg: f64,
    /// `|alpha_n|`: how far the tangential velocity fails to close around
    /// the curve. Zero up to rounding by construction.
    pub alpha_closure: f64,
    /// Closure defect relative to the pre-cancellation magnitude of the
    /// accumulated recurrence terms.
    pub alpha_closure_rel: f64,
}

/// Tangential advection velocity per dual volume:
/// `v_i = ((3 delta / 2)(k_{i+1}^2 - k_i^2) + (phi_{i+1} - phi_i)) / q_i - alpha_i`.
///
/// `phi` must have length `n + 1` (slot `t` holding `phi_{t+1}`, as returned
/// by [`eval_phi`]) and `alpha` length `n + 1` as returned by
/// [`alpha_update`].
pub fn advection_velocity(
    geom: &GeometryCache,
    phi: &[f64],
    alpha: &[f64],
    delta: f64,
) -> Vec<f64> {
    let n = geom.n();
    debug_assert_eq!(phi.len(), n + 1);
    debug_assert_eq!(alpha.len(), n + 1);
    map_indices(n, |p| {
        let k = geom.k[p];
        let k_next = geom.k_at(p as isize + 2); // k_{i+1} for i = p + 1
        (1.5 * delta * (k_next * k_next - k * k) + (phi[p + 1] - phi[p])) / geom.q[p] - alpha[p + 1]
    })
}

/// Assembles the implicit system for the new positions. Returns the matrix
/// and the two right-hand sides (x and y coordinates):
/// `F_i = (q_i / tau) x_i + q_i F(x_i) N((nu_i + nu_{i+1}) / 2)`.
///
/// Diagonal entries are defined by the row-sum identity
/// `C_i = q_i / tau - (A_i + B_i + D_i + E_i)`, so the matrix applied to a
/// constant vector reproduces `q_i / tau` times that constant; this is what
/// makes the scheme translation-invariant.
pub fn assemble_system(
    geom: &GeometryCache,
    flow: &FlowSpec,
    v: &[f64],
    phi: &[f64],
    prev: &Curve,
    tau: f64,
) -> (BandSystem, Vec<f64>, Vec<f64>) {
    let n = geom.n();
    debug_assert_eq!(v.len(), n);
    debug_assert_eq!(phi.len(), n + 1);
    let delta = flow.delta;

    let rows: Vec<[f64; 7]> = map_indices(n, |p| {
        let i = p as isize + 1;
        let r_im1 = geom.r_at(i - 1);
        let r_i = geom.r[p];
        let r_ip1 = geom.r_at(i + 1);
        let r_ip2 = geom.r_at(i + 2);
        let q_im1 = geom.q_at(i - 1);
        let q_i = geom.q[p];
        let q_ip1 = geom.q_at(i + 1);

        let a = delta / (r_i * q_im1 * r_im1);
        let e = delta / (r_ip1 * q_ip1 * r_ip2);
        let b = -delta
            * (1.0 / (r_i * q_im1 * r_im1)
                + 1.0 / (r_i * r_i * q_im1)
                + 1.0 / (r_i * r_i * q_i)
                + 1.0 / (r_i * q_i * r_ip1))
            - phi[p] / r_i
            - 0.5 * v[p];
        let d = -delta
            * (1.0 / (r_i * q_i * r_ip1)
                + 1.0 / (r_ip1 * r_ip1 * q_i)
                + 1.0 / (r_ip1 * r_ip1 * q_ip1)
                + 1.0 / (r_ip1 * q_ip1 * r_ip2))
            - phi[p + 1] / r_ip1
            + 0.5 * v[p];
        let c = q_i / tau - (a + b + d + e);

        let x_prev = prev.point(p);
        let nmid = normal_vector(0.5 * (geom.nu_at(i) + geom.nu_at(i + 1)));
        let forcing = q_i * flow.force_at(x_prev);
        let w = q_i / tau;
        [
            a,
            b,
            c,
            d,
            e,
            w * x_prev.x + forcing * nmid.x,
            w * x_prev.y + forcing * nmid.y,
        ]
    });

    let mut sub2 = Vec::with_capacity(n);
    let mut sub1 = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut sup1 = Vec::with_capacity(n);
    let mut sup2 = Vec::with_capacity(n);
    let mut rhs_x = Vec::with_capacity(n);
    let mut rhs_y = Vec::with_capacity(n);
    for row in rows {
        sub2.push(row[0]);
        sub1.push(row[1]);
        diag.push(row[2]);
        sup1.push(row[3]);
        sup2.push(row[4]);
        rhs_x.push(row[5]);
        rhs_y.push(row[6]);
    }
    (BandSystem::new(sub2, sub1, diag, sup1, sup2), rhs_x, rhs_y)
}

/// Advances the curve by one time step.
///
/// Pipeline: rebuild geometry from `curve`, evaluate the normal velocity and
/// the tangential redistribution velocity, assemble the implicit system and
/// solve it for both coordinates with SOR warm-started from the previous
/// positions. On success returns the new curve and diagnostics.
pub fn step(
    curve: &Curve,
    flow: &FlowSpec,
    redist: &RedistParams,
    params: &StepParams,
) -> Result<(Curve, StepStats)> {
    assert!(
        params.tau > 0.0 && params.tau.is_finite(),
        "time step must be positive"
    );
    let n = curve.n();
    let geom = compute_geometry(curve)?;
    let beta = eval_beta(&geom, flow, curve);
    let kbeta_avg = curve_average_kbeta(&geom, &beta);
    let alpha = alpha_update(&geom, &beta, kbeta_avg, redist);
    let alpha_closure = alpha[n].abs();
    // Normalize by the pre-cancellation magnitude of the accumulated terms:
    // on symmetric grids the increments themselves cancel to rounding noise
    // (alpha = 0), which would make an increment-based ratio meaningless.
    let omega = redist.omega(kbeta_avg);
    let target = geom.length / n as f64;
    let increment_scale: f64 = (0..n)
        .map(|p| {
            let r = geom.r[p];
            r * (geom.k[p] * beta[p]).abs() + r * kbeta_avg.abs() + (target + r) * omega.abs()
        })
        .sum();
    let alpha_closure_rel = if increment_scale > 0.0 {
        alpha_closure / increment_scale
    } else {
        0.0
    };
    let phi = eval_phi(&geom, flow);
    let v = advection_velocity(&geom, &phi, &alpha, flow.delta);

    let x0: Vec<f64> = curve.points().iter().map(|pt| pt.x).collect();
    let y0: Vec<f64> = curve.points().iter().map(|pt| pt.y).collect();
    let max_iters = params.max_iters_for(n);

    let mut tau_used = params.tau;
    let mut retried = false;
    let (sys, rhs_x, rhs_y, out_x, out_y) = loop {
        let (sys, rhs_x, rhs_y) = assemble_system(&geom, flow, &v, &phi, curve, tau_used);
        let out_x = sor_solve(&sys, &rhs_x, &x0, params.sor_relax, params.tol, max_iters)?;
        let out_y = sor_solve(&sys, &rhs_y, &y0, params.sor_relax, params.tol, max_iters)?;
        if out_x.converged && out_y.converged {
            break (sys, rhs_x, rhs_y, out_x, out_y);
        }
        if !retried {
            retried = true;
            tau_used *= 0.5;
            // debug, not warn: degenerating grids can retry on nearly every
            // step, and the driver is better placed to aggregate the count
            log::debug!(
                "SOR hit the {max_iters}-sweep cap; retrying the step with tau = {tau_used:e}"
            );
            continue;
        }
        let diff = out_x.last_diff.max(out_y.last_diff);
        if !(diff <= params.tol * 1e3) {
            return Err(Error::SolverDiverged {
                iterations: max_iters,
                diff,
                tol: params.tol,
            });
        }
        // capped but close to converged: accept the slow solve
        break (sys, rhs_x, rhs_y, out_x, out_y);
    };

    let residual = sys
        .residual_inf(&out_x.x, &rhs_x)
        .max(sys.residual_inf(&out_y.x, &rhs_y));
    let rhs_scale = rhs_x
        .iter()
        .chain(&rhs_y)
        .fold(0.0_f64, |m, &v| m.max(v.abs()));
    let residual_rel = if rhs_scale > 0.0 {
        residual / rhs_scale
    } else {
        residual
    };

    let points: Vec<Vec2> = out_x
        .x
        .iter()
        .zip(&out_y.x)
        .map(|(&x, &y)| Vec2::new(x, y))
        .collect();
    for (p, pt) in points.iter().enumerate() {
        if !pt.is_finite() {
            return Err(Error::NonFinite(p));
        }
    }
    let next = Curve::new(points)?;

    let stats = StepStats {
        tau_used,
        retried,
        sor_iterations: out_x.iterations.max(out_y.iterations),
        residual,
        residual_rel,
        dominance_violations: diagonal_dominance_violations(&sys),
        kbeta_avg,
        alpha_closure,
        alpha_closure_rel,
    };
    Ok((next, stats))
}
