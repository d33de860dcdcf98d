//! Solver for the evolution of closed plane curves under normal velocities of
//! the form `beta = -delta * d^2 k / ds^2 + b(k, nu) + F(x)`, where `k` is the
//! curvature, `nu` the tangent angle and `F` an external forcing term.
//!
//! The curve is tracked by a cyclic chain of grid points (a Lagrangian
//! description). Each time step
//!
//! 1. rebuilds the discrete geometry (segment lengths, curvatures, tangent
//!    angles) from the current polygon ([`compute_geometry`]),
//! 2. evaluates the normal velocity and a tangential velocity that drives the
//!    grid towards an asymptotically uniform distribution
//!    ([`flow`], [`redistribution`]),
//! 3. assembles a cyclic penta-diagonal system for the new positions and
//!    solves it with SOR ([`stepper`], [`solver`]).
//!
//! The tangential term only reparametrizes the curve; the shapes produced
//! with and without it agree up to discretization error, but without it the
//! grid degenerates for all but the mildest flows.
//!
//! Element-wise loops run on rayon when the `parallel` feature (default) is
//! enabled and the problem is large enough; see [`parallel`]. Results are
//! bitwise identical in both modes.

pub mod curve;
pub mod error;
pub mod flow;
pub mod initial;
pub mod metrics;
pub mod parallel;
pub mod redistribution;
pub mod solver;
pub mod stepper;
pub mod vec2;

pub use curve::{compute_geometry, polygon_area, Curve, GeometryCache, MIN_POINTS};
pub use error::{Error, Result};
pub use flow::{
    builtin_flow, eval_beta, eval_phi, normal_vector, tangent_vector, FlowParams, FlowSpec,
    ForceField,
};
pub use initial::{ellipse_points, make_circle, make_ellipse, make_spiral, spiral_point};
pub use metrics::{area_error_norm, eoc, theta_max, uniformity_deviation, RunMetrics, StepRecord};
pub use parallel::{min_parallel_len, set_min_parallel_len, DEFAULT_MIN_PARALLEL_LEN};
pub use redistribution::{alpha_update, curve_average_kbeta, RedistMode, RedistParams};
pub use solver::{
    dense_matrix, dense_oracle_solve, diagonal_dominance_violations, sor_solve, BandSystem,
    SorOutcome,
};
pub use stepper::{advection_velocity, assemble_system, step, StepParams, StepStats};
pub use vec2::Vec2;
