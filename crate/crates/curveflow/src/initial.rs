//! Initial curves for experiments: ellipses, circles and a spiral-like
//! closed test curve.

use crate::curve::Curve;
use crate::error::Result;
use crate::vec2::Vec2;
use std::f64::consts::PI;

/// Points of an ellipse sampled uniformly in parameter,
/// `x_i = (a cos(2 pi i / n), b sin(2 pi i / n))` for `i = 1..=n`
/// (counter-clockwise). Exposed separately from [`make_ellipse`] so the bare
/// formula can be used for any `n`.
pub fn ellipse_points(a: f64, b: f64, n: usize) -> Vec<Vec2> {
    (1..=n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            Vec2::new(a * t.cos(), b * t.sin())
        })
        .collect()
}

/// Counter-clockwise ellipse with semi-axes `a`, `b > 0`.
pub fn make_ellipse(a: f64, b: f64, n: usize) -> Result<Curve> {
    assert!(a > 0.0 && b > 0.0, "semi-axes must be positive");
    Curve::new(ellipse_points(a, b, n))
}

/// Counter-clockwise circle of the given radius centered at the origin.
pub fn make_circle(radius: f64, n: usize) -> Result<Curve> {
    make_ellipse(radius, radius, n)
}

/// Point of the closed spiral-like test curve at parameter `u`:
/// radius `0.5 exp(-1 - sin(2 pi u) / 2) - 0.025 cos(2 pi u)` at polar angle
/// `10 arctan(1 + sin(2 pi u) / 2)`.
///
/// The parameter is reduced modulo 1 before evaluation, so `u = 0` and
/// `u = 1` produce bitwise identical points and the sampled curve closes
/// exactly.
pub fn spiral_point(u: f64) -> Vec2 {
    let w = u - u.floor();
    let s = (2.0 * PI * w).sin();
    let c = (2.0 * PI * w).cos();
    let radius = 0.5 * (-1.0 - 0.5 * s).exp() - 0.025 * c;
    let angle = 10.0 * (1.0 + 0.5 * s).atan();
    Vec2::new(radius * angle.cos(), radius * angle.sin())
}

/// The spiral-like curve sampled at `u = i / n` for `i = 1..=n`. A tightly
/// wound, strongly non-convex but simple closed curve; resolutions below
/// about 100 points undersample the inner windings.
pub fn make_spiral(n: usize) -> Result<Curve> {
    Curve::new((1..=n).map(|i| spiral_point(i as f64 / n as f64)).collect())
}
