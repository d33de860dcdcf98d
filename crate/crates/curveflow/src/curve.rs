//! Closed polygonal curves and the discrete geometry derived from them.
//!
//! A curve is a cyclic chain of points; storage index `p` holds the grid
//! point `x_{p+1}` of the 1-based cyclic numbering `x_1, ..., x_n` with
//! `x_0 = x_n`. Segment `i` runs from `x_{i-1}` to `x_i`; every derived
//! quantity (segment length `r_i`, dual length `q_i`, curvature `k_i`,
//! tangent angle `nu_i`) lives on that numbering and wraps cyclically.

use crate::error::{Error, Result};
use crate::parallel::map_indices;
use crate::vec2::Vec2;
use std::f64::consts::PI;

/// Minimum number of grid points. The implicit step couples each point to
/// its four cyclic neighbours, so fewer points would make stencil columns
/// coincide.
pub const MIN_POINTS: usize = 5;

/// A closed plane curve given by its grid points.
///
/// Invariants (enforced by [`Curve::new`]): at least [`MIN_POINTS`] points,
/// all coordinates finite, no two cyclically consecutive points equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    points: Vec<Vec2>,
}

impl Curve {
    /// Builds a curve, validating the invariants. Error indices refer to
    /// positions in `points`: [`Error::ZeroSegment`]`(p)` means `points[p]`
    /// equals its cyclic predecessor.
    pub fn new(points: Vec<Vec2>) -> Result<Self> {
        if points.len() < MIN_POINTS {
            return Err(Error::TooFewPoints {
                got: points.len(),
                min: MIN_POINTS,
            });
        }
        for (p, pt) in points.iter().enumerate() {
            if !pt.is_finite() {
                return Err(Error::NonFinite(p));
            }
        }
        let n = points.len();
        for p in 0..n {
            if points[p] == points[(p + n - 1) % n] {
                return Err(Error::ZeroSegment(p));
            }
        }
        Ok(Curve { points })
    }

    /// Number of grid points (= number of segments).
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec2> {
        self.points
    }

    /// Point at storage index `p`.
    pub fn point(&self, p: usize) -> Vec2 {
        self.points[p]
    }

    /// Cyclic predecessor of the point at storage index `p`.
    pub fn prev_point(&self, p: usize) -> Vec2 {
        let n = self.points.len();
        self.points[(p + n - 1) % n]
    }
}

/// Discrete geometry of a curve: everything the scheme derives from the
/// grid points of the previous time level.
///
/// Storage index `p` corresponds to the 1-based quantity with index `p + 1`,
/// matching [`Curve`]. Use the `*_at` accessors to read with cyclic (or, for
/// the tangent angle, extended) indices.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometryCache {
    /// Segment lengths `r_i = |x_i - x_{i-1}|`.
    pub r: Vec<f64>,
    /// Dual volume lengths `q_i = (r_i + r_{i+1}) / 2`.
    pub q: Vec<f64>,
    /// Discrete curvature per volume.
    pub k: Vec<f64>,
    /// Tangent angles `nu_1, ..., nu_n` from the cumulative recurrence.
    pub nu: Vec<f64>,
    /// Starting angle `nu_0`, the direction of the closing segment
    /// `x_n - x_{n-1}` measured in `[0, 2*pi)`.
    pub nu0: f64,
    /// Total curve length `L`.
    pub length: f64,
}

impl GeometryCache {
    pub fn n(&self) -> usize {
        self.r.len()
    }

    fn wrap(&self, i: isize) -> usize {
        (i - 1).rem_euclid(self.r.len() as isize) as usize
    }

    /// `r_i` for any integer `i`, cyclically.
    pub fn r_at(&self, i: isize) -> f64 {
        self.r[self.wrap(i)]
    }

    /// `q_i` for any integer `i`, cyclically.
    pub fn q_at(&self, i: isize) -> f64 {
        self.q[self.wrap(i)]
    }

    /// `k_i` for any integer `i`, cyclically.
    pub fn k_at(&self, i: isize) -> f64 {
        self.k[self.wrap(i)]
    }

    /// Tangent angle `nu_i` for `0 <= i <= n + 1`.
    ///
    /// `nu_0` is the stored starting angle and `nu_{n+1} = nu_1 + 2*pi`; the
    /// angle is cumulative, not periodic, so indices outside this range have
    /// no meaning and panic.
    pub fn nu_at(&self, i: isize) -> f64 {
        let n = self.nu.len() as isize;
        match i {
            0 => self.nu0,
            _ if 1 <= i && i <= n => self.nu[(i - 1) as usize],
            _ if i == n + 1 => self.nu[0] + 2.0 * PI,
            _ => panic!("tangent angle index {i} outside 0..={}", n + 1),
        }
    }
}

/// Sign with `sgn(0) = 0`, used for the curvature orientation. Distinct from
/// `f64::signum`, which maps `+0.0` to `1.0`.
fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Rebuilds segment lengths, dual lengths, curvatures and tangent angles
/// from the curve's grid points.
///
/// The curvature per volume is recovered from the angle between the two
/// segments flanking it (`R_{i-1}` and `R_{i+1}`), oriented by the sign of
/// their determinant and spread over the two-segment arc `2 r_i`; straight
/// and exactly folded-back configurations both give zero. The tangent angle
/// starts from the direction of the closing segment and accumulates
/// `r_i k_i` around the curve, so it winds by `2*pi` per turn instead of
/// jumping at the branch cut.
pub fn compute_geometry(curve: &Curve) -> Result<GeometryCache> {
    let n = curve.n();
    let pts = curve.points();

    // Edge vectors R_i = x_i - x_{i-1}; storage index p holds R_{p+1}.
    let edges: Vec<Vec2> = map_indices(n, |p| pts[p] - pts[(p + n - 1) % n]);
    let r: Vec<f64> = map_indices(n, |p| edges[p].norm());
    for (p, &len) in r.iter().enumerate() {
        if len <= 0.0 {
            return Err(Error::ZeroSegment(p));
        }
    }

    let q: Vec<f64> = map_indices(n, |p| 0.5 * (r[p] + r[(p + 1) % n]));

    let k: Vec<f64> = map_indices(n, |p| {
        let prev = (p + n - 1) % n;
        let next = (p + 1) % n;
        let cos_angle = (edges[next].dot(edges[prev]) / (r[next] * r[prev])).clamp(-1.0, 1.0);
        sgn(edges[prev].det(edges[next])) * cos_angle.acos() / (2.0 * r[p])
    });

    // Closing segment R_0 = R_n determines the starting angle in [0, 2*pi).
    let closing = edges[n - 1];
    let acos = (closing.x / r[n - 1]).clamp(-1.0, 1.0).acos();
    let nu0 = if closing.y >= 0.0 {
        acos
    } else {
        2.0 * PI - acos
    };

    let mut nu = Vec::with_capacity(n);
    let mut angle = nu0;
    for p in 0..n {
        angle += r[p] * k[p];
        nu.push(angle);
    }

    let length = r.iter().sum();

    Ok(GeometryCache {
        r,
        q,
        k,
        nu,
        nu0,
        length,
    })
}

/// Signed enclosed area `A = (1/2) * sum_i det(x_i, x_i - x_{i-1})`;
/// positive for counter-clockwise orientation.
pub fn polygon_area(curve: &Curve) -> f64 {
    let n = curve.n();
    let pts = curve.points();
    let mut sum = 0.0;
    for p in 0..n {
        let prev = pts[(p + n - 1) % n];
        sum += pts[p].det(pts[p] - prev);
    }
    0.5 * sum
}
