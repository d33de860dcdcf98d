//! Cyclic penta-diagonal linear systems and their solvers.
//!
//! The implicit step produces one matrix with five cyclic bands and two
//! right-hand sides (the x and y coordinates). The production path is SOR
//! with in-place ascending sweeps; a dense Gaussian-elimination solver is
//! kept as an independent oracle for tests and debugging.

use crate::error::{Error, Result};

/// A cyclic banded matrix: row `i` couples unknowns `i-2 .. i+2` (indices
/// wrap modulo `n`).
#[derive(Clone, Debug, PartialEq)]
pub struct BandSystem {
    /// Coefficient of `x_{i-2}` in row `i`.
    pub sub2: Vec<f64>,
    /// Coefficient of `x_{i-1}`.
    pub sub1: Vec<f64>,
    /// Diagonal.
    pub diag: Vec<f64>,
    /// Coefficient of `x_{i+1}`.
    pub sup1: Vec<f64>,
    /// Coefficient of `x_{i+2}`.
    pub sup2: Vec<f64>,
}

impl BandSystem {
    /// Assembles a system from its five bands, which must share a length of
    /// at least 5 (below that the cyclic stencil columns collide).
    pub fn new(
        sub2: Vec<f64>,
        sub1: Vec<f64>,
        diag: Vec<f64>,
        sup1: Vec<f64>,
        sup2: Vec<f64>,
    ) -> Self {
        let n = diag.len();
        assert!(n >= 5, "band system needs at least 5 rows, got {n}");
        assert!(
            sub2.len() == n && sub1.len() == n && sup1.len() == n && sup2.len() == n,
            "band lengths differ"
        );
        BandSystem {
            sub2,
            sub1,
            diag,
            sup1,
            sup2,
        }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Row `i` of the matrix applied to `x`.
    pub fn row_dot(&self, x: &[f64], i: usize) -> f64 {
        let n = self.n();
        self.diag[i] * x[i]
            + self.sub2[i] * x[(i + n - 2) % n]
            + self.sub1[i] * x[(i + n - 1) % n]
            + self.sup1[i] * x[(i + 1) % n]
            + self.sup2[i] * x[(i + 2) % n]
    }

    /// Max-norm residual `max_i |rhs_i - (M x)_i|`.
    pub fn residual_inf(&self, x: &[f64], rhs: &[f64]) -> f64 {
        (0..self.n()).fold(0.0, |m: f64, i| m.max((rhs[i] - self.row_dot(x, i)).abs()))
    }
}

/// Number of rows where the diagonal fails to dominate,
/// `|C_i| < |A_i| + |B_i| + |D_i| + |E_i|`. Strict dominance guarantees SOR
/// convergence at relaxation 1; the count is diagnostic, not an error.
pub fn diagonal_dominance_violations(sys: &BandSystem) -> usize {
    (0..sys.n())
        .filter(|&i| {
            sys.diag[i].abs()
                < sys.sub2[i].abs() + sys.sub1[i].abs() + sys.sup1[i].abs() + sys.sup2[i].abs()
        })
        .count()
}

/// Result of an SOR solve. `converged` is false when the iteration cap was
/// reached first; `x` is then the last iterate, which the caller may still
/// inspect or discard.
#[derive(Clone, Debug)]
pub struct SorOutcome {
    pub x: Vec<f64>,
    /// Number of full sweeps performed.
    pub iterations: usize,
    pub converged: bool,
    /// Max-norm difference between the last two iterates.
    pub last_diff: f64,
}

/// Successive over-relaxation with ascending in-place sweeps: row `i` uses
/// already-updated values at `i-2`, `i-1` and previous-sweep values at
/// `i+1`, `i+2` (with wrap-around at the seam). The sweep order is part of
/// the method's definition here; results are bitwise reproducible.
///
/// Stops when the max-norm difference between consecutive iterates drops
/// below `tol`. `relax` must lie in (0, 2); 1 gives Gauss-Seidel.
pub fn sor_solve(
    sys: &BandSystem,
    rhs: &[f64],
    x0: &[f64],
    relax: f64,
    tol: f64,
    max_iters: usize,
) -> Result<SorOutcome> {
    let n = sys.n();
    assert_eq!(rhs.len(), n);
    assert_eq!(x0.len(), n);
    assert!(
        relax > 0.0 && relax < 2.0,
        "relaxation factor {relax} outside (0, 2)"
    );
    assert!(tol > 0.0, "tolerance must be positive");
    for i in 0..n {
        if sys.diag[i] == 0.0 {
            return Err(Error::ZeroDiagonal(i));
        }
    }

    let mut x = x0.to_vec();
    let mut iterations = 0;
    let mut diff = f64::INFINITY;
    while iterations < max_iters {
        iterations += 1;
        diff = 0.0;
        for i in 0..n {
            let s = rhs[i]
                - sys.sub2[i] * x[(i + n - 2) % n]
                - sys.sub1[i] * x[(i + n - 1) % n]
                - sys.sup1[i] * x[(i + 1) % n]
                - sys.sup2[i] * x[(i + 2) % n];
            let next = x[i] + relax * (s / sys.diag[i] - x[i]);
            diff = diff.max((next - x[i]).abs());
            x[i] = next;
        }
        if diff < tol {
            return Ok(SorOutcome {
                x,
                iterations,
                converged: true,
                last_diff: diff,
            });
        }
        if !diff.is_finite() {
            break; // the iteration blew up; further sweeps cannot recover
        }
    }
    Ok(SorOutcome {
        x,
        iterations,
        converged: false,
        last_diff: diff,
    })
}

/// The system as a dense row-major `n * n` matrix.
pub fn dense_matrix(sys: &BandSystem) -> Vec<f64> {
    let n = sys.n();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + (i + n - 2) % n] += sys.sub2[i];
        m[i * n + (i + n - 1) % n] += sys.sub1[i];
        m[i * n + i] += sys.diag[i];
        m[i * n + (i + 1) % n] += sys.sup1[i];
        m[i * n + (i + 2) % n] += sys.sup2[i];
    }
    m
}

/// Direct solve through dense Gaussian elimination with partial pivoting.
/// Independent of the SOR path; intended as a test oracle and debugging aid
/// on small systems, so it makes no attempt at banded efficiency.
pub fn dense_oracle_solve(sys: &BandSystem, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = sys.n();
    assert_eq!(rhs.len(), n);
    let mut m = dense_matrix(sys);
    let mut b = rhs.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b_| {
                m[a * n + col]
                    .abs()
                    .partial_cmp(&m[b_ * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        if m[pivot_row * n + col] == 0.0 {
            return Err(Error::SingularMatrix(col));
        }
        if pivot_row != col {
            for c in 0..n {
                m.swap(col * n + c, pivot_row * n + c);
            }
            b.swap(col, pivot_row);
        }
        let pivot = m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                m[row * n + c] -= factor * m[col * n + c];
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in row + 1..n {
            s -= m[row * n + c] * x[c];
        }
        x[row] = s / m[row * n + row];
    }
    Ok(x)
}
