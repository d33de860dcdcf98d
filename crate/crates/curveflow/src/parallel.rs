//! Switch between rayon-backed and sequential element loops.
//!
//! Every parallelized loop in this crate is an independent per-index map, so
//! the parallel and sequential paths produce bitwise identical results; only
//! wall-clock time differs. Reductions and recurrences (total length, curve
//! averages, tangent-angle and tangential-velocity prefix sums, SOR sweeps)
//! are deliberately kept sequential: their floating-point results depend on
//! evaluation order, and reproducibility matters more than the small share of
//! runtime they account for.
//!
//! With the `parallel` feature disabled the crate compiles without rayon and
//! all loops are sequential. With the feature enabled, loops shorter than
//! [`min_parallel_len`] still run sequentially to avoid paying fork/join
//! overhead on the small grids typical for single experiments.

use std::sync::atomic::{AtomicUsize, Ordering};

/// Default threshold below which element loops stay sequential.
pub const DEFAULT_MIN_PARALLEL_LEN: usize = 4096;

static MIN_PARALLEL_LEN: AtomicUsize = AtomicUsize::new(DEFAULT_MIN_PARALLEL_LEN);

/// Sets the minimum loop length for which rayon is used. `usize::MAX` forces
/// every loop onto the sequential path; `0` parallelizes everything. Has no
/// effect when the `parallel` feature is disabled.
pub fn set_min_parallel_len(len: usize) {
    MIN_PARALLEL_LEN.store(len, Ordering::Relaxed);
}

/// Current parallelization threshold.
pub fn min_parallel_len() -> usize {
    MIN_PARALLEL_LEN.load(Ordering::Relaxed)
}

/// `(0..n).map(f)` collected into a vector, in parallel when worthwhile.
pub(crate) fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if n >= min_parallel_len() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}
