//! Tangential redistribution of the grid points.
//!
//! The tangential velocity `alpha` never changes the curve's shape, only how
//! grid points slide along it. It is fixed by prescribing the evolution of
//! each relative segment length `r_i / L`:
//!
//! * [`RedistMode::Autr`] drives every `n * r_i / L` towards 1 at a rate
//!   controlled by `omega = kappa1 + kappa2 * B`, so the grid becomes
//!   asymptotically uniform;
//! * [`RedistMode::Rll`] (`omega = 0`) keeps each relative length constant;
//! * [`RedistMode::None`] switches tangential motion off entirely, which
//!   degenerates the grid under all but the mildest flows.
//!
//! `B` is the curve average of `k * beta`, the logarithmic derivative of the
//! total length under the normal motion.

use crate::curve::GeometryCache;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RedistMode {
    /// Asymptotically uniform redistribution.
    Autr,
    /// Preserve relative local lengths.
    Rll,
    /// No tangential motion.
    None,
}

/// Redistribution mode plus the uniformity weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RedistParams {
    pub mode: RedistMode,
    /// Constant part of the uniformity rate; the grid approaches uniform
    /// spacing like `exp(-kappa1 * t)`.
    pub kappa1: f64,
    /// Length-coupled part of the uniformity rate.
    pub kappa2: f64,
}

impl RedistParams {
    /// Asymptotically uniform redistribution with rate `kappa1 + kappa2 * B`.
    /// The weights must be non-negative and not both zero.
    pub fn autr(kappa1: f64, kappa2: f64) -> Result<Self> {
        if !(kappa1 >= 0.0 && kappa2 >= 0.0 && kappa1 + kappa2 > 0.0) {
            return Err(Error::ZeroRedistributionWeight { kappa1, kappa2 });
        }
        Ok(RedistParams {
            mode: RedistMode::Autr,
            kappa1,
            kappa2,
        })
    }

    pub fn rll() -> Self {
        RedistParams {
            mode: RedistMode::Rll,
            kappa1: 0.0,
            kappa2: 0.0,
        }
    }

    pub fn none() -> Self {
        RedistParams {
            mode: RedistMode::None,
            kappa1: 0.0,
            kappa2: 0.0,
        }
    }

    /// Uniformity rate `omega` entering the tangential velocity.
    pub fn omega(&self, kbeta_avg: f64) -> f64 {
        match self.mode {
            RedistMode::Autr => self.kappa1 + self.kappa2 * kbeta_avg,
            RedistMode::Rll | RedistMode::None => 0.0,
        }
    }
}

/// Curve average `B = (1/L) * sum_i r_i k_i beta_i`; equals `-dL/dt / L` for
/// the underlying smooth evolution. Summed sequentially for reproducibility.
pub fn curve_average_kbeta(geom: &GeometryCache, beta: &[f64]) -> f64 {
    debug_assert_eq!(beta.len(), geom.n());
    let mut sum = 0.0;
    for p in 0..geom.n() {
        sum += geom.r[p] * geom.k[p] * beta[p];
    }
    sum / geom.length
}

/// Integrates the tangential velocity around the curve:
/// `alpha_0 = 0`,
/// `alpha_i = alpha_{i-1} + r_i (k_i beta_i - B) + (L/n - r_i) * omega`.
///
/// Returns `n + 1` values `alpha_0, ..., alpha_n`; the increments telescope
/// around the closed curve, so `alpha_n` vanishes up to rounding (its size is
/// a useful self-check on the assembled step). With [`RedistMode::None`] all
/// values are zero.
pub fn alpha_update(
    geom: &GeometryCache,
    beta: &[f64],
    kbeta_avg: f64,
    params: &RedistParams,
) -> Vec<f64> {
    let n = geom.n();
    debug_assert_eq!(beta.len(), n);
    if params.mode == RedistMode::None {
        return vec![0.0; n + 1];
    }
    let omega = params.omega(kbeta_avg);
    let target = geom.length / n as f64;
    let mut alpha = Vec::with_capacity(n + 1);
    alpha.push(0.0);
    let mut acc = 0.0;
    for p in 0..n {
        acc += geom.r[p] * (geom.k[p] * beta[p] - kbeta_avg) + (target - geom.r[p]) * omega;
        alpha.push(acc);
    }
    alpha
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cache(r: Vec<f64>, k: Vec<f64>) -> GeometryCache {
        let n = r.len();
        let q = (0..n).map(|p| 0.5 * (r[p] + r[(p + 1) % n])).collect();
        let length = r.iter().sum();
        GeometryCache {
            r,
            q,
            k,
            nu: vec![0.0; n],
            nu0: 0.0,
            length,
        }
    }

    #[test]
    fn curve_average_hand_case() {
        let geom = cache(vec![1.0, 2.0, 1.0], vec![1.0, 0.5, 2.0]);
        let beta = [1.0, 1.0, 0.25];
        // (1*1*1 + 2*0.5*1 + 1*2*0.25) / 4 = 2.5 / 4
        assert_eq!(curve_average_kbeta(&geom, &beta), 0.625);
    }

    #[test]
    fn curve_average_vanishes_for_zero_velocity() {
        let geom = cache(vec![0.3, 0.7, 1.1, 0.9], vec![1.0, -2.0, 0.5, 3.0]);
        assert_eq!(curve_average_kbeta(&geom, &[0.0; 4]), 0.0);
    }

    #[test]
    fn alpha_hand_case() {
        // two segments, no normal motion: only the uniformity term acts.
        // L = 4, target = 2: alpha = (0, (2-1)*1, 1 + (2-3)*1) = (0, 1, 0)
        let geom = cache(vec![1.0, 3.0], vec![0.0, 0.0]);
        let params = RedistParams::autr(1.0, 0.0).unwrap();
        let alpha = alpha_update(&geom, &[0.0, 0.0], 0.0, &params);
        assert_eq!(alpha, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn alpha_closes_around_the_curve() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
        let params = RedistParams::autr(10.0, 0.5).unwrap();
        for _ in 0..50 {
            let n = rng.random_range(5..400);
            let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
            let k: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let beta: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let geom = cache(r, k);
            let avg = curve_average_kbeta(&geom, &beta);
            let alpha = alpha_update(&geom, &beta, avg, &params);
            assert_eq!(alpha.len(), n + 1);
            assert_eq!(alpha[0], 0.0);
            let scale: f64 = alpha.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
            assert!(
                alpha[n].abs() <= 1e-10 * (scale + 1.0),
                "n={n}: alpha_n = {:e}, scale = {:e}",
                alpha[n],
                scale
            );
        }
    }

    #[test]
    fn none_mode_is_all_zeros() {
        let geom = cache(vec![1.0, 2.0, 3.0, 2.0, 1.0], vec![1.0; 5]);
        let beta = [1.0, -1.0, 2.0, 0.0, 0.5];
        let avg = curve_average_kbeta(&geom, &beta);
        let alpha = alpha_update(&geom, &beta, avg, &RedistParams::none());
        assert_eq!(alpha, vec![0.0; 6]);
    }

    #[test]
    fn rll_is_passive_without_normal_motion() {
        // beta = 0: relative-length preservation has nothing to do, while
        // the uniformity mode actively slides points along the curve.
        let geom = cache(vec![1.0, 3.0, 1.0, 3.0, 2.0], vec![1.0; 5]);
        let beta = [0.0; 5];
        let rll = alpha_update(&geom, &beta, 0.0, &RedistParams::rll());
        assert!(rll.iter().all(|&a| a == 0.0));
        let autr = alpha_update(&geom, &beta, 0.0, &RedistParams::autr(10.0, 0.0).unwrap());
        assert!(autr[1..5].iter().any(|&a| a != 0.0));
    }

    #[test]
    fn uniform_grid_needs_no_redistribution() {
        let geom = cache(vec![0.25; 8], vec![2.0; 8]);
        let beta = [3.0; 8];
        let avg = curve_average_kbeta(&geom, &beta);
        let alpha = alpha_update(&geom, &beta, avg, &RedistParams::autr(10.0, 1.0).unwrap());
        for &a in &alpha {
            assert!(a.abs() < 1e-13, "alpha = {a:e}");
        }
    }

    #[test]
    fn weight_validation() {
        assert!(matches!(
            RedistParams::autr(0.0, 0.0),
            Err(Error::ZeroRedistributionWeight { .. })
        ));
        assert!(matches!(
            RedistParams::autr(-1.0, 2.0),
            Err(Error::ZeroRedistributionWeight { .. })
        ));
        assert!(RedistParams::autr(0.0, 0.5).is_ok());
        assert_eq!(RedistParams::autr(3.0, 2.0).unwrap().omega(2.0), 7.0);
        assert_eq!(RedistParams::rll().omega(5.0), 0.0);
    }
}
