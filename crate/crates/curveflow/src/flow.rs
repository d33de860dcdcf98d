//! Velocity laws for the normal motion of the curve.
//!
//! The normal velocity has the form
//! `beta = -delta * d^2 k / ds^2 + b(k, nu) + F(x)`.
//! Next to `b`, every law also carries the multiplier form `c` with
//! `b(k, nu) = c(k, nu) * k`; `c` enters the implicit side of the scheme and
//! is supplied analytically per model rather than recovered as `b/k` at run
//! time, which would be ill-defined near inflection points.

use crate::curve::{Curve, GeometryCache};
use crate::error::{Error, Result};
use crate::parallel::map_indices;
use crate::vec2::Vec2;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Regularization inside the affine law `c = (k^2 + eps^2)^(-1/3)`, keeping
/// the multiplier finite at inflection points.
pub const AFFINE_EPSILON: f64 = 1e-6;

type LawFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type FieldFn = Arc<dyn Fn(Vec2) -> f64 + Send + Sync>;

/// External forcing term `F` evaluated at curve points.
#[derive(Clone)]
pub enum ForceField {
    Zero,
    Constant(f64),
    Custom(FieldFn),
}

impl ForceField {
    pub fn eval(&self, x: Vec2) -> f64 {
        match self {
            ForceField::Zero => 0.0,
            ForceField::Constant(f) => *f,
            ForceField::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for ForceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForceField::Zero => write!(f, "Zero"),
            ForceField::Constant(c) => write!(f, "Constant({c})"),
            ForceField::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Clone)]
enum VelocityLaw {
    MeanCurvature,
    Affine,
    Anisotropic {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    SurfaceDiffusion,
    /// `b = -k - (delta/2) k^3`; runs curvature flow backwards, balanced by
    /// the fourth-order term.
    WillmoreBackward {
        delta: f64,
    },
    Custom {
        b: LawFn,
        c: LawFn,
    },
}

/// A complete flow specification: the curvature-diffusion weight `delta`,
/// the local law `b`/`c` and the external field `F`.
#[derive(Clone)]
pub struct FlowSpec {
    name: String,
    /// Weight of the intrinsic-Laplacian-of-curvature term.
    pub delta: f64,
    law: VelocityLaw,
    pub force: ForceField,
}

impl fmt::Debug for FlowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FlowSpec")
            .field("name", &self.name)
            .field("delta", &self.delta)
            .field("force", &self.force)
            .finish_non_exhaustive()
    }
}

impl FlowSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Local curvature part `b(k, nu)` of the normal velocity.
    pub fn b(&self, k: f64, nu: f64) -> f64 {
        match &self.law {
            VelocityLaw::MeanCurvature => k,
            VelocityLaw::Affine => affine_multiplier(k) * k,
            VelocityLaw::Anisotropic { .. } => self.c(k, nu) * k,
            VelocityLaw::SurfaceDiffusion => 0.0,
            VelocityLaw::WillmoreBackward { delta } => -k - 0.5 * delta * k * k * k,
            VelocityLaw::Custom { b, .. } => b(k, nu),
        }
    }

    /// Multiplier form `c(k, nu)` with `b = c * k`, used on the implicit side.
    pub fn c(&self, k: f64, nu: f64) -> f64 {
        match &self.law {
            VelocityLaw::MeanCurvature => 1.0,
            VelocityLaw::Affine => affine_multiplier(k),
            VelocityLaw::Anisotropic {
                amplitude,
                frequency,
                phase,
            } => 1.0 - amplitude * (frequency * nu - phase).cos(),
            VelocityLaw::SurfaceDiffusion => 0.0,
            VelocityLaw::WillmoreBackward { delta } => -1.0 - 0.5 * delta * k * k,
            VelocityLaw::Custom { c, .. } => c(k, nu),
        }
    }

    pub fn force_at(&self, x: Vec2) -> f64 {
        self.force.eval(x)
    }

    /// Classical curve-shortening flow: `b = k`.
    pub fn mean_curvature() -> FlowSpec {
        FlowSpec {
            name: "mean_curvature".into(),
            delta: 0.0,
            law: VelocityLaw::MeanCurvature,
            force: ForceField::Zero,
        }
    }

    /// Affine-invariant flow `b = k^(1/3)`, implemented through the
    /// regularized multiplier `c = (k^2 + eps^2)^(-1/3)`.
    pub fn affine() -> FlowSpec {
        FlowSpec {
            name: "affine".into(),
            delta: 0.0,
            law: VelocityLaw::Affine,
            force: ForceField::Zero,
        }
    }

    /// Four-fold anisotropic curvature flow `b = (1 - 0.9 cos(4 nu - pi)) k`.
    pub fn anisotropic() -> FlowSpec {
        FlowSpec {
            name: "anisotropic".into(),
            delta: 0.0,
            law: VelocityLaw::Anisotropic {
                amplitude: 0.9,
                frequency: 4.0,
                phase: PI,
            },
            force: ForceField::Zero,
        }
    }

    /// Surface diffusion of curves: pure intrinsic Laplacian of curvature.
    pub fn surface_diffusion() -> FlowSpec {
        FlowSpec {
            name: "surface_diffusion".into(),
            delta: 1.0,
            law: VelocityLaw::SurfaceDiffusion,
            force: ForceField::Zero,
        }
    }

    /// Backward curvature flow regularized by the Willmore-type term:
    /// `beta = -delta * d^2 k / ds^2 - k - (delta/2) k^3 + F`.
    pub fn willmore_backward(delta: f64, force: f64) -> FlowSpec {
        FlowSpec {
            name: "willmore_backward".into(),
            delta,
            law: VelocityLaw::WillmoreBackward { delta },
            force: if force == 0.0 {
                ForceField::Zero
            } else {
                ForceField::Constant(force)
            },
        }
    }

    /// User-supplied law. `b` must vanish at zero curvature (checked); if
    /// `delta` is zero and `b` is not increasing in `k`, the flow is
    /// ill-posed and a warning is logged.
    pub fn custom(
        name: impl Into<String>,
        delta: f64,
        b: LawFn,
        c: LawFn,
        force: ForceField,
    ) -> Result<FlowSpec> {
        let spec = FlowSpec {
            name: name.into(),
            delta,
            law: VelocityLaw::Custom { b, c },
            force,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for &nu in &[0.0, 0.5 * PI, 1.234, 5.0] {
            let b0 = self.b(0.0, nu);
            if b0.abs() > 1e-12 {
                return Err(Error::InvalidFlow {
                    name: self.name.clone(),
                    reason: format!("b(0, {nu}) = {b0}, expected 0"),
                });
            }
        }
        if self.delta == 0.0 && !self.b_is_increasing() {
            log::warn!(
                "flow `{}`: b is not increasing in k on [-8, 8]; \
                 with delta = 0 the evolution may be ill-posed",
                self.name
            );
        }
        Ok(())
    }

    fn b_is_increasing(&self) -> bool {
        for &nu in &[0.0, 1.0, 2.5, 4.0] {
            let mut k = -8.0;
            while k < 8.0 {
                if self.b(k + 0.25, nu) <= self.b(k, nu) - 1e-12 {
                    return false;
                }
                k += 0.25;
            }
        }
        true
    }
}

fn affine_multiplier(k: f64) -> f64 {
    (k * k + AFFINE_EPSILON * AFFINE_EPSILON).powf(-1.0 / 3.0)
}

/// Optional overrides for catalog models that take parameters.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlowParams {
    /// Curvature-diffusion weight for `willmore_backward` (default 1).
    pub delta: Option<f64>,
    /// Constant forcing for `willmore_backward` (default -1).
    pub force: Option<f64>,
}

/// Looks up a flow model by catalog name: `mean_curvature`, `affine`,
/// `anisotropic`, `surface_diffusion` or `willmore_backward`. Only the last
/// one takes parameters; supplied overrides are ignored (with a warning) for
/// the others.
pub fn builtin_flow(name: &str, params: FlowParams) -> Result<FlowSpec> {
    let spec = match name {
        "mean_curvature" => FlowSpec::mean_curvature(),
        "affine" => FlowSpec::affine(),
        "anisotropic" => FlowSpec::anisotropic(),
        "surface_diffusion" => FlowSpec::surface_diffusion(),
        "willmore_backward" => {
            return Ok(FlowSpec::willmore_backward(
                params.delta.unwrap_or(1.0),
                params.force.unwrap_or(-1.0),
            ));
        }
        _ => return Err(Error::UnknownModel(name.into())),
    };
    if params.delta.is_some() || params.force.is_some() {
        log::warn!("flow `{name}` has fixed parameters; delta/force overrides ignored");
    }
    Ok(spec)
}

/// Unit tangent `T = (cos nu, sin nu)`.
pub fn tangent_vector(nu: f64) -> Vec2 {
    Vec2::new(nu.cos(), nu.sin())
}

/// Unit normal `N = (-sin nu, cos nu)`, the tangent rotated by +pi/2; for a
/// counter-clockwise curve it points into the enclosed region.
pub fn normal_vector(nu: f64) -> Vec2 {
    Vec2::new(-nu.sin(), nu.cos())
}

/// Normal velocity per volume:
/// `beta_i = (delta / r_i) * ((k_i - k_{i-1}) / q_{i-1} - (k_{i+1} - k_i) / q_i)
///  + b(k_i, nu_i) + (F(x_i) + F(x_{i-1})) / 2`.
///
/// All quantities come from the previous time level (`geom` must belong to
/// `prev`).
pub fn eval_beta(geom: &GeometryCache, flow: &FlowSpec, prev: &Curve) -> Vec<f64> {
    let n = geom.n();
    debug_assert_eq!(prev.n(), n);
    map_indices(n, |p| {
        let prev_p = (p + n - 1) % n;
        let next_p = (p + 1) % n;
        let lap = flow.delta
            * ((geom.k[p] - geom.k[prev_p]) / geom.q[prev_p]
                - (geom.k[next_p] - geom.k[p]) / geom.q[p])
            / geom.r[p];
        let local = flow.b(geom.k[p], geom.nu[p]);
        let forcing = 0.5 * (flow.force_at(prev.point(p)) + flow.force_at(prev.prev_point(p)));
        lap + local + forcing
    })
}

/// Implicit-side multiplier per volume, `phi_i = -delta * k_i^2 + c(k_i, nu_i)`
/// for `i = 1..=n+1`; the returned vector has length `n + 1` with slot `t`
/// holding `phi_{t+1}`. The extra trailing entry reuses `k_1` with the
/// accumulated angle `nu_{n+1}`.
pub fn eval_phi(geom: &GeometryCache, flow: &FlowSpec) -> Vec<f64> {
    let n = geom.n();
    map_indices(n + 1, |t| {
        let i = (t + 1) as isize;
        let k = geom.k_at(i);
        let nu = geom.nu_at(i);
        -flow.delta * k * k + flow.c(k, nu)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::compute_geometry;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn circle(n: usize, radius: f64) -> Curve {
        let pts = (0..n)
            .map(|p| {
                let t = 2.0 * PI * (p + 1) as f64 / n as f64;
                Vec2::new(radius * t.cos(), radius * t.sin())
            })
            .collect();
        Curve::new(pts).unwrap()
    }

    #[test]
    fn catalog_values() {
        let mcf = FlowSpec::mean_curvature();
        assert_eq!(mcf.b(0.7, 2.0), 0.7);
        assert_eq!(mcf.c(0.7, 2.0), 1.0);
        assert_eq!(mcf.delta, 0.0);

        let sd = FlowSpec::surface_diffusion();
        assert_eq!(sd.b(2.0, 1.0), 0.0);
        assert_eq!(sd.c(2.0, 1.0), 0.0);
        assert_eq!(sd.delta, 1.0);

        let wb = FlowSpec::willmore_backward(1.0, -1.0);
        assert_eq!(wb.b(1.0, 0.0), -1.5);
        assert_eq!(wb.c(1.0, 0.0), -1.5);
        assert!(matches!(wb.force, ForceField::Constant(f) if f == -1.0));

        let aniso = FlowSpec::anisotropic();
        // 4 * (pi/4) - pi vanishes exactly, so c = 1 - 0.9
        assert!((aniso.c(3.0, PI / 4.0) - 0.1).abs() < 1e-15);
        // and c is 2*pi-periodic up to rounding in the angle reduction
        assert!((aniso.c(1.0, 0.3) - aniso.c(1.0, 0.3 + 2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn affine_multiplier_is_regularized() {
        let affine = FlowSpec::affine();
        assert!((affine.c(0.0, 1.0) - 1e4).abs() < 1e-6 * 1e4);
        assert_eq!(affine.b(0.0, 1.0), 0.0);
        assert!((affine.c(1.0, 1.0) - 1.0).abs() < 1e-11);
        assert!((affine.b(8.0, 1.0) - 2.0).abs() < 1e-11); // 8^(1/3)
    }

    #[test]
    fn b_is_k_times_c_across_catalog() {
        let flows = [
            FlowSpec::mean_curvature(),
            FlowSpec::affine(),
            FlowSpec::anisotropic(),
            FlowSpec::surface_diffusion(),
            FlowSpec::willmore_backward(0.3, 0.0),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for flow in &flows {
            for _ in 0..200 {
                let k = rng.random_range(-6.0..6.0);
                let nu = rng.random_range(0.0..2.0 * PI);
                let diff = (flow.b(k, nu) - k * flow.c(k, nu)).abs();
                assert!(
                    diff <= 1e-12 * (1.0 + flow.b(k, nu).abs()),
                    "{}: b != k*c at k={k}, nu={nu}",
                    flow.name()
                );
            }
        }
    }

    #[test]
    fn zero_curvature_velocity_vanishes() {
        for flow in [
            FlowSpec::mean_curvature(),
            FlowSpec::affine(),
            FlowSpec::anisotropic(),
            FlowSpec::surface_diffusion(),
            FlowSpec::willmore_backward(2.0, -1.0),
        ] {
            for nu in [0.0, 1.0, 4.5] {
                assert_eq!(flow.b(0.0, nu), 0.0, "{}", flow.name());
            }
        }
    }

    #[test]
    fn custom_law_must_vanish_at_zero_curvature() {
        let bad = FlowSpec::custom(
            "offset",
            0.0,
            Arc::new(|k, _| k + 1.0),
            Arc::new(|_, _| 1.0),
            ForceField::Zero,
        );
        assert!(matches!(bad, Err(Error::InvalidFlow { .. })));

        // non-monotone b with delta = 0 is accepted (warning only)
        let odd = FlowSpec::custom(
            "backward",
            0.0,
            Arc::new(|k, _| -k),
            Arc::new(|_, _| -1.0),
            ForceField::Zero,
        );
        assert!(odd.is_ok());
    }

    #[test]
    fn catalog_lookup() {
        assert_eq!(
            builtin_flow("mean_curvature", FlowParams::default())
                .unwrap()
                .name(),
            "mean_curvature"
        );
        let wb = builtin_flow(
            "willmore_backward",
            FlowParams {
                delta: Some(0.1),
                force: Some(0.0),
            },
        )
        .unwrap();
        assert_eq!(wb.delta, 0.1);
        assert!(matches!(wb.force, ForceField::Zero));
        assert!(matches!(
            builtin_flow("krivka", FlowParams::default()),
            Err(Error::UnknownModel(_))
        ));
    }

    #[test]
    fn frame_vectors() {
        assert_eq!(tangent_vector(0.0), Vec2::new(1.0, 0.0));
        assert_eq!(normal_vector(0.0), Vec2::new(0.0, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
        for _ in 0..1000 {
            let nu = rng.random_range(-10.0..10.0);
            let d = tangent_vector(nu).det(normal_vector(nu));
            assert!((d - 1.0).abs() < 1e-15, "det(T,N) = {d} at nu = {nu}");
        }
    }

    #[test]
    fn beta_on_uniform_circle() {
        let curve = circle(100, 1.0);
        let geom = compute_geometry(&curve).unwrap();
        // second difference of a constant curvature field vanishes
        let sd = eval_beta(&geom, &FlowSpec::surface_diffusion(), &curve);
        assert!(
            sd.iter().all(|&b| b.abs() < 1e-9),
            "max |beta| = {:e}",
            sd.iter().fold(0.0_f64, |m, &b| m.max(b.abs()))
        );
        // mean curvature flow reduces to b = k
        let k = geom.k[0];
        let mcf = eval_beta(&geom, &FlowSpec::mean_curvature(), &curve);
        assert!(mcf.iter().all(|&b| (b - k).abs() < 1e-9));
    }

    #[test]
    fn beta_second_difference_hand_case() {
        // r = q = 1, k = (0, 1, 2, 1, 0): the second difference at the
        // middle volume is (2-1)/1 - (1-2)/1 = 2.
        let geom = GeometryCache {
            r: vec![1.0; 5],
            q: vec![1.0; 5],
            k: vec![0.0, 1.0, 2.0, 1.0, 0.0],
            nu: vec![0.0; 5],
            nu0: 0.0,
            length: 5.0,
        };
        let curve = circle(5, 1.0); // positions are irrelevant with F = 0
        let beta = eval_beta(&geom, &FlowSpec::surface_diffusion(), &curve);
        assert_eq!(beta[2], 2.0);
    }

    #[test]
    fn beta_averages_forcing_between_endpoints() {
        let flow = FlowSpec::willmore_backward(1.0, -1.0);
        let curve = circle(64, 2.0);
        let geom = compute_geometry(&curve).unwrap();
        let beta = eval_beta(&geom, &flow, &curve);
        let k = geom.k[0];
        let expected = -k - 0.5 * k * k * k - 1.0;
        assert!(beta.iter().all(|&b| (b - expected).abs() < 1e-8));
    }

    #[test]
    fn phi_values_and_layout() {
        let geom = GeometryCache {
            r: vec![1.0; 5],
            q: vec![1.0; 5],
            k: vec![0.5, 1.0, 2.0, 3.0, 1.5],
            nu: vec![0.0; 5],
            nu0: 0.0,
            length: 5.0,
        };
        let sd = eval_phi(&geom, &FlowSpec::surface_diffusion());
        assert_eq!(sd.len(), 6);
        assert_eq!(sd[0], -0.25); // phi_1 = -k_1^2
        assert_eq!(sd[2], -4.0);
        assert_eq!(sd[5], -0.25); // phi_{n+1} wraps to k_1

        let wb = eval_phi(&geom, &FlowSpec::willmore_backward(1.0, 0.0));
        // phi = -k^2 - 1 - k^2/2 at k = 2: -4 - 1 - 2 = -7
        assert_eq!(wb[2], -7.0);

        let mcf = eval_phi(&geom, &FlowSpec::mean_curvature());
        assert!(mcf.iter().all(|&p| p == 1.0));
    }

    #[test]
    fn beta_is_bitwise_reproducible() {
        use crate::parallel::{set_min_parallel_len, DEFAULT_MIN_PARALLEL_LEN};
        let curve = circle(6000, 1.0);
        let geom = compute_geometry(&curve).unwrap();
        let flow = FlowSpec::anisotropic();
        set_min_parallel_len(0);
        let par = eval_beta(&geom, &flow, &curve);
        set_min_parallel_len(usize::MAX);
        let seq = eval_beta(&geom, &flow, &curve);
        set_min_parallel_len(DEFAULT_MIN_PARALLEL_LEN);
        assert!(par
            .iter()
            .zip(&seq)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}
