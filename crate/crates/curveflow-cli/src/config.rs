//! Experiment configuration.
//!
//! A configuration can come from three layers, later ones overriding
//! earlier: built-in defaults, a `key = value` config file, and command-line
//! flags. File keys and flag names are identical up to `-`/`_` spelling.

use anyhow::{bail, Context, Result};
use curveflow::{builtin_flow, Curve, FlowParams, FlowSpec, RedistMode, RedistParams, StepParams};
use std::path::{Path, PathBuf};

/// Initial curve selector.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec {
    Ellipse { a: f64, b: f64 },
    Circle { radius: f64 },
    Spiral,
}

impl CurveSpec {
    /// Parses `ellipse[:a:b]`, `circle[:radius]` or `spiral`. Omitted
    /// parameters default to the canonical test shapes: a 3:1 ellipse and a
    /// unit circle.
    pub fn parse(s: &str) -> Result<CurveSpec> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |part: &str| -> Result<f64> {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number `{part}` in curve spec `{s}`"))
        };
        match parts.as_slice() {
            ["ellipse"] => Ok(CurveSpec::Ellipse { a: 3.0, b: 1.0 }),
            ["ellipse", a, b] => Ok(CurveSpec::Ellipse {
                a: num(a)?,
                b: num(b)?,
            }),
            ["circle"] => Ok(CurveSpec::Circle { radius: 1.0 }),
            ["circle", r] => Ok(CurveSpec::Circle { radius: num(r)? }),
            ["spiral"] => Ok(CurveSpec::Spiral),
            _ => bail!(
                "unknown curve spec `{s}` (expected ellipse[:a:b], circle[:radius] or spiral)"
            ),
        }
    }

    pub fn build(&self, n: usize) -> curveflow::Result<Curve> {
        match *self {
            CurveSpec::Ellipse { a, b } => curveflow::make_ellipse(a, b, n),
            CurveSpec::Circle { radius } => curveflow::make_circle(radius, n),
            CurveSpec::Spiral => curveflow::make_spiral(n),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            CurveSpec::Ellipse { a, b } => format!("ellipse:{a}:{b}"),
            CurveSpec::Circle { radius } => format!("circle:{radius}"),
            CurveSpec::Spiral => "spiral".into(),
        }
    }
}

/// A fully resolved experiment description.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Name of the run; used as the default output subdirectory.
    pub name: String,
    /// Flow model name from the built-in catalog.
    pub model: String,
    /// Curvature-diffusion weight override (models with a free `delta`).
    pub delta: Option<f64>,
    /// Constant-forcing override (models with a free `F`).
    pub force: Option<f64>,
    pub curve: CurveSpec,
    /// Number of grid points.
    pub n: usize,
    /// Time step.
    pub tau: f64,
    /// Number of time steps.
    pub steps: usize,
    pub redistribution: RedistMode,
    pub kappa1: f64,
    pub kappa2: f64,
    pub sor_relax: f64,
    pub tol: f64,
    pub max_iters: Option<usize>,
    /// Output directory; defaults to `$CURVEFLOW_OUT/<name>` (or
    /// `out/<name>`).
    pub out: Option<PathBuf>,
    /// Snapshot cadence in steps; `None` means initial and final only.
    pub snapshot_every: Option<usize>,
    /// Metrics-row cadence in steps (1 records every step). The final step
    /// is always recorded.
    pub metrics_every: usize,
    /// Whether to also emit an SVG overlay of the snapshots.
    pub svg: bool,
}

impl ExperimentConfig {
    pub fn defaults(name: impl Into<String>) -> Self {
        ExperimentConfig {
            name: name.into(),
            model: "mean_curvature".into(),
            delta: None,
            force: None,
            curve: CurveSpec::Circle { radius: 1.0 },
            n: 100,
            tau: 1e-3,
            steps: 100,
            redistribution: RedistMode::Autr,
            kappa1: 10.0,
            kappa2: 0.0,
            sor_relax: 1.6,
            tol: 1e-10,
            max_iters: None,
            out: None,
            snapshot_every: None,
            metrics_every: 1,
            svg: false,
        }
    }

    /// Snapshot cadence with the default (initial and final only) resolved.
    pub fn effective_snapshot_every(&self) -> usize {
        self.snapshot_every.unwrap_or(self.steps).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < curveflow::MIN_POINTS {
            bail!(
                "n = {} is below the minimum of {}",
                self.n,
                curveflow::MIN_POINTS
            );
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            bail!("tau must be positive and finite, got {}", self.tau);
        }
        if self.steps == 0 {
            bail!("steps must be at least 1");
        }
        if !(self.sor_relax > 0.0 && self.sor_relax < 2.0) {
            bail!("sor_relax must lie in (0, 2), got {}", self.sor_relax);
        }
        if !(self.tol > 0.0) {
            bail!("tol must be positive, got {}", self.tol);
        }
        if self.metrics_every == 0 {
            bail!("metrics_every must be at least 1");
        }
        if self.snapshot_every == Some(0) {
            bail!("snapshot_every must be at least 1");
        }
        match self.curve {
            CurveSpec::Ellipse { a, b } if !(a > 0.0 && b > 0.0) => {
                bail!("ellipse semi-axes must be positive: {a}, {b}")
            }
            CurveSpec::Circle { radius } if !(radius > 0.0) => {
                bail!("circle radius must be positive: {radius}")
            }
            _ => {}
        }
        self.flow()
            .with_context(|| format!("invalid flow model `{}`", self.model))?;
        self.redist_params().context("invalid redistribution")?;
        Ok(())
    }

    pub fn flow(&self) -> curveflow::Result<FlowSpec> {
        builtin_flow(
            &self.model,
            FlowParams {
                delta: self.delta,
                force: self.force,
            },
        )
    }

    pub fn redist_params(&self) -> curveflow::Result<RedistParams> {
        match self.redistribution {
            RedistMode::Autr => RedistParams::autr(self.kappa1, self.kappa2),
            RedistMode::Rll => Ok(RedistParams::rll()),
            RedistMode::None => Ok(RedistParams::none()),
        }
    }

    pub fn step_params(&self) -> StepParams {
        StepParams {
            tau: self.tau,
            sor_relax: self.sor_relax,
            tol: self.tol,
            max_iters: self.max_iters,
        }
    }
}

pub fn parse_redistribution(s: &str) -> Result<RedistMode> {
    match s.trim().to_ascii_lowercase().as_str() {
        "autr" | "uniform" => Ok(RedistMode::Autr),
        "rll" => Ok(RedistMode::Rll),
        "none" | "off" => Ok(RedistMode::None),
        other => bail!("unknown redistribution mode `{other}` (expected autr, rll or none)"),
    }
}

/// A partial configuration: only the supplied keys override.
#[derive(Clone, Debug, Default)]
pub struct ConfigOverlay {
    pub name: Option<String>,
    pub model: Option<String>,
    pub delta: Option<f64>,
    pub force: Option<f64>,
    pub curve: Option<CurveSpec>,
    pub n: Option<usize>,
    pub tau: Option<f64>,
    pub steps: Option<usize>,
    pub redistribution: Option<RedistMode>,
    pub kappa1: Option<f64>,
    pub kappa2: Option<f64>,
    pub sor_relax: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub out: Option<PathBuf>,
    pub snapshot_every: Option<usize>,
    pub metrics_every: Option<usize>,
    pub svg: Option<bool>,
}

impl ConfigOverlay {
    /// Reads a `key = value` file. Blank lines and lines starting with `#`
    /// are ignored; keys may use `-` or `_` interchangeably.
    pub fn from_file(path: &Path) -> Result<ConfigOverlay> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut overlay = ConfigOverlay::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = || format!("{}:{}", path.display(), lineno + 1);
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}: expected `key = value`, got `{line}`", at());
            };
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            overlay
                .set(&key, value)
                .with_context(|| format!("{}: bad value for `{key}`", at()))?;
        }
        Ok(overlay)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(value: &str) -> Result<T>
        where
            T::Err: std::error::Error + Send + Sync + 'static,
        {
            value
                .parse::<T>()
                .with_context(|| format!("cannot parse `{value}`"))
        }
        match key {
            "name" => self.name = Some(value.to_string()),
            "model" => self.model = Some(value.to_string()),
            "delta" => self.delta = Some(num(value)?),
            "force" => self.force = Some(num(value)?),
            "curve" => self.curve = Some(CurveSpec::parse(value)?),
            "n" => self.n = Some(num(value)?),
            "tau" => self.tau = Some(num(value)?),
            "steps" => self.steps = Some(num(value)?),
            "redistribution" => self.redistribution = Some(parse_redistribution(value)?),
            "kappa1" => self.kappa1 = Some(num(value)?),
            "kappa2" => self.kappa2 = Some(num(value)?),
            "sor_relax" => self.sor_relax = Some(num(value)?),
            "tol" => self.tol = Some(num(value)?),
            "max_iters" => self.max_iters = Some(num(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "snapshot_every" => self.snapshot_every = Some(num(value)?),
            "metrics_every" => self.metrics_every = Some(num(value)?),
            "svg" => {
                self.svg = Some(match value.to_ascii_lowercase().as_str() {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    other => bail!("cannot parse `{other}` as a boolean"),
                })
            }
            _ => bail!("unknown key `{key}`"),
        }
        Ok(())
    }

    /// Overrides the fields of `cfg` that this overlay supplies.
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(v) = &self.name {
            cfg.name = v.clone();
        }
        if let Some(v) = &self.model {
            cfg.model = v.clone();
        }
        if let Some(v) = self.delta {
            cfg.delta = Some(v);
        }
        if let Some(v) = self.force {
            cfg.force = Some(v);
        }
        if let Some(v) = &self.curve {
            cfg.curve = v.clone();
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.tau {
            cfg.tau = v;
        }
        if let Some(v) = self.steps {
            cfg.steps = v;
        }
        if let Some(v) = self.redistribution {
            cfg.redistribution = v;
        }
        if let Some(v) = self.kappa1 {
            cfg.kappa1 = v;
        }
        if let Some(v) = self.kappa2 {
            cfg.kappa2 = v;
        }
        if let Some(v) = self.sor_relax {
            cfg.sor_relax = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.max_iters {
            cfg.max_iters = Some(v);
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.snapshot_every {
            cfg.snapshot_every = Some(v);
        }
        if let Some(v) = self.metrics_every {
            cfg.metrics_every = v;
        }
        if let Some(v) = self.svg {
            cfg.svg = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn curve_spec_parsing() {
        assert_eq!(
            CurveSpec::parse("ellipse:3:1").unwrap(),
            CurveSpec::Ellipse { a: 3.0, b: 1.0 }
        );
        assert_eq!(
            CurveSpec::parse("ellipse").unwrap(),
            CurveSpec::Ellipse { a: 3.0, b: 1.0 }
        );
        assert_eq!(
            CurveSpec::parse("circle:2.5").unwrap(),
            CurveSpec::Circle { radius: 2.5 }
        );
        assert_eq!(CurveSpec::parse(" spiral ").unwrap(), CurveSpec::Spiral);
        assert!(CurveSpec::parse("triangle").is_err());
        assert!(CurveSpec::parse("ellipse:3").is_err());
        assert!(CurveSpec::parse("circle:abc").is_err());
    }

    #[test]
    fn redistribution_parsing() {
        assert_eq!(parse_redistribution("autr").unwrap(), RedistMode::Autr);
        assert_eq!(parse_redistribution("RLL").unwrap(), RedistMode::Rll);
        assert_eq!(parse_redistribution("none").unwrap(), RedistMode::None);
        assert!(parse_redistribution("smooth").is_err());
    }

    #[test]
    fn overlay_from_file_and_precedence() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            file,
            "# an experiment\nmodel = surface_diffusion\ncurve = ellipse:3:1\n\nn = 50\ntau = 0.004\nsteps = 500\nsnapshot-every = 100\nsvg = true"
        )
        .unwrap();
        let overlay = ConfigOverlay::from_file(file.path()).unwrap();
        let mut cfg = ExperimentConfig::defaults("t");
        overlay.apply(&mut cfg);
        assert_eq!(cfg.model, "surface_diffusion");
        assert_eq!(cfg.n, 50);
        assert_eq!(cfg.tau, 0.004);
        assert_eq!(cfg.steps, 500);
        assert_eq!(cfg.snapshot_every, Some(100));
        assert!(cfg.svg);

        // a later overlay (e.g. command-line flags) wins
        let flags = ConfigOverlay {
            steps: Some(7),
            ..Default::default()
        };
        flags.apply(&mut cfg);
        assert_eq!(cfg.steps, 7);
        assert_eq!(cfg.n, 50); // untouched fields survive
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_key_is_rejected_with_location() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "model = affine\nstepz = 12").unwrap();
        let err = format!("{:#}", ConfigOverlay::from_file(file.path()).unwrap_err());
        assert!(err.contains("unknown key `stepz`"), "{err}");
        assert!(err.contains(":2"), "missing line number: {err}");
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut cfg = ExperimentConfig::defaults("t");
        cfg.sor_relax = 2.0;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::defaults("t");
        cfg.model = "unknown_flow".into();
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::defaults("t");
        cfg.n = 4;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::defaults("t");
        cfg.redistribution = RedistMode::Autr;
        cfg.kappa1 = 0.0;
        cfg.kappa2 = 0.0;
        assert!(cfg.validate().is_err());

        assert!(ExperimentConfig::defaults("ok").validate().is_ok());
    }

    #[test]
    fn snapshot_default_is_initial_and_final() {
        let mut cfg = ExperimentConfig::defaults("t");
        cfg.steps = 123;
        assert_eq!(cfg.effective_snapshot_every(), 123);
        cfg.snapshot_every = Some(10);
        assert_eq!(cfg.effective_snapshot_every(), 10);
    }
}
