//! Named experiment presets.
//!
//! Each preset bundles one or more fully specified runs (a benchmark figure
//! or a convergence-table column) so the published experiments can be rerun
//! with a single command. Long-horizon presets accept a `--scale` factor
//! that shrinks the step count and the snapshot/metrics cadences together,
//! preserving the shape of the output while keeping runtimes sane.

use crate::config::{CurveSpec, ExperimentConfig};
use anyhow::{bail, Result};
use curveflow::RedistMode;
use std::f64::consts::PI;

/// One run belonging to a preset. Multi-run presets use `label` as the
/// output subdirectory under the preset name.
#[derive(Clone, Debug)]
pub struct PresetRun {
    pub label: String,
    pub config: ExperimentConfig,
}

/// A grid-refinement study attached to a preset: after the runs finish, the
/// time-integrated area error of each run is compared against `exact_area`
/// and experimental orders of convergence are printed.
#[derive(Clone, Debug)]
pub struct RefinementStudy {
    pub exact_area: f64,
}

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub summary: String,
    pub runs: Vec<PresetRun>,
    pub study: Option<RefinementStudy>,
}

/// All preset names, in catalog order.
pub fn names() -> Vec<&'static str> {
    CATALOG.iter().map(|(name, _, _)| *name).collect()
}

/// One-line summaries for `list-presets`.
pub fn summaries() -> Vec<(&'static str, &'static str)> {
    CATALOG
        .iter()
        .map(|(name, summary, _)| (*name, *summary))
        .collect()
}

/// Builds a preset by name. `scale` divides the step count and cadences of
/// every run (1 reproduces the published parameters).
pub fn build(name: &str, scale: usize) -> Result<Preset> {
    if scale == 0 {
        bail!("scale must be at least 1");
    }
    for (cat_name, summary, build) in CATALOG {
        if *cat_name == name {
            let mut preset = build();
            preset.name = name.to_string();
            preset.summary = summary.to_string();
            for run in &mut preset.runs {
                scale_run(&mut run.config, scale);
            }
            return Ok(preset);
        }
    }
    bail!("unknown preset `{name}` (run `curveflow list-presets` for the catalog)")
}

fn scale_run(cfg: &mut ExperimentConfig, scale: usize) {
    if scale == 1 {
        return;
    }
    let div = |v: usize| (v / scale).max(1);
    cfg.steps = div(cfg.steps);
    if let Some(s) = cfg.snapshot_every {
        cfg.snapshot_every = Some(div(s));
    }
    cfg.metrics_every = div(cfg.metrics_every);
}

type Builder = fn() -> Preset;

static CATALOG: &[(&str, &str, Builder)] = &[
    (
        "fig1a",
        "affine flow of a 3:1 ellipse with uniform redistribution",
        fig1a,
    ),
    (
        "fig1b",
        "affine flow of a 3:1 ellipse without redistribution",
        fig1b,
    ),
    ("fig2", "fourfold anisotropic flow of a 3:1 ellipse", fig2),
    (
        "fig3a",
        "surface diffusion of a 3:1 ellipse with uniform redistribution",
        fig3a,
    ),
    (
        "fig3b",
        "surface diffusion of a 3:1 ellipse without redistribution",
        fig3b,
    ),
    (
        "table1",
        "grid refinement study for surface diffusion (uniform redistribution)",
        table1,
    ),
    (
        "table2",
        "grid refinement study for surface diffusion (no redistribution)",
        table2,
    ),
    (
        "fig4a",
        "forced curvature-diffusion flow of a 3:1 ellipse, delta = 1",
        fig4a,
    ),
    (
        "fig4b",
        "forced curvature-diffusion flow of a 3:1 ellipse, delta = 0.1",
        fig4b,
    ),
    (
        "fig5",
        "forced curvature-diffusion flow under uniform vs arclength-proportional redistribution",
        fig5,
    ),
    (
        "fig6a",
        "curve-shortening flow of a nonconvex spiral",
        fig6a,
    ),
    ("fig6b", "surface diffusion of a nonconvex spiral", fig6b),
    (
        "fig7a",
        "curvature-diffusion flow of a nonconvex spiral, delta = 1",
        fig7a,
    ),
    (
        "fig7b",
        "curvature-diffusion flow of a nonconvex spiral, delta = 0.1",
        fig7b,
    ),
    (
        "fig7c",
        "curvature-diffusion flow of a nonconvex spiral, delta = 0.01",
        fig7c,
    ),
    (
        "circle_mcf_oracle",
        "shrinking-circle benchmark with a closed-form solution",
        circle_mcf_oracle,
    ),
];

fn ellipse_base(name: &str) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(name);
    cfg.curve = CurveSpec::Ellipse { a: 3.0, b: 1.0 };
    cfg.n = 100;
    cfg.tau = 1e-3;
    cfg
}

fn single(cfg: ExperimentConfig) -> Vec<PresetRun> {
    vec![PresetRun {
        label: String::new(),
        config: cfg,
    }]
}

fn fig1a() -> Preset {
    let mut cfg = ellipse_base("fig1a");
    cfg.model = "affine".into();
    cfg.steps = 1500;
    cfg.kappa1 = 3.0;
    cfg.snapshot_every = Some(100);
    cfg.svg = true;
    Preset {
        name: String::new(),
        summary: String::new(),
        runs: single(cfg),
        study: None,
    }
}

fn fig1b() -> Preset {
    let mut preset = fig1a();
    let cfg = &mut preset.runs[0].config;
    cfg.name = "fig1b".into();
    cfg.redistribution = RedistMode::None;
    preset
}

fn fig2() -> Preset {
    let mut cfg = ellipse_base("fig2");
    cfg.model = "anisotropic".into();
    cfg.steps = 1500;
    cfg.kappa1 = 3.0;
    cfg.snapshot_every = Some(100);
    cfg.svg = true;
    Preset {
        name: String::new(),
        summary: String::new(),
        runs: single(cfg),
        study: None,
    }
}

fn fig3a() -> Preset {
    let mut cfg = ellipse_base("fig3a");
    cfg.model = "surface_diffusion".into();
    cfg.steps = 2000;
    cfg.kappa1 = 10.0;
    cfg.snapshot_every = Some(200);
    cfg.svg = true;
    Preset {
        name: String::new(),
        summary: String::new(),
        runs: single(cfg),
        study: None,
    }
}

fn fig3b() -> Preset {
    let mut preset = fig3a();
    let cfg = &mut preset.runs[0].config;
    cfg.name = "fig3b".into();
    cfg.redistribution = RedistMode::None;
    preset
}

/// The refinement ladder shared by both convergence tables:
/// (grid points, time step, steps to reach t = 2).
const REFINEMENT_ROWS: [(usize, f64, usize); 4] = [
    (25, 0.016, 125),
    (50, 0.004, 500),
    (100, 0.001, 2000),
    (200, 0.00025, 8000),
];

fn refinement(name: &str, mode: RedistMode) -> Preset {
    let runs = REFINEMENT_ROWS
        .iter()
        .map(|&(n, tau, steps)| {
            let mut cfg = ellipse_base(name);
            cfg.name = format!("{name}_n{n}");
            cfg.model = "surface_diffusion".into();
            cfg.n = n;
            cfg.tau = tau;
            cfg.steps = steps;
            cfg.redistribution = mode;
            cfg.kappa1 = 10.0;
            cfg.snapshot_every = Some(steps);
            PresetRun {
                label: format!("n{n}"),
                config: cfg,
            }
        })
        .collect();
    Preset {
        name: String::new(),
        summary: String::new(),
        runs,
        study: Some(RefinementStudy {
            exact_area: 3.0 * PI,
        }),
    }
}

fn table1() -> Preset {
    refinement("table1", RedistMode::Autr)
}

fn table2() -> Preset {
    refinement("table2", RedistMode::None)
}

fn fig4a() -> Preset {
    let mut cfg = ellipse_base("fig4a");
    cfg.model = "willmore_backward".into();
    cfg.delta = Some(1.0);
    cfg.force = Some(-1.0);
    cfg.steps = 2000;
    cfg.kappa1 = 10.0;
    cfg.snapshot_every = Some(200);
    cfg.svg = true;
    Preset {
        name: String::new(),
        summary: String::new(),
        runs: single(cfg),
        study: None,
    }
}

fn fig4b() -> Preset {
    let mut preset = fig4a();
    let cfg = &mut preset.runs[0].config;
    cfg.name = "fig4b".into();
    cfg.delta = Some(0.1);
    cfg.steps = 1800;
    preset
}

fn fig5() -> Preset {
    let mut autr = ellipse_base("fig5_autr");
    autr.model = "willmore_backward".into();
    autr.delta = Some(0.1);
    autr.force = Some(-1.0);
    autr.steps = 2200;
    autr.kappa1 = 10.0;
    autr.snapshot_every = Some(200);
    autr.svg = true;

    let mut rll = autr.clone();
    rll.name = "fig5_rll".into();
    rll.redistribution = RedistMode::Rll;

    Preset {
        name: String::new(),
        summary: String::new(),
        runs: vec![
            PresetRun {
                label: "autr".into(),
                config: autr,
            },
            PresetRun {
                label: "rll".into(),
                config: rll,
            },
        ],
        study: None,
    }
}

fn spiral_base(name: &str, n: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(name);
    cfg.curve = CurveSpec::Spiral;
    cfg.n = n;
    cfg
}

fn fig6a() -> Preset {
    let mut cfg = spiral_base("fig6a", 100);
    cfg.model = "mean_curvature".into();
    cfg.tau = 1e-6;
    cfg.steps = 65_000;
    cfg.kappa1 = 10.0;
    cfg.snapshot_every = Some(5_000);
    cfg.metrics_every = 100;
    cfg.svg = true;
    Preset {
        name: String::new(),
        summary: String::new(),
        runs: single(cfg),
        study: None,
    }
}

fn fig6b() -> Preset {
    let mut cfg = spiral_base("fig6b", 100);
    cfg.model = "surface_diffusion".into();
    cfg.tau = 1e-10;
    cfg.steps = 1_000_000;
    cfg.kappa1 = 10.0;
    cfg.snapshot_every = Some(10_000);
    cfg.metrics_every = 100;
    cfg.svg = true;
    Preset {
        name: String::new(),
        summary: String::new(),
        runs: single(cfg),
        study: None,
    }
}

fn spiral_willmore(name: &str, delta: f64) -> Preset {
    let mut cfg = spiral_base(name, 200);
    cfg.model = "willmore_backward".into();
    cfg.delta = Some(delta);
    cfg.force = Some(0.0);
    cfg.tau = 1e-12;
    cfg.steps = 1_000_000_000;
    cfg.kappa1 = 100.0;
    cfg.snapshot_every = Some(50_000_000);
    cfg.metrics_every = 100_000;
    cfg.svg = true;
    Preset {
        name: String::new(),
        summary: String::new(),
        runs: single(cfg),
        study: None,
    }
}

fn fig7a() -> Preset {
    spiral_willmore("fig7a", 1.0)
}

fn fig7b() -> Preset {
    spiral_willmore("fig7b", 0.1)
}

fn fig7c() -> Preset {
    spiral_willmore("fig7c", 0.01)
}

fn circle_mcf_oracle() -> Preset {
    let mut cfg = ExperimentConfig::defaults("circle_mcf_oracle");
    cfg.model = "mean_curvature".into();
    cfg.curve = CurveSpec::Circle { radius: 1.0 };
    cfg.n = 200;
    cfg.tau = 1e-5;
    cfg.steps = 10_000;
    cfg.kappa1 = 10.0;
    cfg.snapshot_every = Some(10_000);
    Preset {
        name: String::new(),
        summary: String::new(),
        runs: single(cfg),
        study: None,
    }
}
