//! Experiment driver around the `curveflow` solver: experiment
//! configuration (file and flags), a catalog of ready-made presets, the run
//! loop with metrics collection, and CSV/SVG writers.

pub mod config;
pub mod csv;
pub mod presets;
pub mod runner;
pub mod svg;
