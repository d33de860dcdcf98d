//! SVG rendering of snapshot overlays.
//!
//! All snapshots of a run are drawn into one picture, the way the published
//! evolution figures overlay time slices. Every other snapshot additionally
//! carries a dot per grid point, which makes the tangential redistribution
//! of the points visible across time.

use anyhow::{bail, Context, Result};
use curveflow::Curve;
use std::fmt::Write as _;
use std::path::Path;

const CANVAS_WIDTH: f64 = 720.0;
/// Margin on each side as a fraction of the larger data extent.
const MARGIN_FRACTION: f64 = 0.025;
const STROKE_FRACTION: f64 = 0.004;
const MARKER_FRACTION: f64 = 0.006;

/// Renders `(step index, curve)` snapshots into a standalone SVG document.
/// Curves are drawn in data coordinates with the y axis pointing up.
pub fn svg_document(snapshots: &[(usize, Curve)]) -> Result<String> {
    if snapshots.is_empty() {
        bail!("no snapshots to render");
    }

    // Bounds over all snapshots, in SVG coordinates (y flipped).
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for (_, curve) in snapshots {
        for p in curve.points() {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(-p.y);
            max_y = max_y.max(-p.y);
        }
    }
    let size = (max_x - min_x).max(max_y - min_y).max(1e-12);
    let margin = MARGIN_FRACTION * size;
    let view_w = max_x - min_x + 2.0 * margin;
    let view_h = max_y - min_y + 2.0 * margin;
    let height = (CANVAS_WIDTH * view_h / view_w).round();

    let mut doc = String::new();
    writeln!(
        doc,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        CANVAS_WIDTH,
        height,
        min_x - margin,
        min_y - margin,
        view_w,
        view_h
    )?;
    writeln!(
        doc,
        r##"<g fill="none" stroke="#1f3552" stroke-width="{:.6}" stroke-linejoin="round">"##,
        STROKE_FRACTION * size
    )?;

    for (idx, (j, curve)) in snapshots.iter().enumerate() {
        let mut d = String::new();
        for (p, point) in curve.points().iter().enumerate() {
            let cmd = if p == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{:.6},{:.6}", point.x, -point.y)?;
        }
        d.push('Z');
        writeln!(doc, r#"<path id="step-{j}" d="{d}"/>"#)?;

        // grid-point markers on every other snapshot
        if idx % 2 == 0 {
            writeln!(doc, r##"<g fill="#1f3552" stroke="none">"##)?;
            for point in curve.points() {
                writeln!(
                    doc,
                    r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}"/>"#,
                    point.x,
                    -point.y,
                    MARKER_FRACTION * size
                )?;
            }
            writeln!(doc, "</g>")?;
        }
    }

    writeln!(doc, "</g>")?;
    writeln!(doc, "</svg>")?;
    Ok(doc)
}

/// Renders the snapshots and writes the document to `path`.
pub fn write_svg(snapshots: &[(usize, Curve)], path: &Path) -> Result<()> {
    let doc =
        svg_document(snapshots).with_context(|| format!("cannot render {}", path.display()))?;
    std::fs::write(path, doc).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
