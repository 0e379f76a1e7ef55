//! Static SVG scatter plots of variety clouds: a (Re l1, Re l2) panel and a
//! (|l1|, |l2|) panel side by side.

use std::fmt::Write as _;
use std::path::Path;

use crate::bcl_model::VarietySample;
use crate::error::Result;
use crate::matrix_core::C64;

const PANEL: f64 = 320.0;
const MARGIN: f64 = 40.0;
const POINT_R: f64 = 1.6;

struct Panel {
    title: String,
    xs: Vec<f64>,
    ys: Vec<f64>,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

fn panel(title: &str, pts: impl Iterator<Item = (f64, f64)>, range: (f64, f64)) -> Panel {
    let (xs, ys) = pts.unzip();
    Panel {
        title: title.to_string(),
        xs,
        ys,
        x_range: range,
        y_range: range,
    }
}

fn render(panels: &[Panel]) -> String {
    let width = MARGIN + panels.len() as f64 * (PANEL + MARGIN);
    let height = PANEL + 2.0 * MARGIN;
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<rect width=\"{width}\" height=\"{height}\" \
         fill=\"white\"/>\n"
    );
    for (i, p) in panels.iter().enumerate() {
        let x0 = MARGIN + i as f64 * (PANEL + MARGIN);
        let y0 = MARGIN;
        let _ = write!(
            svg,
            "<rect x=\"{x0}\" y=\"{y0}\" width=\"{PANEL}\" height=\"{PANEL}\" fill=\"none\" \
             stroke=\"#444\" stroke-width=\"1\"/>\n<text x=\"{tx}\" y=\"{ty}\" \
             font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">{title}</text>\n",
            tx = x0 + PANEL / 2.0,
            ty = y0 - 10.0,
            title = p.title
        );
        let (xa, xb) = p.x_range;
        let (ya, yb) = p.y_range;
        for (&x, &y) in p.xs.iter().zip(&p.ys) {
            if !x.is_finite() || !y.is_finite() {
                continue;
            }
            let px = x0 + (x - xa) / (xb - xa) * PANEL;
            let py = y0 + PANEL - (y - ya) / (yb - ya) * PANEL;
            if px < x0 - 1.0 || px > x0 + PANEL + 1.0 || py < y0 - 1.0 || py > y0 + PANEL + 1.0 {
                continue;
            }
            let _ = write!(
                svg,
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"{POINT_R}\" fill=\"#1f77b4\" \
                 fill-opacity=\"0.55\"/>\n"
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn lambda2(p: &[C64]) -> (C64, C64) {
    let l1 = p.first().copied().unwrap_or(C64::new(0.0, 0.0));
    let l2 = p.get(1).copied().unwrap_or(l1);
    (l1, l2)
}

/// Two-panel scatter of a variety cloud. With fewer than two lambda
/// coordinates the second coordinate repeats the first.
pub fn cloud_svg(sample: &VarietySample) -> String {
    let re_panel = panel(
        "(Re l1, Re l2)",
        sample.points.iter().map(|p| {
            let (l1, l2) = lambda2(&p.lambda);
            (l1.re, l2.re)
        }),
        (-1.1, 1.1),
    );
    let mod_panel = panel(
        "(|l1|, |l2|)",
        sample.points.iter().map(|p| {
            let (l1, l2) = lambda2(&p.lambda);
            (l1.norm(), l2.norm())
        }),
        (-0.05, 1.1),
    );
    render(&[re_panel, mod_panel])
}

pub fn write_cloud_svg(sample: &VarietySample, path: &Path) -> Result<()> {
    std::fs::write(path, cloud_svg(sample))?;
    Ok(())
}
