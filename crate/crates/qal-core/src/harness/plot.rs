//! Self-contained SVG rendering: lattice heatmaps and mean curves with
//! confidence-interval error bars. No plotting dependency; the output is
//! plain SVG markup that diffs cleanly in tests.

use crate::error::{Error, Result};
use crate::harness::csvio::{
    parse_csv, LatticeRow, StrategySweepRow, ThresholdSweepRow, WeakValueRow,
};
use crate::lattice::LATTICE_SIDE;
use std::fmt::Write as _;

const PALETTE: [&str; 6] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Plot flavor selected by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Heatmap,
    Curves,
}

/// Renders a CSV document of a known schema into an SVG document.
pub fn emit_plot(csv: &str, kind: PlotKind) -> Result<String> {
    use crate::harness::csvio::CsvSchema;
    let header = csv.lines().next().unwrap_or("");
    if kind == PlotKind::Heatmap && header == <LatticeRow as CsvSchema>::HEADER {
        let rows = parse_csv::<LatticeRow>(csv)?;
        let cells: Vec<(usize, usize, f64)> =
            rows.iter().map(|r| (r.row, r.col, r.cos_alpha)).collect();
        Ok(heatmap_svg(&cells, -1.0, 1.0, "lattice &lt;sigma_z&gt;"))
    } else if kind == PlotKind::Heatmap && header == <WeakValueRow as CsvSchema>::HEADER {
        let rows = parse_csv::<WeakValueRow>(csv)?;
        let cells: Vec<(usize, usize, f64)> = rows.iter().map(|r| (r.row, r.col, r.q0)).collect();
        let max = cells.iter().map(|c| c.2.abs()).fold(1.0f64, f64::max);
        Ok(heatmap_svg(&cells, -max, max, "single-shot weak values"))
    } else if kind == PlotKind::Curves && header == <StrategySweepRow as CsvSchema>::HEADER {
        let rows = parse_csv::<StrategySweepRow>(csv)?;
        let mut names: Vec<(String, usize)> = Vec::new();
        for r in &rows {
            let key = (r.strategy.clone(), r.n);
            if !names.contains(&key) {
                names.push(key);
            }
        }
        let multiple_n = names
            .iter()
            .map(|(_, n)| n)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
            > 1;
        let series: Vec<Series> = names
            .iter()
            .map(|(strategy, n)| Series {
                label: if multiple_n {
                    format!("{strategy} (n={n})")
                } else {
                    strategy.clone()
                },
                points: rows
                    .iter()
                    .filter(|r| &r.strategy == strategy && r.n == *n)
                    .map(|r| CurvePoint {
                        x: r.labels as f64,
                        y: r.mean_accuracy,
                        band: Some((r.ci_low, r.ci_high)),
                    })
                    .collect(),
            })
            .collect();
        Ok(curves_svg(
            &series,
            "labels used",
            "mean accuracy",
            "strategy comparison",
        ))
    } else if kind == PlotKind::Curves && header == <ThresholdSweepRow as CsvSchema>::HEADER {
        let rows = parse_csv::<ThresholdSweepRow>(csv)?;
        let mut kinds: Vec<String> = Vec::new();
        for r in &rows {
            let name = r.kind.name().to_string();
            if !kinds.contains(&name) {
                kinds.push(name);
            }
        }
        let series: Vec<Series> = kinds
            .iter()
            .map(|kind| Series {
                label: kind.clone(),
                points: rows
                    .iter()
                    .filter(|r| r.kind.name() == kind)
                    .map(|r| CurvePoint {
                        x: r.threshold,
                        y: r.mean_accuracy,
                        band: Some((r.ci_low, r.ci_high)),
                    })
                    .collect(),
            })
            .collect();
        Ok(curves_svg(
            &series,
            "fidelity threshold",
            "mean accuracy",
            "weak vs strong labeling",
        ))
    } else {
        Err(Error::Format(format!(
            "no {kind:?} plot is defined for CSV header '{header}'"
        )))
    }
}

/// Blue-white-red diverging map over `[lo, hi]`.
fn diverging_color(value: f64, lo: f64, hi: f64) -> String {
    let mid = 0.5 * (lo + hi);
    let t = if value >= mid {
        ((value - mid) / (hi - mid)).clamp(0.0, 1.0)
    } else {
        -((mid - value) / (mid - lo)).clamp(0.0, 1.0)
    };
    let (r, g, b) = if t >= 0.0 {
        let s = 1.0 - t;
        (255.0, 255.0 * s, 255.0 * s)
    } else {
        let s = 1.0 + t;
        (255.0 * s, 255.0 * s, 255.0)
    };
    format!("#{:02x}{:02x}{:02x}", r as u8, g as u8, b as u8)
}

/// 21x21 heatmap; one rect per site.
pub fn heatmap_svg(cells: &[(usize, usize, f64)], lo: f64, hi: f64, title: &str) -> String {
    let cell = 20usize;
    let margin = 40usize;
    let side = LATTICE_SIDE * cell;
    let width = side + 2 * margin;
    let height = side + 2 * margin + 20;
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{title}</text>\n",
        width / 2
    );
    for &(row, col, value) in cells {
        let x = margin + col * cell;
        let y = margin + (LATTICE_SIDE - 1 - row) * cell + 20;
        let fill = diverging_color(value, lo, hi);
        let _ = writeln!(
            svg,
            "<rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"{fill}\" \
             stroke=\"#dddddd\" stroke-width=\"0.5\"/>"
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// One point of a curve, optionally with a CI band `(low, high)`.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub band: Option<(f64, f64)>,
}

/// One labeled curve.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<CurvePoint>,
}

/// Mean curves with error bars and a legend entry per series.
pub fn curves_svg(series: &[Series], x_label: &str, y_label: &str, title: &str) -> String {
    let width = 720.0;
    let height = 480.0;
    let (ml, mr, mt, mb) = (70.0, 160.0, 40.0, 50.0);
    let pw = width - ml - mr;
    let ph = height - mt - mb;

    let all_points: Vec<&CurvePoint> = series.iter().flat_map(|s| s.points.iter()).collect();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &all_points {
        x_min = x_min.min(p.x);
        x_max = x_max.max(p.x);
        let (lo, hi) = p.band.unwrap_or((p.y, p.y));
        y_min = y_min.min(lo.min(p.y));
        y_max = y_max.max(hi.max(p.y));
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if !y_min.is_finite() {
        y_min = 0.0;
        y_max = 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let sx = |x: f64| ml + (x - x_min) / (x_max - x_min) * pw;
    let sy = |y: f64| mt + ph - (y - y_min) / (y_max - y_min) * ph;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"15\">{title}</text>\n",
        width / 2.0
    );

    // Axes and ticks.
    let _ = write!(
        svg,
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        mt + ph,
        ml + pw,
        mt + ph,
        mt + ph
    );
    for k in 0..=5 {
        let fx = x_min + (x_max - x_min) * f64::from(k) / 5.0;
        let fy = y_min + (y_max - y_min) * f64::from(k) / 5.0;
        let _ = write!(
            svg,
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"black\"/>\n\
             <text x=\"{x}\" y=\"{ty}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"11\">{fx:.2}</text>\n",
            x = sx(fx),
            y0 = mt + ph,
            y1 = mt + ph + 5.0,
            ty = mt + ph + 18.0,
        );
        let _ = write!(
            svg,
            "<line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"black\"/>\n\
             <text x=\"{tx}\" y=\"{ty}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"11\">{fy:.2}</text>\n",
            x0 = ml - 5.0,
            x1 = ml,
            y = sy(fy),
            tx = ml - 8.0,
            ty = sy(fy) + 4.0,
        );
    }
    let _ = write!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\">{x_label}</text>\n\
         <text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\" transform=\"rotate(-90 18 {})\">{y_label}</text>\n",
        ml + pw / 2.0,
        height - 12.0,
        mt + ph / 2.0,
        mt + ph / 2.0,
    );

    for (s_ix, s) in series.iter().enumerate() {
        let color = PALETTE[s_ix % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.x), sy(p.y)))
            .collect();
        if path.len() > 1 {
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                path.join(" ")
            );
        }
        for p in &s.points {
            if let Some((lo, hi)) = p.band {
                if hi > lo {
                    let _ = write!(
                        svg,
                        "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"{color}\" \
                         stroke-width=\"1\"/>\n\
                         <line x1=\"{xl}\" y1=\"{y0}\" x2=\"{xr}\" y2=\"{y0}\" stroke=\"{color}\"/>\n\
                         <line x1=\"{xl}\" y1=\"{y1}\" x2=\"{xr}\" y2=\"{y1}\" stroke=\"{color}\"/>\n",
                        x = sx(p.x),
                        y0 = sy(lo),
                        y1 = sy(hi),
                        xl = sx(p.x) - 3.0,
                        xr = sx(p.x) + 3.0,
                    );
                }
            }
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>",
                sx(p.x),
                sy(p.y)
            );
        }
        // Legend entry.
        let ly = mt + 10.0 + 18.0 * s_ix as f64;
        let _ = write!(
            svg,
            "<line x1=\"{x0}\" y1=\"{ly}\" x2=\"{x1}\" y2=\"{ly}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n\
             <text class=\"legend\" x=\"{tx}\" y=\"{ty}\" font-family=\"sans-serif\" \
             font-size=\"12\">{}</text>\n",
            s.label,
            x0 = ml + pw + 12.0,
            x1 = ml + pw + 34.0,
            tx = ml + pw + 40.0,
            ty = ly + 4.0,
        );
    }
    svg.push_str("</svg>\n");
    svg
}
