//! Dependency-free SVG line charts: a grid of panels, up to three series per
//! panel drawn in the blue-dotted / red-dashed / yellow-solid convention of
//! the figures. Output is plain XML with no external references and fully
//! deterministic formatting.

use std::fmt::Write as _;

use crate::irf::{Column, IrfPanel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineStyle {
    BlueDotted,
    RedDashed,
    YellowSolid,
}

impl LineStyle {
    /// Style for series index 0, 1, 2 within a chart.
    pub fn for_index(i: usize) -> LineStyle {
        match i % 3 {
            0 => LineStyle::BlueDotted,
            1 => LineStyle::RedDashed,
            _ => LineStyle::YellowSolid,
        }
    }

    fn stroke(&self) -> &'static str {
        match self {
            LineStyle::BlueDotted => "#1f77b4",
            LineStyle::RedDashed => "#d62728",
            LineStyle::YellowSolid => "#e6b117",
        }
    }

    fn dash(&self) -> &'static str {
        match self {
            LineStyle::BlueDotted => "2,3",
            LineStyle::RedDashed => "8,4",
            LineStyle::YellowSolid => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub values: Vec<f64>,
    pub style: LineStyle,
}

#[derive(Debug, Clone)]
pub struct PanelChart {
    pub title: String,
    pub series: Vec<Series>,
}

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 230.0;
const MARGIN_L: f64 = 52.0;
const MARGIN_R: f64 = 12.0;
const MARGIN_T: f64 = 26.0;
const MARGIN_B: f64 = 30.0;
const LEGEND_H: f64 = 26.0;

fn fmt2(x: f64) -> String {
    format!("{x:.2}")
}

fn tick_label(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Renders a grid of line panels (`cols` panels per row) as a standalone SVG
/// document.
pub fn render_grid(panels: &[PanelChart], cols: usize, caption: &str) -> String {
    assert!(cols > 0);
    let rows = panels.len().div_ceil(cols);
    let width = cols as f64 * PANEL_W;
    let height = rows as f64 * PANEL_H + LEGEND_H;
    let mut out = String::new();

    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt2(width),
        fmt2(height),
        fmt2(width),
        fmt2(height)
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        fmt2(width),
        fmt2(height)
    );
    let _ = writeln!(
        out,
        r#"<text x="8" y="16" font-family="monospace" font-size="12">{}</text>"#,
        escape(caption)
    );

    // legend from the first panel's series labels
    if let Some(first) = panels.first() {
        let mut x = width - 12.0;
        for s in first.series.iter().rev() {
            let label_w = 8.0 * s.label.len() as f64 + 34.0;
            x -= label_w;
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="12" x2="{}" y2="12" stroke="{}" stroke-width="1.5"{}/>"#,
                fmt2(x),
                fmt2(x + 22.0),
                s.style.stroke(),
                dash_attr(s.style)
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="16" font-family="monospace" font-size="11">{}</text>"#,
                fmt2(x + 26.0),
                escape(&s.label)
            );
        }
    }

    for (i, panel) in panels.iter().enumerate() {
        let ox = (i % cols) as f64 * PANEL_W;
        let oy = (i / cols) as f64 * PANEL_H + LEGEND_H;
        render_panel(&mut out, panel, ox, oy);
    }
    out.push_str("</svg>\n");
    out
}

fn dash_attr(style: LineStyle) -> String {
    if style.dash().is_empty() {
        String::new()
    } else {
        format!(r#" stroke-dasharray="{}""#, style.dash())
    }
}

fn render_panel(out: &mut String, panel: &PanelChart, ox: f64, oy: f64) {
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let x0 = ox + MARGIN_L;
    let y0 = oy + MARGIN_T;

    let n = panel
        .series
        .iter()
        .map(|s| s.values.len())
        .max()
        .unwrap_or(0);
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for s in &panel.series {
        for &v in &s.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if hi - lo < 1e-12 {
        hi = lo + 1.0;
    }
    let pad = 0.06 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);

    let sx = |t: usize| x0 + plot_w * t as f64 / (n.max(2) - 1) as f64;
    let sy = |v: f64| y0 + plot_h * (hi - v) / (hi - lo);

    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
        fmt2(x0 + plot_w / 2.0),
        fmt2(oy + 15.0),
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444444" stroke-width="0.8"/>"##,
        fmt2(x0),
        fmt2(y0),
        fmt2(plot_w),
        fmt2(plot_h)
    );

    // zero line
    if lo < 0.0 && hi > 0.0 {
        let zy = sy(0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#bbbbbb" stroke-width="0.6"/>"##,
            fmt2(x0),
            fmt2(zy),
            fmt2(x0 + plot_w),
            fmt2(zy)
        );
    }

    // y ticks: lo, mid, hi
    for frac in [0.0, 0.5, 1.0] {
        let v = lo + (hi - lo) * frac;
        let y = sy(v);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#444444" stroke-width="0.8"/>"##,
            fmt2(x0 - 4.0),
            fmt2(y),
            fmt2(x0),
            fmt2(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="9" text-anchor="end">{}</text>"#,
            fmt2(x0 - 6.0),
            fmt2(y + 3.0),
            tick_label(v)
        );
    }
    // x ticks every 10 periods
    let mut t = 0;
    while t < n {
        let x = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#444444" stroke-width="0.8"/>"##,
            fmt2(x),
            fmt2(y0 + plot_h),
            fmt2(x),
            fmt2(y0 + plot_h + 4.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="9" text-anchor="middle">{}</text>"#,
            fmt2(x),
            fmt2(y0 + plot_h + 14.0),
            t
        );
        t += 10;
    }

    for s in &panel.series {
        if s.values.is_empty() {
            continue;
        }
        let mut points = String::new();
        for (t, &v) in s.values.iter().enumerate() {
            let _ = write!(points, "{},{} ", fmt2(sx(t)), fmt2(sy(v)));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{} points="{}"/>"#,
            s.style.stroke(),
            dash_attr(s.style),
            points.trim_end()
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// The nine panels of the figure layout: y, x, pi_p, r, w, d, c_s, w_s, n_s.
pub const FIGURE_COLUMNS: [(Column, &str); 9] = [
    (Column::Y, "y"),
    (Column::X, "x"),
    (Column::PiP, "pi_p"),
    (Column::R, "r"),
    (Column::W, "w"),
    (Column::D, "d"),
    (Column::CS, "c_s"),
    (Column::WS, "w_s"),
    (Column::NS, "n_s"),
];

/// Builds the standard 3x3 figure from one panel per labelled variant.
pub fn figure_svg(variants: &[(String, &IrfPanel)], caption: &str) -> String {
    let panels: Vec<PanelChart> = FIGURE_COLUMNS
        .iter()
        .map(|(col, title)| PanelChart {
            title: (*title).to_string(),
            series: variants
                .iter()
                .enumerate()
                .map(|(i, (label, panel))| Series {
                    label: label.clone(),
                    values: panel.col(*col).to_vec(),
                    style: LineStyle::for_index(i),
                })
                .collect(),
        })
        .collect();
    render_grid(&panels, 3, caption)
}
