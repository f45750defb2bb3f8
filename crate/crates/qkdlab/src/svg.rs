//! Static SVG line charts, four panels per β_A: expectations, QBERs,
//! C parameters and key rates, each against β_B.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rfiqkd_core::secanalysis::CVariant;

use crate::error::{LabError, Result};
use crate::sweep::SweepRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#7f3c8d"];

/// A named series; points with `None` are skipped.
pub struct Series {
    pub label: &'static str,
    pub values: Vec<Option<f64>>,
}

pub struct Panel {
    /// Filename stem, e.g. `expectations`.
    pub name: &'static str,
    pub title: &'static str,
    pub y_label: &'static str,
    pub y_range: (f64, f64),
    pub series: Vec<Series>,
}

fn series<F: Fn(&SweepRow) -> Option<f64>>(rows: &[SweepRow], label: &'static str, f: F) -> Series {
    Series {
        label,
        values: rows.iter().map(f).collect(),
    }
}

/// The four panels for one sweep.
pub fn build_panels(rows: &[SweepRow]) -> Vec<Panel> {
    let exp = |i: usize| move |r: &SweepRow| r.expectations[i].map(|e| e.value);
    let q = |i: usize| move |r: &SweepRow| r.qber[i].map(|q| q.raw);
    let c = |v: CVariant| move |r: &SweepRow| r.c_value(v).map(|c| c.value);
    let rfi = |v: CVariant| move |r: &SweepRow| r.rfi(v).map(|k| k.clamped);
    vec![
        Panel {
            name: "expectations",
            title: "Correlations",
            y_label: "expectation value",
            y_range: (-1.05, 1.05),
            series: vec![
                series(rows, "<XX>", exp(0)),
                series(rows, "<XY>", exp(1)),
                series(rows, "<YX>", exp(2)),
                series(rows, "<YY>", exp(3)),
                series(rows, "<ZZ>", exp(4)),
            ],
        },
        Panel {
            name: "qber",
            title: "Raw QBER",
            y_label: "QBER",
            y_range: (0.0, 1.0),
            series: vec![
                series(rows, "Q_Z", q(0)),
                series(rows, "Q_X", q(1)),
                series(rows, "Q_Y", q(2)),
            ],
        },
        Panel {
            name: "cparam",
            title: "C parameter",
            y_label: "C",
            y_range: (0.0, 2.1),
            series: vec![
                series(rows, "C44", c(CVariant::C44)),
                series(rows, "C24", c(CVariant::C24)),
                series(rows, "C14", c(CVariant::C14)),
            ],
        },
        Panel {
            name: "keyrate",
            title: "Secret key rate",
            y_label: "r",
            y_range: (0.0, 1.05),
            series: vec![
                series(rows, "r_MDI", |r: &SweepRow| r.r_mdi()),
                series(rows, "r44", rfi(CVariant::C44)),
                series(rows, "r24", rfi(CVariant::C24)),
                series(rows, "r14", rfi(CVariant::C14)),
            ],
        },
    ]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render one panel. Series without any value are left out, legend included.
pub fn render_panel(panel: &Panel, x: &[f64], beta_a: f64) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let (x0, x1) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let x_span = if x1 > x0 { x1 - x0 } else { 1.0 };
    let (y0, y1) = panel.y_range;
    let px = |v: f64| LEFT + (v - x0) / x_span * plot_w;
    let py = |v: f64| TOP + (y1 - v.clamp(y0, y1)) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{} (β_A = {beta_a:.4} rad)</text>"#,
        LEFT + plot_w / 2.0,
        escape(panel.title)
    );
    // axes
    let _ = writeln!(
        s,
        r##"<g stroke="#333" stroke-width="1"><line x1="{LEFT}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.1}"/></g>"##,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h,
        TOP + plot_h
    );
    for k in 0..=4 {
        let yv = y0 + (y1 - y0) * k as f64 / 4.0;
        let y = py(yv);
        let _ = writeln!(
            s,
            r##"<line x1="{:.1}" y1="{y:.3}" x2="{LEFT}" y2="{y:.3}" stroke="#333"/><text x="{:.1}" y="{:.3}" text-anchor="end">{yv:.2}</text>"##,
            LEFT - 4.0,
            LEFT - 6.0,
            y + 4.0
        );
        let xv = x0 + x_span * k as f64 / 4.0;
        let xp = px(xv);
        let _ = writeln!(
            s,
            r##"<line x1="{xp:.3}" y1="{:.1}" x2="{xp:.3}" y2="{:.1}" stroke="#333"/><text x="{xp:.3}" y="{:.1}" text-anchor="middle">{xv:.2}</text>"##,
            TOP + plot_h,
            TOP + plot_h + 4.0,
            TOP + plot_h + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">β_B (rad)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(panel.y_label)
    );

    let mut legend_row = 0;
    for (i, ser) in panel.series.iter().enumerate() {
        let pts: Vec<String> = x
            .iter()
            .zip(&ser.values)
            .filter_map(|(&xv, yv)| yv.map(|y| format!("{:.3},{:.3}", px(xv), py(y))))
            .collect();
        if pts.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<polyline class="series" data-label="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            escape(ser.label),
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * legend_row as f64;
        let lx = LEFT + plot_w + 14.0;
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(ser.label)
        );
        legend_row += 1;
    }
    s.push_str("</svg>\n");
    s
}

pub fn panel_filename(panel: &str, beta_a: f64) -> String {
    format!("panel_{panel}_betaA_{beta_a:.4}.svg")
}

/// Write the four panels into `dir`; returns the written paths.
pub fn emit_svg(rows: &[SweepRow], dir: &Path) -> Result<Vec<PathBuf>> {
    let first = rows
        .first()
        .ok_or_else(|| LabError::Config("no sweep rows to plot".into()))?;
    let x: Vec<f64> = rows.iter().map(|r| r.beta_b).collect();
    let mut written = Vec::new();
    for panel in build_panels(rows) {
        let path = dir.join(panel_filename(panel.name, first.beta_a));
        fs::write(&path, render_panel(&panel, &x, first.beta_a))
            .map_err(|e| LabError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
