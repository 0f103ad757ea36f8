//! Minimal log-log line plots written as standalone SVG.

use std::fmt::Write as _;
use std::path::Path;

use crate::study::{read_rows, StudyError, StudyRow};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Decade-aligned `log10` range covering `values`.
fn decades(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let (lo, hi) = (lo.log10().floor(), hi.log10().ceil());
    if hi > lo {
        (lo, hi)
    } else {
        (lo, lo + 1.0)
    }
}

/// Log-log plot of every series; points with a non-positive coordinate are
/// dropped.
pub fn loglog_svg(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let clean: Vec<Series> = series
        .iter()
        .map(|s| Series {
            label: s.label.clone(),
            points: s.points.iter().copied().filter(|(x, y)| *x > 0.0 && *y > 0.0).collect(),
        })
        .collect();
    let (x0, x1) = decades(clean.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = decades(clean.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x.log10() - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + (y1 - y.log10()) / (y1 - y0) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, escape(title));
    let _ = writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for k in x0 as i64..=x1 as i64 {
        let x = px(10f64.powi(k as i32));
        let _ = writeln!(out, r##"<line x1="{x}" y1="{TOP}" x2="{x}" y2="{}" stroke="#ddd"/>"##, TOP + ph);
        let _ = writeln!(out, r#"<text x="{x}" y="{}" text-anchor="middle">1e{k}</text>"#, TOP + ph + 18.0);
    }
    for k in y0 as i64..=y1 as i64 {
        let y = py(10f64.powi(k as i32));
        let _ = writeln!(out, r##"<line x1="{LEFT}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/>"##, LEFT + pw);
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">1e{k}</text>"#, LEFT - 6.0, y + 4.0);
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 16.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(ylabel)
    );
    for (i, s) in clean.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        if !s.points.is_empty() {
            let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
            for &(x, y) in &s.points {
                let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y));
            }
        }
        let ly = TOP + 16.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(out, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&s.label));
    }
    out.push_str("</svg>\n");
    out
}

/// Which study columns go on the axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axes {
    ErrorVsN,
    ErrorVsTime,
    ErrorVsQmax,
}

impl Axes {
    fn labels(self) -> (&'static str, &'static str) {
        match self {
            Axes::ErrorVsN => ("N", "relative error"),
            Axes::ErrorVsTime => ("wall time [s]", "relative error"),
            Axes::ErrorVsQmax => ("Q_max = h max|q|", "relative error"),
        }
    }

    fn point(self, r: &StudyRow) -> Option<(f64, f64)> {
        let y = r.e_rel?;
        let x = match self {
            Axes::ErrorVsN => r.n as f64,
            Axes::ErrorVsTime => r.wall_time?,
            Axes::ErrorVsQmax => r.q_max,
        };
        Some((x, y))
    }
}

/// Group rows into one series per method (and per amplitude when several
/// amplitudes are present, except on the `Q_max` axis where amplitude is
/// the abscissa).
pub fn series_from_rows(rows: &[StudyRow], axes: Axes) -> Vec<Series> {
    let mut amps: Vec<f64> = rows.iter().map(|r| r.amplitude).collect();
    amps.sort_by(|a, b| a.total_cmp(b));
    amps.dedup();
    let split = amps.len() > 1 && axes != Axes::ErrorVsQmax;
    let mut out: Vec<Series> = Vec::new();
    for r in rows {
        let label = if split { format!("{} A={}", r.method, r.amplitude) } else { r.method.to_string() };
        let idx = match out.iter().position(|s| s.label == label) {
            Some(i) => i,
            None => {
                out.push(Series { label, points: Vec::new() });
                out.len() - 1
            }
        };
        if let Some(p) = axes.point(r) {
            out[idx].points.push(p);
        }
    }
    out
}

/// Read a study CSV and write its plot.
pub fn plot_csv(csv: &Path, svg: &Path, title: &str, axes: Axes) -> Result<(), StudyError> {
    let rows = read_rows(csv)?;
    let (xl, yl) = axes.labels();
    std::fs::write(svg, loglog_svg(title, xl, yl, &series_from_rows(&rows, axes)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use zsnft::Method;

    fn row(m: Method, n: usize, e: Option<f64>) -> StudyRow {
        StudyRow {
            method: m,
            n,
            amplitude: 4.4,
            q_max: 0.1,
            e_rel: e,
            wall_time: Some(0.01),
            observed_order: None,
            note: None,
        }
    }

    #[test]
    fn svg_structure() {
        let s = loglog_svg(
            "t <1>",
            "x",
            "y",
            &[Series { label: "a".into(), points: vec![(1.0, 1e-3), (10.0, 1e-5), (100.0, 0.0)] }],
        );
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("t &lt;1&gt;"));
        assert_eq!(s.matches("<circle").count(), 2);
    }

    #[test]
    fn grouping() {
        let rows = vec![
            row(Method::Erk34, 64, Some(1e-2)),
            row(Method::Erk34, 128, Some(1e-3)),
            row(Method::M12, 64, None),
        ];
        let s = series_from_rows(&rows, Axes::ErrorVsN);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].points, vec![(64.0, 1e-2), (128.0, 1e-3)]);
        assert!(s[1].points.is_empty());
    }

    #[test]
    fn empty_plot_is_valid() {
        let s = loglog_svg("empty", "x", "y", &[]);
        assert!(s.contains("</svg>"));
    }
}
