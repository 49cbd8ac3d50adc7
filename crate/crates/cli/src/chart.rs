//! Log-log line charts written directly as SVG.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use signeq::fit::RateFit;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct ChartSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Drawn dashed over the first series; slope goes in the legend.
    pub fit: Option<RateFit<f64>>,
}

impl ChartSpec {
    /// One data series with its fitted line.
    pub fn with_fit(title: &str, y_label: &str, label: &str, fit: &RateFit<f64>) -> Self {
        ChartSpec {
            title: title.into(),
            x_label: "n".into(),
            y_label: y_label.into(),
            series: vec![Series {
                label: label.into(),
                points: fit.pairs.iter().map(|&(n, e)| (n as f64, e)).collect(),
            }],
            fit: Some(fit.clone()),
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    /// Decade-aligned range covering `values` (log10 space).
    fn covering(values: impl Iterator<Item = f64>) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v.log10());
            hi = hi.max(v.log10());
        }
        let (mut lo, mut hi) = (lo.floor(), hi.ceil());
        if hi <= lo {
            lo -= 1.0;
            hi += 1.0;
        }
        Axis { lo, hi }
    }

    fn frac(&self, v: f64) -> f64 {
        (v.log10() - self.lo) / (self.hi - self.lo)
    }
}

pub fn render(spec: &ChartSpec) -> Result<String> {
    let all = spec.series.iter().flat_map(|s| s.points.iter());
    if all.clone().next().is_none() {
        bail!("chart {:?} has no points", spec.title);
    }
    if let Some(p) = all.clone().find(|p| !(p.0 > 0.0 && p.1 > 0.0 && p.0.is_finite() && p.1.is_finite())) {
        bail!("chart {:?}: point {:?} cannot go on log axes", spec.title, p);
    }
    let xa = Axis::covering(all.clone().map(|p| p.0));
    let ya = Axis::covering(all.map(|p| p.1));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + xa.frac(x) * pw;
    let py = |y: f64| TOP + (1.0 - ya.frac(y)) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;
    writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&spec.title)
    )?;
    writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
    )?;

    for d in (xa.lo as i32)..=(xa.hi as i32) {
        let x = px(10f64.powi(d));
        writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP + ph)?;
        writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#, TOP + ph + 16.0)?;
    }
    for d in (ya.lo as i32)..=(ya.hi as i32) {
        let y = py(10f64.powi(d));
        writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, LEFT + pw)?;
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#, LEFT - 6.0, y + 4.0)?;
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 14.0,
        escape(&spec.x_label)
    )?;
    writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&spec.y_label)
    )?;

    let mut legend = Vec::new();
    for (i, series) in spec.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = series
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        )?;
        for &(x, y) in &series.points {
            writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}" data-x="{x:?}" data-y="{y:?}"/>"#,
                px(x),
                py(y)
            )?;
        }
        legend.push((color, series.label.clone(), false));
    }
    if let Some(fit) = &spec.fit {
        let xs = spec.series[0].points.iter().map(|p| p.0);
        let (x0, x1) = xs.fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x), b.max(x)));
        let at = |x: f64| (fit.intercept + fit.slope * x.ln()).exp();
        writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#555" stroke-dasharray="6 4"/>"##,
            px(x0),
            py(at(x0)),
            px(x1),
            py(at(x1))
        )?;
        legend.push(("#555", format!("fitted slope {:.3}", fit.slope), true));
    }

    for (i, (color, label, dashed)) in legend.iter().enumerate() {
        let y = TOP + 16.0 + 18.0 * i as f64;
        let x = LEFT + pw - 190.0;
        let dash = if *dashed { r#" stroke-dasharray="6 4""# } else { "" };
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            x + 24.0
        )?;
        writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 30.0, y + 4.0, escape(label))?;
    }
    writeln!(s, "</svg>")?;
    Ok(s)
}
