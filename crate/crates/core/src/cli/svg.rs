//! Minimal SVG plots: line charts, bar charts for functions on the set, and
//! the depth-by-depth construction diagram.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(xs: &[f64], ys: &[f64]) -> Self {
        let (x0, x1) = bounds(xs);
        let (mut y0, mut y1) = bounds(ys);
        y0 = y0.min(0.0);
        y1 = y1.max(0.0);
        if y1 - y0 < 1e-300 {
            y1 = y0 + 1.0;
        }
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo, lo + 1.0)
    } else {
        (lo, hi)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (l, r) = (f.px(f.x0), f.px(f.x1));
    let (b, t) = (f.py(f.y0), f.py(f.y1));
    let zero = f.py(0.0);
    let _ = writeln!(
        out,
        r#"<path d="M{l:.2} {t:.2} L{l:.2} {b:.2} L{r:.2} {b:.2}" stroke="black" fill="none"/>"#
    );
    if zero > t && zero < b {
        let _ = writeln!(
            out,
            r##"<line x1="{l:.2}" y1="{zero:.2}" x2="{r:.2}" y2="{zero:.2}" stroke="#999" stroke-dasharray="3 3"/>"##
        );
    }
    for (x, y, anchor, s) in [
        (l, b + 16.0, "start", format!("{:.3}", f.x0)),
        (r, b + 16.0, "end", format!("{:.3}", f.x1)),
        (l - 4.0, b, "end", format!("{:.3}", f.y0)),
        (l - 4.0, t + 4.0, "end", format!("{:.3}", f.y1)),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{s}</text>"#
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(ylabel)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One or more polylines sharing axes.
pub fn lines(title: &str, xlabel: &str, ylabel: &str, series: &[(&str, &[f64], &[f64])]) -> String {
    let xs: Vec<f64> = series.iter().flat_map(|s| s.1.iter().copied()).collect();
    let ys: Vec<f64> = series.iter().flat_map(|s| s.2.iter().copied()).collect();
    let f = Frame::fit(&xs, &ys);
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, xlabel, ylabel);
    const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    for (k, (name, x, y)) in series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let mut d = String::new();
        for (i, (a, b)) in x.iter().zip(y.iter()).enumerate() {
            let _ = write!(d, "{}{:.2} {:.2} ", if i == 0 { "M" } else { "L" }, f.px(*a), f.py(*b));
        }
        let _ = writeln!(out, r#"<path d="{}" stroke="{colour}" fill="none"/>"#, d.trim_end());
        if series.len() > 1 {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="{colour}">{}</text>"#,
                WIDTH - MARGIN - 120.0,
                MARGIN + 14.0 * k as f64,
                escape(name)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Vertical bars from zero to each sample, for functions that live only on
/// the set's points.
pub fn bars(title: &str, xlabel: &str, ylabel: &str, x: &[f64], y: &[f64]) -> String {
    let f = Frame::fit(x, y);
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f, xlabel, ylabel);
    let zero = f.py(0.0);
    let mut d = String::new();
    for (a, b) in x.iter().zip(y) {
        let px = f.px(*a);
        let _ = write!(d, "M{px:.2} {zero:.2} L{px:.2} {:.2} ", f.py(*b));
    }
    let _ = writeln!(out, r##"<path d="{}" stroke="#1f77b4" stroke-width="1"/>"##, d.trim_end());
    out.push_str("</svg>\n");
    out
}

/// One row of filled intervals per construction depth.
pub fn construction(title: &str, levels: &[Vec<(f64, f64)>]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let rows = levels.len().max(1) as f64;
    let row_h = (HEIGHT - 2.0 * MARGIN) / rows;
    let span = WIDTH - 2.0 * MARGIN;
    for (depth, intervals) in levels.iter().enumerate() {
        let y = MARGIN + row_h * depth as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">k={depth}</text>"#,
            MARGIN - 6.0,
            y + 0.5 * row_h
        );
        for (l, r) in intervals {
            let _ = writeln!(
                out,
                r#"<rect x="{:.3}" y="{y:.2}" width="{:.3}" height="{:.2}" fill="black"/>"#,
                MARGIN + l * span,
                ((r - l) * span).max(0.2),
                0.5 * row_h
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
