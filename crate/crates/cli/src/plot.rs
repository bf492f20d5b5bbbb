//! Static SVG 1.1 figures.

use std::fmt::Write;

use lipswiss_core::{CoverEstimate, Disk, SwissCheeseDomain};

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

pub const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub dashed: bool,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>, color: &'static str) -> Self {
        Series { name: name.into(), points, color, dashed: false }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Plot `log₁₀ y`; non-positive values are dropped.
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
}

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

impl LinePlot {
    pub fn render(&self) -> String {
        let tf = |y: f64| if self.log_y { (y > 0.0).then(|| y.log10()) } else { y.is_finite().then_some(y) };
        let series: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| s.points.iter().filter_map(|&(x, y)| Some((x, tf(y)?))).filter(|p| p.0.is_finite()).collect())
            .collect();
        let (x0, x1) = range(series.iter().flatten().map(|p| p.0));
        let (y0, y1) = range(series.iter().flatten().map(|p| p.1));
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut out = String::new();
        header(&mut out, W, H);
        let _ = writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, escape(&self.title));
        let _ = writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let ylab = if self.log_y { format!("1e{yv:.1}") } else { format!("{yv:.3}") };
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xv:.4}</text>"#,
                sx(xv),
                TOP + ph + 18.0
            );
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{ylab}</text>"#, LEFT - 6.0, sy(yv) + 4.0);
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            H - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );
        for (k, (s, pts)) in self.series.iter().zip(&series).enumerate() {
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            if path.len() == 1 {
                let (x, y) = pts[0];
                let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#, sx(x), sy(y), s.color);
            } else if !path.is_empty() {
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                    path.join(" "),
                    s.color
                );
            }
            let ly = TOP + 14.0 + 18.0 * k as f64;
            let lx = W - RIGHT + 10.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"{dash}/>"#,
                lx + 20.0,
                s.color
            );
            let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&s.name));
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Unit disk with the annuli, holes and exceptional margins of `domain`.
///
/// Features smaller than a tenth of a pixel are omitted.
pub fn domain_figure(domain: &SwissCheeseDomain) -> String {
    let size = 560.0;
    let half = size / 2.0;
    let scale = half - 20.0;
    let px = |x: f64| half + x * scale;
    let mut out = String::new();
    header(&mut out, size, size);
    let _ = writeln!(
        out,
        r##"<circle cx="{half}" cy="{half}" r="{scale}" fill="#eef3fb" stroke="black" stroke-width="1"/>"##
    );
    let mut n = 1;
    while n <= domain.max_index().max(1) && 2f64.powi(-(n as i32)) * scale > 0.1 {
        let r = 2f64.powi(-(n as i32)) * scale;
        let _ = writeln!(
            out,
            r##"<circle cx="{half}" cy="{half}" r="{r:.4}" fill="none" stroke="#888888" stroke-width="0.5" stroke-dasharray="3 3"/>"##
        );
        n += 1;
    }
    for h in domain.holes() {
        let (a, r, s) = (h.a(), h.r(), h.s());
        if (r + s) * scale < 0.1 {
            break;
        }
        let _ = writeln!(
            out,
            r##"<circle cx="{:.4}" cy="{half}" r="{:.4}" fill="none" stroke="#ff7f0e" stroke-width="0.6"/>"##,
            px(a),
            (r + s) * scale
        );
        let _ = writeln!(
            out,
            r##"<circle cx="{:.4}" cy="{half}" r="{:.4}" fill="white" stroke="#d62728" stroke-width="0.8"/>"##,
            px(a),
            r * scale
        );
    }
    let _ = writeln!(out, r#"<circle cx="{half}" cy="{half}" r="1.5" fill="black"/>"#);
    out.push_str("</svg>\n");
    out
}

/// Cover squares drawn over the hole they cover, framed on the union of both.
pub fn cover_figure(cover: &CoverEstimate, hole: Disk) -> String {
    let size = 480.0;
    let (mut x0, mut x1) = (hole.center.re - hole.radius, hole.center.re + hole.radius);
    let (mut y0, mut y1) = (hole.center.im - hole.radius, hole.center.im + hole.radius);
    for sq in &cover.squares {
        let b = cover.bounds(sq);
        x0 = x0.min(b.x);
        x1 = x1.max(b.x + b.side);
        y0 = y0.min(b.y);
        y1 = y1.max(b.y + b.side);
    }
    let span = (x1 - x0).max(y1 - y0) * 1.1;
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let k = size / span;
    let px = |x: f64| (x - cx) * k + size / 2.0;
    let py = |y: f64| size / 2.0 - (y - cy) * k;
    let mut out = String::new();
    header(&mut out, size, size);
    let _ = writeln!(
        out,
        r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="#fde0dd" stroke="#d62728"/>"##,
        px(hole.center.re),
        py(hole.center.im),
        hole.radius * k
    );
    for sq in &cover.squares {
        let b = cover.bounds(sq);
        let _ = writeln!(
            out,
            r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#1f77b4" stroke-width="0.8"/>"##,
            px(b.x),
            py(b.y + b.side),
            b.side * k,
            b.side * k
        );
    }
    let _ = writeln!(out, r#"<text x="10" y="20">cover sum {:.6e}</text>"#, cover.value);
    out.push_str("</svg>\n");
    out
}
