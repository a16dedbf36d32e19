//! Minimal deterministic SVG plots: point scatter and histogram with an
//! optional density overlay.

use std::fmt::Write;

use num_complex::Complex64;
use serde::Serialize;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 48.0;

/// Fixed binning of a histogram, recorded alongside the plot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Binning {
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * MARGIN)
    }

    fn y(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
}

fn axes(out: &mut String, f: &Frame) {
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    for (v, x) in [(f.x0, MARGIN), (f.x1, W - MARGIN)] {
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#, H - MARGIN + 16.0, fmt(v));
    }
    for (v, y) in [(f.y0, H - MARGIN), (f.y1, MARGIN)] {
        let _ = writeln!(out, r#"<text x="{:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#, MARGIN - 4.0, fmt(v));
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One circle marker per point, on a square frame around the data.
pub fn scatter(points: &[Complex64], title: &str) -> String {
    let r = points.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max).max(1e-12) * 1.05;
    let f = Frame { x0: -r, x1: r, y0: -r, y1: r };
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &f);
    for z in points {
        let _ = writeln!(out, r##"<circle cx="{:.3}" cy="{:.3}" r="2" fill="#1f4e9c"/>"##, f.x(z.re), f.y(z.im));
    }
    out.push_str("</svg>\n");
    out
}

/// Density-normalized histogram of `values`, with `curve` drawn on top.
pub fn histogram(values: &[f64], bins: usize, curve: Option<&[[f64; 2]]>, title: &str) -> (String, Binning) {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let mut lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    let bins = bins.max(1);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in &finite {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let n = finite.len().max(1) as f64;
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    let curve: Vec<[f64; 2]> = curve.unwrap_or(&[]).iter().copied().filter(|p| p[0] >= lo && p[0] <= hi && p[1].is_finite()).collect();
    let top = heights.iter().copied().chain(curve.iter().map(|p| p[1])).fold(0.0, f64::max).max(1e-12) * 1.05;
    let f = Frame { x0: lo, x1: hi, y0: 0.0, y1: top };

    let mut out = String::new();
    header(&mut out, title);
    let binning = Binning { bins, lo, hi };
    let _ = writeln!(out, "<desc>{}</desc>", serde_json::to_string(&binning).expect("binning serializes"));
    axes(&mut out, &f);
    for (i, h) in heights.iter().enumerate() {
        let a = lo + i as f64 * width;
        let x = f.x(a);
        let y = f.y(*h);
        let _ = writeln!(
            out,
            r##"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="#9bb7e0" stroke="#4a6fa5"/>"##,
            f.x(a + width) - x,
            f.y(0.0) - y
        );
    }
    if !curve.is_empty() {
        let path: Vec<String> = curve.iter().map(|p| format!("{:.3},{:.3}", f.x(p[0]), f.y(p[1]))).collect();
        let _ = writeln!(out, r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="2"/>"##, path.join(" "));
    }
    out.push_str("</svg>\n");
    (out, binning)
}
