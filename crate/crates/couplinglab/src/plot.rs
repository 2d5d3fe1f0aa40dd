//! Minimal SVG line plots for sweep output.
//!
//! Plots are a convenience on top of the CSV contract: a fixed-size
//! canvas, linear axes with round tick values, one polyline per curve
//! and a small legend. NaN samples split a curve into segments.

use crate::error::Result;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineStyle {
    Solid,
    Dashed,
    Dotted,
    DashDot,
}

impl LineStyle {
    fn dash_array(&self) -> &'static str {
        match self {
            LineStyle::Solid => "none",
            LineStyle::Dashed => "9,6",
            LineStyle::Dotted => "2,5",
            LineStyle::DashDot => "9,5,2,5",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub style: LineStyle,
}

impl Curve {
    pub fn new(label: impl Into<String>, xs: Vec<f64>, ys: Vec<f64>, style: LineStyle) -> Self {
        Self { label: label.into(), xs, ys, style }
    }
}

const PALETTE: [&str; 6] = ["#1965b0", "#dc050c", "#4eb265", "#882e72", "#f1932d", "#555555"];
const W: f64 = 800.0;
const H: f64 = 560.0;
const ML: f64 = 86.0;
const MR: f64 = 24.0;
const MT: f64 = 46.0;
const MB: f64 = 64.0;

/// Tick positions with a 1-2-5 step covering [lo, hi].
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).abs().max(f64::MIN_POSITIVE);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        mag
    } else if norm < 3.5 {
        2.0 * mag
    } else if norm < 7.5 {
        5.0 * mag
    } else {
        10.0 * mag
    };
    let first = (lo / step).ceil() * step;
    let mut out = Vec::new();
    let mut t = first;
    while t <= hi + 1e-9 * span {
        out.push(t);
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if a >= 1e4 || a < 1e-3 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s.is_empty() { "0".into() } else { s }
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render a line plot to an SVG string.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, curves: &[Curve]) -> String {
    let finite = |v: &f64| v.is_finite();
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for c in curves {
        for (&x, &y) in c.xs.iter().zip(&c.ys) {
            if finite(&x) && finite(&y) {
                x_lo = x_lo.min(x);
                x_hi = x_hi.max(x);
                y_lo = y_lo.min(y);
                y_hi = y_hi.max(y);
            }
        }
    }
    if !x_lo.is_finite() {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if x_hi == x_lo {
        x_hi = x_lo + 1.0;
    }
    if y_hi == y_lo {
        let pad = y_lo.abs().max(1.0) * 0.1;
        y_lo -= pad;
        y_hi += pad;
    } else {
        let pad = (y_hi - y_lo) * 0.06;
        y_lo -= pad;
        y_hi += pad;
    }
    let px = |x: f64| ML + (x - x_lo) / (x_hi - x_lo) * (W - ML - MR);
    let py = |y: f64| H - MB - (y - y_lo) / (y_hi - y_lo) * (H - MT - MB);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"26\" font-family=\"sans-serif\" font-size=\"17\" text-anchor=\"middle\">{}</text>\n",
        (ML + W - MR) / 2.0,
        xml_escape(title)
    ));

    for t in ticks(x_lo, x_hi) {
        let x = px(t);
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{}\" x2=\"{x:.1}\" y2=\"{}\" stroke=\"#dddddd\"/>\n",
            MT,
            H - MB
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            H - MB + 20.0,
            fmt_tick(t)
        ));
    }
    for t in ticks(y_lo, y_hi) {
        let y = py(t);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.1}\" x2=\"{}\" y2=\"{y:.1}\" stroke=\"#dddddd\"/>\n",
            ML,
            W - MR
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            ML - 8.0,
            y + 4.0,
            fmt_tick(t)
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\"/>\n",
        W - ML - MR,
        H - MT - MB
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        (ML + W - MR) / 2.0,
        H - 18.0,
        xml_escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\">{}</text>\n",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        xml_escape(y_label)
    ));

    for (ci, c) in curves.iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let mut segment = String::new();
        let mut flush = |seg: &mut String, svg: &mut String| {
            if seg.split(' ').count() > 1 {
                svg.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" stroke-dasharray=\"{}\"/>\n",
                    seg.trim(),
                    c.style.dash_array()
                ));
            }
            seg.clear();
        };
        for (&x, &y) in c.xs.iter().zip(&c.ys) {
            if x.is_finite() && y.is_finite() {
                segment.push_str(&format!("{:.2},{:.2} ", px(x), py(y)));
            } else {
                flush(&mut segment, &mut svg);
            }
        }
        flush(&mut segment, &mut svg);
        // legend entry
        let ly = MT + 16.0 + 20.0 * ci as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly:.1}\" x2=\"{}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\" stroke-dasharray=\"{}\"/>\n",
            ML + 12.0,
            ML + 44.0,
            c.style.dash_array()
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            ML + 50.0,
            ly + 4.0,
            xml_escape(&c.label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Write a plot to disk.
pub fn write_plot(path: &Path, title: &str, x_label: &str, y_label: &str, curves: &[Curve]) -> Result<()> {
    std::fs::write(path, line_plot(title, x_label, y_label, curves))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn produces_well_formed_svg_with_all_curves() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let c1 = Curve::new("rising", xs.clone(), xs.clone(), LineStyle::Solid);
        let mut gapped = xs.clone();
        gapped[7] = f64::NAN;
        let c2 = Curve::new("with gap", xs.clone(), gapped, LineStyle::Dashed);
        let svg = line_plot("test", "x", "y", &[c1, c2]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("rising"));
        assert!(svg.contains("with gap"));
        // the NaN splits the second curve into two polylines: 1 + 2
        assert_eq!(svg.matches("<polyline").count(), 3);
    }

    #[test]
    fn tick_steps_are_round() {
        let t = ticks(0.0, 1.0);
        assert!(t.len() >= 4 && t.len() <= 8);
        let t = ticks(0.55, 0.60);
        assert!(t.iter().all(|v| (*v * 100.0).round() / 100.0 - v < 1e-12));
    }

    #[test]
    fn degenerate_ranges_do_not_panic() {
        let c = Curve::new("flat", vec![1.0, 1.0], vec![2.0, 2.0], LineStyle::Solid);
        let svg = line_plot("t", "x", "y", &[c]);
        assert!(svg.contains("polyline"));
        let empty = line_plot("t", "x", "y", &[]);
        assert!(empty.starts_with("<svg"));
    }
}
