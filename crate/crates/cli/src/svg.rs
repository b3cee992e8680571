//! Minimal standalone SVG 1.1 line/scatter plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl Scale {
    /// Log when every value is positive and the range spans a decade or more.
    pub fn auto(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            if v.is_nan() || v <= 0.0 {
                return Scale::Linear;
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi.is_finite() && hi / lo >= 10.0 {
            Scale::Log
        } else {
            Scale::Linear
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scale::Linear => "linear",
            Scale::Log => "log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Markers,
    LineMarkers,
    Line,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, style: Style) -> Self {
        Self {
            label: label.into(),
            points,
            style,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub y_scale: Scale,
    pub series: Vec<Series>,
    /// Free-form provenance appended to `<desc>`.
    pub note: String,
}

struct Axis {
    scale: Scale,
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn fit(scale: Scale, values: &[f64], px_lo: f64, px_hi: f64) -> Self {
        let (mut lo, mut hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        match scale {
            Scale::Log => {
                lo = 10f64.powf(lo.log10().floor());
                hi = 10f64.powf(hi.log10().ceil());
                if hi <= lo {
                    hi = lo * 10.0;
                }
            }
            Scale::Linear => {
                if hi - lo <= 1e-300 {
                    let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
                    lo -= pad;
                    hi += pad;
                } else {
                    let pad = 0.05 * (hi - lo);
                    lo -= pad;
                    hi += pad;
                }
            }
        }
        Self {
            scale,
            lo,
            hi,
            px_lo,
            px_hi,
        }
    }

    fn unit(&self, v: f64) -> f64 {
        match self.scale {
            Scale::Linear => (v - self.lo) / (self.hi - self.lo),
            Scale::Log => (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10()),
        }
    }

    fn map(&self, v: f64) -> f64 {
        self.px_lo + self.unit(v) * (self.px_hi - self.px_lo)
    }

    fn ticks(&self) -> Vec<f64> {
        match self.scale {
            Scale::Log => {
                let (a, b) = (self.lo.log10().round() as i32, self.hi.log10().round() as i32);
                let stride = ((b - a) / 8 + 1).max(1);
                (a..=b).step_by(stride as usize).map(|e| 10f64.powi(e)).collect()
            }
            Scale::Linear => {
                let raw = (self.hi - self.lo) / 6.0;
                let mag = 10f64.powf(raw.log10().floor());
                let step = [1.0, 2.0, 5.0, 10.0]
                    .iter()
                    .map(|m| m * mag)
                    .find(|s| *s >= raw)
                    .unwrap_or(10.0 * mag);
                let first = (self.lo / step).ceil() as i64;
                let last = (self.hi / step).floor() as i64;
                (first..=last).map(|i| i as f64 * step).collect()
            }
        }
    }
}

fn tick_label(v: f64, scale: Scale) -> String {
    match scale {
        Scale::Log => format!("1e{}", v.log10().round() as i32),
        Scale::Linear => {
            let s = format!("{v:.6}");
            let s = s.trim_end_matches('0').trim_end_matches('.');
            if s == "-0" { "0".to_string() } else { s.to_string() }
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Figure {
    fn plotted(&self, s: &Series) -> Vec<(f64, f64)> {
        s.points
            .iter()
            .copied()
            .filter(|&(x, y)| {
                x.is_finite()
                    && y.is_finite()
                    && (self.x_scale == Scale::Linear || x > 0.0)
                    && (self.y_scale == Scale::Linear || y > 0.0)
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let kept: Vec<Vec<(f64, f64)>> = self.series.iter().map(|s| self.plotted(s)).collect();
        let xs: Vec<f64> = kept.iter().flatten().map(|p| p.0).collect();
        let ys: Vec<f64> = kept.iter().flatten().map(|p| p.1).collect();
        let x = Axis::fit(self.x_scale, &xs, LEFT, WIDTH - RIGHT);
        let y = Axis::fit(self.y_scale, &ys, HEIGHT - BOTTOM, TOP);
        let dropped: usize = self.series.iter().zip(&kept).map(|(s, k)| s.points.len() - k.len()).sum();

        let mut o = String::new();
        let _ = writeln!(o, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#);
        let _ = writeln!(
            o,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(o, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(
            o,
            "<desc>x axis: {} scale; y axis: {} scale; {} point(s) outside the log domain omitted. {}</desc>",
            self.x_scale.name(),
            self.y_scale.name(),
            dropped,
            escape(&self.note)
        );
        let _ = writeln!(o, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
        let _ = writeln!(
            o,
            r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        let _ = writeln!(o, r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
        for t in x.ticks() {
            let px = x.map(t);
            let _ = writeln!(
                o,
                r##"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{y1}" stroke="#dddddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                y0 + 16.0,
                tick_label(t, x.scale)
            );
        }
        for t in y.ticks() {
            let py = y.map(t);
            let _ = writeln!(
                o,
                r##"<line x1="{x0}" y1="{py:.2}" x2="{x1}" y2="{py:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                x0 - 6.0,
                py + 4.0,
                tick_label(t, y.scale)
            );
        }
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
            0.5 * (x0 + x1),
            HEIGHT - 18.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            o,
            r#"<text x="18" y="{:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {:.2})">{}</text>"#,
            0.5 * (y0 + y1),
            0.5 * (y0 + y1),
            escape(&self.y_label)
        );
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            0.5 * (x0 + x1),
            escape(&self.title)
        );
        let _ = writeln!(o, "</g>");

        for (i, (s, pts)) in self.series.iter().zip(&kept).enumerate() {
            let color = COLORS[i % COLORS.len()];
            let _ = writeln!(o, r#"<g stroke="{color}" fill="{color}">"#);
            if s.style != Style::Markers && pts.len() > 1 {
                let path: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.2},{:.2}", x.map(a), y.map(b))).collect();
                let _ = writeln!(o, r#"<polyline fill="none" stroke-width="1.5" points="{}"/>"#, path.join(" "));
            }
            if s.style != Style::Line {
                for &(a, b) in pts {
                    let _ = writeln!(o, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, x.map(a), y.map(b));
                }
            }
            let ly = TOP + 14.0 + 18.0 * i as f64;
            let lx = WIDTH - RIGHT + 12.0;
            let _ = writeln!(
                o,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke-width="2"/><text x="{}" y="{}" stroke="none" font-family="sans-serif" font-size="11">{}</text>"#,
                lx + 18.0,
                lx + 24.0,
                ly + 4.0,
                escape(&s.label)
            );
            let _ = writeln!(o, "</g>");
        }
        o.push_str("</svg>\n");
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_scale() {
        assert_eq!(Scale::auto([1.0, 1000.0]), Scale::Log);
        assert_eq!(Scale::auto([1.0, 5.0]), Scale::Linear);
        assert_eq!(Scale::auto([0.0, 1000.0]), Scale::Linear);
    }

    #[test]
    fn log_ticks_are_decades() {
        let a = Axis::fit(Scale::Log, &[3e-3, 40.0], 0.0, 1.0);
        assert_eq!(a.lo, 1e-3);
        assert_eq!(a.hi, 100.0);
        assert_eq!(a.ticks().len(), 6);
        assert!((a.map(1e-1) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn render_drops_nonpositive_on_log() {
        let f = Figure {
            title: "t <1>".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            x_scale: Scale::Log,
            y_scale: Scale::Linear,
            series: vec![Series::new("s", vec![(0.0, 1.0), (1.0, 2.0), (10.0, 3.0)], Style::LineMarkers)],
            note: String::new(),
        };
        let svg = f.render();
        assert!(svg.contains("<title>t &lt;1&gt;</title>"));
        assert!(svg.contains("1 point(s) outside"));
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}
