//! Minimal static SVG line plots.

use std::fmt::Write as _;

use crate::dynamics::Trajectory;

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 32.0;
const MARGIN_B: f64 = 48.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
            dashed: false,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl Panel {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn with(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * hi.abs().max(1.0) {
        let pad = 0.5 * hi.abs().max(1.0);
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn fmt_tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn draw_panel(out: &mut String, p: &Panel, ox: f64) {
    let (x0, x1) = bounds(p.series.iter().flat_map(|s| s.points.iter().map(|q| q.0)));
    let (y0, y1) = bounds(p.series.iter().flat_map(|s| s.points.iter().map(|q| q.1)));
    let pw = PANEL_W - MARGIN_L - MARGIN_R;
    let ph = PANEL_H - MARGIN_T - MARGIN_B;
    let sx = |x: f64| ox + MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + ph - (y - y0) / (y1 - y0) * ph;

    let _ = writeln!(
        out,
        r##"<rect x="{:.1}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##,
        ox + MARGIN_L
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        ox + MARGIN_L + pw / 2.0,
        escape(&p.title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
        ox + MARGIN_L + pw / 2.0,
        PANEL_H - 10.0,
        escape(&p.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
        ox + 14.0,
        MARGIN_T + ph / 2.0,
        ox + 14.0,
        MARGIN_T + ph / 2.0,
        escape(&p.y_label)
    );

    let step = nice_step(x1 - x0);
    let mut t = (x0 / step).ceil() * step;
    while t <= x1 + 1e-9 * step {
        let x = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#444"/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"##,
            MARGIN_T + ph,
            MARGIN_T + ph + 4.0,
            MARGIN_T + ph + 16.0,
            fmt_tick(t)
        );
        t += step;
    }
    let step = nice_step(y1 - y0);
    let mut t = (y0 / step).ceil() * step;
    while t <= y1 + 1e-9 * step {
        let y = sy(t);
        let _ = writeln!(
            out,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#444"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"##,
            ox + MARGIN_L - 4.0,
            ox + MARGIN_L,
            ox + MARGIN_L - 6.0,
            y + 3.0,
            fmt_tick(t)
        );
        t += step;
    }

    for (i, s) in p.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        for &(x, y) in s.points.iter().filter(|q| q.0.is_finite() && q.1.is_finite()) {
            let _ = write!(pts, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            pts.trim_end()
        );
        let ly = MARGIN_T + 14.0 + 14.0 * i as f64;
        let lx = ox + MARGIN_L + 8.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
            lx + 18.0,
            lx + 22.0,
            ly + 3.0,
            escape(&s.label)
        );
    }
}

/// Renders panels side by side into a standalone SVG document.
pub fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL_H}" viewBox="0 0 {width} {PANEL_H}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        draw_panel(&mut out, p, i as f64 * PANEL_W);
    }
    out.push_str("</svg>\n");
    out
}

/// Position against time, and climber-end tension against strain.
pub fn trajectory_svg(traj: &Trajectory) -> String {
    let s = traj.samples();
    let pos = Panel::new("Climber position", "t [s]", "y [m]")
        .with(Series::new("y(t)", s.iter().map(|p| (p.t, p.y)).collect()))
        .with(
            Series::new(
                "taut length",
                vec![(s[0].t, traj.meta().taut_length), (traj.last().t, traj.meta().taut_length)],
            )
            .dashed(),
        );
    let mut path = Panel::new("Tension vs strain", "strain", "tension [N]")
        .with(Series::new("b(strain)", s.iter().map(|p| (p.strain, p.tension)).collect()));
    if s.iter().any(|p| p.strain_upper.is_some()) {
        path = path.with(
            Series::new(
                "upper segment",
                s.iter().map(|p| (p.strain_upper.unwrap_or(0.0), p.tension)).collect(),
            )
            .dashed(),
        );
    }
    render(&[pos, path])
}

/// Sampled energy with its lower convex envelope.
pub fn envelope_svg(points: &[(f64, f64)], envelope: &[f64]) -> String {
    let panel = Panel::new("Energy and convex envelope", "strain", "W [N]")
        .with(Series::new("W_mic", points.to_vec()))
        .with(
            Series::new(
                "envelope",
                points.iter().zip(envelope).map(|(p, &w)| (p.0, w)).collect(),
            )
            .dashed(),
        );
    render(&[panel])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_well_formed_document() {
        let p = Panel::new("a < b", "x", "y").with(Series::new("s", vec![(0.0, 0.0), (1.0, 2.0)]));
        let svg = render(&[p]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b"));
        assert!(svg.contains("<polyline"));
    }

    #[test]
    fn degenerate_ranges_do_not_produce_nan() {
        let p = Panel::new("flat", "x", "y").with(Series::new("s", vec![(1.0, 5.0), (1.0, 5.0)]));
        assert!(!render(&[p]).contains("NaN"));
    }

    #[test]
    fn tick_steps_are_round() {
        assert_eq!(nice_step(10.0), 2.0);
        assert!((nice_step(0.2) - 0.05).abs() < 1e-15);
    }
}
