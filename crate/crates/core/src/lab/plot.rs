//! Minimal SVG scatter plots (linear x, logarithmic y).

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: [f64; 4] = [70.0, 20.0, 30.0, 50.0]; // left, right, top, bottom
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// One named point set.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Scatter plot of every series with strictly positive `y`; nonpositive
/// values are dropped (a log axis cannot show them).
pub fn log_scatter_svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|s| s.points.iter()).filter(|p| p.1 > 0.0 && p.0.is_finite());
    let (mut x0, mut x1) = pts().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.0), a.1.max(p.0)));
    let (mut y0, mut y1) =
        pts().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.1.log10()), a.1.max(p.1.log10())));
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, -1.0, 0.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    y0 = y0.floor();
    y1 = y1.ceil().max(y0 + 1.0);
    let (pw, ph) = (W - MARGIN[0] - MARGIN[1], H - MARGIN[2] - MARGIN[3]);
    let sx = |x: f64| MARGIN[0] + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN[2] + (y1 - y.log10()) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#,
        MARGIN[0], MARGIN[2]
    );
    for e in (y0 as i32)..=(y1 as i32) {
        let y = sy(10f64.powi(e));
        let _ = writeln!(s, r##"<line x1="{}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/>"##, MARGIN[0], MARGIN[0] + pw);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{e}</text>"#, MARGIN[0] - 6.0, y + 4.0);
    }
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            sx(x),
            MARGIN[2] + ph + 16.0,
            trim(x)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, MARGIN[0] + pw / 2.0, H - 10.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        MARGIN[2] + ph / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let c = COLORS[i % COLORS.len()];
        for &(x, y) in ser.points.iter().filter(|p| p.1 > 0.0 && p.0.is_finite()) {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{c}"/>"#, sx(x), sy(y));
        }
        let ly = MARGIN[2] + 14.0 + 16.0 * i as f64;
        let lx = MARGIN[0] + pw - 150.0;
        let _ = writeln!(s, r#"<circle cx="{lx}" cy="{}" r="4" fill="{c}"/>"#, ly - 4.0);
        let _ = writeln!(s, r#"<text x="{}" y="{ly}">{}</text>"#, lx + 10.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn trim(x: f64) -> String {
    let t = format!("{x:.3}");
    t.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_points() {
        let svg = log_scatter_svg(
            "t",
            "E",
            "gap",
            &[Series { label: "a<b".into(), points: vec![(1.0, 0.5), (2.0, 0.05), (3.0, 0.0)] }],
        );
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("a&lt;b"));
    }
}
