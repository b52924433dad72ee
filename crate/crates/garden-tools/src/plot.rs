//! Minimal SVG line plots for scan results.

use std::fmt::Write as _;

use crate::formats::ScanPoint;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Success rate (with its confidence band) against the scan axis.
pub fn scan_svg(points: &[ScanPoint], x_label: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);

    if !points.is_empty() {
        let x_min = points.iter().map(|p| p.axis).fold(f64::INFINITY, f64::min);
        let x_max = points.iter().map(|p| p.axis).fold(f64::NEG_INFINITY, f64::max);
        let span = if x_max > x_min { x_max - x_min } else { 1.0 };
        let x = |v: f64| MARGIN + (v - x_min) / span * (W - 2.0 * MARGIN);
        let y = |v: f64| H - MARGIN - v.clamp(0.0, 1.0) * (H - 2.0 * MARGIN);

        // confidence band
        let mut band = String::new();
        for p in points {
            let _ = write!(band, "{:.2},{:.2} ", x(p.axis), y(p.ci_high));
        }
        for p in points.iter().rev() {
            let _ = write!(band, "{:.2},{:.2} ", x(p.axis), y(p.ci_low));
        }
        let _ =
            writeln!(svg, r##"<polygon points="{}" fill="#cfe2f3" stroke="none"/>"##, band.trim());

        let mut line = String::new();
        for p in points {
            let _ = write!(line, "{:.2},{:.2} ", x(p.axis), y(p.rate));
        }
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#1f4e99" stroke-width="2"/>"##,
            line.trim()
        );
    }

    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = H - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y}" text-anchor="middle" font-size="14">{x_label}</text>"#,
        x = W / 2.0,
        y = H - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{y}" text-anchor="middle" font-size="14" transform="rotate(-90 14 {y})">success rate</text>"#,
        y = H / 2.0
    );
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(axis: f64, rate: f64) -> ScanPoint {
        ScanPoint {
            axis,
            rate,
            ci_low: (rate - 0.05).max(0.0),
            ci_high: (rate + 0.05).min(1.0),
            n: 100,
            best_energy: 0,
            seconds: 0.0,
        }
    }

    #[test]
    fn svg_contains_polyline_and_labels() {
        let pts = vec![point(0.1, 0.2), point(0.5, 0.8), point(1.0, 0.6)];
        let svg = scan_svg(&pts, "relative chain strength");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("relative chain strength"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_scan_still_renders_axes() {
        let svg = scan_svg(&[], "x");
        assert!(svg.contains("<line"));
    }
}
