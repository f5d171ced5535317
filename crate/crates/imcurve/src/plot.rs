//! Static SVG of the isolating boxes of a certificate, one panel per affine chart.

use std::fmt::Write;

use crate::gaussian::ratio_to_f64;
use crate::pipeline::CurveCertificate;
use crate::real_solve::IsolatingBox;

const PANEL: f64 = 360.0;
const MARGIN: f64 = 24.0;
/// Boxes narrower than this many pixels are drawn at this size.
const MIN_MARK: f64 = 4.0;

fn chart_label(chart: usize) -> &'static str {
    match chart {
        0 => "x0 = 1: (x1, x2)",
        1 => "x1 = 1: (x0, x2)",
        _ => "x2 = 1: (x0, x1)",
    }
}

fn bounds(boxes: &[&IsolatingBox]) -> (f64, f64, f64, f64) {
    let mut b = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for ib in boxes {
        let (x, y) = ib.center_f64();
        b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
    }
    let span = (b.1 - b.0).max(b.3 - b.2).max(1e-9);
    let (cx, cy) = ((b.0 + b.1) / 2.0, (b.2 + b.3) / 2.0);
    let h = 0.55 * span;
    (cx - h, cx + h, cy - h, cy + h)
}

/// Renders the census boxes of `cert`; the output depends only on the certificate.
pub fn svg(cert: &CurveCertificate) -> String {
    let charts: Vec<usize> = (0..3)
        .filter(|&k| cert.census.boxes.iter().any(|b| b.chart == k))
        .collect();
    let panels = charts.len().max(1);
    let width = panels as f64 * (PANEL + MARGIN) + MARGIN;
    let height = PANEL + 3.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        s,
        r#"<title>{} stage, degree {}, {} real points</title>"#,
        cert.stage.name(),
        cert.degree,
        cert.census.count
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    );
    for (p, &chart) in charts.iter().enumerate() {
        let ox = MARGIN + p as f64 * (PANEL + MARGIN);
        let oy = 2.0 * MARGIN;
        let boxes: Vec<&IsolatingBox> = cert
            .census
            .boxes
            .iter()
            .filter(|b| b.chart == chart)
            .collect();
        let (x0, x1, y0, y1) = bounds(&boxes);
        let sx = PANEL / (x1 - x0);
        let sy = PANEL / (y1 - y0);
        let _ = writeln!(s, r#"<g class="chart" data-chart="{chart}">"#);
        let _ = writeln!(
            s,
            r##"<rect x="{ox}" y="{oy}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#999"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{ox}" y="{}" font-family="monospace" font-size="12">{}</text>"#,
            oy - 6.0,
            chart_label(chart)
        );
        for b in boxes {
            let (bx0, bx1) = (ratio_to_f64(&b.x.0), ratio_to_f64(&b.x.1));
            let (by0, by1) = (ratio_to_f64(&b.y.0), ratio_to_f64(&b.y.1));
            let (cx, cy) = b.center_f64();
            let w = ((bx1 - bx0) * sx).max(MIN_MARK);
            let h = ((by1 - by0) * sy).max(MIN_MARK);
            let px = ox + (cx - x0) * sx - w / 2.0;
            let py = oy + PANEL - (cy - y0) * sy - h / 2.0;
            let fill = if b.is_point() { "#c33" } else { "#236" };
            let _ = writeln!(
                s,
                r#"<rect class="box" x="{px:.3}" y="{py:.3}" width="{w:.3}" height="{h:.3}" fill="{fill}"/>"#
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

/// Number of plotted boxes in an SVG produced by [`svg`].
pub fn box_count(svg: &str) -> usize {
    svg.matches(r#"class="box""#).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_plot_has_nine_boxes() {
        let c = crate::pipeline::seed_nodal_cubic(42).unwrap();
        let a = svg(&c);
        assert_eq!(box_count(&a), 9);
        assert_eq!(a, svg(&c));
    }

    #[test]
    fn empty_census_plots() {
        let mut c = crate::pipeline::seed_nodal_cubic(42).unwrap();
        c.census.boxes.clear();
        c.census.count = 0;
        let a = svg(&c);
        assert_eq!(box_count(&a), 0);
        assert!(a.ends_with("</svg>\n"));
    }
}
