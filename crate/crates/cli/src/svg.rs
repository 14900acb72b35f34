//! Self-contained SVG of the negative subgradient flow in the plane.

use std::fmt::Write;

use rank1_landscape::dynamics::FlowSample;
use rank1_landscape::GridSpec;

fn spacing(lo: f64, hi: f64, count: usize) -> f64 {
    if count > 1 {
        (hi - lo) / (count - 1) as f64
    } else {
        hi - lo
    }
}

/// Arrows at the grid nodes, the spurious segment as a thick line, `±u*` as dots.
///
/// The viewBox is in problem coordinates; a `scale(1,-1)` group puts `y` up.
pub fn render_flow(ustar: [f64; 2], grid: &GridSpec, samples: &[FlowSample]) -> String {
    let span = (grid.x_max - grid.x_min).max(grid.y_max - grid.y_min).max(1.0);
    let pad = 0.1 * span;
    let mut step = spacing(grid.x_min, grid.x_max, grid.nx).min(spacing(grid.y_min, grid.y_max, grid.ny));
    if step <= 0.0 {
        step = 0.1 * span;
    }
    let len = 0.4 * step;
    let stroke = 0.004 * span;
    let (x0, y0) = (grid.x_min - pad, -(grid.y_max + pad));
    let (w, h) = (grid.x_max - grid.x_min + 2.0 * pad, grid.y_max - grid.y_min + 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {w} {h}" width="600" height="{}">"#,
        (600.0 * h / w).round()
    );
    let _ = writeln!(
        s,
        r##"<defs><marker id="head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="4" markerHeight="4" orient="auto"><path d="M0,0 L10,5 L0,10 z" style="fill:#4a5a70"/></marker></defs>"##
    );
    let _ = writeln!(s, r#"<rect x="{x0}" y="{y0}" width="{w}" height="{h}" style="fill:#ffffff"/>"#);
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);

    for sample in samples {
        let [px, py] = sample.point;
        let [dx, dy] = sample.direction;
        let _ = writeln!(
            s,
            r#"<line class="arrow" x1="{px}" y1="{py}" x2="{}" y2="{}" marker-end="url(#head)" style="stroke:#4a5a70;stroke-width:{stroke}"/>"#,
            px + len * dx,
            py + len * dy
        );
    }

    let [a, b] = ustar;
    if a != 0.0 && b != 0.0 {
        // sign(a)·u₁ + sign(b)·u₂ = 0 inside the box |u_i| ≤ |u*_i|
        let m = a.abs().min(b.abs());
        let slope = -a.signum() * b.signum();
        let _ = writeln!(
            s,
            r#"<line class="polytope" x1="{}" y1="{}" x2="{m}" y2="{}" style="stroke:#c0392b;stroke-width:{};stroke-linecap:round"/>"#,
            -m,
            -m * slope,
            m * slope,
            4.0 * stroke
        );
    } else {
        // the spurious set degenerates to the origin
        let _ = writeln!(s, r#"<circle class="polytope" cx="0" cy="0" r="{}" style="fill:#c0392b"/>"#, 3.0 * stroke);
    }
    for sign in [1.0, -1.0] {
        let _ = writeln!(
            s,
            r#"<circle class="ground-truth" cx="{}" cy="{}" r="{}" style="fill:#1e8449"/>"#,
            sign * a,
            sign * b,
            4.0 * stroke
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rank1_landscape::{flow_field, RealVector};

    #[test]
    fn one_arrow_per_node() {
        let g = GridSpec::default();
        let ustar = RealVector::new(vec![1.0, 1.0]).unwrap();
        let svg = render_flow([1.0, 1.0], &g, &flow_field(&ustar, &g, 1e-9).unwrap());
        assert_eq!(svg.matches(r#"class="arrow""#).count(), 441);
        assert_eq!(svg.matches(r#"class="ground-truth""#).count(), 2);
        assert!(svg.contains(r#"class="polytope" x1="-1" y1="1" x2="1" y2="-1""#));
    }

    #[test]
    fn degenerate_segment_is_a_dot() {
        let g = GridSpec { nx: 1, ny: 1, ..GridSpec::default() };
        let ustar = RealVector::new(vec![1.0, 0.0]).unwrap();
        let svg = render_flow([1.0, 0.0], &g, &flow_field(&ustar, &g, 1e-9).unwrap());
        assert_eq!(svg.matches(r#"class="arrow""#).count(), 1);
        assert!(svg.contains(r#"<circle class="polytope""#));
    }
}
