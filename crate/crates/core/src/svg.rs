//! Minimal SVG writers for diagrams and sampled fields.

use std::fmt::Write;

use crate::asymptotics::GridField;
use crate::scattering::{Diagram, Support};

const SIZE: f64 = 480.0;
const RADIUS: f64 = 200.0;

/// Draws every wall as a segment from the joint, labelled with its angle and
/// its first nontrivial `t`-order.
pub fn diagram_svg(d: &Diagram) -> String {
    let c = SIZE / 2.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    for w in d.walls() {
        let m = w.direction().to_f64();
        let len = (m[0] * m[0] + m[1] * m[1]).sqrt();
        let (dx, dy) = (m[0] / len * RADIUS, -m[1] / len * RADIUS);
        let (x1, y1, x2, y2, colour) = match w.support() {
            Support::Line => (c - dx, c - dy, c + dx, c + dy, "black"),
            Support::Ray => (c, c, c - dx, c - dy, "firebrick"),
        };
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{colour}" stroke-width="2"/>"#
        );
        let tip = (x2, y2);
        let angle = match w.support() {
            Support::Line => w.direction().angle(),
            Support::Ray => (-w.direction()).angle(),
        }
        .to_degrees();
        let first = w.log_theta().min_degree().map_or("trivial".to_string(), |j| format!("t^{j}"));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="11">{} {angle:.1}° {first}</text>"#,
            tip.0 + 4.0,
            tip.1 - 4.0,
            w.direction()
        );
    }
    let _ = writeln!(s, r#"<circle cx="{c}" cy="{c}" r="3" fill="black"/>"#);
    s.push_str("</svg>\n");
    s
}

/// Heatmap of `|f|` for a scalar field, averaged over `cells x cells` blocks.
pub fn heatmap_svg(field: &GridField, cells: usize) -> String {
    let g = field.grid;
    let cells = cells.clamp(1, g.n);
    let block = g.n as f64 / cells as f64;
    let mut vals = vec![0.0; cells * cells];
    for (b2, row) in vals.chunks_mut(cells).enumerate() {
        for (b1, v) in row.iter_mut().enumerate() {
            let i1 = ((b1 as f64 + 0.5) * block) as usize;
            let i2 = ((b2 as f64 + 0.5) * block) as usize;
            *v = field.at(i1.min(g.n - 1), i2.min(g.n - 1)).abs();
        }
    }
    let top = vals.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let px = SIZE / cells as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    for b2 in 0..cells {
        for b1 in 0..cells {
            let shade = (255.0 * (1.0 - vals[b2 * cells + b1] / top)).round() as u8;
            let y = SIZE - (b2 + 1) as f64 * px;
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{y:.2}" width="{px:.2}" height="{px:.2}" fill="rgb(255,{shade},{shade})"/>"#,
                b1 as f64 * px
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::{ks_complete, standard_pair};

    #[test]
    fn one_segment_per_wall() {
        let (w1, w2) = standard_pair(2, 1).unwrap();
        let d = ks_complete(&w1, &w2, 2).unwrap();
        let svg = diagram_svg(&d);
        assert_eq!(svg.matches("<line").count(), 3);
        assert!(svg.contains("225.0° t^2"));
    }
}
