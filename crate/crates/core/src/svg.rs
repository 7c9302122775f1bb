//! SVG drawings of planar maps and partitions.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::{Multirect, Rect};
use crate::recmap::RecMap;

const SIZE: f64 = 320.0;
const MARGIN: f64 = 20.0;

fn color(index: usize) -> String {
    let hue = (index as f64 * 137.507_764) % 360.0;
    format!("hsl({hue:.1},65%,62%)")
}

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    fn new(m: &Multirect) -> Result<Frame> {
        let b = m.bbox()?.ok_or_else(|| Error::pre("nothing to draw"))?;
        let w = b.side(0).to_f64();
        let h = b.side(1).to_f64();
        Ok(Frame {
            x0: b.lo()[0].to_f64(),
            y0: b.lo()[1].to_f64(),
            scale: SIZE / w.max(h),
        })
    }

    fn rect(&self, out: &mut String, r: &Rect, offset: f64, fill: &str, label: usize) {
        let x = offset + (r.lo()[0].to_f64() - self.x0) * self.scale;
        let w = r.side(0).to_f64() * self.scale;
        let h = r.side(1).to_f64() * self.scale;
        // The vertical axis points up.
        let y = MARGIN + SIZE - (r.hi()[1].to_f64() - self.y0) * self.scale;
        let _ = writeln!(
            out,
            r#"  <rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{h:.3}" fill="{fill}" stroke="black" stroke-width="1"/>"#
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.3}" y="{:.3}" font-size="10" text-anchor="middle">{label}</text>"#,
            x + w / 2.0,
            y + h / 2.0 + 3.0
        );
    }
}

fn header(out: &mut String, width: f64) {
    let height = SIZE + 2.0 * MARGIN;
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
}

/// Source partition on the left, arrival partition on the right, with
/// matching colors per piece.
pub fn render_recmap(f: &RecMap) -> Result<String> {
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: f.dim(),
        });
    }
    let frame = Frame::new(f.ambient())?;
    let mut out = String::new();
    header(&mut out, 2.0 * SIZE + 3.0 * MARGIN);
    for (k, p) in f.pieces().iter().enumerate() {
        frame.rect(&mut out, &p.rect, MARGIN, &color(k), k);
    }
    for (k, p) in f.pieces().iter().enumerate() {
        frame.rect(&mut out, &p.image(), 2.0 * MARGIN + SIZE, &color(k), k);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_rects(rects: &[Rect]) -> Result<String> {
    if rects.iter().any(|r| r.dim() != 2) {
        return Err(Error::pre("only two-dimensional boxes can be drawn"));
    }
    let m = Multirect::new(2, rects.to_vec())?;
    let frame = Frame::new(&m)?;
    let mut out = String::new();
    header(&mut out, SIZE + 2.0 * MARGIN);
    for (k, r) in rects.iter().enumerate() {
        frame.rect(&mut out, r, MARGIN, &color(k), k);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Scalar, SymbolTable};

    fn balanced(svg: &str) -> bool {
        svg.starts_with("<?xml")
            && svg.matches("<svg").count() == 1
            && svg.trim_end().ends_with("</svg>")
    }

    #[test]
    fn identity_draws_two_equal_squares() {
        let t = SymbolTable::quadratic(&[]).unwrap();
        let id = RecMap::identity(&Multirect::unit_cube(&t, 2));
        let svg = render_recmap(&id).unwrap();
        assert!(balanced(&svg));
        assert_eq!(svg.matches("<rect").count(), 2);
        assert!(svg.contains(r#"width="320.000" height="320.000""#));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let t = SymbolTable::quadratic(&[]).unwrap();
        assert!(render_recmap(&RecMap::identity(&Multirect::unit_cube(&t, 1))).is_err());
        let r = Rect::from_sides(&[Scalar::one(&t)]).unwrap();
        assert!(render_rects(&[r]).is_err());
    }
}
