//! Static SVG data maps.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::dataset::SubsetTable;
use crate::error::{Error, Result};
use crate::geometry::VoronoiPartition;
use crate::glyph::{collision_radius, glyph_geometry, polar, GlyphSpec, Palette, Primitive};
use crate::projection::Point;

/// What to draw besides the glyphs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MapStyle {
    /// Attribute colouring the background cells.
    pub primary: Option<usize>,
    /// Attribute whose category borders are outlined.
    pub secondary: Option<usize>,
}

const NEUTRAL: &str = "#e5e5e5";
const OUTLINE: &str = "#222222";

struct Num(f64);

impl core::fmt::Display for Num {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        // fixed precision keeps output byte-stable; avoid printing -0.000
        let v = libm::round(self.0 * 1000.0) / 1000.0;
        write!(f, "{:.3}", if v == 0.0 { 0.0 } else { v })
    }
}

fn check_attribute(subsets: &SubsetTable, a: Option<usize>) -> Result<()> {
    match a {
        Some(a) if a >= subsets.schema().attribute_count() => {
            Err(Error::UnknownAttribute(alloc::format!("#{a}")))
        }
        _ => Ok(()),
    }
}

/// Segments where adjacent cells differ in `attribute`, as `(a, b, left, right)`.
pub fn outline_segments(
    partition: &VoronoiPartition,
    subsets: &SubsetTable,
    attribute: usize,
) -> Vec<(Point, Point, usize, usize)> {
    partition
        .segments()
        .into_iter()
        .filter_map(|s| {
            let r = s.right?;
            let differs = subsets.subset(s.left).values[attribute] != subsets.subset(r).values[attribute];
            (differs && s.a != s.b).then_some((s.a, s.b, s.left, r))
        })
        .collect()
}

fn write_primitive(svg: &mut String, p: &Primitive, c: Point, fill: &str) {
    match *p {
        Primitive::Rect { x, y, w, h, .. } => {
            let _ = write!(
                svg,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
                Num(c[0] + x),
                Num(c[1] + y),
                Num(w),
                Num(h)
            );
        }
        Primitive::Circle { r, .. } => {
            let _ = write!(
                svg,
                r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
                Num(c[0]),
                Num(c[1]),
                Num(r)
            );
        }
        Primitive::Sector { r, start, end, .. } => {
            let a = polar(r, start);
            let b = polar(r, end);
            let large = u8::from(end - start > core::f64::consts::PI);
            let _ = write!(
                svg,
                r#"<path d="M{} {}L{} {}A{} {} 0 {large} 1 {} {}Z" fill="{fill}"/>"#,
                Num(c[0]),
                Num(c[1]),
                Num(c[0] + a[0]),
                Num(c[1] + a[1]),
                Num(r),
                Num(r),
                Num(c[0] + b[0]),
                Num(c[1] + b[1])
            );
        }
        Primitive::Arc { r, start, end, width } => {
            if end - start >= core::f64::consts::TAU - 1e-12 {
                let _ = write!(
                    svg,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{fill}" stroke-width="{}"/>"#,
                    Num(c[0]),
                    Num(c[1]),
                    Num(r),
                    Num(width)
                );
                return;
            }
            let a = polar(r, start);
            let b = polar(r, end);
            let large = u8::from(end - start > core::f64::consts::PI);
            let _ = write!(
                svg,
                r#"<path d="M{} {}A{} {} 0 {large} 1 {} {}" fill="none" stroke="{fill}" stroke-width="{}"/>"#,
                Num(c[0] + a[0]),
                Num(c[1] + a[1]),
                Num(r),
                Num(r),
                Num(c[0] + b[0]),
                Num(c[1] + b[1]),
                Num(width)
            );
        }
    }
}

/// SVG document with three layers: coloured Voronoi cells, secondary-attribute
/// outlines and subset glyphs. Glyphs are drawn largest first so small ones stay
/// visible. Output is byte-identical for identical inputs.
pub fn render_map(
    positions: &[Point],
    partition: &VoronoiPartition,
    subsets: &SubsetTable,
    style: MapStyle,
    spec: &GlyphSpec,
    palette: &Palette,
) -> Result<String> {
    let n = subsets.len();
    if positions.len() != n || partition.cells.len() != n {
        return Err(Error::LabelingMismatch {
            expected: n,
            found: positions.len().min(partition.cells.len()),
        });
    }
    check_attribute(subsets, style.primary)?;
    check_attribute(subsets, style.secondary)?;
    let attributes = subsets.schema().attribute_count();
    let max_rel = subsets.max_relative_frequency();

    let reach = (0..n)
        .map(|i| collision_radius(subsets.relative_frequency(i), max_rel, spec))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let b = partition.bounds;
    let (vx, vy) = (b.x - reach, b.y - reach);
    let (vw, vh) = (b.w + 2.0 * reach, b.h + 2.0 * reach);

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        Num(vx),
        Num(vy),
        Num(vw),
        Num(vh),
        Num(vw),
        Num(vh)
    );
    svg.push('\n');

    svg.push_str(r#"<g id="background">"#);
    for cell in &partition.cells {
        let fill = match style.primary {
            Some(a) => palette.background(subsets.subset(cell.site).values[a]),
            None => NEUTRAL.into(),
        };
        let _ = write!(svg, r#"<polygon id="cell-{}" points=""#, cell.site);
        for (k, p) in cell.polygon.iter().enumerate() {
            if k > 0 {
                svg.push(' ');
            }
            let _ = write!(svg, "{},{}", Num(p[0]), Num(p[1]));
        }
        let _ = write!(svg, r#"" fill="{fill}" stroke="{fill}" stroke-width="0.5"/>"#);
    }
    svg.push_str("</g>\n");

    svg.push_str(r#"<g id="outlines">"#);
    if let Some(a) = style.secondary {
        for (p, q, i, j) in outline_segments(partition, subsets, a) {
            let _ = write!(
                svg,
                r#"<path class="outline" data-cells="{i} {j}" d="M{} {}L{} {}" stroke="{OUTLINE}" stroke-width="3" stroke-linecap="round" fill="none"/>"#,
                Num(p[0]),
                Num(p[1]),
                Num(q[0]),
                Num(q[1])
            );
        }
    }
    svg.push_str("</g>\n");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| subsets.subset(j).count.cmp(&subsets.subset(i).count).then(i.cmp(&j)));
    svg.push_str(r#"<g id="glyphs">"#);
    for i in order {
        let s = subsets.subset(i);
        let _ = write!(svg, r#"<g id="glyph-{i}" data-count="{}">"#, s.count);
        for p in glyph_geometry(attributes, subsets.relative_frequency(i), max_rel, spec)? {
            let fill = match p.attribute() {
                Some(a) => palette.color(s.values[a]),
                None => OUTLINE,
            };
            write_primitive(&mut svg, &p, positions[i], fill);
        }
        svg.push_str("</g>");
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
