//! Subset glyphs: one equal-sized segment per attribute, sized by frequency.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GlyphDesign {
    /// Square whose area encodes frequency.
    AreaSquare,
    /// Fixed square with a frequency bar on top.
    BarSquare,
    /// Circle whose area encodes frequency.
    AreaCircle,
    /// Fixed circle with a surrounding frequency arc.
    ArcCircle,
}

impl GlyphDesign {
    pub const ALL: [GlyphDesign; 4] = [
        GlyphDesign::AreaSquare,
        GlyphDesign::BarSquare,
        GlyphDesign::AreaCircle,
        GlyphDesign::ArcCircle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GlyphDesign::AreaSquare => "area_square",
            GlyphDesign::BarSquare => "bar_square",
            GlyphDesign::AreaCircle => "area_circle",
            GlyphDesign::ArcCircle => "arc_circle",
        }
    }
}

impl fmt::Display for GlyphDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GlyphDesign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s) || d.as_str().replace('_', "-") == s)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown glyph design `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlyphSpec {
    pub design: GlyphDesign,
    /// Side or diameter in pixels of the glyph of the largest subset.
    pub base_size: f64,
}

impl Default for GlyphSpec {
    fn default() -> Self {
        Self {
            design: GlyphDesign::AreaSquare,
            base_size: 28.0,
        }
    }
}

/// Thickness of the bar and arc, relative to the base size.
const INDICATOR: f64 = 0.18;
/// Gap between a glyph body and its bar or arc, relative to the base size.
const GAP: f64 = 0.06;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Palette {
    colors: &'static [&'static str],
}

impl Palette {
    /// The ten-colour categorical scale.
    pub const fn category10() -> Self {
        Self {
            colors: &[
                "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                "#bcbd22", "#17becf",
            ],
        }
    }

    pub fn color(&self, category: usize) -> &'static str {
        self.colors[category % self.colors.len()]
    }

    /// The category colour moved 40% of the way to white.
    pub fn background(&self, category: usize) -> String {
        lighten(self.color(category), 0.4)
    }
}

impl Default for Palette {
    fn default() -> Self {
        Self::category10()
    }
}

/// Mixes a `#rrggbb` colour with white.
pub fn lighten(hex: &str, amount: f64) -> String {
    let channel = |i: usize| u8::from_str_radix(&hex[1 + 2 * i..3 + 2 * i], 16).unwrap_or(0);
    let mix = |c: u8| {
        let v = c as f64 + (255.0 - c as f64) * amount;
        libm::round(v) as u8
    };
    alloc::format!("#{:02x}{:02x}{:02x}", mix(channel(0)), mix(channel(1)), mix(channel(2)))
}

/// Drawing primitive relative to the glyph centre; angles in radians,
/// clockwise from 12 o'clock in screen coordinates (y down).
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    Rect {
        x: f64,
        y: f64,
        w: f64,
        h: f64,
        /// Attribute whose category colours this segment, `None` for decoration.
        attribute: Option<usize>,
    },
    Sector {
        r: f64,
        start: f64,
        end: f64,
        attribute: usize,
    },
    Circle {
        r: f64,
        attribute: Option<usize>,
    },
    /// Stroked circular arc.
    Arc {
        r: f64,
        start: f64,
        end: f64,
        width: f64,
    },
}

impl Primitive {
    pub fn area(&self) -> f64 {
        match *self {
            Primitive::Rect { w, h, .. } => w * h,
            Primitive::Sector { r, start, end, .. } => 0.5 * r * r * (end - start),
            Primitive::Circle { r, .. } => core::f64::consts::PI * r * r,
            Primitive::Arc { .. } => 0.0,
        }
    }

    pub fn attribute(&self) -> Option<usize> {
        match *self {
            Primitive::Rect { attribute, .. } | Primitive::Circle { attribute, .. } => attribute,
            Primitive::Sector { attribute, .. } => Some(attribute),
            Primitive::Arc { .. } => None,
        }
    }
}

/// Number of segments in each row of a square glyph.
///
/// `floor(sqrt(a))` rows hold the segments in schema order, earlier rows taking
/// the remainder. Row heights follow their segment counts so every segment has
/// the same area; eight attributes give two rows of four.
pub fn square_rows(attributes: usize) -> Vec<usize> {
    let rows = libm::floor(libm::sqrt(attributes as f64)) as usize;
    let rows = rows.max(1);
    let (base, extra) = (attributes / rows, attributes % rows);
    (0..rows).map(|r| base + usize::from(r < extra)).collect()
}

fn square_segments(side: f64, attributes: usize, top: f64, out: &mut Vec<Primitive>) {
    let mut y = top;
    let mut attr = 0;
    for count in square_rows(attributes) {
        let h = side * count as f64 / attributes as f64;
        let w = side / count as f64;
        for c in 0..count {
            out.push(Primitive::Rect {
                x: -side / 2.0 + c as f64 * w,
                y,
                w,
                h,
                attribute: Some(attr),
            });
            attr += 1;
        }
        y += h;
    }
}

fn circle_segments(r: f64, attributes: usize, out: &mut Vec<Primitive>) {
    if attributes == 1 {
        out.push(Primitive::Circle { r, attribute: Some(0) });
        return;
    }
    let step = TAU / attributes as f64;
    for a in 0..attributes {
        out.push(Primitive::Sector {
            r,
            start: a as f64 * step,
            end: (a + 1) as f64 * step,
            attribute: a,
        });
    }
}

fn check_share(relative: f64, max_relative: f64) -> Result<f64> {
    if !(relative > 0.0 && max_relative >= relative && relative.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!(
            "relative frequency {relative} must lie in (0, {max_relative}]"
        )));
    }
    Ok(relative / max_relative)
}

/// Primitives for one subset glyph centred on the origin.
pub fn glyph_geometry(attributes: usize, relative: f64, max_relative: f64, spec: &GlyphSpec) -> Result<Vec<Primitive>> {
    if attributes == 0 {
        return Err(Error::SchemaMismatch { expected: 1, found: 0 });
    }
    let share = check_share(relative, max_relative)?;
    let s = spec.base_size;
    let mut out = Vec::with_capacity(attributes + 2);
    match spec.design {
        GlyphDesign::AreaSquare => {
            let side = s * libm::sqrt(share);
            square_segments(side, attributes, -side / 2.0, &mut out);
        }
        GlyphDesign::BarSquare => {
            square_segments(s, attributes, -s / 2.0, &mut out);
            let h = s * INDICATOR;
            out.push(Primitive::Rect {
                x: -s / 2.0,
                y: -s / 2.0 - s * GAP - h,
                w: s * share,
                h,
                attribute: None,
            });
        }
        GlyphDesign::AreaCircle => circle_segments(s / 2.0 * libm::sqrt(share), attributes, &mut out),
        GlyphDesign::ArcCircle => {
            circle_segments(s / 2.0, attributes, &mut out);
            let width = s * INDICATOR;
            out.push(Primitive::Arc {
                r: s / 2.0 + s * GAP + width / 2.0,
                start: 0.0,
                end: TAU * share,
                width,
            });
        }
    }
    Ok(out)
}

/// Radius of a disc covering the whole glyph, used to push glyphs apart.
pub fn collision_radius(relative: f64, max_relative: f64, spec: &GlyphSpec) -> Result<f64> {
    let share = check_share(relative, max_relative)?;
    let s = spec.base_size;
    Ok(match spec.design {
        GlyphDesign::AreaSquare => s * libm::sqrt(share) * core::f64::consts::FRAC_1_SQRT_2,
        // the bar sits above a fixed square; cover its far corners
        GlyphDesign::BarSquare => libm::hypot(s / 2.0, s / 2.0 + s * (GAP + INDICATOR)),
        GlyphDesign::AreaCircle => s / 2.0 * libm::sqrt(share),
        GlyphDesign::ArcCircle => s / 2.0 + s * (GAP + INDICATOR),
    })
}

/// Screen point at `angle` on a circle of radius `r` around the origin.
pub fn polar(r: f64, angle: f64) -> [f64; 2] {
    let a = angle - FRAC_PI_2;
    [r * libm::cos(a), r * libm::sin(a)]
}
