//! The built-in tactile fill textures and line styles.
//!
//! Tiles are pure vector primitives in pixels at 96 dpi. Every tile has a
//! white ground so textured areas hide whatever is painted beneath them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TextureId {
    NoFill,
    SolidGrayFill,
    DiagonalLeftFill,
    DiagonalRightFill,
    DiamondFill,
    DottedFill,
    DenseDottedFill,
    VerticalFill,
    HorizontalFill,
    CrossFill,
}

impl TextureId {
    /// All ten textures in swatch-sheet order.
    pub const ALL: [TextureId; 10] = [
        TextureId::NoFill,
        TextureId::SolidGrayFill,
        TextureId::DiagonalLeftFill,
        TextureId::DiagonalRightFill,
        TextureId::DiamondFill,
        TextureId::DottedFill,
        TextureId::DenseDottedFill,
        TextureId::VerticalFill,
        TextureId::HorizontalFill,
        TextureId::CrossFill,
    ];

    /// Order in which textures are handed out to data values. Tone, dot and
    /// line classes alternate so neighbours differ the most; `noFill` is
    /// last because empty areas are easily confused with the background.
    pub const ASSIGNMENT_ORDER: [TextureId; 10] = [
        TextureId::SolidGrayFill,
        TextureId::DottedFill,
        TextureId::DiagonalLeftFill,
        TextureId::HorizontalFill,
        TextureId::DenseDottedFill,
        TextureId::VerticalFill,
        TextureId::DiagonalRightFill,
        TextureId::CrossFill,
        TextureId::DiamondFill,
        TextureId::NoFill,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TextureId::NoFill => "noFill",
            TextureId::SolidGrayFill => "solidGrayFill",
            TextureId::DiagonalLeftFill => "diagonalLeftFill",
            TextureId::DiagonalRightFill => "diagonalRightFill",
            TextureId::DiamondFill => "diamondFill",
            TextureId::DottedFill => "dottedFill",
            TextureId::DenseDottedFill => "denseDottedFill",
            TextureId::VerticalFill => "verticalFill",
            TextureId::HorizontalFill => "horizontalFill",
            TextureId::CrossFill => "crossFill",
        }
    }
}

impl fmt::Display for TextureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} {name:?}")]
pub struct UnknownName {
    pub kind: &'static str,
    pub name: String,
}

impl FromStr for TextureId {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TextureId::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| UnknownName {
            kind: "texture",
            name: s.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum LineStyleId {
    Solid,
    Dashed,
    Dotted,
    LongDashed,
}

impl LineStyleId {
    /// Solid first, then the styles that contrast with it.
    pub const ALL: [LineStyleId; 4] =
        [LineStyleId::Solid, LineStyleId::Dashed, LineStyleId::Dotted, LineStyleId::LongDashed];

    pub fn name(self) -> &'static str {
        match self {
            LineStyleId::Solid => "solid",
            LineStyleId::Dashed => "dashed",
            LineStyleId::Dotted => "dotted",
            LineStyleId::LongDashed => "longDashed",
        }
    }
}

impl fmt::Display for LineStyleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LineStyleId {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LineStyleId::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| UnknownName {
            kind: "line style",
            name: s.to_string(),
        })
    }
}

/// A named style or a raw SVG dash array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LineStyle {
    Named(LineStyleId),
    Custom(Vec<f64>),
}

impl LineStyle {
    pub fn dash_array(&self, stroke_width: f64) -> Vec<f64> {
        match self {
            LineStyle::Named(id) => line_dash_array(*id, stroke_width),
            LineStyle::Custom(v) => v.clone(),
        }
    }

    pub fn round_caps(&self) -> bool {
        matches!(self, LineStyle::Named(LineStyleId::Dotted))
    }

    pub fn label(&self) -> String {
        match self {
            LineStyle::Named(id) => id.name().to_string(),
            LineStyle::Custom(v) => {
                v.iter().map(|x| crate::num::format_number(*x)).collect::<Vec<_>>().join(" ")
            }
        }
    }
}

/// Dash array for a line style. Gaps are at least twice the stroke width so
/// they stay tactually resolvable; dotted lines are zero-length dashes drawn
/// with round caps.
pub fn line_dash_array(id: LineStyleId, stroke_width: f64) -> Vec<f64> {
    let w = stroke_width;
    match id {
        LineStyleId::Solid => vec![],
        LineStyleId::Dashed => vec![3.0 * w, 2.0 * w],
        LineStyleId::Dotted => vec![0.1, 2.0 * w],
        LineStyleId::LongDashed => vec![6.0 * w, 3.0 * w],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Primitive {
    Line { x1: f64, y1: f64, x2: f64, y2: f64, width: f64 },
    Dot { cx: f64, cy: f64, r: f64 },
    Rect { x: f64, y: f64, width: f64, height: f64, gray: f64 },
}

/// One repeat of a fill pattern. Primitives are clipped to the tile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternTile {
    pub width: f64,
    pub height: f64,
    pub primitives: Vec<Primitive>,
}

pub const SOLID_GRAY: f64 = 0.5;
const LINE_PITCH: f64 = 12.0;
const LINE_WIDTH: f64 = 2.0;
const DOT_PITCH: f64 = 14.0;
const DENSE_DOT_PITCH: f64 = 8.0;
const DOT_RADIUS: f64 = 1.5;

/// Segments drawing `\` diagonals through a square tile so that tiles join
/// seamlessly: the main diagonal plus the two corner stubs that belong to
/// the neighbouring diagonals.
fn diagonal_right(p: f64, w: f64) -> Vec<Primitive> {
    let line = |x1, y1, x2, y2| Primitive::Line { x1, y1, x2, y2, width: w };
    vec![
        line(-1.0, -1.0, p + 1.0, p + 1.0),
        line(p - 1.0, -1.0, p + 1.0, 1.0),
        line(-1.0, p - 1.0, 1.0, p + 1.0),
    ]
}

fn mirror(prims: &[Primitive], width: f64) -> Vec<Primitive> {
    prims
        .iter()
        .map(|p| match *p {
            Primitive::Line { x1, y1, x2, y2, width: w } => {
                Primitive::Line { x1: width - x1, y1, x2: width - x2, y2, width: w }
            }
            Primitive::Dot { cx, cy, r } => Primitive::Dot { cx: width - cx, cy, r },
            Primitive::Rect { x, y, width: rw, height, gray } => {
                Primitive::Rect { x: width - x - rw, y, width: rw, height, gray }
            }
        })
        .collect()
}

pub fn texture_pattern(id: TextureId) -> PatternTile {
    let p = LINE_PITCH;
    let w = LINE_WIDTH;
    let (size, primitives) = match id {
        TextureId::NoFill => (p, vec![]),
        TextureId::SolidGrayFill => {
            (p, vec![Primitive::Rect { x: 0.0, y: 0.0, width: p, height: p, gray: SOLID_GRAY }])
        }
        TextureId::HorizontalFill => {
            (p, vec![Primitive::Line { x1: 0.0, y1: p / 2.0, x2: p, y2: p / 2.0, width: w }])
        }
        TextureId::VerticalFill => {
            (p, vec![Primitive::Line { x1: p / 2.0, y1: 0.0, x2: p / 2.0, y2: p, width: w }])
        }
        TextureId::CrossFill => {
            // dashed vertical strokes: half the tile inked, half open
            (p, vec![Primitive::Line { x1: p / 2.0, y1: 0.0, x2: p / 2.0, y2: p / 2.0, width: w }])
        }
        TextureId::DiagonalRightFill => (p, diagonal_right(p, w)),
        TextureId::DiagonalLeftFill => (p, mirror(&diagonal_right(p, w), p)),
        TextureId::DiamondFill => {
            let mut prims = diagonal_right(p, w);
            prims.extend(mirror(&diagonal_right(p, w), p));
            (p, prims)
        }
        TextureId::DottedFill => (
            DOT_PITCH,
            vec![Primitive::Dot { cx: DOT_PITCH / 2.0, cy: DOT_PITCH / 2.0, r: DOT_RADIUS }],
        ),
        TextureId::DenseDottedFill => (
            DENSE_DOT_PITCH,
            vec![Primitive::Dot {
                cx: DENSE_DOT_PITCH / 2.0,
                cy: DENSE_DOT_PITCH / 2.0,
                r: DOT_RADIUS,
            }],
        ),
    };
    PatternTile { width: size, height: size, primitives }
}

/// Dot pitch for the dot textures; `None` for the others.
pub fn dot_pitch(id: TextureId) -> Option<f64> {
    match id {
        TextureId::DottedFill => Some(DOT_PITCH),
        TextureId::DenseDottedFill => Some(DENSE_DOT_PITCH),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ShapeKind {
    Circle,
    Square,
    Triangle,
    Diamond,
    Cross,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 5] =
        [ShapeKind::Circle, ShapeKind::Square, ShapeKind::Triangle, ShapeKind::Diamond, ShapeKind::Cross];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Circle => "circle",
            ShapeKind::Square => "square",
            ShapeKind::Triangle => "triangle",
            ShapeKind::Diamond => "diamond",
            ShapeKind::Cross => "cross",
        }
    }
}

impl FromStr for ShapeKind {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ShapeKind::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| UnknownName {
            kind: "shape",
            name: s.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Is (x, y) inked by the tile's primitives, clipped to the tile?
    fn inked(tile: &PatternTile, x: f64, y: f64) -> bool {
        tile.primitives.iter().any(|p| match *p {
            Primitive::Line { x1, y1, x2, y2, width } => {
                let (dx, dy) = (x2 - x1, y2 - y1);
                let t = (((x - x1) * dx + (y - y1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
                let (px, py) = (x1 + t * dx, y1 + t * dy);
                ((x - px).powi(2) + (y - py).powi(2)).sqrt() <= width / 2.0
            }
            Primitive::Dot { cx, cy, r } => ((x - cx).powi(2) + (y - cy).powi(2)).sqrt() <= r,
            Primitive::Rect { x: rx, y: ry, width, height, .. } => {
                x >= rx && x <= rx + width && y >= ry && y <= ry + height
            }
        })
    }

    #[test]
    fn no_fill_is_empty() {
        assert!(texture_pattern(TextureId::NoFill).primitives.is_empty());
    }

    #[test]
    fn dense_dots_are_denser() {
        assert!(dot_pitch(TextureId::DenseDottedFill).unwrap() < dot_pitch(TextureId::DottedFill).unwrap());
        // and differ only in pitch
        let a = texture_pattern(TextureId::DottedFill);
        let b = texture_pattern(TextureId::DenseDottedFill);
        let radius = |t: &PatternTile| match t.primitives[..] {
            [Primitive::Dot { r, cx, cy }] => (r, cx / t.width, cy / t.height),
            _ => panic!("expected one dot"),
        };
        assert_eq!(radius(&a), radius(&b));
    }

    #[test]
    fn diagonals_mirror_each_other() {
        let left = texture_pattern(TextureId::DiagonalLeftFill);
        let right = texture_pattern(TextureId::DiagonalRightFill);
        assert_eq!(mirror(&right.primitives, right.width), left.primitives);
        for i in 0..=24 {
            for j in 0..=24 {
                let (x, y) = (i as f64 * 0.5, j as f64 * 0.5);
                assert_eq!(inked(&left, x, y), inked(&right, 12.0 - x, y));
            }
        }
    }

    #[test]
    fn diagonal_tiles_are_seamless() {
        // tiled coverage equals the ideal infinite family of lines x - y = k * pitch
        let tile = texture_pattern(TextureId::DiagonalRightFill);
        let p = tile.width;
        let half = LINE_WIDTH / 2.0;
        for i in 0..48 {
            for j in 0..48 {
                let (x, y) = (i as f64 * 0.25 + 0.01, j as f64 * 0.25 + 0.02);
                let d = x - y;
                let k = (d / p).round();
                let dist = (d - k * p).abs() / 2f64.sqrt();
                // ignore the anti-aliasing band right at the stroke edge
                if (dist - half).abs() < 0.05 {
                    continue;
                }
                assert_eq!(inked(&tile, x, y), dist <= half, "at ({x}, {y})");
            }
        }
    }

    #[test]
    fn all_tiles_distinct() {
        let tiles: Vec<PatternTile> = TextureId::ALL.iter().map(|t| texture_pattern(*t)).collect();
        for i in 0..tiles.len() {
            for j in i + 1..tiles.len() {
                assert_ne!(tiles[i], tiles[j], "{:?} vs {:?}", TextureId::ALL[i], TextureId::ALL[j]);
            }
        }
    }

    #[test]
    fn straight_primitives_fit_tile() {
        for id in TextureId::ALL {
            let t = texture_pattern(id);
            for p in &t.primitives {
                match *p {
                    Primitive::Dot { cx, cy, r } => {
                        assert!(cx - r >= 0.0 && cx + r <= t.width && cy - r >= 0.0 && cy + r <= t.height)
                    }
                    Primitive::Rect { x, y, width, height, .. } => {
                        assert!(x >= 0.0 && y >= 0.0 && x + width <= t.width && y + height <= t.height)
                    }
                    Primitive::Line { x1, y1, x2, y2, .. } => {
                        for v in [x1, y1, x2, y2] {
                            assert!((-1.0..=t.width + 1.0).contains(&v));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn solid_is_unbroken() {
        for w in [1.0, 2.5, 4.0] {
            assert!(line_dash_array(LineStyleId::Solid, w).is_empty());
        }
    }

    #[test]
    fn dotted_width_4() {
        assert_eq!(line_dash_array(LineStyleId::Dotted, 4.0), vec![0.1, 8.0]);
    }

    #[test]
    fn long_dashes_are_longer() {
        for w in [1.0, 4.0] {
            let d = line_dash_array(LineStyleId::Dashed, w);
            let l = line_dash_array(LineStyleId::LongDashed, w);
            assert!(l[0] > d[0]);
            for arr in [d, l, line_dash_array(LineStyleId::Dotted, w)] {
                assert!(arr[1] >= 2.0 * w);
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for t in TextureId::ALL {
            assert_eq!(t.name().parse::<TextureId>().unwrap(), t);
            assert_eq!(serde_json::to_string(&t).unwrap(), format!("\"{}\"", t.name()));
        }
        for l in LineStyleId::ALL {
            assert_eq!(l.name().parse::<LineStyleId>().unwrap(), l);
        }
        assert!("plaid".parse::<TextureId>().is_err());
    }
}
