use super::marks::shape_geometry;
use super::scene::{Fill, Geometry, Layer, Role, SceneNode, Style};
use super::{LayoutError, Texter};
use crate::defaults::{ResolvedLegend, ResolvedSpec};
use crate::geom::{Point, Rect};
use crate::palette::{LineStyle, LineStyleId, ShapeKind, TextureId};
use crate::spec::{Channel, LegendDirection};

#[derive(Debug, Clone, PartialEq)]
pub enum Swatch {
    Texture(TextureId),
    Line { style: LineStyle, width: f64 },
    Shape { kind: ShapeKind, area: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendEntry {
    pub key: String,
    pub label: String,
    pub swatch: Swatch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendBlock {
    pub nodes: Vec<SceneNode>,
    pub bbox: Rect,
}

/// Legend entries for the resolved legend channel, in mapping order.
pub fn legend_entries(r: &ResolvedSpec, labels: &indexmap::IndexMap<String, String>) -> Vec<LegendEntry> {
    let Some(legend) = &r.legend else { return vec![] };
    let label = |k: &String| labels.get(k).cloned().unwrap_or_else(|| k.clone());
    let width_of = |k: &String| r.stroke_width_mapping.get(k).copied().unwrap_or(r.plotted_stroke_width);
    match legend.channel {
        Channel::Texture => r
            .texture_mapping
            .iter()
            .map(|(k, t)| LegendEntry { key: k.clone(), label: label(k), swatch: Swatch::Texture(*t) })
            .collect(),
        Channel::StrokeDash => r
            .line_style_mapping
            .iter()
            .map(|(k, s)| LegendEntry {
                key: k.clone(),
                label: label(k),
                swatch: Swatch::Line { style: s.clone(), width: width_of(k) },
            })
            .collect(),
        Channel::StrokeWidth => r
            .stroke_width_mapping
            .iter()
            .map(|(k, w)| LegendEntry {
                key: k.clone(),
                label: label(k),
                swatch: Swatch::Line {
                    style: r.line_style_mapping.get(k).cloned().unwrap_or(LineStyle::Named(LineStyleId::Solid)),
                    width: *w,
                },
            })
            .collect(),
        Channel::Shape => r
            .shape_mapping
            .iter()
            .map(|(k, s)| LegendEntry {
                key: k.clone(),
                label: label(k),
                swatch: Swatch::Shape { kind: *s, area: r.point_size },
            })
            .collect(),
        _ => vec![],
    }
}

/// Lay out a legend block with its top-left corner at the origin.
///
/// Each entry is a swatch followed by its braille label; vertical legends
/// stack entries `rowPadding` apart, horizontal ones put them in a row
/// `columnPadding` apart.
pub fn place_legend(
    entries: &[LegendEntry],
    legend: &ResolvedLegend,
    texter: &Texter,
    outline: f64,
) -> Result<Option<LegendBlock>, LayoutError> {
    if entries.is_empty() {
        return Ok(None);
    }
    let m = &texter.metrics;
    let cell_h = m.cell_height();
    let side = legend.symbol_size.max(0.0).sqrt();
    let entry_h = side.max(cell_h);
    let source = format!("encoding.{}.legend", legend.channel.name());
    let mut nodes = Vec::new();
    let mut y = 0.0;
    if let Some(title) = legend.title.as_deref().filter(|t| !t.is_empty()) {
        let run = texter.run(title, &source)?;
        nodes.push(SceneNode::text(
            "legend/title",
            Role::LegendTitle,
            Layer::Legend,
            run,
            Point::new(0.0, 0.0),
            m,
            legend.title_font_size,
            &source,
        ));
        y = cell_h + legend.title_padding;
    }
    let mut x = 0.0;
    for (i, e) in entries.iter().enumerate() {
        let mid = y + entry_h / 2.0;
        let (geometry, style) = match &e.swatch {
            Swatch::Texture(t) => (
                Geometry::Rect { rect: Rect::new(x, mid - side / 2.0, side, side) },
                Style::filled(Fill::Texture(*t), outline),
            ),
            Swatch::Line { style, width } => (
                Geometry::Line { from: Point::new(x, mid), to: Point::new(x + 2.0 * side, mid) },
                Style { stroke_width: *width, dash: style.dash_array(*width), round_caps: style.round_caps(), fill: Fill::None },
            ),
            Swatch::Shape { kind, area } => {
                (shape_geometry(*kind, Point::new(x + side / 2.0, mid), *area), Style::filled(Fill::Black, 0.0))
            }
        };
        let swatch = SceneNode::shape(
            format!("legend/entry/{i}/swatch"),
            Role::LegendSwatch,
            Layer::Legend,
            geometry,
            style,
            &source,
        );
        let label_x = swatch.bbox.right() + texter.rules.min_element_gap;
        nodes.push(swatch);
        let run = texter.run(&e.label, &source)?;
        let label = SceneNode::text(
            format!("legend/entry/{i}/label"),
            Role::LegendLabel,
            Layer::Legend,
            run,
            Point::new(label_x, mid - cell_h / 2.0),
            m,
            legend.label_font_size,
            &source,
        );
        let right = label.bbox.right();
        nodes.push(label);
        match legend.direction {
            LegendDirection::Vertical => y += entry_h + legend.row_padding,
            LegendDirection::Horizontal => x = right + legend.column_padding,
        }
    }
    let bbox = nodes.iter().skip(1).fold(nodes[0].bbox, |acc, n| acc.union(&n.bbox));
    Ok(Some(LegendBlock { nodes, bbox }))
}
