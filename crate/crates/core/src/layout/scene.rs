use serde::Serialize;

use crate::braille::{BrailleMetrics, BrailleRun};
use crate::geom::{Point, Rect};
use crate::palette::{LineStyle, ShapeKind, TextureId};
use crate::spec::{BrailleFont, MarkType, RenderMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Role {
    Frame,
    Title,
    Subtitle,
    LegendTitle,
    LegendSwatch,
    LegendLabel,
    AxisDomain,
    Tick,
    GridLine,
    AxisLabel,
    AxisTitle,
    LeadLine,
    Mark,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Frame => "frame",
            Role::Title => "title",
            Role::Subtitle => "subtitle",
            Role::LegendTitle => "legendTitle",
            Role::LegendSwatch => "legendSwatch",
            Role::LegendLabel => "legendLabel",
            Role::AxisDomain => "axisDomain",
            Role::Tick => "tick",
            Role::GridLine => "gridLine",
            Role::AxisLabel => "axisLabel",
            Role::AxisTitle => "axisTitle",
            Role::LeadLine => "leadLine",
            Role::Mark => "mark",
        }
    }

    pub fn is_text(self) -> bool {
        matches!(
            self,
            Role::Title | Role::Subtitle | Role::LegendTitle | Role::LegendLabel | Role::AxisLabel | Role::AxisTitle
        )
    }
}

/// Paint order, back to front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Layer {
    BackgroundGrid,
    Marks,
    ForegroundGrid,
    Axes,
    Labels,
    LeadLines,
    Legend,
    Title,
}

impl Layer {
    pub const ALL: [Layer; 8] = [
        Layer::BackgroundGrid,
        Layer::Marks,
        Layer::ForegroundGrid,
        Layer::Axes,
        Layer::Labels,
        Layer::LeadLines,
        Layer::Legend,
        Layer::Title,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Layer::BackgroundGrid => "background-grid",
            Layer::Marks => "marks",
            Layer::ForegroundGrid => "foreground-grid",
            Layer::Axes => "axes",
            Layer::Labels => "labels",
            Layer::LeadLines => "lead-lines",
            Layer::Legend => "legend",
            Layer::Title => "title",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Geometry {
    Line { from: Point, to: Point },
    Rect { rect: Rect },
    /// Polyline or polygon.
    Path { points: Vec<Point>, closed: bool },
    Circle { center: Point, radius: f64 },
    /// Pie slice; angles in radians clockwise from 12 o'clock.
    Sector { center: Point, radius: f64, start: f64, end: f64 },
    /// Braille text whose ink box starts at `origin`.
    Text { origin: Point },
}

impl Geometry {
    pub fn bbox(&self) -> Rect {
        match self {
            Geometry::Line { from, to } => Rect::from_points(&[*from, *to]).expect("two points"),
            Geometry::Rect { rect } => *rect,
            Geometry::Path { points, .. } => Rect::from_points(points).unwrap_or_default(),
            Geometry::Circle { center, radius } | Geometry::Sector { center, radius, .. } => {
                Rect::new(center.x - radius, center.y - radius, 2.0 * radius, 2.0 * radius)
            }
            Geometry::Text { origin } => Rect::new(origin.x, origin.y, 0.0, 0.0),
        }
    }

    pub fn translate(&mut self, dx: f64, dy: f64) {
        let mv = |p: &mut Point| {
            p.x += dx;
            p.y += dy;
        };
        match self {
            Geometry::Line { from, to } => {
                mv(from);
                mv(to);
            }
            Geometry::Rect { rect } => *rect = rect.translate(dx, dy),
            Geometry::Path { points, .. } => points.iter_mut().for_each(mv),
            Geometry::Circle { center, .. } | Geometry::Sector { center, .. } | Geometry::Text { origin: center } => {
                mv(center)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "texture", rename_all = "camelCase")]
pub enum Fill {
    None,
    Black,
    White,
    Texture(TextureId),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Style {
    /// 0 means no stroke.
    pub stroke_width: f64,
    pub dash: Vec<f64>,
    pub round_caps: bool,
    pub fill: Fill,
}

impl Style {
    pub fn stroke(width: f64) -> Self {
        Style { stroke_width: width, dash: vec![], round_caps: false, fill: Fill::None }
    }

    pub fn filled(fill: Fill, outline: f64) -> Self {
        Style { stroke_width: outline, dash: vec![], round_caps: false, fill }
    }

    pub fn text() -> Self {
        Style { stroke_width: 0.0, dash: vec![], round_caps: false, fill: Fill::Black }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MarkInfo {
    pub kind: MarkType,
    pub series: Option<String>,
    /// Bar thickness across its band.
    pub band_extent: Option<f64>,
    /// Space between neighbouring bars or groups.
    pub band_gap: Option<f64>,
    pub line_style: Option<LineStyle>,
    pub shape: Option<ShapeKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SceneNode {
    /// Unique slash-separated id, e.g. `axis/x/label/3`.
    pub path: String,
    pub role: Role,
    pub layer: Layer,
    pub bbox: Rect,
    pub geometry: Geometry,
    pub style: Style,
    pub text: Option<BrailleRun>,
    pub font_size: Option<f64>,
    pub angle: f64,
    /// Spec property the node came from.
    pub source: String,
    pub mark: Option<MarkInfo>,
}

impl SceneNode {
    pub fn shape(path: impl Into<String>, role: Role, layer: Layer, geometry: Geometry, style: Style, source: &str) -> Self {
        let mut bbox = geometry.bbox();
        // strokes have thickness
        let h = style.stroke_width / 2.0;
        if h > 0.0 {
            bbox = Rect::new(bbox.x - h, bbox.y - h, bbox.width + 2.0 * h, bbox.height + 2.0 * h);
        }
        SceneNode {
            path: path.into(),
            role,
            layer,
            bbox,
            geometry,
            style,
            text: None,
            font_size: None,
            angle: 0.0,
            source: source.to_string(),
            mark: None,
        }
    }

    /// A braille text node with its ink box at `origin`.
    #[allow(clippy::too_many_arguments)]
    pub fn text(
        path: impl Into<String>,
        role: Role,
        layer: Layer,
        run: BrailleRun,
        origin: Point,
        metrics: &BrailleMetrics,
        font_size: f64,
        source: &str,
    ) -> Self {
        let bbox = Rect::new(origin.x, origin.y, metrics.ink_width(run.len()), metrics.cell_height());
        SceneNode {
            path: path.into(),
            role,
            layer,
            bbox,
            geometry: Geometry::Text { origin },
            style: Style::text(),
            text: Some(run),
            font_size: Some(font_size),
            angle: 0.0,
            source: source.to_string(),
            mark: None,
        }
    }

    pub fn translate(&mut self, dx: f64, dy: f64) {
        self.bbox = self.bbox.translate(dx, dy);
        self.geometry.translate(dx, dy);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SceneGraph {
    pub width: f64,
    pub height: f64,
    pub dpi: f64,
    pub mode: RenderMode,
    pub font: BrailleFont,
    pub metrics: BrailleMetrics,
    pub title_box: Option<Rect>,
    pub legend_box: Option<Rect>,
    pub chart_box: Option<Rect>,
    pub plot_box: Option<Rect>,
    /// Paint order.
    pub nodes: Vec<SceneNode>,
}

impl SceneGraph {
    pub fn empty(width: f64, height: f64) -> Self {
        SceneGraph {
            width,
            height,
            dpi: 96.0,
            mode: RenderMode::Dots,
            font: BrailleFont::SwellBraille,
            metrics: BrailleMetrics::at_dpi(96.0, 24.0),
            title_box: None,
            legend_box: None,
            chart_box: None,
            plot_box: None,
            nodes: vec![],
        }
    }

    pub fn nodes_with_role(&self, role: Role) -> impl Iterator<Item = &SceneNode> {
        self.nodes.iter().filter(move |n| n.role == role)
    }

    pub fn node(&self, path: &str) -> Option<&SceneNode> {
        self.nodes.iter().find(|n| n.path == path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }
}
