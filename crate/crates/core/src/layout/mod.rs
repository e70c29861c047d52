//! Positions every element of a chart in output pixels.
//!
//! Top to bottom the frame holds the title block, the legend (when it sits
//! above the chart), then the chart itself: y title, plot area with grid,
//! marks, axes and labels, then the x title. Braille cannot be scaled, so
//! sizes follow from label widths unless the spec fixes them.

mod chart;
mod legend;
mod marks;
mod scene;
mod stagger;

use std::sync::Arc;

use thiserror::Error;

pub use chart::LINEAR_AXIS_LENGTH;
pub use legend::{legend_entries, place_legend, LegendBlock, LegendEntry, Swatch};
pub use marks::{
    linear_axis, shape_geometry, ArcLayout, AxisPlan, BarLayout, Item, LineLayout, MarkLayout, MarkPlan, MarkRegistry,
    PlotFrame, PointLayout, Pos, BAND_GAP, BAR_WIDTH, PIE_RADIUS, POINT_STEP,
};
pub use scene::{Fill, Geometry, Layer, MarkInfo, Role, SceneGraph, SceneNode, Style};
pub use stagger::{fits_one_row, min_label_step, stagger_axis_labels, LeadLine, SpacingRules, StaggerPlan};

use crate::braille::{
    translate_text, BrailleMetrics, BrailleRun, Grade, TableError, TableRegistry, TranslateError, TranslationTable,
};
use crate::data::{BandKind, BandScale, DataError, DataTable, Scale};
use crate::defaults::{ResolvedSpec, ResolvedTitle};
use crate::diagnostic::{rules, Diagnostic};
use crate::geom::{Point, Rect};
use crate::spec::{LegendOrient, MarkType};

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("no layout registered for mark {0:?}")]
    UnknownMark(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{path}: {source}")]
    Translate {
        path: String,
        #[source]
        source: TranslateError,
    },
    #[error(transparent)]
    Data(#[from] DataError),
}

impl LayoutError {
    pub fn to_diagnostic(&self) -> Diagnostic {
        let path = match self {
            LayoutError::UnknownMark(_) => "mark".to_string(),
            LayoutError::Table(_) => "config.brailleTranslation".to_string(),
            LayoutError::Translate { path, .. } => path.clone(),
            LayoutError::Data(_) => "data".to_string(),
        };
        let message = match self {
            LayoutError::Translate { source, .. } => source.to_string(),
            other => other.to_string(),
        };
        Diagnostic::error(&rules::SCHEMA, path, message)
    }
}

/// Braille translation with the spec's table, grade and cell metrics.
pub struct Texter {
    table: Arc<TranslationTable>,
    pub grade: Grade,
    pub metrics: BrailleMetrics,
    pub rules: SpacingRules,
}

impl Texter {
    pub fn new(r: &ResolvedSpec, tables: &TableRegistry) -> Result<Self, LayoutError> {
        let (table, _) = tables.resolve(&r.config.braille_translation)?;
        let metrics = r.config.metrics;
        Ok(Texter { table, grade: r.config.grade, metrics, rules: SpacingRules::at_dpi(r.config.dpi, &metrics) })
    }

    pub fn with_table(table: Arc<TranslationTable>, grade: Grade, metrics: BrailleMetrics, dpi: f64) -> Self {
        Texter { table, grade, metrics, rules: SpacingRules::at_dpi(dpi, &metrics) }
    }

    pub fn run(&self, text: &str, path: &str) -> Result<BrailleRun, LayoutError> {
        translate_text(text, self.grade, &self.table)
            .map_err(|source| LayoutError::Translate { path: path.to_string(), source })
    }

    fn width(&self, run: &BrailleRun) -> f64 {
        self.metrics.ink_width(run.len())
    }

    /// Break `text` at spaces so each line fits in `width`. A single word
    /// wider than `width` gets a line of its own.
    pub fn wrap(&self, text: &str, width: f64, path: &str) -> Result<Vec<BrailleRun>, LayoutError> {
        let mut out = Vec::new();
        let mut current = String::new();
        for word in text.split_whitespace() {
            let candidate = if current.is_empty() { word.to_string() } else { format!("{current} {word}") };
            if !current.is_empty() && self.width(&self.run(&candidate, path)?) > width {
                out.push(self.run(&current, path)?);
                current = word.to_string();
            } else {
                current = candidate;
            }
        }
        if !current.is_empty() {
            out.push(self.run(&current, path)?);
        }
        Ok(out)
    }
}

fn title_runs(t: &ResolvedTitle, texter: &Texter, width: f64) -> Result<(Vec<BrailleRun>, Vec<BrailleRun>), LayoutError> {
    let lines = if t.explicit_breaks {
        t.lines.iter().map(|l| texter.run(l, "title")).collect::<Result<Vec<_>, _>>()?
    } else {
        texter.wrap(&t.lines.join(" "), width, "title")?
    };
    let sub = match &t.subtitle {
        Some(s) => texter.wrap(&s.join(" "), width, "title.subtitle")?,
        None => vec![],
    };
    Ok((lines, sub))
}

fn union_all<'a>(nodes: impl IntoIterator<Item = &'a SceneNode>) -> Option<Rect> {
    nodes.into_iter().map(|n| n.bbox).reduce(|a, b| a.union(&b))
}

fn translate_all(nodes: &mut [SceneNode], dx: f64, dy: f64) {
    for n in nodes {
        n.translate(dx, dy);
    }
}

/// Lay out a resolved spec with the built-in mark layouts.
pub fn build_scene(
    r: &ResolvedSpec,
    data: &DataTable,
    tables: &TableRegistry,
) -> Result<(SceneGraph, Vec<Diagnostic>), LayoutError> {
    build_scene_with(r, data, tables, &MarkRegistry::builtin())
}

pub fn build_scene_with(
    r: &ResolvedSpec,
    data: &DataTable,
    tables: &TableRegistry,
    registry: &MarkRegistry,
) -> Result<(SceneGraph, Vec<Diagnostic>), LayoutError> {
    let texter = Texter::new(r, tables)?;
    let m = texter.metrics;
    let s = r.config.dpi / 96.0;
    let layout = registry.get(r.mark.name()).ok_or_else(|| LayoutError::UnknownMark(r.mark.name().to_string()))?;
    let plan = layout.plan(r, data)?;
    let mut diags = Vec::new();

    let (mut chart, mut plot) = if r.mark == MarkType::Arc {
        let diameter = match (r.width, r.height) {
            (Some(w), Some(h)) => w.min(h),
            (Some(v), None) | (None, Some(v)) => v,
            (None, None) => 2.0 * PIE_RADIUS * s,
        };
        let plot = Rect::new(0.0, 0.0, diameter, diameter);
        let unit = || {
            Scale::Band(BandScale { kind: BandKind::Point, domain: vec![], origin: 0.0, step: 0.0, bandwidth: 0.0 })
        };
        (layout.marks(r, &plan, &PlotFrame { plot, x: unit(), y: unit() }), plot)
    } else {
        let block = chart::cartesian(r, &plan, layout, &texter)?;
        diags.extend(block.diags);
        (block.nodes, block.plot)
    };
    let chart_box = union_all(&chart).unwrap_or(plot);
    translate_all(&mut chart, -chart_box.x, -chart_box.y);
    plot = plot.translate(-chart_box.x, -chart_box.y);

    let entries = legend_entries(r, &plan.legend_labels);
    let legend = match &r.legend {
        Some(l) => place_legend(&entries, l, &texter, r.outline_width)?,
        None => None,
    };
    let legend_w = legend.as_ref().map(|b| b.bbox.width).unwrap_or(0.0);
    let mut content_w = chart_box.width.max(legend_w);

    let (title_lines, subtitle_lines) = match &r.title {
        Some(t) => title_runs(t, &texter, content_w)?,
        None => (vec![], vec![]),
    };
    for run in title_lines.iter().chain(&subtitle_lines) {
        content_w = content_w.max(texter.width(run));
    }

    let pad = r.config.padding;
    let mut nodes: Vec<SceneNode> = Vec::new();
    let mut y = pad.top;
    let mut title_box = None;
    if let Some(t) = &r.title {
        let mut title_nodes = Vec::new();
        let all = title_lines.iter().map(|l| (l, Role::Title, t.font_size)).enumerate().chain(
            subtitle_lines.iter().map(|l| (l, Role::Subtitle, t.subtitle_font_size)).enumerate(),
        );
        for (i, (run, role, size)) in all {
            let w = texter.width(run);
            let x = match t.align.as_str() {
                "left" | "start" => pad.left,
                "right" | "end" => pad.left + content_w - w,
                _ => pad.left + (content_w - w) / 2.0,
            };
            let (path, source) = match role {
                Role::Title => (format!("title/{i}"), "title"),
                _ => (format!("title/subtitle/{i}"), "title.subtitle"),
            };
            let mut node = SceneNode::text(path, role, Layer::Title, run.clone(), Point::new(x, y), &m, size, source);
            node.angle = t.angle;
            title_nodes.push(node);
            y += m.line_pitch;
        }
        if let Some(b) = union_all(&title_nodes) {
            y = b.bottom() + t.offset;
            title_box = Some(b);
        }
        nodes.extend(title_nodes);
    }

    let legend_x = |orient: LegendOrient, w: f64| match orient {
        LegendOrient::TopLeft | LegendOrient::BottomLeft => pad.left,
        LegendOrient::Top | LegendOrient::Bottom => pad.left + (content_w - w) / 2.0,
        LegendOrient::TopRight | LegendOrient::BottomRight => pad.left + content_w - w,
    };
    let mut legend_box = None;
    let mut place = |block: &LegendBlock, orient: LegendOrient, top: f64, nodes: &mut Vec<SceneNode>| -> f64 {
        let mut ns = block.nodes.clone();
        let dx = legend_x(orient, block.bbox.width) - block.bbox.x;
        let dy = top - block.bbox.y;
        translate_all(&mut ns, dx, dy);
        let b = block.bbox.translate(dx, dy);
        legend_box = Some(b);
        nodes.extend(ns);
        b.bottom()
    };
    let legend_info = legend.as_ref().zip(r.legend.as_ref());
    if let Some((block, l)) = legend_info.filter(|(_, l)| l.orient.is_above()) {
        y = place(block, l.orient, y, &mut nodes) + l.offset;
    }
    translate_all(&mut chart, pad.left, y);
    plot = plot.translate(pad.left, y);
    let chart_box = Rect::new(pad.left, y, chart_box.width, chart_box.height);
    nodes.extend(chart);
    y = chart_box.bottom();
    if let Some((block, l)) = legend_info.filter(|(_, l)| !l.orient.is_above()) {
        y = place(block, l.orient, y + l.offset, &mut nodes);
    }

    nodes.sort_by_key(|n| n.layer);
    let scene = SceneGraph {
        width: pad.left + content_w + pad.right,
        height: y + pad.bottom,
        dpi: r.config.dpi,
        mode: r.config.render_mode,
        font: r.config.font,
        metrics: m,
        title_box,
        legend_box,
        chart_box: Some(chart_box),
        plot_box: Some(plot),
        nodes,
    };
    Ok((scene, diags))
}
