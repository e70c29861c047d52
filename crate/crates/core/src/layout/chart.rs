use super::marks::{AxisPlan, MarkLayout, MarkPlan, PlotFrame, POINT_STEP};
use super::scene::{Layer, Role, SceneNode, Style};
use super::stagger::{min_label_step, stagger_axis_labels};
use super::{LayoutError, Texter};
use crate::braille::{measure_run, BrailleRun};
use crate::data::{BandKind, BandScale, LinearScale, Scale};
use crate::defaults::{ResolvedAxis, ResolvedSpec};
use crate::diagnostic::{rules, Diagnostic};
use crate::geom::{Point, Rect};
use crate::num::format_number;
use crate::spec::{GridStyle, StaggerMode};

/// Default length of a quantitative axis at 96 dpi.
pub const LINEAR_AXIS_LENGTH: f64 = 360.0;

pub(super) struct ChartBlock {
    pub nodes: Vec<SceneNode>,
    pub plot: Rect,
    pub diags: Vec<Diagnostic>,
}

fn label_texts(plan: &AxisPlan) -> Vec<String> {
    match plan {
        AxisPlan::None => vec![],
        AxisPlan::Band { domain, .. } | AxisPlan::Point { domain } => domain.clone(),
        AxisPlan::Linear { ticks, .. } => ticks.iter().map(|t| format_number(*t)).collect(),
    }
}

fn slots(plan: &AxisPlan) -> usize {
    match plan {
        AxisPlan::None => 1,
        AxisPlan::Band { domain, .. } | AxisPlan::Point { domain } => domain.len().max(1),
        AxisPlan::Linear { ticks, .. } => ticks.len(),
    }
}

/// Fraction of the axis between two neighbouring ticks.
fn tick_fraction(plan: &AxisPlan) -> Option<f64> {
    match plan {
        AxisPlan::Linear { lo, hi, ticks } if ticks.len() >= 2 && hi > lo => Some((ticks[1] - ticks[0]) / (hi - lo)),
        _ => None,
    }
}

/// Axis length from the label spacing it needs, unless `explicit` is set.
fn axis_length(plan: &AxisPlan, explicit: Option<f64>, default_step: f64, required_step: f64, s: f64) -> f64 {
    let n = slots(plan) as f64;
    match plan {
        AxisPlan::Linear { .. } => explicit.unwrap_or_else(|| match tick_fraction(plan) {
            Some(f) => (LINEAR_AXIS_LENGTH * s).max(required_step / f),
            None => LINEAR_AXIS_LENGTH * s,
        }),
        _ => explicit.unwrap_or(n * default_step.max(required_step)),
    }
}

fn scale_for(plan: &AxisPlan, start: f64, len: f64, vertical: bool) -> Scale {
    let n = slots(plan) as f64;
    match plan {
        AxisPlan::Linear { lo, hi, ticks } => Scale::Linear(LinearScale {
            domain: (*lo, *hi),
            range: if vertical { (start + len, start) } else { (start, start + len) },
            ticks: ticks.clone(),
        }),
        AxisPlan::Band { domain, band, .. } => Scale::Band(BandScale {
            kind: BandKind::Band,
            domain: domain.clone(),
            origin: start,
            step: len / n,
            bandwidth: band.min(len / n),
        }),
        AxisPlan::Point { domain } => Scale::Band(BandScale {
            kind: BandKind::Point,
            domain: domain.clone(),
            origin: start,
            step: len / n,
            bandwidth: 0.0,
        }),
        AxisPlan::None => Scale::Band(BandScale {
            kind: BandKind::Point,
            domain: vec![String::new()],
            origin: start,
            step: len,
            bandwidth: 0.0,
        }),
    }
}

/// Pixel position of every label slot.
fn slot_positions(scale: &Scale) -> Vec<f64> {
    match scale {
        Scale::Linear(l) => l.ticks.iter().map(|t| l.apply(*t)).collect(),
        Scale::Band(b) => b.centers().values().copied().collect(),
    }
}

fn grid_style(a: &ResolvedAxis, s: f64) -> (Style, Layer) {
    let mut style = Style::stroke(a.grid_width);
    if a.grid_style == GridStyle::DottedGrid {
        style.dash = vec![2.0 * s, 6.0 * s];
    }
    let layer = if a.foreground_grid { Layer::ForegroundGrid } else { Layer::BackgroundGrid };
    (style, layer)
}

fn line(path: String, role: Role, layer: Layer, from: Point, to: Point, style: Style, source: &str) -> SceneNode {
    SceneNode::shape(path, role, layer, super::scene::Geometry::Line { from, to }, style, source)
}

fn overlap(axis: &str, detail: String) -> Diagnostic {
    Diagnostic::error(&rules::LABEL_OVERLAP, format!("encoding.{axis}.axis"), detail)
        .with_fix("use fewer ticks (tickCount), shorter labels, or a larger width/height")
}

pub(super) fn cartesian(
    r: &ResolvedSpec,
    plan: &MarkPlan,
    layout: &dyn MarkLayout,
    t: &Texter,
) -> Result<ChartBlock, LayoutError> {
    let s = r.config.dpi / 96.0;
    let m = t.metrics;
    let gap = t.rules.min_element_gap;
    let cell_h = m.cell_height();
    let mut diags = Vec::new();
    let xa = r.x.as_ref().filter(|_| plan.x != AxisPlan::None);
    let ya = r.y.as_ref().filter(|_| plan.y != AxisPlan::None);

    let runs = |a: Option<&ResolvedAxis>, plan: &AxisPlan, path: &str| -> Result<Vec<BrailleRun>, LayoutError> {
        match a {
            Some(_) => label_texts(plan).iter().map(|l| t.run(l, path)).collect(),
            None => Ok(vec![]),
        }
    };
    let x_runs = runs(xa, &plan.x, "encoding.x.axis")?;
    let y_runs = runs(ya, &plan.y, "encoding.y.axis")?;

    // x extent: enough room for the labels on one row, or two when forced
    let x_widths: Vec<f64> = x_runs.iter().map(|l| measure_run(l, &m).width).collect();
    let x_mode = xa.map(|a| a.stagger_labels).unwrap_or(StaggerMode::Off);
    let x_required = if x_widths.len() < 2 { 0.0 } else { min_label_step(&x_widths, x_mode == StaggerMode::On, gap) };
    let x_default = match &plan.x {
        AxisPlan::Band { band, gap, .. } => band + gap,
        _ => POINT_STEP * s,
    };
    let x_len = axis_length(&plan.x, r.width, x_default, x_required, s);

    let y_required = cell_h + gap;
    let y_default = match &plan.y {
        AxisPlan::Band { band, gap, .. } => band + gap,
        _ => POINT_STEP * s,
    };
    let y_required = if y_runs.len() < 2 { 0.0 } else { y_required };
    let y_len = axis_length(&plan.y, r.height, y_default, y_required, s);

    let y_title = match ya.and_then(|a| a.title.as_deref()).filter(|s| !s.is_empty()) {
        Some(text) => Some(t.run(text, "encoding.y.axis.title")?),
        None => None,
    };
    let x_title = match xa.and_then(|a| a.title.as_deref()).filter(|s| !s.is_empty()) {
        Some(text) => Some(t.run(text, "encoding.x.axis.title")?),
        None => None,
    };

    let y_label_w = y_runs.iter().map(|l| m.ink_width(l.len())).fold(0.0, f64::max);
    let axis_x = match ya {
        Some(a) if !y_runs.is_empty() => y_label_w + a.label_padding + a.tick_size,
        Some(a) => a.tick_size,
        None => 0.0,
    };
    let plot_top = match (ya, &y_title) {
        (Some(a), Some(_)) => (cell_h - a.title_y + a.title_padding).max(1.5 * cell_h + gap),
        _ => cell_h / 2.0,
    };
    let plot = Rect::new(axis_x, plot_top, x_len, y_len);
    let frame = PlotFrame {
        plot,
        x: scale_for(&plan.x, plot.x, plot.width, false),
        y: scale_for(&plan.y, plot.y, plot.height, true),
    };

    let mut nodes = Vec::new();

    // grid
    if let Some(a) = xa.filter(|a| a.grid) {
        let (style, layer) = grid_style(a, s);
        for (i, px) in slot_positions(&frame.x).into_iter().enumerate() {
            if ya.is_some() && (px - plot.x).abs() < 0.5 {
                continue;
            }
            nodes.push(line(
                format!("axis/x/grid/{i}"),
                Role::GridLine,
                layer,
                Point::new(px, plot.y),
                Point::new(px, plot.bottom()),
                style.clone(),
                "encoding.x.axis.grid",
            ));
        }
    }
    if let Some(a) = ya.filter(|a| a.grid) {
        let (style, layer) = grid_style(a, s);
        for (i, py) in slot_positions(&frame.y).into_iter().enumerate() {
            if xa.is_some() && (py - plot.bottom()).abs() < 0.5 {
                continue;
            }
            nodes.push(line(
                format!("axis/y/grid/{i}"),
                Role::GridLine,
                layer,
                Point::new(plot.x, py),
                Point::new(plot.right(), py),
                style.clone(),
                "encoding.y.axis.grid",
            ));
        }
    }

    nodes.extend(layout.marks(r, plan, &frame));

    // x axis
    if let Some(a) = xa {
        let src = "encoding.x.axis";
        nodes.push(line(
            "axis/x/domain".into(),
            Role::AxisDomain,
            Layer::Axes,
            Point::new(plot.x, plot.bottom()),
            Point::new(plot.right(), plot.bottom()),
            Style::stroke(a.domain_width),
            src,
        ));
        let centers = slot_positions(&frame.x);
        let tick_end = plot.bottom() + a.tick_size;
        for (i, px) in centers.iter().enumerate() {
            nodes.push(line(
                format!("axis/x/tick/{i}"),
                Role::Tick,
                Layer::Axes,
                Point::new(*px, plot.bottom()),
                Point::new(*px, tick_end),
                Style::stroke(a.tick_width),
                src,
            ));
        }
        let stagger = stagger_axis_labels(&x_runs, &centers, a.stagger_labels, &m, &t.rules);
        if let Some((i, j)) = stagger.overlap {
            diags.push(overlap(
                "x",
                format!("x labels {:?} and {:?} are closer than 1/8 in. even after staggering", x_runs[i].source_text, x_runs[j].source_text),
            ));
        }
        let row0 = tick_end + a.label_padding;
        let mut labels_bottom = tick_end;
        let mut labels_left = f64::INFINITY;
        for (i, run) in x_runs.iter().enumerate() {
            let w = m.ink_width(run.len());
            let top = row0 + f64::from(stagger.rows[i]) * m.line_pitch;
            let mut node = SceneNode::text(
                format!("axis/x/label/{i}"),
                Role::AxisLabel,
                Layer::Labels,
                run.clone(),
                Point::new(centers[i] - w / 2.0, top),
                &m,
                a.label_font_size,
                src,
            );
            node.angle = a.label_angle;
            labels_bottom = labels_bottom.max(node.bbox.bottom());
            labels_left = labels_left.min(node.bbox.x);
            nodes.push(node);
        }
        for lead in &stagger.lead_lines {
            nodes.push(line(
                format!("axis/x/lead/{}", lead.index),
                Role::LeadLine,
                Layer::LeadLines,
                Point::new(lead.x, tick_end),
                Point::new(lead.x, tick_end + lead.length),
                Style::stroke(a.tick_width),
                src,
            ));
        }
        if let Some(run) = &x_title {
            let left = if labels_left.is_finite() { labels_left } else { plot.x };
            let mut node = SceneNode::text(
                "axis/x/title",
                Role::AxisTitle,
                Layer::Labels,
                run.clone(),
                Point::new(left, labels_bottom + a.title_padding),
                &m,
                a.title_font_size,
                "encoding.x.axis.title",
            );
            node.angle = a.title_angle;
            nodes.push(node);
        }
    }

    // y axis
    if let Some(a) = ya {
        let src = "encoding.y.axis";
        nodes.push(line(
            "axis/y/domain".into(),
            Role::AxisDomain,
            Layer::Axes,
            Point::new(plot.x, plot.y),
            Point::new(plot.x, plot.bottom()),
            Style::stroke(a.domain_width),
            src,
        ));
        let centers = slot_positions(&frame.y);
        for (i, py) in centers.iter().enumerate() {
            nodes.push(line(
                format!("axis/y/tick/{i}"),
                Role::Tick,
                Layer::Axes,
                Point::new(plot.x - a.tick_size, *py),
                Point::new(plot.x, *py),
                Style::stroke(a.tick_width),
                src,
            ));
        }
        for (i, run) in y_runs.iter().enumerate() {
            let mut node = SceneNode::text(
                format!("axis/y/label/{i}"),
                Role::AxisLabel,
                Layer::Labels,
                run.clone(),
                Point::new(0.0, centers[i] - cell_h / 2.0),
                &m,
                a.label_font_size,
                src,
            );
            node.angle = a.label_angle;
            nodes.push(node);
        }
        let mut sorted = centers.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[1] - w[0] < cell_h + gap - 1e-9) {
            diags.push(overlap("y", "y labels are closer than 1/8 in.; y labels are never staggered".to_string()));
        }
        if let Some(run) = &y_title {
            let mut node = SceneNode::text(
                "axis/y/title",
                Role::AxisTitle,
                Layer::Labels,
                run.clone(),
                Point::new(0.0, 0.0),
                &m,
                a.title_font_size,
                "encoding.y.axis.title",
            );
            node.angle = a.title_angle;
            nodes.push(node);
        }
    }

    Ok(ChartBlock { nodes, plot, diags })
}
