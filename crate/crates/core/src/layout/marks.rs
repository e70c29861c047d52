use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use indexmap::IndexMap;

use super::scene::{Fill, Geometry, Layer, MarkInfo, Role, SceneNode, Style};
use super::LayoutError;
use crate::data::{aggregate_rows, nice_ticks, quantitative_domain, AggregateOp, Baseline, DataTable, Datum, Scale};
use crate::defaults::{ResolvedChannel, ResolvedSpec};
use crate::geom::{Point, Rect};
use crate::palette::{LineStyle, LineStyleId, ShapeKind, TextureId};
use crate::spec::{Channel, MarkType};

/// Default bar thickness and gap between bands at 96 dpi.
pub const BAR_WIDTH: f64 = 48.0;
pub const BAND_GAP: f64 = 24.0;
/// Default spacing of ordinal positions for lines and points.
pub const POINT_STEP: f64 = 72.0;
pub const PIE_RADIUS: f64 = 150.0;

/// A position along one axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Pos {
    Key(String),
    Num(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxisPlan {
    /// No channel; everything sits at one unlabeled position.
    None,
    /// Bars: `band` is the bar (or group) thickness, `gap` the space between bands.
    Band { domain: Vec<String>, band: f64, gap: f64 },
    /// Discrete positions for lines and points.
    Point { domain: Vec<String> },
    Linear { lo: f64, hi: f64, ticks: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Bar { band: String, inner: Option<String>, series: Option<String>, v0: f64, v1: f64 },
    Series { series: Option<String>, points: Vec<(Pos, Pos)> },
    Point { x: Pos, y: Pos, series: Option<String>, size: Option<f64> },
    Slice { category: String, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkPlan {
    pub x: AxisPlan,
    pub y: AxisPlan,
    pub items: Vec<Item>,
    /// Bars: ordered keys of the offset channel.
    pub inner_domain: Vec<String>,
    pub horizontal: bool,
    /// Legend label per key when it differs from the key.
    pub legend_labels: IndexMap<String, String>,
}

impl MarkPlan {
    fn new(x: AxisPlan, y: AxisPlan, items: Vec<Item>) -> Self {
        MarkPlan { x, y, items, inner_domain: vec![], horizontal: false, legend_labels: IndexMap::new() }
    }
}

/// Where the marks go.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotFrame {
    pub plot: Rect,
    pub x: Scale,
    pub y: Scale,
}

impl PlotFrame {
    fn at(scale: &Scale, p: &Pos) -> f64 {
        match (scale, p) {
            (Scale::Linear(s), Pos::Num(v)) => s.apply(*v),
            (Scale::Band(b), Pos::Key(k)) => b.center(k).unwrap_or(b.origin + b.len() / 2.0),
            (Scale::Band(b), Pos::Num(_)) => b.origin + b.len() / 2.0,
            (Scale::Linear(s), Pos::Key(_)) => (s.range.0 + s.range.1) / 2.0,
        }
    }

    pub fn x_at(&self, p: &Pos) -> f64 {
        Self::at(&self.x, p)
    }

    pub fn y_at(&self, p: &Pos) -> f64 {
        Self::at(&self.y, p)
    }
}

/// Layout strategy for one mark type.
pub trait MarkLayout: Send + Sync {
    fn name(&self) -> &'static str;
    /// Aggregate the data and decide what each axis shows.
    fn plan(&self, r: &ResolvedSpec, data: &DataTable) -> Result<MarkPlan, LayoutError>;
    /// Mark nodes in plot coordinates.
    fn marks(&self, r: &ResolvedSpec, plan: &MarkPlan, frame: &PlotFrame) -> Vec<SceneNode>;
}

pub struct MarkRegistry {
    layouts: BTreeMap<&'static str, Box<dyn MarkLayout>>,
}

impl Default for MarkRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl MarkRegistry {
    pub fn empty() -> Self {
        MarkRegistry { layouts: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(BarLayout));
        r.register(Box::new(LineLayout));
        r.register(Box::new(PointLayout));
        r.register(Box::new(ArcLayout));
        r
    }

    pub fn register(&mut self, layout: Box<dyn MarkLayout>) {
        self.layouts.insert(layout.name(), layout);
    }

    pub fn get(&self, name: &str) -> Option<&dyn MarkLayout> {
        self.layouts.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.layouts.keys().copied()
    }
}

fn scale_factor(r: &ResolvedSpec) -> f64 {
    r.config.dpi / 96.0
}

fn field(r: &ResolvedSpec, c: Channel) -> Option<String> {
    r.channel(c).and_then(|ch| ch.field.clone())
}

fn rows(data: &DataTable) -> &[crate::data::Row] {
    &data.rows
}

/// Linear extent and ticks for a quantitative channel.
pub fn linear_axis(values: &[f64], ch: &ResolvedChannel, baseline: Baseline, tick_count: u32) -> Result<AxisPlan, LayoutError> {
    let explicit = ch
        .domain
        .as_ref()
        .and_then(|d| match d.as_slice() {
            [a, b] => Some((a.as_temporal()?, b.as_temporal()?)),
            _ => None,
        });
    if let Some((lo, hi)) = explicit {
        let eps = 1e-9 * (hi - lo).abs().max(1.0);
        let ticks = nice_ticks(lo, hi, tick_count).into_iter().filter(|t| *t >= lo - eps && *t <= hi + eps).collect();
        return Ok(AxisPlan::Linear { lo, hi, ticks });
    }
    let (lo, hi) = quantitative_domain(values, baseline)?;
    let ticks = nice_ticks(lo, hi, tick_count);
    let lo = ticks.first().copied().unwrap_or(lo).min(lo);
    let hi = ticks.last().copied().unwrap_or(hi).max(hi);
    Ok(AxisPlan::Linear { lo, hi, ticks })
}

fn tick_count(r: &ResolvedSpec, c: Channel) -> u32 {
    r.axis(c).map(|a| a.tick_count).unwrap_or(crate::defaults::decided::TICK_COUNT)
}

fn pos_of(ch: Option<&ResolvedChannel>, band: bool, row: &crate::data::Row, value_field: &str) -> Option<Pos> {
    let Some(_) = ch else { return Some(Pos::Key(String::new())) };
    let d = row.get(value_field).unwrap_or(&Datum::Null);
    if d.is_null() {
        return None;
    }
    if band {
        Some(Pos::Key(d.key()))
    } else {
        d.as_temporal().map(Pos::Num)
    }
}

/// Axis plan for a line/point position channel.
fn position_axis(r: &ResolvedSpec, c: Channel, table: &DataTable, vfield: &str, source_rows: &[crate::data::Row]) -> Result<(AxisPlan, bool), LayoutError> {
    let Some(ch) = r.channel(c) else { return Ok((AxisPlan::None, true)) };
    let band = r.axis(c).map(|a| a.band).unwrap_or(false);
    if band {
        let mut domain = ch.domain_keys(source_rows);
        if domain.is_empty() {
            domain = ch.domain_keys(&table.rows);
        }
        return Ok((AxisPlan::Point { domain }, true));
    }
    let values: Vec<f64> = table.column(vfield).filter_map(Datum::as_temporal).collect();
    Ok((linear_axis(&values, ch, Baseline::Auto, tick_count(r, c))?, false))
}

fn series_channel(r: &ResolvedSpec, candidates: &[Channel]) -> Option<Channel> {
    candidates.iter().copied().find(|c| field(r, *c).is_some())
}

/// Group by `keys` and aggregate the value channel when it asks for it.
fn maybe_aggregate(data: &DataTable, keys: &[String], value: Option<&ResolvedChannel>) -> Result<DataTable, LayoutError> {
    match value {
        Some(v) if v.aggregate.is_some() => {
            Ok(aggregate_rows(data, keys, v.field.as_deref(), v.aggregate.expect("checked"))?)
        }
        _ => Ok(data.clone()),
    }
}

fn dedup(keys: Vec<Option<String>>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for k in keys.into_iter().flatten() {
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

pub struct BarLayout;

impl MarkLayout for BarLayout {
    fn name(&self) -> &'static str {
        "bar"
    }

    fn plan(&self, r: &ResolvedSpec, data: &DataTable) -> Result<MarkPlan, LayoutError> {
        let s = scale_factor(r);
        let horizontal = r.y.as_ref().is_some_and(|a| a.band) && !r.x.as_ref().is_some_and(|a| a.band);
        let (band_c, value_c, offset_c) =
            if horizontal { (Channel::Y, Channel::X, Channel::YOffset) } else { (Channel::X, Channel::Y, Channel::XOffset) };
        let band_ch = r.channel(band_c);
        let value_ch = r.channel(value_c);
        let band_f = band_ch.and_then(|c| c.field.clone());
        let inner_f = field(r, offset_c);
        let series_f = field(r, Channel::Texture);
        let keys = dedup(vec![band_f.clone(), inner_f.clone(), series_f.clone()]);
        let op = value_ch.and_then(|v| v.aggregate).unwrap_or(AggregateOp::Sum);
        let table = match value_ch {
            Some(v) => aggregate_rows(data, &keys, v.field.as_deref(), op)?,
            None => aggregate_rows(data, &keys, None, AggregateOp::Count)?,
        };
        let vfield = value_ch.map(|v| v.value_field()).unwrap_or_else(|| "count".to_string());

        let domain = match band_ch {
            Some(c) => c.domain_keys(&data.rows),
            None => vec![String::new()],
        };
        let inner_domain = match r.channel(offset_c) {
            Some(c) if inner_f.is_some() => c.domain_keys(&data.rows),
            _ => vec![],
        };
        let series_order: Vec<String> = r.texture_mapping.keys().cloned().collect();
        let key_of = |row: &crate::data::Row, f: &Option<String>| f.as_ref().map(|f| row.get(f).unwrap_or(&Datum::Null).key());

        // stack within (band, inner) in series order
        let mut rows_sorted: Vec<&crate::data::Row> = table.rows.iter().collect();
        rows_sorted.sort_by_key(|row| {
            key_of(row, &series_f).and_then(|k| series_order.iter().position(|s| *s == k)).unwrap_or(usize::MAX)
        });
        let stacked = inner_f.is_none() && series_f.is_some();
        let mut pos_tops: IndexMap<(String, Option<String>), f64> = IndexMap::new();
        let mut neg_tops: IndexMap<(String, Option<String>), f64> = IndexMap::new();
        let mut items = Vec::new();
        for row in rows_sorted {
            let Some(v) = row.get(&vfield).and_then(Datum::as_f64) else { continue };
            let band = key_of(row, &band_f).unwrap_or_default();
            let inner = key_of(row, &inner_f);
            let series = key_of(row, &series_f);
            let slot = (band.clone(), if stacked { None } else { inner.clone().or(series.clone()) });
            let tops = if v >= 0.0 { &mut pos_tops } else { &mut neg_tops };
            let base = if stacked || inner.is_some() { *tops.get(&slot).unwrap_or(&0.0) } else { 0.0 };
            tops.insert(slot, base + v);
            items.push(Item::Bar { band, inner, series, v0: base, v1: base + v });
        }
        let mut extent: Vec<f64> = pos_tops.values().chain(neg_tops.values()).copied().collect();
        extent.push(0.0);
        let value_axis = match value_ch {
            Some(ch) => linear_axis(&extent, ch, Baseline::Zero, tick_count(r, value_c))?,
            None => {
                let ch = ResolvedChannel {
                    field: None,
                    field_type: crate::spec::FieldType::Quantitative,
                    aggregate: Some(AggregateOp::Count),
                    sort: None,
                    domain: None,
                };
                linear_axis(&extent, &ch, Baseline::Zero, tick_count(r, value_c))?
            }
        };
        let bar = r.mark_size.unwrap_or(BAR_WIDTH * s);
        let n_inner = inner_domain.len().max(1) as f64;
        let band_axis = AxisPlan::Band { domain, band: bar * n_inner, gap: BAND_GAP * s };
        let (x, y) = if horizontal { (value_axis, band_axis) } else { (band_axis, value_axis) };
        let mut plan = MarkPlan::new(x, y, items);
        plan.inner_domain = inner_domain;
        plan.horizontal = horizontal;
        Ok(plan)
    }

    fn marks(&self, r: &ResolvedSpec, plan: &MarkPlan, frame: &PlotFrame) -> Vec<SceneNode> {
        let (band_scale, value_scale) = if plan.horizontal { (&frame.y, &frame.x) } else { (&frame.x, &frame.y) };
        let (Scale::Band(bands), Scale::Linear(values)) = (band_scale, value_scale) else { return vec![] };
        let n_inner = plan.inner_domain.len().max(1);
        let thickness = bands.bandwidth / n_inner as f64;
        let gap = bands.step - bands.bandwidth;
        let mut out = Vec::new();
        for (i, item) in plan.items.iter().enumerate() {
            let Item::Bar { band, inner, series, v0, v1 } = item else { continue };
            let Some(c) = bands.center(band) else { continue };
            let slot = inner.as_ref().and_then(|k| plan.inner_domain.iter().position(|d| d == k)).unwrap_or(0);
            let start = c - bands.bandwidth / 2.0 + slot as f64 * thickness;
            let (a, b) = (values.apply(*v0), values.apply(*v1));
            let rect = if plan.horizontal {
                Rect::new(a.min(b), start, (b - a).abs(), thickness)
            } else {
                Rect::new(start, a.min(b), thickness, (b - a).abs())
            };
            let texture = series
                .as_ref()
                .and_then(|k| r.texture_mapping.get(k).copied())
                .unwrap_or(TextureId::SolidGrayFill);
            let mut node = SceneNode::shape(
                format!("marks/bar/{i}"),
                Role::Mark,
                Layer::Marks,
                Geometry::Rect { rect },
                Style::filled(Fill::Texture(texture), r.outline_width),
                "mark",
            );
            node.mark = Some(MarkInfo {
                kind: MarkType::Bar,
                series: series.clone(),
                band_extent: Some(thickness),
                band_gap: Some(gap),
                line_style: None,
                shape: None,
            });
            out.push(node);
        }
        out
    }
}

fn series_key(row: &crate::data::Row, f: &Option<String>) -> Option<String> {
    f.as_ref().map(|f| row.get(f).unwrap_or(&Datum::Null).key())
}

fn order_of(domain: &[String], p: &Pos) -> f64 {
    match p {
        Pos::Num(v) => *v,
        Pos::Key(k) => domain.iter().position(|d| d == k).map(|i| i as f64).unwrap_or(f64::MAX),
    }
}

pub struct LineLayout;

impl MarkLayout for LineLayout {
    fn name(&self) -> &'static str {
        "line"
    }

    fn plan(&self, r: &ResolvedSpec, data: &DataTable) -> Result<MarkPlan, LayoutError> {
        let series_c = series_channel(r, &[Channel::StrokeDash, Channel::StrokeWidth]);
        let series_f = series_c.and_then(|c| field(r, c));
        let keys = dedup(vec![field(r, Channel::X), series_f.clone()]);
        let table = maybe_aggregate(data, &keys, r.channel(Channel::Y))?;
        let xf = r.channel(Channel::X).map(|c| c.value_field()).unwrap_or_default();
        let yf = r.channel(Channel::Y).map(|c| c.value_field()).unwrap_or_default();
        let (x, x_band) = position_axis(r, Channel::X, &table, &xf, rows(data))?;
        let (y, y_band) = position_axis(r, Channel::Y, &table, &yf, rows(data))?;

        let order: Vec<Option<String>> = match series_c {
            Some(c) => r.channel(c).map(|ch| ch.domain_keys(&data.rows)).unwrap_or_default().into_iter().map(Some).collect(),
            None => vec![None],
        };
        let mut series: IndexMap<Option<String>, Vec<(Pos, Pos)>> = order.into_iter().map(|k| (k, vec![])).collect();
        for row in &table.rows {
            let (Some(px), Some(py)) =
                (pos_of(r.channel(Channel::X), x_band, row, &xf), pos_of(r.channel(Channel::Y), y_band, row, &yf))
            else {
                continue;
            };
            series.entry(series_key(row, &series_f)).or_default().push((px, py));
        }
        let x_domain = match &x {
            AxisPlan::Point { domain } => domain.clone(),
            _ => vec![],
        };
        let items = series
            .into_iter()
            .filter(|(_, pts)| !pts.is_empty())
            .map(|(k, mut points)| {
                points.sort_by(|a, b| order_of(&x_domain, &a.0).total_cmp(&order_of(&x_domain, &b.0)));
                Item::Series { series: k, points }
            })
            .collect();
        Ok(MarkPlan::new(x, y, items))
    }

    fn marks(&self, r: &ResolvedSpec, plan: &MarkPlan, frame: &PlotFrame) -> Vec<SceneNode> {
        let mut out = Vec::new();
        for (i, item) in plan.items.iter().enumerate() {
            let Item::Series { series, points } = item else { continue };
            let style = series
                .as_ref()
                .and_then(|k| r.line_style_mapping.get(k).cloned())
                .unwrap_or(LineStyle::Named(LineStyleId::Solid));
            let width = series
                .as_ref()
                .and_then(|k| r.stroke_width_mapping.get(k).copied())
                .unwrap_or(r.plotted_stroke_width);
            let pts: Vec<Point> = points.iter().map(|(x, y)| Point::new(frame.x_at(x), frame.y_at(y))).collect();
            let mut node = SceneNode::shape(
                format!("marks/line/{i}"),
                Role::Mark,
                Layer::Marks,
                Geometry::Path { points: pts, closed: false },
                Style { stroke_width: width, dash: style.dash_array(width), round_caps: style.round_caps(), fill: Fill::None },
                "mark",
            );
            node.mark = Some(MarkInfo {
                kind: MarkType::Line,
                series: series.clone(),
                band_extent: None,
                band_gap: None,
                line_style: Some(style),
                shape: None,
            });
            out.push(node);
        }
        out
    }
}

/// Filled shape of the given area centred on `c`.
pub fn shape_geometry(kind: ShapeKind, c: Point, area: f64) -> Geometry {
    let d = area.max(0.0).sqrt();
    let poly = |pts: &[(f64, f64)]| Geometry::Path {
        points: pts.iter().map(|(x, y)| Point::new(c.x + x, c.y + y)).collect(),
        closed: true,
    };
    match kind {
        ShapeKind::Circle => Geometry::Circle { center: c, radius: (area / PI).sqrt() },
        ShapeKind::Square => poly(&[(-d / 2.0, -d / 2.0), (d / 2.0, -d / 2.0), (d / 2.0, d / 2.0), (-d / 2.0, d / 2.0)]),
        ShapeKind::Triangle => {
            // equilateral, centroid on c
            let a = d * (4.0 / 3f64.sqrt()).sqrt();
            let h = a * 3f64.sqrt() / 2.0;
            poly(&[(0.0, -2.0 * h / 3.0), (a / 2.0, h / 3.0), (-a / 2.0, h / 3.0)])
        }
        ShapeKind::Diamond => {
            let h = d / 2f64.sqrt();
            poly(&[(0.0, -h), (h, 0.0), (0.0, h), (-h, 0.0)])
        }
        ShapeKind::Cross => {
            // plus sign made of five squares of side t
            let t = d / 5f64.sqrt();
            let (a, b) = (t / 2.0, 1.5 * t);
            poly(&[
                (-a, -b),
                (a, -b),
                (a, -a),
                (b, -a),
                (b, a),
                (a, a),
                (a, b),
                (-a, b),
                (-a, a),
                (-b, a),
                (-b, -a),
                (-a, -a),
            ])
        }
    }
}

pub struct PointLayout;

impl MarkLayout for PointLayout {
    fn name(&self) -> &'static str {
        "point"
    }

    fn plan(&self, r: &ResolvedSpec, data: &DataTable) -> Result<MarkPlan, LayoutError> {
        let xf = r.channel(Channel::X).map(|c| c.value_field()).unwrap_or_default();
        let yf = r.channel(Channel::Y).map(|c| c.value_field()).unwrap_or_default();
        let series_f = field(r, Channel::Shape);
        let size_f = field(r, Channel::Size);
        let (x, x_band) = position_axis(r, Channel::X, data, &xf, rows(data))?;
        let (y, y_band) = position_axis(r, Channel::Y, data, &yf, rows(data))?;
        let sizes: Vec<f64> = size_f.as_ref().map(|f| data.column(f).filter_map(Datum::as_f64).collect()).unwrap_or_default();
        let (smin, smax) = sizes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        let [amin, amax] = r.size_range;
        let mut items = Vec::new();
        for row in &data.rows {
            let (Some(px), Some(py)) =
                (pos_of(r.channel(Channel::X), x_band, row, &xf), pos_of(r.channel(Channel::Y), y_band, row, &yf))
            else {
                continue;
            };
            let size = size_f.as_ref().and_then(|f| row.get(f)).and_then(Datum::as_f64).map(|v| {
                if smax > smin {
                    amin + (v - smin) / (smax - smin) * (amax - amin)
                } else {
                    (amin + amax) / 2.0
                }
            });
            items.push(Item::Point { x: px, y: py, series: series_key(row, &series_f), size });
        }
        Ok(MarkPlan::new(x, y, items))
    }

    fn marks(&self, r: &ResolvedSpec, plan: &MarkPlan, frame: &PlotFrame) -> Vec<SceneNode> {
        let mut out = Vec::new();
        for (i, item) in plan.items.iter().enumerate() {
            let Item::Point { x, y, series, size } = item else { continue };
            let kind = series.as_ref().and_then(|k| r.shape_mapping.get(k).copied()).unwrap_or(ShapeKind::Circle);
            let c = Point::new(frame.x_at(x), frame.y_at(y));
            let mut node = SceneNode::shape(
                format!("marks/point/{i}"),
                Role::Mark,
                Layer::Marks,
                shape_geometry(kind, c, size.unwrap_or(r.point_size)),
                Style::filled(Fill::Black, 0.0),
                "mark",
            );
            node.mark = Some(MarkInfo {
                kind: MarkType::Point,
                series: series.clone(),
                band_extent: None,
                band_gap: None,
                line_style: None,
                shape: Some(kind),
            });
            out.push(node);
        }
        out
    }
}

pub struct ArcLayout;

impl MarkLayout for ArcLayout {
    fn name(&self) -> &'static str {
        "arc"
    }

    fn plan(&self, r: &ResolvedSpec, data: &DataTable) -> Result<MarkPlan, LayoutError> {
        let theta = r.channel(Channel::Theta);
        let cat_f = field(r, Channel::Texture);
        let keys = dedup(vec![cat_f.clone()]);
        let op = theta.and_then(|t| t.aggregate).unwrap_or(AggregateOp::Sum);
        let table = aggregate_rows(data, &keys, theta.and_then(|t| t.field.as_deref()), op)?;
        let vfield = theta.map(|t| t.value_field()).unwrap_or_else(|| "count".to_string());
        let mut slices: IndexMap<String, f64> = r.texture_mapping.keys().map(|k| (k.clone(), 0.0)).collect();
        for row in &table.rows {
            let k = series_key(row, &cat_f).unwrap_or_default();
            let v = row.get(&vfield).and_then(Datum::as_f64).unwrap_or(0.0);
            *slices.entry(k).or_insert(0.0) += v;
        }
        let mut plan = MarkPlan::new(
            AxisPlan::None,
            AxisPlan::None,
            slices.iter().map(|(k, v)| Item::Slice { category: k.clone(), value: *v }).collect(),
        );
        plan.legend_labels =
            slices.iter().map(|(k, v)| (k.clone(), format!("{k} {}", crate::num::format_number(*v)))).collect();
        Ok(plan)
    }

    fn marks(&self, r: &ResolvedSpec, plan: &MarkPlan, frame: &PlotFrame) -> Vec<SceneNode> {
        let radius = frame.plot.width.min(frame.plot.height) / 2.0;
        let center = Point::new(frame.plot.center_x(), frame.plot.y + frame.plot.height / 2.0);
        let total: f64 = plan.items.iter().map(|i| if let Item::Slice { value, .. } = i { value.max(0.0) } else { 0.0 }).sum();
        let mut out = Vec::new();
        if total <= 0.0 {
            return out;
        }
        let mut angle = 0.0;
        for (i, item) in plan.items.iter().enumerate() {
            let Item::Slice { category, value } = item else { continue };
            if *value <= 0.0 {
                continue;
            }
            let sweep = value / total * TAU;
            let texture = r.texture_mapping.get(category).copied().unwrap_or(TextureId::SolidGrayFill);
            let mut node = SceneNode::shape(
                format!("marks/arc/{i}"),
                Role::Mark,
                Layer::Marks,
                Geometry::Sector { center, radius, start: angle, end: angle + sweep },
                Style::filled(Fill::Texture(texture), r.outline_width),
                "mark",
            );
            node.mark = Some(MarkInfo {
                kind: MarkType::Arc,
                series: Some(category.clone()),
                band_extent: None,
                band_gap: None,
                line_style: None,
                shape: None,
            });
            out.push(node);
            angle += sweep;
        }
        out
    }
}
