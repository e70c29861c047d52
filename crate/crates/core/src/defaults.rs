//! Tactile defaults table, default resolution and encoding assignment.

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::braille::{BrailleMetrics, Grade, UEB_G1_ID, UEB_G2_ID};
use crate::data::{discrete_domain, AggregateOp, Datum, Row};
use crate::diagnostic::{rules, Diagnostic};
use crate::palette::{LineStyle, LineStyleId, ShapeKind, TextureId};
use crate::spec::{
    AxisSpec, BrailleFont, Channel, ChannelDef, ConfigSpec, DataSpec, FieldType, GridStyle, LegendDirection,
    LegendOrient, LegendSpec, MarkSpec, MarkType, MetricsSpec, PaddingSpec, RangeItem, RenderMode, ScaleSpec,
    SortSpec, StaggerMode, StyleList, Text, TitleConfig, TitleParams, TitleSpec, TvlSpec,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DefaultValue {
    Str(&'static str),
    Num(f64),
    Padding { top: f64, bottom: f64, left: f64, right: f64 },
}

impl DefaultValue {
    pub fn to_json(self) -> Value {
        match self {
            DefaultValue::Str(s) => json!(s),
            DefaultValue::Num(n) => {
                if n.fract() == 0.0 {
                    json!(n as i64)
                } else {
                    json!(n)
                }
            }
            DefaultValue::Padding { top, bottom, left, right } => {
                json!({"top": top as i64, "bottom": bottom as i64, "left": left as i64, "right": right as i64})
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefaultEntry {
    pub path: &'static str,
    pub value: DefaultValue,
    pub citation: &'static str,
}

const FONT_SIZE_WHY: &str = "Braille fonts are made for one fixed size; scaling them breaks cell geometry";
const WEIGHT_WHY: &str = "Braille has no bold or light forms; uniform dots keep the text legible";
const GAP_WHY: &str = "BANA minimum spacing: 1/8 in. of clear space between elements";
const HEADING_BELOW_WHY: &str =
    "BANA 6.6.4.5: the horizontal axis heading goes below the values, starting at the first cell of the first value";

const fn num(path: &'static str, v: f64, citation: &'static str) -> DefaultEntry {
    DefaultEntry { path, value: DefaultValue::Num(v), citation }
}

const fn text(path: &'static str, v: &'static str, citation: &'static str) -> DefaultEntry {
    DefaultEntry { path, value: DefaultValue::Str(v), citation }
}

/// Every default, in table order.
pub const DEFAULTS: &[DefaultEntry] = &[
    text(
        "config.font",
        "Swell Braille",
        "Swell Braille gives good results on both embossers and swell-form machines",
    ),
    num("title.fontSize", 24.0, FONT_SIZE_WHY),
    num("title.subtitleFontSize", 24.0, FONT_SIZE_WHY),
    num("axis.titleFontSize", 24.0, FONT_SIZE_WHY),
    num("axis.labelFontSize", 24.0, FONT_SIZE_WHY),
    num("legend.titleFontSize", 24.0, FONT_SIZE_WHY),
    num("legend.labelFontSize", 24.0, FONT_SIZE_WHY),
    text("title.fontWeight", "normal", WEIGHT_WHY),
    text("title.subtitleFontWeight", "normal", WEIGHT_WHY),
    text("axis.titleFontWeight", "normal", WEIGHT_WHY),
    text("axis.labelFontWeight", "normal", WEIGHT_WHY),
    text("legend.titleFontWeight", "normal", WEIGHT_WHY),
    text("legend.labelFontWeight", "normal", WEIGHT_WHY),
    text(
        "config.brailleTranslation",
        UEB_G2_ID,
        "Contracted (Grade 2) Unified English Braille is the common code for English-speaking readers",
    ),
    num("axis.gridWidth", 1.0, "BANA 6.6.2.2: grid lines are the weakest lines of the graphic"),
    num(
        "axis.domainWidth",
        2.5,
        "BANA 6.6.2.2: both axis lines must feel distinct from, and stronger than, grid lines",
    ),
    num("axis.tickSize", 26.5, "BANA minimum size for a tactile line segment"),
    num("axis.tickWidth", 2.5, "Ticks share the axis line weight so they sit at the same level of the line hierarchy"),
    text("axis.gridColor", "black", "Black reproduces reliably on embossers and swell paper"),
    text("axis.domainColor", "black", "Black reproduces reliably on embossers and swell paper"),
    text("axis.tickColor", "black", "Black reproduces reliably on embossers and swell paper"),
    text("axis.staggerLabels", "auto", "Stagger x labels only when they would otherwise crowd each other"),
    text("legend.direction", "vertical", "Entries in a column are easier to scan by touch for many readers"),
    text("legend.orient", "top-left", "A fixed, predictable key position shortens search time"),
    num("axis.titleAngle", 0.0, "Readers expect horizontal braille; rotated text slows or confuses reading"),
    num("axis.labelAngle", 0.0, "Readers expect horizontal braille; rotated text slows or confuses reading"),
    text("title.align", "center", "BANA 5.3.1: a graphic's title is set as a centered heading"),
    text("axis.titleAlign", "left", HEADING_BELOW_WHY),
    num("title.offset", 50.0, "BANA 5.3.1: leave a blank line before and after a centered heading"),
    num("axis.titlePadding", 20.0, HEADING_BELOW_WHY),
    num("axis.labelPadding", 20.0, "BANA 6.6.4.5: horizontal values sit 1/8 in. from the tick mark or axis"),
    num("axis.titleY", -10.0, GAP_WHY),
    num("legend.titlePadding", 20.0, GAP_WHY),
    num("legend.offset", 20.0, GAP_WHY),
    num("legend.columnPadding", 20.0, GAP_WHY),
    num("legend.rowPadding", 20.0, GAP_WHY),
    DefaultEntry {
        path: "config.padding",
        value: DefaultValue::Padding { top: 100.0, bottom: 100.0, left: 200.0, right: 200.0 },
        citation: GAP_WHY,
    },
    num("legend.symbolSize", 3000.0, "BANA minimum size for a tactile symbol"),
];

pub fn lookup(path: &str) -> Option<&'static DefaultEntry> {
    DEFAULTS.iter().find(|e| e.path == path)
}

fn dnum(path: &str) -> f64 {
    match lookup(path).map(|e| e.value) {
        Some(DefaultValue::Num(v)) => v,
        _ => panic!("no numeric default for {path}"),
    }
}

fn dstr(path: &str) -> String {
    match lookup(path).map(|e| e.value) {
        Some(DefaultValue::Str(v)) => v.to_string(),
        _ => panic!("no text default for {path}"),
    }
}

/// The defaults table as pretty JSON: `{path: {value, citation}}` in table order.
pub fn defaults_json() -> String {
    let mut m = serde_json::Map::new();
    for e in DEFAULTS {
        m.insert(e.path.to_string(), json!({"value": e.value.to_json(), "citation": e.citation}));
    }
    serde_json::to_string_pretty(&Value::Object(m)).expect("json")
}

/// Constants outside the tables.
pub mod decided {
    pub const TICK_COUNT: u32 = 5;
    pub const PLOTTED_STROKE_WIDTH: f64 = 4.0;
    pub const OUTLINE_WIDTH: f64 = 2.0;
    pub const DPI: f64 = 96.0;
    /// Point symbol area in px^2 at 96 dpi.
    pub const POINT_SIZE: f64 = 400.0;
    pub const STROKE_WIDTH_RANGE: [f64; 4] = [4.0, 6.0, 8.0, 10.0];
    pub const SIZE_RANGE: [f64; 2] = [200.0, 1200.0];
    pub const TEXTURE_WARN_ABOVE: usize = 5;
    pub const LINE_STYLE_WARN_ABOVE: usize = 4;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolvedTitle {
    pub lines: Vec<String>,
    pub explicit_breaks: bool,
    pub subtitle: Option<Vec<String>>,
    pub font_size: f64,
    pub subtitle_font_size: f64,
    pub font_weight: String,
    pub subtitle_font_weight: String,
    pub align: String,
    pub offset: f64,
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolvedAxis {
    pub channel: Channel,
    pub title: Option<String>,
    pub band: bool,
    pub tick_count: u32,
    pub stagger_labels: StaggerMode,
    pub grid: bool,
    pub grid_style: GridStyle,
    pub foreground_grid: bool,
    pub label_padding: f64,
    pub title_padding: f64,
    pub tick_size: f64,
    pub tick_width: f64,
    pub grid_width: f64,
    pub domain_width: f64,
    pub grid_color: String,
    pub domain_color: String,
    pub tick_color: String,
    pub label_angle: f64,
    pub title_angle: f64,
    pub title_align: String,
    pub title_y: f64,
    pub label_font_size: f64,
    pub title_font_size: f64,
    pub label_font_weight: String,
    pub title_font_weight: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolvedLegend {
    pub channel: Channel,
    pub title: Option<String>,
    pub direction: LegendDirection,
    pub orient: LegendOrient,
    pub symbol_size: f64,
    pub title_padding: f64,
    pub offset: f64,
    pub column_padding: f64,
    pub row_padding: f64,
    pub label_font_size: f64,
    pub title_font_size: f64,
    pub label_font_weight: String,
    pub title_font_weight: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Padding {
    pub top: f64,
    pub bottom: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolvedConfig {
    pub font: BrailleFont,
    pub braille_translation: String,
    pub grade: Grade,
    pub padding: Padding,
    pub dpi: f64,
    pub render_mode: RenderMode,
    pub metrics: BrailleMetrics,
}

/// The parts of an encoding channel that layout needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolvedChannel {
    pub field: Option<String>,
    pub field_type: FieldType,
    pub aggregate: Option<AggregateOp>,
    pub sort: Option<SortSpec>,
    pub domain: Option<Vec<Datum>>,
}

impl ResolvedChannel {
    /// Column that holds this channel's values after aggregation.
    pub fn value_field(&self) -> String {
        crate::data::aggregate_output_field(self.field.as_deref(), self.aggregate.unwrap_or(AggregateOp::Sum))
    }

    pub fn sort_values(&self) -> Option<&[Datum]> {
        match &self.sort {
            Some(SortSpec::Values(v)) => Some(v),
            _ => None,
        }
    }

    /// Distinct values in presentation order, as for [`channel_domain`].
    pub fn domain_keys(&self, rows: &[Row]) -> Vec<String> {
        ordered_keys(self.field.as_deref(), self.domain.as_deref().or(self.sort_values()), self.sort.as_ref(), rows)
    }
}

/// A spec with every property filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolvedSpec {
    pub title: Option<ResolvedTitle>,
    pub description: Option<String>,
    pub data: DataSpec,
    pub mark: MarkType,
    /// Explicit bar width (px) or point area (px^2).
    pub mark_size: Option<f64>,
    pub plotted_stroke_width: f64,
    pub outline_width: f64,
    pub point_size: f64,
    pub encoding: IndexMap<Channel, ResolvedChannel>,
    pub x: Option<ResolvedAxis>,
    pub y: Option<ResolvedAxis>,
    pub legend: Option<ResolvedLegend>,
    pub config: ResolvedConfig,
    pub texture_mapping: IndexMap<String, TextureId>,
    pub line_style_mapping: IndexMap<String, LineStyle>,
    pub shape_mapping: IndexMap<String, ShapeKind>,
    pub stroke_width_mapping: IndexMap<String, f64>,
    pub size_range: [f64; 2],
    pub width: Option<f64>,
    pub height: Option<f64>,
}

impl ResolvedSpec {
    pub fn channel(&self, c: Channel) -> Option<&ResolvedChannel> {
        self.encoding.get(&c)
    }

    pub fn axis(&self, c: Channel) -> Option<&ResolvedAxis> {
        match c {
            Channel::X => self.x.as_ref(),
            Channel::Y => self.y.as_ref(),
            _ => None,
        }
    }

    /// Channel whose values key the legend, if any.
    pub fn legend_channel(&self) -> Option<Channel> {
        self.legend.as_ref().map(|l| l.channel)
    }

    /// Turn the resolution back into a fully explicit spec.
    pub fn to_spec(&self) -> TvlSpec {
        let title = self.title.as_ref().map(|t| {
            let text = if t.explicit_breaks { Text::Lines(t.lines.clone()) } else { Text::Line(t.lines.join(" ")) };
            TitleSpec::Params(TitleParams { text, subtitle: t.subtitle.clone().map(Text::Lines) })
        });
        let mut encoding = IndexMap::new();
        for (&ch, rc) in &self.encoding {
            let mut def = ChannelDef {
                field: rc.field.clone(),
                field_type: Some(rc.field_type),
                aggregate: rc.aggregate,
                sort: rc.sort.clone(),
                scale: rc.domain.clone().map(|d| ScaleSpec { domain: Some(d), range: None }),
                ..Default::default()
            };
            if let Some(a) = self.axis(ch) {
                def.axis = Some(axis_to_spec(a));
            }
            let range: Option<Vec<RangeItem>> = match ch {
                Channel::Texture => {
                    Some(self.texture_mapping.values().map(|t| RangeItem::Name(t.name().into())).collect())
                }
                Channel::StrokeDash => Some(
                    self.line_style_mapping
                        .values()
                        .map(|s| match s {
                            LineStyle::Named(n) => RangeItem::Name(n.name().into()),
                            LineStyle::Custom(d) => RangeItem::Dash(d.clone()),
                        })
                        .collect(),
                ),
                Channel::Shape => {
                    Some(self.shape_mapping.values().map(|s| RangeItem::Name(s.name().into())).collect())
                }
                Channel::StrokeWidth => Some(self.stroke_width_mapping.values().map(|w| RangeItem::Number(*w)).collect()),
                Channel::Size => Some(self.size_range.iter().map(|w| RangeItem::Number(*w)).collect()),
                _ => None,
            };
            if let Some(range) = range.filter(|r| !r.is_empty()) {
                def.scale.get_or_insert_with(ScaleSpec::default).range = Some(range);
            }
            if let Some(l) = self.legend.as_ref().filter(|l| l.channel == ch) {
                def.legend = Some(legend_to_spec(l));
            }
            encoding.insert(ch, def);
        }
        let c = &self.config;
        let m = &c.metrics;
        let config = ConfigSpec {
            font: Some(c.font),
            braille_translation: Some(c.braille_translation.clone()),
            braille_grade: Some(c.grade),
            padding: Some(PaddingSpec {
                top: Some(c.padding.top),
                bottom: Some(c.padding.bottom),
                left: Some(c.padding.left),
                right: Some(c.padding.right),
            }),
            dpi: Some(c.dpi),
            render_mode: Some(c.render_mode),
            braille: Some(MetricsSpec {
                dot_diameter: Some(m.dot_diameter),
                dot_pitch: Some(m.dot_pitch),
                cell_pitch: Some(m.cell_pitch),
                line_pitch: Some(m.line_pitch),
            }),
            axis: None,
            legend: None,
            title: self.title.as_ref().map(|t| TitleConfig {
                font_size: Some(t.font_size),
                subtitle_font_size: Some(t.subtitle_font_size),
                font_weight: Some(t.font_weight.clone()),
                subtitle_font_weight: Some(t.subtitle_font_weight.clone()),
                align: Some(t.align.clone()),
                offset: Some(t.offset),
                angle: Some(t.angle),
            }),
        };
        TvlSpec {
            schema: None,
            description: self.description.clone(),
            title,
            data: self.data.clone(),
            mark: MarkSpec {
                kind: self.mark,
                size: self.mark_size,
                stroke_width: Some(self.plotted_stroke_width),
            },
            encoding,
            config: Some(config),
            width: self.width,
            height: self.height,
        }
    }
}

fn axis_to_spec(a: &ResolvedAxis) -> AxisSpec {
    let mut style = vec![a.grid_style];
    if a.foreground_grid {
        style.push(GridStyle::ForegroundGrid);
    }
    AxisSpec {
        title: Some(a.title.clone()),
        tick_count: Some(a.tick_count),
        stagger_labels: Some(a.stagger_labels),
        style: Some(StyleList(style)),
        grid: Some(a.grid),
        label_padding: Some(a.label_padding),
        title_padding: Some(a.title_padding),
        tick_size: Some(a.tick_size),
        tick_width: Some(a.tick_width),
        grid_width: Some(a.grid_width),
        domain_width: Some(a.domain_width),
        grid_color: Some(a.grid_color.clone()),
        domain_color: Some(a.domain_color.clone()),
        tick_color: Some(a.tick_color.clone()),
        label_angle: Some(a.label_angle),
        title_angle: Some(a.title_angle),
        title_align: Some(a.title_align.clone()),
        title_y: Some(a.title_y),
        label_font_size: Some(a.label_font_size),
        title_font_size: Some(a.title_font_size),
        label_font_weight: Some(a.label_font_weight.clone()),
        title_font_weight: Some(a.title_font_weight.clone()),
    }
}

fn legend_to_spec(l: &ResolvedLegend) -> LegendSpec {
    LegendSpec {
        title: Some(l.title.clone()),
        direction: Some(l.direction),
        orient: Some(l.orient),
        symbol_size: Some(l.symbol_size),
        title_padding: Some(l.title_padding),
        offset: Some(l.offset),
        column_padding: Some(l.column_padding),
        row_padding: Some(l.row_padding),
        label_font_size: Some(l.label_font_size),
        title_font_size: Some(l.title_font_size),
        label_font_weight: Some(l.label_font_weight.clone()),
        title_font_weight: Some(l.title_font_weight.clone()),
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssignError {
    #[error("scale range has {range} entries but the domain has {domain} values")]
    RangeTooShort { range: usize, domain: usize },
    #[error(transparent)]
    UnknownName(#[from] crate::palette::UnknownName),
    #[error("{needed} values but only {available} distinct styles exist")]
    Exhausted { needed: usize, available: usize },
}

fn take_range<T: Clone>(domain: &[String], user: Option<&[T]>, default: &[T]) -> Result<IndexMap<String, T>, AssignError> {
    let range = user.unwrap_or(default);
    if range.len() < domain.len() {
        return Err(match user {
            Some(_) => AssignError::RangeTooShort { range: range.len(), domain: domain.len() },
            None => AssignError::Exhausted { needed: domain.len(), available: range.len() },
        });
    }
    Ok(domain.iter().cloned().zip(range.iter().cloned()).collect())
}

fn parse_names<T: std::str::FromStr<Err = crate::palette::UnknownName>>(
    names: Option<&[String]>,
) -> Result<Option<Vec<T>>, AssignError> {
    names.map(|n| n.iter().map(|s| s.parse::<T>()).collect::<Result<Vec<T>, _>>()).transpose().map_err(Into::into)
}

/// Map domain values to textures. A lone value gets solid gray; otherwise
/// values take the assignment order, or the user's range.
pub fn assign_textures(
    domain: &[String],
    user_range: Option<&[String]>,
) -> Result<(IndexMap<String, TextureId>, Vec<Diagnostic>), AssignError> {
    let user = parse_names::<TextureId>(user_range)?;
    let map = if domain.len() == 1 && user.is_none() {
        domain.iter().map(|d| (d.clone(), TextureId::SolidGrayFill)).collect()
    } else {
        take_range(domain, user.as_deref(), &TextureId::ASSIGNMENT_ORDER)?
    };
    let mut diags = Vec::new();
    if domain.len() > decided::TEXTURE_WARN_ABOVE {
        diags.push(
            Diagnostic::warning(
                &rules::R4_ENCODING_COUNT,
                "encoding.texture",
                format!("{} textures in one chart; consider alternate encodings", domain.len()),
            )
            .with_fix("group small categories, or split the chart"),
        );
    }
    Ok((map, diags))
}

/// Map series to line styles: solid first, then dashed, dotted, longDashed.
pub fn assign_line_styles(
    domain: &[String],
    user_range: Option<&[LineStyle]>,
) -> Result<(IndexMap<String, LineStyle>, Vec<Diagnostic>), AssignError> {
    let default: Vec<LineStyle> = LineStyleId::ALL.iter().map(|&id| LineStyle::Named(id)).collect();
    let map = take_range(domain, user_range, &default)
        .or_else(|e| match (e, user_range) {
            // more series than named styles: keep going so the warning can be shown
            (AssignError::Exhausted { .. }, None) => {
                Ok(domain.iter().enumerate().map(|(i, d)| (d.clone(), default[i % default.len()].clone())).collect())
            }
            (e, _) => Err(e),
        })?;
    let mut diags = Vec::new();
    if domain.len() > decided::LINE_STYLE_WARN_ABOVE {
        diags.push(
            Diagnostic::warning(
                &rules::R4_ENCODING_COUNT,
                "encoding.strokeDash",
                format!("{} line styles in one chart; more than four are hard to tell apart", domain.len()),
            )
            .with_fix("split the series across multiple charts"),
        );
    }
    Ok((map, diags))
}

pub fn assign_shapes(domain: &[String], user_range: Option<&[String]>) -> Result<IndexMap<String, ShapeKind>, AssignError> {
    let user = parse_names::<ShapeKind>(user_range)?;
    take_range(domain, user.as_deref(), &ShapeKind::ALL)
}

/// Whether an x/y channel is drawn with bands rather than a linear scale.
pub fn is_band_axis(mark: MarkType, ty: FieldType) -> bool {
    ty.is_discrete() || (mark == MarkType::Bar && ty == FieldType::Temporal)
}

fn resolve_axis(
    ch: Channel,
    def: &ChannelDef,
    band: bool,
    cfg: Option<&AxisSpec>,
) -> ResolvedAxis {
    let enc = def.axis.as_ref();
    macro_rules! pick {
        ($f:ident, $path:literal) => {
            enc.and_then(|a| a.$f).or(cfg.and_then(|a| a.$f)).unwrap_or_else(|| dnum($path))
        };
    }
    macro_rules! pick_str {
        ($f:ident, $path:literal) => {
            enc.and_then(|a| a.$f.clone()).or(cfg.and_then(|a| a.$f.clone())).unwrap_or_else(|| dstr($path))
        };
    }
    let styles: Vec<GridStyle> = enc
        .and_then(|a| a.style.clone())
        .or(cfg.and_then(|a| a.style.clone()))
        .map(|s| s.0)
        .unwrap_or_default();
    let title = match enc.and_then(|a| a.title.clone()) {
        Some(t) => t,
        None => Some(def.title.clone().or_else(|| def.field.clone()).unwrap_or_else(|| "Count of Records".to_string())),
    };
    ResolvedAxis {
        channel: ch,
        title,
        band,
        tick_count: enc.and_then(|a| a.tick_count).or(cfg.and_then(|a| a.tick_count)).unwrap_or(decided::TICK_COUNT),
        stagger_labels: enc
            .and_then(|a| a.stagger_labels)
            .or(cfg.and_then(|a| a.stagger_labels))
            .unwrap_or(StaggerMode::Auto),
        grid: enc.and_then(|a| a.grid).or(cfg.and_then(|a| a.grid)).unwrap_or(!band),
        grid_style: if styles.contains(&GridStyle::DottedGrid) { GridStyle::DottedGrid } else { GridStyle::SolidGrid },
        foreground_grid: styles.contains(&GridStyle::ForegroundGrid),
        label_padding: pick!(label_padding, "axis.labelPadding"),
        title_padding: pick!(title_padding, "axis.titlePadding"),
        tick_size: pick!(tick_size, "axis.tickSize"),
        tick_width: pick!(tick_width, "axis.tickWidth"),
        grid_width: pick!(grid_width, "axis.gridWidth"),
        domain_width: pick!(domain_width, "axis.domainWidth"),
        grid_color: pick_str!(grid_color, "axis.gridColor"),
        domain_color: pick_str!(domain_color, "axis.domainColor"),
        tick_color: pick_str!(tick_color, "axis.tickColor"),
        label_angle: pick!(label_angle, "axis.labelAngle"),
        title_angle: pick!(title_angle, "axis.titleAngle"),
        title_align: pick_str!(title_align, "axis.titleAlign"),
        title_y: pick!(title_y, "axis.titleY"),
        label_font_size: pick!(label_font_size, "axis.labelFontSize"),
        title_font_size: pick!(title_font_size, "axis.titleFontSize"),
        label_font_weight: pick_str!(label_font_weight, "axis.labelFontWeight"),
        title_font_weight: pick_str!(title_font_weight, "axis.titleFontWeight"),
    }
}

/// Legend settings straight from the defaults table.
pub fn default_legend(ch: Channel) -> ResolvedLegend {
    resolve_legend(ch, &ChannelDef::default(), None)
}

fn resolve_legend(ch: Channel, def: &ChannelDef, cfg: Option<&LegendSpec>) -> ResolvedLegend {
    let enc = def.legend.as_ref();
    macro_rules! pick {
        ($f:ident, $path:literal) => {
            enc.and_then(|a| a.$f).or(cfg.and_then(|a| a.$f)).unwrap_or_else(|| dnum($path))
        };
    }
    macro_rules! pick_str {
        ($f:ident, $path:literal) => {
            enc.and_then(|a| a.$f.clone()).or(cfg.and_then(|a| a.$f.clone())).unwrap_or_else(|| dstr($path))
        };
    }
    let title = match enc.and_then(|l| l.title.clone()) {
        Some(t) => t,
        None => def.title.clone().or_else(|| def.field.clone()),
    };
    ResolvedLegend {
        channel: ch,
        title,
        direction: enc.and_then(|l| l.direction).or(cfg.and_then(|l| l.direction)).unwrap_or(LegendDirection::Vertical),
        orient: enc.and_then(|l| l.orient).or(cfg.and_then(|l| l.orient)).unwrap_or(LegendOrient::TopLeft),
        symbol_size: pick!(symbol_size, "legend.symbolSize"),
        title_padding: pick!(title_padding, "legend.titlePadding"),
        offset: pick!(offset, "legend.offset"),
        column_padding: pick!(column_padding, "legend.columnPadding"),
        row_padding: pick!(row_padding, "legend.rowPadding"),
        label_font_size: pick!(label_font_size, "legend.labelFontSize"),
        title_font_size: pick!(title_font_size, "legend.titleFontSize"),
        label_font_weight: pick_str!(label_font_weight, "legend.labelFontWeight"),
        title_font_weight: pick_str!(title_font_weight, "legend.titleFontWeight"),
    }
}

/// Distinct values of a discrete channel in presentation order.
pub fn channel_domain(def: &ChannelDef, data: &DataSpec) -> Vec<String> {
    let rows = data.values.as_deref().unwrap_or(&[]);
    ordered_keys(def.field.as_deref(), def.scale_domain().or(def.sort_values()), def.sort.as_ref(), rows)
}

fn ordered_keys(field: Option<&str>, order: Option<&[Datum]>, sort: Option<&SortSpec>, rows: &[Row]) -> Vec<String> {
    let field = field.unwrap_or("");
    let mut dom = discrete_domain(rows.iter().filter_map(|r| r.get(field)), order);
    if let Some(SortSpec::Order(o)) = sort {
        dom.sort_by(|a, b| match (a.as_f64(), b.as_f64()) {
            (Some(x), Some(y)) => x.total_cmp(&y),
            _ => a.key().cmp(&b.key()),
        });
        if *o == crate::spec::SortOrder::Descending {
            dom.reverse();
        }
    }
    dom.iter().map(Datum::key).collect()
}

fn range_names(def: &ChannelDef) -> Option<Vec<String>> {
    def.scale_range().map(|r| {
        r.iter()
            .map(|i| match i {
                RangeItem::Name(n) => n.clone(),
                RangeItem::Number(v) => v.to_string(),
                RangeItem::Dash(_) => "dash array".to_string(),
            })
            .collect()
    })
}

fn assign_error(path: String, e: AssignError) -> Diagnostic {
    Diagnostic::error(&rules::SCALE_RANGE, path, e.to_string())
}

/// Fill every omitted property. User values win over `config.*`, which wins
/// over the defaults table.
pub fn resolve_defaults(spec: &TvlSpec) -> (ResolvedSpec, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let cfg = spec.config.clone().unwrap_or_default();
    let mark = spec.mark_type();

    let dpi = cfg.dpi.unwrap_or(decided::DPI);
    let braille_translation = cfg.braille_translation.clone().unwrap_or_else(|| dstr("config.brailleTranslation"));
    let grade = cfg.braille_grade.unwrap_or(if braille_translation == UEB_G1_ID { Grade::One } else { Grade::Two });
    let mut metrics = BrailleMetrics::at_dpi(dpi, dnum("axis.labelFontSize"));
    if let Some(m) = &cfg.braille {
        metrics.dot_diameter = m.dot_diameter.unwrap_or(metrics.dot_diameter);
        metrics.dot_pitch = m.dot_pitch.unwrap_or(metrics.dot_pitch);
        metrics.cell_pitch = m.cell_pitch.unwrap_or(metrics.cell_pitch);
        metrics.line_pitch = m.line_pitch.unwrap_or(metrics.line_pitch);
    }
    let pad = cfg.padding.clone().unwrap_or_default();
    let padding = match lookup("config.padding").map(|e| e.value) {
        Some(DefaultValue::Padding { top, bottom, left, right }) => Padding {
            top: pad.top.unwrap_or(top),
            bottom: pad.bottom.unwrap_or(bottom),
            left: pad.left.unwrap_or(left),
            right: pad.right.unwrap_or(right),
        },
        _ => unreachable!("padding default"),
    };
    let config = ResolvedConfig {
        font: cfg.font.unwrap_or(BrailleFont::SwellBraille),
        braille_translation,
        grade,
        padding,
        dpi,
        render_mode: cfg.render_mode.unwrap_or(RenderMode::Dots),
        metrics,
    };

    let title = spec.title.as_ref().map(|t| {
        let tc = cfg.title.clone().unwrap_or_default();
        ResolvedTitle {
            lines: t.text().lines(),
            explicit_breaks: t.text().has_explicit_breaks(),
            subtitle: t.subtitle().map(Text::lines),
            font_size: tc.font_size.unwrap_or_else(|| dnum("title.fontSize")),
            subtitle_font_size: tc.subtitle_font_size.unwrap_or_else(|| dnum("title.subtitleFontSize")),
            font_weight: tc.font_weight.clone().unwrap_or_else(|| dstr("title.fontWeight")),
            subtitle_font_weight: tc.subtitle_font_weight.clone().unwrap_or_else(|| dstr("title.subtitleFontWeight")),
            align: tc.align.clone().unwrap_or_else(|| dstr("title.align")),
            offset: tc.offset.unwrap_or_else(|| dnum("title.offset")),
            angle: tc.angle.unwrap_or(0.0),
        }
    });

    let mut encoding = IndexMap::new();
    let mut x = None;
    let mut y = None;
    let mut legend = None;
    let mut texture_mapping = IndexMap::new();
    let mut line_style_mapping = IndexMap::new();
    let mut shape_mapping = IndexMap::new();
    let mut stroke_width_mapping = IndexMap::new();
    let mut size_range = decided::SIZE_RANGE;

    for (&ch, def) in &spec.encoding {
        let ty = def.effective_type().unwrap_or(FieldType::Nominal);
        encoding.insert(
            ch,
            ResolvedChannel {
                field: def.field.clone(),
                field_type: ty,
                aggregate: def.aggregate,
                sort: def.sort.clone(),
                domain: def.scale_domain().map(<[Datum]>::to_vec),
            },
        );
        let path = format!("encoding.{}", ch.name());
        match ch {
            Channel::X | Channel::Y => {
                let a = resolve_axis(ch, def, is_band_axis(mark, ty), cfg.axis.as_ref());
                if ch == Channel::X {
                    x = Some(a);
                } else {
                    y = Some(a);
                }
            }
            Channel::Texture => {
                let dom = channel_domain(def, &spec.data);
                match assign_textures(&dom, range_names(def).as_deref()) {
                    Ok((m, d)) => {
                        texture_mapping = m;
                        diags.extend(d);
                    }
                    Err(e) => diags.push(assign_error(format!("{path}.scale.range"), e)),
                }
            }
            Channel::StrokeDash => {
                let dom = channel_domain(def, &spec.data);
                let user: Option<Result<Vec<LineStyle>, AssignError>> = def.scale_range().map(|r| {
                    r.iter()
                        .map(|i| match i {
                            RangeItem::Name(n) => n.parse::<LineStyleId>().map(LineStyle::Named).map_err(Into::into),
                            RangeItem::Dash(d) => Ok(LineStyle::Custom(d.clone())),
                            RangeItem::Number(v) => Err(crate::palette::UnknownName {
                                kind: "line style",
                                name: v.to_string(),
                            }
                            .into()),
                        })
                        .collect()
                });
                let result = match user.transpose() {
                    Ok(user) => assign_line_styles(&dom, user.as_deref()),
                    Err(e) => Err(e),
                };
                match result {
                    Ok((m, d)) => {
                        line_style_mapping = m;
                        diags.extend(d);
                    }
                    Err(e) => diags.push(assign_error(format!("{path}.scale.range"), e)),
                }
            }
            Channel::Shape => {
                let dom = channel_domain(def, &spec.data);
                match assign_shapes(&dom, range_names(def).as_deref()) {
                    Ok(m) => shape_mapping = m,
                    Err(e) => diags.push(assign_error(format!("{path}.scale.range"), e)),
                }
            }
            Channel::StrokeWidth => {
                let dom = channel_domain(def, &spec.data);
                let user: Option<Vec<f64>> = def.scale_range().map(|r| {
                    r.iter().filter_map(|i| if let RangeItem::Number(v) = i { Some(*v) } else { None }).collect()
                });
                match take_range(&dom, user.as_deref(), &decided::STROKE_WIDTH_RANGE) {
                    Ok(m) => stroke_width_mapping = m,
                    Err(e) => diags.push(assign_error(format!("{path}.scale.range"), e)),
                }
            }
            Channel::Size => {
                if let Some(r) = def.scale_range() {
                    if let [RangeItem::Number(a), RangeItem::Number(b)] = r {
                        size_range = [*a, *b];
                    } else {
                        diags.push(Diagnostic::error(
                            &rules::SCALE_RANGE,
                            format!("{path}.scale.range"),
                            "size range is [min area, max area]",
                        ));
                    }
                }
            }
            _ => {}
        }
        if ch.is_legend_channel() && legend.is_none() && def.field.is_some() {
            legend = Some(resolve_legend(ch, def, cfg.legend.as_ref()));
        }
    }

    let resolved = ResolvedSpec {
        title,
        description: spec.description.clone(),
        data: spec.data.clone(),
        mark,
        mark_size: spec.mark.size,
        plotted_stroke_width: spec.mark.stroke_width.unwrap_or(decided::PLOTTED_STROKE_WIDTH),
        outline_width: decided::OUTLINE_WIDTH,
        point_size: if mark == MarkType::Point {
            spec.mark.size.unwrap_or(decided::POINT_SIZE * (dpi / decided::DPI).powi(2))
        } else {
            decided::POINT_SIZE
        },
        encoding,
        x,
        y,
        legend,
        config,
        texture_mapping,
        line_style_mapping,
        shape_mapping,
        stroke_width_mapping,
        size_range,
        width: spec.width,
        height: spec.height,
    };
    (resolved, diags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;
    use proptest::prelude::*;

    fn spec(extra_y_axis: &str, config: &str) -> TvlSpec {
        let text = format!(
            r#"{{
            "data": {{"values": [{{"a": "x", "b": 1}}, {{"a": "y", "b": 2}}]}},
            "mark": "bar",
            "encoding": {{
                "x": {{"field": "a", "type": "nominal"}},
                "y": {{"field": "b", "type": "quantitative"{extra_y_axis}}}
            }}{config}
        }}"#
        );
        parse_spec(&text).unwrap().spec
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn empty_config_uses_table_values() {
        let (r, d) = resolve_defaults(&spec("", ""));
        assert!(d.is_empty());
        let y = r.y.unwrap();
        assert_eq!(y.grid_width, 1.0);
        assert_eq!(y.domain_width, 2.5);
        assert_eq!(y.tick_width, 2.5);
        assert_eq!(y.tick_size, 26.5);
        assert_eq!(r.config.padding, Padding { top: 100.0, bottom: 100.0, left: 200.0, right: 200.0 });
        assert_eq!(r.config.font, BrailleFont::SwellBraille);
        assert_eq!(r.config.braille_translation, "en-ueb-g2.ctb");
        assert_eq!(r.config.grade, Grade::Two);
    }

    #[test]
    fn user_override_wins_and_nothing_else_moves() {
        let (base, _) = resolve_defaults(&spec("", ""));
        let (r, _) = resolve_defaults(&spec(r#", "axis": {"gridWidth": 0.5}"#, ""));
        let mut y = r.y.clone().unwrap();
        assert_eq!(y.grid_width, 0.5);
        y.grid_width = 1.0;
        assert_eq!(Some(y), base.y);
        assert_eq!(r.x, base.x);
    }

    #[test]
    fn config_axis_sits_between_encoding_and_table() {
        let (r, _) = resolve_defaults(&spec(r#", "axis": {"tickSize": 30}"#, r#", "config": {"axis": {"tickSize": 20, "labelPadding": 25}}"#));
        assert_eq!(r.y.as_ref().unwrap().tick_size, 30.0);
        assert_eq!(r.x.as_ref().unwrap().tick_size, 20.0);
        assert_eq!(r.y.as_ref().unwrap().label_padding, 25.0);
    }

    #[test]
    fn grid_on_quantitative_off_on_band() {
        let (r, _) = resolve_defaults(&spec("", ""));
        assert!(r.y.as_ref().unwrap().grid);
        assert!(!r.x.as_ref().unwrap().grid);
        assert_eq!(r.y.unwrap().grid_style, GridStyle::SolidGrid);
    }

    #[test]
    fn axis_titles_default_to_field() {
        let (r, _) = resolve_defaults(&spec("", ""));
        assert_eq!(r.x.unwrap().title.as_deref(), Some("a"));
    }

    #[test]
    fn table_paths_are_unique_and_cited() {
        for (i, e) in DEFAULTS.iter().enumerate() {
            assert!(!e.citation.is_empty(), "{}", e.path);
            assert!(DEFAULTS[i + 1..].iter().all(|o| o.path != e.path), "{}", e.path);
        }
        let json: Value = serde_json::from_str(&defaults_json()).unwrap();
        assert_eq!(json["axis.tickSize"]["value"], json!(26.5));
        assert_eq!(json["config.padding"]["value"]["left"], json!(200));
        assert_eq!(json.as_object().unwrap().keys().next().unwrap(), "config.font");
    }

    #[test]
    fn hierarchy_holds_under_defaults() {
        let (r, _) = resolve_defaults(&spec("", ""));
        let y = r.y.unwrap();
        assert!(y.grid_width < y.domain_width && y.domain_width <= y.tick_width);
        assert!(y.domain_width < r.plotted_stroke_width);
    }

    #[test]
    fn single_texture_is_solid_gray() {
        let (m, d) = assign_textures(&names(&["Wild"]), None).unwrap();
        assert_eq!(m["Wild"], TextureId::SolidGrayFill);
        assert!(d.is_empty());
    }

    #[test]
    fn five_weather_values_take_first_five() {
        let dom = names(&["sun", "fog", "drizzle", "rain", "snow"]);
        let (m, d) = assign_textures(&dom, None).unwrap();
        assert_eq!(m.values().copied().collect::<Vec<_>>(), TextureId::ASSIGNMENT_ORDER[..5].to_vec());
        assert!(d.is_empty());
    }

    #[test]
    fn six_textures_warn_once() {
        let dom = names(&["a", "b", "c", "d", "e", "f"]);
        let (m, d) = assign_textures(&dom, None).unwrap();
        assert_eq!(m.len(), 6);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("consider alternate encodings"));
    }

    #[test]
    fn texture_range_errors() {
        let dom = names(&["a", "b", "c"]);
        assert!(matches!(
            assign_textures(&dom, Some(&names(&["dottedFill"]))),
            Err(AssignError::RangeTooShort { range: 1, domain: 3 })
        ));
        assert!(matches!(
            assign_textures(&dom, Some(&names(&["dottedFill", "plaid", "noFill"]))),
            Err(AssignError::UnknownName(_))
        ));
        let (m, _) = assign_textures(&names(&["Captive", "Wild"]), Some(&names(&["dottedFill", "solidGrayFill"]))).unwrap();
        assert_eq!(m["Captive"], TextureId::DottedFill);
        assert_eq!(m["Wild"], TextureId::SolidGrayFill);
    }

    #[test]
    fn line_styles() {
        let (m, _) = assign_line_styles(&names(&["China"]), None).unwrap();
        assert_eq!(m["China"], LineStyle::Named(LineStyleId::Solid));
        let (m, _) = assign_line_styles(&names(&["China", "Australia"]), None).unwrap();
        assert_eq!(m["China"], LineStyle::Named(LineStyleId::Solid));
        assert_eq!(m["Australia"], LineStyle::Named(LineStyleId::Dashed));
        let (m, d) = assign_line_styles(&names(&["a", "b", "c", "d", "e"]), None).unwrap();
        assert_eq!(m.len(), 5);
        assert_eq!(d.len(), 1);
        let custom = [LineStyle::Custom(vec![5.0, 5.0])];
        let (m, _) = assign_line_styles(&names(&["a"]), Some(&custom)).unwrap();
        assert_eq!(m["a"], custom[0]);
    }

    #[test]
    fn stroke_dash_spec_gets_mapping() {
        let text = r#"{
            "data": {"values": [{"t": 1, "v": 2, "c": "China"}, {"t": 1, "v": 3, "c": "Australia"}]},
            "mark": "line",
            "encoding": {
                "x": {"field": "t", "type": "quantitative"},
                "y": {"field": "v", "type": "quantitative"},
                "strokeDash": {"field": "c", "type": "nominal", "sort": ["China", "Australia"]}
            }
        }"#;
        let (r, d) = resolve_defaults(&parse_spec(text).unwrap().spec);
        assert!(d.is_empty());
        assert_eq!(r.line_style_mapping.keys().cloned().collect::<Vec<_>>(), names(&["China", "Australia"]));
        assert_eq!(r.legend.as_ref().unwrap().channel, Channel::StrokeDash);
        assert_eq!(r.legend.unwrap().title.as_deref(), Some("c"));
    }

    #[test]
    fn resolution_is_idempotent_for_fixed_cases() {
        for s in [
            spec("", ""),
            spec(r#", "axis": {"gridWidth": 0.5, "style": ["dottedGrid", "foregroundGrid"], "title": null}"#, ""),
            spec("", r#", "config": {"dpi": 120, "padding": {"left": 50}, "renderMode": "font"}"#),
        ] {
            let (r, _) = resolve_defaults(&s);
            let (again, _) = resolve_defaults(&r.to_spec());
            assert_eq!(again, r);
        }
    }

    proptest! {
        #[test]
        fn resolution_is_idempotent(
            grid in proptest::option::of(0.2f64..3.0),
            ticks in proptest::option::of(1u32..10),
            dpi in proptest::option::of(72.0f64..300.0),
            n in 1usize..8,
        ) {
            let mut axis = String::new();
            if let Some(g) = grid { axis += &format!(r#", "gridWidth": {g}"#); }
            if let Some(t) = ticks { axis += &format!(r#", "tickCount": {t}"#); }
            let axis = if axis.is_empty() { String::new() } else { format!(r#", "axis": {{{}}}"#, &axis[2..]) };
            let cfg = dpi.map(|d| format!(r#", "config": {{"dpi": {d}}}"#)).unwrap_or_default();
            let rows: Vec<String> = (0..n).map(|i| format!(r#"{{"a": "k{i}", "b": {i}}}"#)).collect();
            let text = format!(
                r#"{{"data": {{"values": [{}]}}, "mark": "bar", "title": "T",
                "encoding": {{"x": {{"field": "a", "type": "nominal"}}, "y": {{"field": "b", "type": "quantitative"{axis}}},
                "texture": {{"field": "a", "type": "nominal"}}}}{cfg}}}"#,
                rows.join(",")
            );
            let (r, d1) = resolve_defaults(&parse_spec(&text).unwrap().spec);
            let (again, d2) = resolve_defaults(&r.to_spec());
            prop_assert_eq!(&again, &r);
            prop_assert_eq!(d1, d2);
        }

        #[test]
        fn texture_maps_injective_up_to_ten(n in 1usize..=10) {
            let dom: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let (m, _) = assign_textures(&dom, None).unwrap();
            let mut seen: Vec<TextureId> = m.values().copied().collect();
            seen.sort_by_key(|t| t.name());
            seen.dedup();
            prop_assert_eq!(seen.len(), n);
        }

        #[test]
        fn line_maps_injective_up_to_four(n in 1usize..=4) {
            let dom: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
            let (m, d) = assign_line_styles(&dom, None).unwrap();
            let mut seen: Vec<String> = m.values().map(|s| s.label()).collect();
            seen.sort();
            seen.dedup();
            prop_assert_eq!(seen.len(), n);
            prop_assert!(d.is_empty());
        }
    }
}
