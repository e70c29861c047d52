//! Chart specification model, JSON parsing and semantic validation.

use std::fmt;

use indexmap::IndexMap;
use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::braille::Grade;
use crate::data::{AggregateOp, Datum, Row};
use crate::diagnostic::{rules, Diagnostic};
use crate::palette::{LineStyleId, ShapeKind, TextureId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkType {
    Bar,
    Line,
    Point,
    Arc,
}

impl MarkType {
    pub fn name(self) -> &'static str {
        match self {
            MarkType::Bar => "bar",
            MarkType::Line => "line",
            MarkType::Point => "point",
            MarkType::Arc => "arc",
        }
    }
}

/// `"bar"` or `{"type": "bar", "size": 48}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkSpec {
    pub kind: MarkType,
    /// Bar width, or point symbol area.
    pub size: Option<f64>,
    pub stroke_width: Option<f64>,
}

#[derive(Deserialize, Serialize)]
#[serde(rename_all = "camelCase")]
struct MarkObject {
    #[serde(rename = "type")]
    kind: MarkType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stroke_width: Option<f64>,
}

impl Serialize for MarkSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.size.is_none() && self.stroke_width.is_none() {
            self.kind.serialize(s)
        } else {
            MarkObject { kind: self.kind, size: self.size, stroke_width: self.stroke_width }.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for MarkSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = MarkSpec;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a mark name or a mark object")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<MarkSpec, E> {
                let kind = MarkType::deserialize(de::value::StrDeserializer::<E>::new(v))?;
                Ok(MarkSpec { kind, size: None, stroke_width: None })
            }
            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<MarkSpec, A::Error> {
                let o = MarkObject::deserialize(de::value::MapAccessDeserializer::new(map))?;
                Ok(MarkSpec { kind: o.kind, size: o.size, stroke_width: o.stroke_width })
            }
        }
        d.deserialize_any(V)
    }
}

/// Text that may carry explicit line breaks, either as `\n` or as a list of
/// lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Text {
    Line(String),
    Lines(Vec<String>),
}

impl Text {
    pub fn lines(&self) -> Vec<String> {
        match self {
            Text::Line(s) => s.split('\n').map(str::to_string).collect(),
            Text::Lines(v) => v.clone(),
        }
    }

    /// True when the author chose the line breaks.
    pub fn has_explicit_breaks(&self) -> bool {
        match self {
            Text::Line(s) => s.contains('\n'),
            Text::Lines(_) => true,
        }
    }

    pub fn joined(&self) -> String {
        self.lines().join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TitleSpec {
    Text(Text),
    Params(TitleParams),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TitleParams {
    pub text: Text,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtitle: Option<Text>,
}

impl Default for Text {
    fn default() -> Self {
        Text::Line(String::new())
    }
}

impl TitleSpec {
    pub fn text(&self) -> &Text {
        match self {
            TitleSpec::Text(t) => t,
            TitleSpec::Params(p) => &p.text,
        }
    }

    pub fn subtitle(&self) -> Option<&Text> {
        match self {
            TitleSpec::Text(_) => None,
            TitleSpec::Params(p) => p.subtitle.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DataSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Row>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Channel {
    X,
    Y,
    XOffset,
    YOffset,
    Theta,
    Texture,
    StrokeDash,
    StrokeWidth,
    Shape,
    Size,
}

impl Channel {
    pub const ALL: [Channel; 10] = [
        Channel::X,
        Channel::Y,
        Channel::XOffset,
        Channel::YOffset,
        Channel::Theta,
        Channel::Texture,
        Channel::StrokeDash,
        Channel::StrokeWidth,
        Channel::Shape,
        Channel::Size,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::X => "x",
            Channel::Y => "y",
            Channel::XOffset => "xOffset",
            Channel::YOffset => "yOffset",
            Channel::Theta => "theta",
            Channel::Texture => "texture",
            Channel::StrokeDash => "strokeDash",
            Channel::StrokeWidth => "strokeWidth",
            Channel::Shape => "shape",
            Channel::Size => "size",
        }
    }

    pub fn from_name(s: &str) -> Option<Channel> {
        Channel::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Channels that key a legend.
    pub fn is_legend_channel(self) -> bool {
        matches!(self, Channel::Texture | Channel::StrokeDash | Channel::Shape | Channel::StrokeWidth)
    }
}

impl<'de> Deserialize<'de> for Channel {
    // through a string so error paths keep the channel name
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Channel::from_name(&s).ok_or_else(|| de::Error::unknown_variant(&s, &[]))
    }
}

/// Channels from visual grammars that have no tactile meaning.
pub const VISUAL_ONLY_CHANNELS: [&str; 6] =
    ["color", "opacity", "fill", "stroke", "fillOpacity", "strokeOpacity"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldType {
    Quantitative,
    Ordinal,
    Nominal,
    Temporal,
}

impl FieldType {
    pub fn is_discrete(self) -> bool {
        matches!(self, FieldType::Ordinal | FieldType::Nominal)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SortSpec {
    Order(SortOrder),
    Values(Vec<Datum>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortOrder {
    Ascending,
    Descending,
}

/// An entry of `scale.range`: a palette name, a number, or a dash array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RangeItem {
    Name(String),
    Number(f64),
    Dash(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScaleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<Datum>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Vec<RangeItem>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaggerMode {
    On,
    Off,
    Auto,
}

impl Serialize for StaggerMode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            StaggerMode::On => s.serialize_bool(true),
            StaggerMode::Off => s.serialize_bool(false),
            StaggerMode::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for StaggerMode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = StaggerMode;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("true, false or \"auto\"")
            }
            fn visit_bool<E: de::Error>(self, v: bool) -> Result<StaggerMode, E> {
                Ok(if v { StaggerMode::On } else { StaggerMode::Off })
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<StaggerMode, E> {
                match v {
                    "auto" => Ok(StaggerMode::Auto),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GridStyle {
    SolidGrid,
    DottedGrid,
    ForegroundGrid,
}

/// Accepts a single keyword or a list; always serializes as a list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StyleList(pub Vec<GridStyle>);

impl Serialize for StyleList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StyleList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = StyleList;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a grid style keyword or a list of them")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<StyleList, E> {
                Ok(StyleList(vec![GridStyle::deserialize(de::value::StrDeserializer::<E>::new(v))?]))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<StyleList, A::Error> {
                let mut out = Vec::new();
                while let Some(s) = seq.next_element::<GridStyle>()? {
                    out.push(s);
                }
                Ok(StyleList(out))
            }
        }
        d.deserialize_any(V)
    }
}

/// Distinguishes an absent property from an explicit `null`.
fn double_option<'de, T: Deserialize<'de>, D: Deserializer<'de>>(
    d: D,
) -> Result<Option<Option<T>>, D::Error> {
    Option::<T>::deserialize(d).map(Some)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AxisSpec {
    #[serde(default, deserialize_with = "double_option", skip_serializing_if = "Option::is_none")]
    pub title: Option<Option<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tick_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stagger_labels: Option<StaggerMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style: Option<StyleList>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_padding: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_padding: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tick_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tick_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_color: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_color: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tick_color: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_align: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_font_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_font_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_font_weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_font_weight: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegendDirection {
    Vertical,
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LegendOrient {
    TopLeft,
    Top,
    TopRight,
    BottomLeft,
    Bottom,
    BottomRight,
}

impl LegendOrient {
    pub fn is_above(self) -> bool {
        matches!(self, LegendOrient::TopLeft | LegendOrient::Top | LegendOrient::TopRight)
    }

    pub fn name(self) -> &'static str {
        match self {
            LegendOrient::TopLeft => "top-left",
            LegendOrient::Top => "top",
            LegendOrient::TopRight => "top-right",
            LegendOrient::BottomLeft => "bottom-left",
            LegendOrient::Bottom => "bottom",
            LegendOrient::BottomRight => "bottom-right",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LegendSpec {
    #[serde(default, deserialize_with = "double_option", skip_serializing_if = "Option::is_none")]
    pub title: Option<Option<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<LegendDirection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orient: Option<LegendOrient>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_padding: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column_padding: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_padding: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_font_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_font_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_font_weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_font_weight: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChannelDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub field_type: Option<FieldType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<AggregateOp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sort: Option<SortSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<AxisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub legend: Option<LegendSpec>,
}

impl ChannelDef {
    pub fn is_count(&self) -> bool {
        self.aggregate == Some(AggregateOp::Count)
    }

    /// Declared type; a field-less count is quantitative.
    pub fn effective_type(&self) -> Option<FieldType> {
        self.field_type.or(if self.is_count() { Some(FieldType::Quantitative) } else { None })
    }

    pub fn sort_values(&self) -> Option<&[Datum]> {
        match &self.sort {
            Some(SortSpec::Values(v)) => Some(v),
            _ => None,
        }
    }

    pub fn scale_domain(&self) -> Option<&[Datum]> {
        self.scale.as_ref()?.domain.as_deref()
    }

    pub fn scale_range(&self) -> Option<&[RangeItem]> {
        self.scale.as_ref()?.range.as_deref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BrailleFont {
    #[serde(rename = "Swell Braille")]
    SwellBraille,
    #[serde(rename = "California Braille")]
    CaliforniaBraille,
    #[serde(rename = "Braille29")]
    Braille29,
}

impl BrailleFont {
    pub fn name(self) -> &'static str {
        match self {
            BrailleFont::SwellBraille => "Swell Braille",
            BrailleFont::CaliforniaBraille => "California Braille",
            BrailleFont::Braille29 => "Braille29",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderMode {
    Dots,
    Font,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PaddingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TitleConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub font_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtitle_font_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub font_weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtitle_font_weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub align: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

/// Overrides for the braille cell geometry, in pixels at the configured dpi.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot_diameter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot_pitch: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_pitch: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_pitch: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub font: Option<BrailleFont>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braille_translation: Option<String>,
    /// Overrides the grade implied by the translation table id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braille_grade: Option<Grade>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<PaddingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dpi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub render_mode: Option<RenderMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braille: Option<MetricsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<AxisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub legend: Option<LegendSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<TitleConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TvlSpec {
    #[serde(default, rename = "$schema", skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<TitleSpec>,
    pub data: DataSpec,
    pub mark: MarkSpec,
    #[serde(default)]
    pub encoding: IndexMap<Channel, ChannelDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
}

impl TvlSpec {
    pub fn channel(&self, c: Channel) -> Option<&ChannelDef> {
        self.encoding.get(&c)
    }

    pub fn mark_type(&self) -> MarkType {
        self.mark.kind
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String, fix: Option<String> },
}

impl SpecError {
    pub fn to_diagnostic(&self) -> Diagnostic {
        match self {
            SpecError::Syntax { line, column, message } => Diagnostic::error(
                &rules::PARSE,
                format!("{line}:{column}"),
                format!("malformed JSON: {message}"),
            ),
            SpecError::Schema { path, message, fix } => {
                let d = Diagnostic::error(&rules::SCHEMA, path.clone(), message.clone());
                match fix {
                    Some(f) => d.with_fix(f.clone()),
                    None => d,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSpec {
    pub spec: TvlSpec,
    /// Unknown-property warnings.
    pub warnings: Vec<Diagnostic>,
}

fn ignored_path(p: &serde_ignored::Path) -> String {
    match p {
        serde_ignored::Path::Root => String::new(),
        serde_ignored::Path::Seq { parent, index } => format!("{}[{index}]", ignored_path(parent)),
        serde_ignored::Path::Map { parent, key } => {
            let head = ignored_path(parent);
            if head.is_empty() {
                key.clone()
            } else {
                format!("{head}.{key}")
            }
        }
        serde_ignored::Path::Some { parent }
        | serde_ignored::Path::NewtypeStruct { parent }
        | serde_ignored::Path::NewtypeVariant { parent } => ignored_path(parent),
    }
}

fn unknown_property(path: String) -> Diagnostic {
    Diagnostic::warning(&rules::UNKNOWN_PROPERTY, path.clone(), format!("unknown property {path:?} is ignored"))
}

/// Parse a JSON document into a [`TvlSpec`].
///
/// Unknown properties and unknown channels are reported as warnings and
/// dropped. Visual-only channels such as `color` are schema errors.
pub fn parse_spec(json_text: &str) -> Result<ParsedSpec, SpecError> {
    let mut value: Value = serde_json::from_str(json_text).map_err(|e| SpecError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let mut warnings = Vec::new();
    if let Some(enc) = value.get_mut("encoding").and_then(Value::as_object_mut) {
        if let Some(bad) = enc.keys().find(|k| VISUAL_ONLY_CHANNELS.contains(&k.as_str())) {
            return Err(SpecError::Schema {
                path: format!("encoding.{bad}"),
                message: format!("channel not supported in tactile grammar: {bad:?}"),
                fix: Some("use texture".to_string()),
            });
        }
        let unknown: Vec<String> =
            enc.keys().filter(|k| Channel::from_name(k).is_none()).cloned().collect();
        for k in unknown {
            enc.shift_remove(&k);
            warnings.push(unknown_property(format!("encoding.{k}")));
        }
    }
    let mut ignored = Vec::new();
    let mut record = |p: serde_ignored::Path| ignored.push(ignored_path(&p));
    let de = serde_ignored::Deserializer::new(value, &mut record);
    let spec: TvlSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        SpecError::Schema {
            path: if path == "." { String::new() } else { path },
            message: e.into_inner().to_string(),
            fix: None,
        }
    })?;
    warnings.extend(ignored.into_iter().map(unknown_property));
    Ok(ParsedSpec { spec, warnings })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn positive(path: String, v: Option<f64>, out: &mut Vec<Diagnostic>) {
    if let Some(v) = v {
        if !(v > 0.0 && v.is_finite()) {
            out.push(Diagnostic::error(
                &rules::VALUE_RANGE,
                path,
                format!("must be a positive number, got {v}"),
            ));
        }
    }
}

fn non_negative(path: String, v: Option<f64>, out: &mut Vec<Diagnostic>) {
    if let Some(v) = v {
        if !(v >= 0.0 && v.is_finite()) {
            out.push(Diagnostic::error(
                &rules::VALUE_RANGE,
                path,
                format!("must be zero or more, got {v}"),
            ));
        }
    }
}

fn check_axis(prefix: &str, a: &AxisSpec, out: &mut Vec<Diagnostic>) {
    let fields = [
        ("labelPadding", a.label_padding),
        ("titlePadding", a.title_padding),
        ("tickSize", a.tick_size),
        ("tickWidth", a.tick_width),
        ("gridWidth", a.grid_width),
        ("domainWidth", a.domain_width),
        ("labelFontSize", a.label_font_size),
        ("titleFontSize", a.title_font_size),
    ];
    for (name, v) in fields {
        positive(format!("{prefix}.{name}"), v, out);
    }
    if a.tick_count == Some(0) {
        out.push(Diagnostic::error(&rules::VALUE_RANGE, format!("{prefix}.tickCount"), "must be at least 1"));
    }
}

fn check_legend(prefix: &str, l: &LegendSpec, out: &mut Vec<Diagnostic>) {
    positive(format!("{prefix}.symbolSize"), l.symbol_size, out);
    positive(format!("{prefix}.labelFontSize"), l.label_font_size, out);
    positive(format!("{prefix}.titleFontSize"), l.title_font_size, out);
    for (name, v) in [
        ("titlePadding", l.title_padding),
        ("offset", l.offset),
        ("columnPadding", l.column_padding),
        ("rowPadding", l.row_padding),
    ] {
        non_negative(format!("{prefix}.{name}"), v, out);
    }
}

fn allowed_marks(c: Channel) -> &'static [MarkType] {
    use MarkType::*;
    match c {
        Channel::X | Channel::Y => &[Bar, Line, Point],
        Channel::XOffset | Channel::YOffset => &[Bar],
        Channel::Theta => &[Arc],
        Channel::Texture => &[Bar, Arc],
        Channel::StrokeDash | Channel::StrokeWidth => &[Line],
        Channel::Shape | Channel::Size => &[Point],
    }
}

/// Semantic checks. Diagnostics come out in document order.
pub fn validate_spec(spec: &TvlSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mark = spec.mark_type();

    // data
    match (&spec.data.values, &spec.data.url) {
        (Some(_), Some(_)) | (None, None) => out.push(Diagnostic::error(
            &rules::DATA_FIELDS,
            "data",
            "give exactly one of data.values or data.url",
        )),
        _ => {}
    }
    let rows = spec.data.values.as_deref();
    let fields: Option<Vec<&str>> = rows.map(|rows| {
        let mut f: Vec<&str> = Vec::new();
        for r in rows {
            for k in r.keys() {
                if !f.contains(&k.as_str()) {
                    f.push(k);
                }
            }
        }
        f
    });
    if let (Some(rows), Some(fields)) = (rows, &fields) {
        if let Some(i) = rows.iter().position(|r| r.len() != fields.len()) {
            out.push(Diagnostic::warning(
                &rules::DATA_FIELDS,
                format!("data.values[{i}]"),
                "row does not have the same fields as the other rows; missing values read as null",
            ));
        }
    }

    positive("mark.size".into(), spec.mark.size, &mut out);
    positive("mark.strokeWidth".into(), spec.mark.stroke_width, &mut out);

    // mark and channel combinations
    let has = |c| spec.encoding.contains_key(&c);
    if !(has(Channel::X) || has(Channel::Y) || has(Channel::Theta)) {
        out.push(Diagnostic::error(&rules::MARK_CHANNEL, "encoding", "encode at least one of x, y or theta"));
    }
    if mark == MarkType::Arc && !has(Channel::Theta) {
        out.push(Diagnostic::error(&rules::MARK_CHANNEL, "encoding", "arc marks need a theta channel"));
    }

    for (&ch, def) in &spec.encoding {
        let path = format!("encoding.{}", ch.name());
        if !allowed_marks(ch).contains(&mark) {
            out.push(Diagnostic::error(
                &rules::MARK_CHANNEL,
                path.clone(),
                format!("channel {} cannot be used with {} marks", ch.name(), mark.name()),
            ));
        }
        if def.field.is_none() && !def.is_count() {
            out.push(Diagnostic::error(&rules::FIELD_MISSING, path.clone(), "channel needs a field"));
        }
        if let (Some(field), Some(fields)) = (&def.field, &fields) {
            if !fields.contains(&field.as_str()) {
                out.push(Diagnostic::error(
                    &rules::FIELD_MISSING,
                    format!("{path}.field"),
                    format!("field {field:?} is not in the data"),
                ));
            }
        }
        let ty = def.effective_type();
        match ty {
            None => out.push(Diagnostic::error(&rules::CHANNEL_TYPE, format!("{path}.type"), "channel needs a type")),
            Some(t) => {
                let needs_discrete =
                    matches!(ch, Channel::Texture | Channel::Shape | Channel::StrokeDash | Channel::XOffset | Channel::YOffset);
                if needs_discrete && !t.is_discrete() {
                    out.push(
                        Diagnostic::error(
                            &rules::CHANNEL_TYPE,
                            format!("{path}.type"),
                            format!("{} needs a nominal or ordinal field", ch.name()),
                        )
                        .with_fix("set type to \"nominal\""),
                    );
                }
                if matches!(ch, Channel::Theta | Channel::Size) && t != FieldType::Quantitative {
                    out.push(Diagnostic::error(
                        &rules::CHANNEL_TYPE,
                        format!("{path}.type"),
                        format!("{} needs a quantitative field", ch.name()),
                    ));
                }
                if let Some(op) = def.aggregate {
                    if op != AggregateOp::Count && t != FieldType::Quantitative {
                        out.push(Diagnostic::error(
                            &rules::AGGREGATE_TYPE,
                            format!("{path}.aggregate"),
                            format!("{} needs a quantitative field", op.name()),
                        ));
                    }
                }
            }
        }
        if let (Some(op), Some(field), Some(rows)) = (def.aggregate, &def.field, rows) {
            if op != AggregateOp::Count {
                if let Some(i) = rows.iter().position(|r| matches!(r.get(field), Some(Datum::Str(_) | Datum::Bool(_)))) {
                    out.push(Diagnostic::error(
                        &rules::AGGREGATE_TYPE,
                        format!("data.values[{i}].{field}"),
                        format!("{} over {field:?} needs numbers", op.name()),
                    ));
                }
            }
        }
        if let (Some(order), Some(field), Some(rows)) = (def.sort_values(), &def.field, rows) {
            let keys: Vec<String> = order.iter().map(Datum::key).collect();
            if let Some(missing) = rows
                .iter()
                .filter_map(|r| r.get(field))
                .find(|v| !v.is_null() && !keys.contains(&v.key()))
            {
                out.push(Diagnostic::error(
                    &rules::SORT_DOMAIN,
                    format!("{path}.sort"),
                    format!("sort order is missing data value {:?}", missing.key()),
                ));
            }
        }
        if let Some(range) = def.scale_range() {
            for (i, item) in range.iter().enumerate() {
                let p = format!("{path}.scale.range[{i}]");
                let problem = match (ch, item) {
                    (Channel::Texture, RangeItem::Name(n)) => n.parse::<TextureId>().err().map(|e| e.to_string()),
                    (Channel::StrokeDash, RangeItem::Name(n)) => n.parse::<LineStyleId>().err().map(|e| e.to_string()),
                    (Channel::StrokeDash, RangeItem::Dash(d)) => {
                        if d.iter().any(|v| v.is_nan() || *v < 0.0) || d.iter().all(|v| *v == 0.0) {
                            Some("dash arrays need non-negative lengths, not all zero".to_string())
                        } else {
                            None
                        }
                    }
                    (Channel::Shape, RangeItem::Name(n)) => n.parse::<ShapeKind>().err().map(|e| e.to_string()),
                    (Channel::StrokeWidth | Channel::Size, RangeItem::Number(v)) => {
                        if *v > 0.0 {
                            None
                        } else {
                            Some(format!("must be positive, got {v}"))
                        }
                    }
                    (Channel::Texture | Channel::Shape, _) => Some("expected a name".to_string()),
                    (Channel::StrokeDash, _) => Some("expected a line style name or a dash array".to_string()),
                    (Channel::StrokeWidth | Channel::Size, _) => Some("expected a number".to_string()),
                    _ => Some(format!("{} does not take a range", ch.name())),
                };
                if let Some(msg) = problem {
                    out.push(Diagnostic::error(&rules::SCALE_RANGE, p, msg));
                }
            }
        }
        if let Some(dom) = def.scale_domain() {
            if ty == Some(FieldType::Quantitative) {
                let nums: Vec<f64> = dom.iter().filter_map(Datum::as_f64).collect();
                if nums.len() != 2 || dom.len() != 2 || nums[0] > nums[1] {
                    out.push(Diagnostic::error(
                        &rules::SCALE_RANGE,
                        format!("{path}.scale.domain"),
                        "a quantitative domain is [min, max]",
                    ));
                }
            }
        }
        if let Some(a) = &def.axis {
            check_axis(&format!("{path}.axis"), a, &mut out);
        }
        if let Some(l) = &def.legend {
            check_legend(&format!("{path}.legend"), l, &mut out);
        }
    }

    if mark == MarkType::Bar {
        let discrete = |c| spec.channel(c).and_then(ChannelDef::effective_type).is_some_and(|t| t != FieldType::Quantitative);
        if has(Channel::X) && has(Channel::Y) && !discrete(Channel::X) && !discrete(Channel::Y) {
            out.push(Diagnostic::error(
                &rules::CHANNEL_TYPE,
                "encoding",
                "bar marks need one nominal, ordinal or temporal axis",
            ));
        }
    }

    positive("width".into(), spec.width, &mut out);
    positive("height".into(), spec.height, &mut out);

    if let Some(cfg) = &spec.config {
        positive("config.dpi".into(), cfg.dpi, &mut out);
        if let Some(p) = &cfg.padding {
            for (n, v) in [("top", p.top), ("bottom", p.bottom), ("left", p.left), ("right", p.right)] {
                non_negative(format!("config.padding.{n}"), v, &mut out);
            }
        }
        if let Some(m) = &cfg.braille {
            for (n, v) in [
                ("dotDiameter", m.dot_diameter),
                ("dotPitch", m.dot_pitch),
                ("cellPitch", m.cell_pitch),
                ("linePitch", m.line_pitch),
            ] {
                positive(format!("config.braille.{n}"), v, &mut out);
            }
        }
        if let Some(a) = &cfg.axis {
            check_axis("config.axis", a, &mut out);
        }
        if let Some(l) = &cfg.legend {
            check_legend("config.legend", l, &mut out);
        }
        if let Some(t) = &cfg.title {
            positive("config.title.fontSize".into(), t.font_size, &mut out);
            positive("config.title.subtitleFontSize".into(), t.subtitle_font_size, &mut out);
            non_negative("config.title.offset".into(), t.offset, &mut out);
        }
    }
    out
}
