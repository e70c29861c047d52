//! SVG serialization of a scene.
//!
//! Output is byte-stable: numbers use two decimals, patterns are emitted in
//! palette order, nodes in paint order. Only static SVG 1.1 elements are
//! used so embosser drivers can read the result.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::braille::{run_to_dots, BrailleMetrics, Grade, TableRegistry, UEB_G2_ID};
use crate::defaults::default_legend;
use crate::geom::{Point, Rect};
use crate::layout::{
    place_legend, Fill, Geometry, Layer, LegendEntry, SceneGraph, SceneNode, Swatch, Texter,
};
use crate::num::format_fixed;
use crate::palette::{texture_pattern, LineStyle, LineStyleId, Primitive, TextureId};
use crate::spec::{Channel, RenderMode};

fn n(v: f64) -> String {
    format_fixed(v, 2)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

pub fn pattern_id(t: TextureId) -> String {
    format!("tex-{}", t.name())
}

fn gray(level: f64) -> String {
    let v = (level.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!("#{v:02x}{v:02x}{v:02x}")
}

fn write_pattern(out: &mut String, t: TextureId) {
    let tile = texture_pattern(t);
    let _ = writeln!(
        out,
        r#"<pattern id="{}" patternUnits="userSpaceOnUse" width="{}" height="{}">"#,
        pattern_id(t),
        n(tile.width),
        n(tile.height)
    );
    let _ = writeln!(out, r#"<rect width="{}" height="{}" fill="white"/>"#, n(tile.width), n(tile.height));
    for p in &tile.primitives {
        let _ = match *p {
            Primitive::Line { x1, y1, x2, y2, width } => writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{}"/>"#,
                n(x1),
                n(y1),
                n(x2),
                n(y2),
                n(width)
            ),
            Primitive::Dot { cx, cy, r } => {
                writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#, n(cx), n(cy), n(r))
            }
            Primitive::Rect { x, y, width, height, gray: g } => writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                n(x),
                n(y),
                n(width),
                n(height),
                gray(g)
            ),
        };
    }
    out.push_str("</pattern>\n");
}

fn fill_attr(f: Fill) -> String {
    match f {
        Fill::None => "none".to_string(),
        Fill::Black => "black".to_string(),
        Fill::White => "white".to_string(),
        Fill::Texture(t) => format!("url(#{})", pattern_id(t)),
    }
}

fn stroke_attrs(node: &SceneNode) -> String {
    let st = &node.style;
    if st.stroke_width <= 0.0 {
        return String::new();
    }
    let mut s = format!(r#" stroke="black" stroke-width="{}""#, n(st.stroke_width));
    if !st.dash.is_empty() {
        let dash: Vec<String> = st.dash.iter().map(|d| n(*d)).collect();
        let _ = write!(s, r#" stroke-dasharray="{}""#, dash.join(" "));
    }
    if st.round_caps {
        s.push_str(r#" stroke-linecap="round""#);
    }
    s
}

fn common_attrs(node: &SceneNode) -> String {
    let mut s = format!(
        r#" data-role="{}" data-path="{}" data-source="{}""#,
        node.role.name(),
        escape(&node.path),
        escape(&node.source)
    );
    if node.angle != 0.0 {
        let c = Point::new(node.bbox.center_x(), node.bbox.y + node.bbox.height / 2.0);
        let _ = write!(s, r#" transform="rotate({} {} {})""#, n(node.angle), n(c.x), n(c.y));
    }
    s
}

fn sector_point(c: Point, r: f64, a: f64) -> Point {
    Point::new(c.x + r * a.sin(), c.y - r * a.cos())
}

fn write_node(out: &mut String, node: &SceneNode, mode: RenderMode, font: &str, metrics: &BrailleMetrics) {
    let attrs = common_attrs(node);
    let stroke = stroke_attrs(node);
    let fill = fill_attr(node.style.fill);
    let _ = match &node.geometry {
        Geometry::Line { from, to } => writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"{stroke}{attrs}/>"#,
            n(from.x),
            n(from.y),
            n(to.x),
            n(to.y)
        ),
        Geometry::Rect { rect } => writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"{stroke}{attrs}/>"#,
            n(rect.x),
            n(rect.y),
            n(rect.width),
            n(rect.height)
        ),
        Geometry::Path { points, closed } => {
            let mut d = String::new();
            for (i, p) in points.iter().enumerate() {
                let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, n(p.x), n(p.y));
            }
            if *closed {
                d.push_str(" Z");
            }
            writeln!(out, r#"<path d="{d}" fill="{fill}"{stroke}{attrs}/>"#)
        }
        Geometry::Circle { center, radius } => writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"{stroke}{attrs}/>"#,
            n(center.x),
            n(center.y),
            n(*radius)
        ),
        Geometry::Sector { center, radius, start, end } => {
            if end - start >= TAU - 1e-9 {
                writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"{stroke}{attrs}/>"#,
                    n(center.x),
                    n(center.y),
                    n(*radius)
                )
            } else {
                let a = sector_point(*center, *radius, *start);
                let b = sector_point(*center, *radius, *end);
                let large = u8::from(end - start > TAU / 2.0);
                writeln!(
                    out,
                    r#"<path d="M{} {} L{} {} A{} {} 0 {large} 1 {} {} Z" fill="{fill}"{stroke}{attrs}/>"#,
                    n(center.x),
                    n(center.y),
                    n(a.x),
                    n(a.y),
                    n(*radius),
                    n(*radius),
                    n(b.x),
                    n(b.y)
                )
            }
        }
        Geometry::Text { origin } => {
            let Some(run) = &node.text else { return };
            let label = escape(&run.source_text);
            match mode {
                RenderMode::Dots => {
                    let _ = writeln!(out, r#"<g aria-label="{label}"{attrs}>"#);
                    let r = metrics.dot_diameter / 2.0;
                    for dot in run_to_dots(run, metrics, Point::new(origin.x + r, origin.y + r)) {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                            n(dot.center.x),
                            n(dot.center.y),
                            n(dot.diameter / 2.0)
                        );
                    }
                    writeln!(out, "</g>")
                }
                RenderMode::Font => writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-family="{}" font-size="{}" aria-label="{label}"{attrs}>{}</text>"#,
                    n(origin.x),
                    n(origin.y + metrics.cell_height()),
                    escape(font),
                    n(node.font_size.unwrap_or(metrics.font_size)),
                    run.to_unicode()
                ),
            }
        }
    };
}

/// Textures referenced by the scene, in palette order.
pub fn used_textures(scene: &SceneGraph) -> Vec<TextureId> {
    let used: BTreeSet<TextureId> = scene
        .nodes
        .iter()
        .filter_map(|n| match n.style.fill {
            Fill::Texture(t) => Some(t),
            _ => None,
        })
        .collect();
    TextureId::ALL.into_iter().filter(|t| used.contains(t)).collect()
}

pub fn render_svg(scene: &SceneGraph, mode: RenderMode) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = n(scene.width),
        h = n(scene.height)
    );
    let textures = used_textures(scene);
    if !textures.is_empty() {
        out.push_str("<defs>\n");
        for t in textures {
            write_pattern(&mut out, t);
        }
        out.push_str("</defs>\n");
    }
    out.push_str("<g data-role=\"frame\">\n");
    for layer in Layer::ALL {
        let nodes: Vec<&SceneNode> = scene.nodes.iter().filter(|n| n.layer == layer).collect();
        if nodes.is_empty() {
            continue;
        }
        let _ = writeln!(out, r#"<g data-layer="{}">"#, layer.name());
        for node in nodes {
            write_node(&mut out, node, mode, scene.font.name(), &scene.metrics);
        }
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn words(camel: &str) -> String {
    let mut out = String::new();
    for c in camel.chars() {
        if c.is_ascii_uppercase() {
            out.push(' ');
            out.push(c.to_ascii_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

/// Proofing sheet: every texture and line style with its braille name.
pub fn palette_scene(dpi: f64) -> SceneGraph {
    let metrics = BrailleMetrics::at_dpi(dpi, 24.0);
    let tables = TableRegistry::builtin();
    let (table, _) = tables.resolve(UEB_G2_ID).expect("built-in table");
    let texter = Texter::with_table(table, Grade::Two, metrics, dpi);
    let s = dpi / 96.0;
    let pad = 100.0 * s;
    let mut entries: Vec<LegendEntry> = TextureId::ALL
        .iter()
        .map(|t| LegendEntry { key: t.name().into(), label: words(t.name()), swatch: Swatch::Texture(*t) })
        .collect();
    entries.extend(LineStyleId::ALL.iter().map(|l| LegendEntry {
        key: l.name().into(),
        label: words(l.name()),
        swatch: Swatch::Line { style: LineStyle::Named(*l), width: 4.0 },
    }));
    let mut legend = default_legend(Channel::Texture);
    legend.title = Some("Textures and line styles".into());
    let block = place_legend(&entries, &legend, &texter, 2.0)
        .expect("palette names translate")
        .expect("entries are not empty");
    let mut scene = SceneGraph::empty(block.bbox.width + 2.0 * pad, block.bbox.height + 2.0 * pad);
    scene.dpi = dpi;
    scene.metrics = metrics;
    scene.nodes = block.nodes;
    for node in &mut scene.nodes {
        node.translate(pad - block.bbox.x, pad - block.bbox.y);
    }
    scene.legend_box = Some(Rect::new(pad, pad, block.bbox.width, block.bbox.height));
    scene
}

pub fn palette_svg(dpi: f64) -> String {
    render_svg(&palette_scene(dpi), RenderMode::Dots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{Role, Style};

    fn parse(svg: &str) -> roxmltree::Document<'_> {
        roxmltree::Document::parse(svg).expect("well-formed svg")
    }

    #[test]
    fn empty_scene_is_one_group() {
        let svg = render_svg(&SceneGraph::empty(100.0, 50.0), RenderMode::Dots);
        let doc = parse(&svg);
        let root = doc.root_element();
        assert_eq!(root.attribute("width"), Some("100.00"));
        let kids: Vec<_> = root.children().filter(|c| c.is_element()).collect();
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].tag_name().name(), "g");
        assert!(!svg.contains("<defs>"));
    }

    #[test]
    fn one_pattern_per_used_texture() {
        let mut scene = SceneGraph::empty(100.0, 100.0);
        scene.nodes.push(SceneNode::shape(
            "marks/bar/0",
            Role::Mark,
            Layer::Marks,
            Geometry::Rect { rect: Rect::new(10.0, 10.0, 48.0, 60.0) },
            Style::filled(Fill::Texture(TextureId::SolidGrayFill), 2.0),
            "mark",
        ));
        let svg = render_svg(&scene, RenderMode::Dots);
        let doc = parse(&svg);
        let patterns: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("pattern")).collect();
        assert_eq!(patterns.len(), 1);
        assert_eq!(patterns[0].attribute("id"), Some("tex-solidGrayFill"));
        assert_eq!(svg.matches("url(#tex-solidGrayFill)").count(), 1);
        let bar = doc.descendants().find(|n| n.attribute("data-path") == Some("marks/bar/0")).unwrap();
        assert_eq!(bar.attribute("x"), Some("10.00"));
        assert_eq!(bar.attribute("stroke-width"), Some("2.00"));
    }

    #[test]
    fn sector_arc_flags() {
        let c = Point::new(0.0, 0.0);
        let p = sector_point(c, 10.0, 0.0);
        assert!((p.x).abs() < 1e-9 && (p.y + 10.0).abs() < 1e-9);
        let q = sector_point(c, 10.0, TAU / 4.0);
        assert!((q.x - 10.0).abs() < 1e-9 && q.y.abs() < 1e-9);
    }

    #[test]
    fn palette_sheet_has_every_texture_and_style() {
        let svg = palette_svg(96.0);
        let doc = parse(&svg);
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("pattern")).count(), 10);
        let swatches = doc.descendants().filter(|n| n.attribute("data-role") == Some("legendSwatch")).count();
        assert_eq!(swatches, 14);
        assert_eq!(render_svg(&palette_scene(96.0), RenderMode::Dots), svg);
    }
}
