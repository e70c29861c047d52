mod common;

use common::*;
use serde_json::json;
use tvl_core::compile::Stage;
use tvl_core::diagnostic::rules;
use tvl_core::layout::{Layer, Role};
use tvl_core::palette::TextureId;
use tvl_core::Severity;

fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn dense_dotted_fixture_compiles_with_its_range() {
    let out = compile_text(&fixture("dense_dotted.json"));
    assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
    let r = out.resolved.unwrap();
    assert_eq!(r.texture_mapping["a"], TextureId::DenseDottedFill);
    assert_eq!(r.texture_mapping["b"], TextureId::CrossFill);
    assert!(out.svg.unwrap().contains(r#"<pattern id="tex-denseDottedFill""#));
}

#[test]
fn foreground_dotted_grid_sits_above_marks() {
    let scene = compile_text(&fixture("dense_dotted.json")).scene.unwrap();
    let grid: Vec<_> = scene.nodes_with_role(Role::GridLine).collect();
    assert!(!grid.is_empty());
    let s = scene.dpi / 96.0;
    for g in &grid {
        assert_eq!(g.layer, Layer::ForegroundGrid);
        assert_eq!(g.style.dash, vec![2.0 * s, 6.0 * s]);
    }
    let last_mark = scene.nodes.iter().rposition(|n| n.role == Role::Mark).unwrap();
    let first_grid = scene.nodes.iter().position(|n| n.role == Role::GridLine).unwrap();
    assert!(first_grid > last_mark);
}

#[test]
fn vertical_legend_rows_step_by_entry_height_and_padding() {
    let out = compile_gallery("stacked_bar");
    let scene = out.scene.unwrap();
    let legend = out.resolved.unwrap().legend.unwrap();
    let entry_h = legend.symbol_size.sqrt().max(scene.metrics.cell_height());
    let ys: Vec<f64> = scene.nodes_with_role(Role::LegendSwatch).map(|n| n.bbox.y + n.bbox.height / 2.0).collect();
    assert_eq!(ys.len(), 5);
    for w in ys.windows(2) {
        assert!((w[1] - w[0] - (entry_h + legend.row_padding)).abs() < 1e-9, "{ys:?}");
    }
}

#[test]
fn frame_is_content_plus_padding() {
    for name in GALLERY {
        let out = compile_gallery(name);
        let pad = out.resolved.unwrap().config.padding;
        let scene = out.scene.unwrap();
        let content = scene.nodes.iter().map(|n| n.bbox).reduce(|a, b| a.union(&b)).unwrap();
        assert!((content.x - pad.left).abs() < 1e-9, "{name}: left edge {}", content.x);
        assert!((content.y - pad.top).abs() < 1e-9, "{name}: top edge {}", content.y);
        assert!((scene.width - content.right() - pad.right).abs() < 1e-9, "{name}: right padding");
        assert!((scene.height - content.bottom() - pad.bottom).abs() < 1e-9, "{name}: bottom padding");
    }
}

#[test]
fn legend_precedes_chart() {
    for name in GALLERY {
        let scene = compile_gallery(name).scene.unwrap();
        if let (Some(l), Some(c)) = (scene.legend_box, scene.chart_box) {
            assert!(l.bottom() < c.y, "{name}");
        }
    }
}

#[test]
fn six_textures_compile_with_one_warning() {
    let rows: Vec<_> = (0..6).map(|i| json!({"k": format!("k{i}"), "v": i + 1})).collect();
    let spec = json!({
        "data": {"values": rows},
        "mark": "bar",
        "encoding": {
            "x": {"field": "k", "type": "nominal"},
            "y": {"field": "v", "type": "quantitative"},
            "texture": {"field": "k", "type": "nominal"}
        }
    });
    let out = compile_text(&spec.to_string());
    assert!(out.svg.is_some());
    assert_eq!(out.diagnostics.len(), 1, "{:?}", out.diagnostics);
    assert_eq!(out.diagnostics[0].severity, Severity::Warning);
    assert_eq!(out.diagnostics[0].rule_id, rules::R4_ENCODING_COUNT.id);
}

#[test]
fn unknown_texture_name_is_an_error() {
    let out = compile_edited("bird_lifespan", |v| {
        v["encoding"]["texture"]["scale"]["range"] = json!(["plaidFill", "solidGrayFill"]);
    });
    assert!(out.svg.is_none());
    assert!(out.has_errors());
    assert!(matches!(out.failed_at, Some(Stage::Schema | Stage::Validate | Stage::Resolve)));
}

#[test]
fn zero_gap_bars_are_exempt_from_bar_width() {
    let out = compile_edited("simple_bar", |v| {
        v["width"] = json!(3 * 120);
        v["mark"] = json!({"type": "bar", "size": 120});
    });
    assert!(out.diagnostics.iter().all(|d| d.rule_id != rules::R3_BAR_WIDTH.id), "{:?}", out.diagnostics);
    let wide = compile_edited("simple_bar", |v| v["mark"] = json!({"type": "bar", "size": 120}));
    assert!(wide.diagnostics.iter().any(|d| d.rule_id == rules::R3_BAR_WIDTH.id));
}

#[test]
fn higher_dpi_scales_geometry() {
    let base = compile_gallery("simple_bar").scene.unwrap();
    let hi = compile_edited("simple_bar", |v| v["config"] = json!({"dpi": 192})).scene.unwrap();
    let bar = |s: &tvl_core::layout::SceneGraph| match s.node("marks/bar/0").unwrap().geometry {
        tvl_core::layout::Geometry::Rect { rect } => rect.width,
        _ => unreachable!(),
    };
    assert!((bar(&hi) - 2.0 * bar(&base)).abs() < 1e-9);
    assert!((hi.metrics.cell_height() - 2.0 * base.metrics.cell_height()).abs() < 1e-9);
}
