mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;

use common::*;
use tvl_core::layout::{Fill, Geometry, Role};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.svg"))
}

#[test]
fn gallery_matches_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for name in GALLERY {
        let svg = compile_gallery(name).svg.unwrap_or_else(|| panic!("{name} did not compile"));
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &svg).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDEN=1 to create it", path.display()));
        if expected != svg {
            mismatched.push(name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch: {mismatched:?}; rerun with UPDATE_GOLDEN=1 if intended");
}

#[test]
fn gallery_is_reproducible() {
    for name in GALLERY {
        let a = compile_gallery(name);
        let b = compile_gallery(name);
        assert_eq!(a.svg, b.svg, "{name}");
        assert_eq!(a.diagnostics, b.diagnostics, "{name}");
    }
}

#[test]
fn gallery_svg_is_well_formed() {
    for name in GALLERY {
        let svg = compile_gallery(name).svg.unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap_or_else(|e| panic!("{name}: {e}"));
        let root = doc.root_element();
        assert_eq!(root.tag_name().name(), "svg");
        assert_eq!(root.tag_name().namespace(), Some("http://www.w3.org/2000/svg"));
        for node in doc.descendants().filter(|n| n.attribute("data-path").is_some()) {
            assert!(node.attribute("data-role").is_some(), "{name}: {:?}", node.attribute("data-path"));
        }
        // every referenced pattern is defined
        let ids: BTreeSet<&str> = doc.descendants().filter_map(|n| n.attribute("id")).collect();
        for n in doc.descendants() {
            if let Some(f) = n.attribute("fill").and_then(|f| f.strip_prefix("url(#")) {
                assert!(ids.contains(f.trim_end_matches(')')), "{name}: {f}");
            }
        }
    }
}

#[test]
fn gallery_lints_clean() {
    for name in GALLERY {
        let out = compile_gallery(name);
        assert!(out.diagnostics.is_empty(), "{name}: {:#?}", out.diagnostics);
    }
}

#[test]
fn gallery_spacing_and_hierarchy() {
    for name in GALLERY {
        let scene = compile_gallery(name).scene.unwrap();
        let min_gap = scene.dpi / 8.0;
        if let Some((gap, a, b)) = tightest_pair(&scene) {
            assert!(gap >= min_gap - 1e-9, "{name}: {a} and {b} are {gap} apart");
        }
        assert_eq!(hierarchy_violations(&scene), Vec::<String>::new(), "{name}");
    }
}

fn dash_patterns(name: &str) -> BTreeSet<String> {
    let scene = compile_gallery(name).scene.unwrap();
    scene
        .nodes
        .iter()
        .filter(|n| n.role == Role::Mark)
        .map(|n| format!("{:?}", n.style.dash))
        .collect()
}

#[test]
fn line_charts_use_distinct_styles() {
    let two = dash_patterns("line_two_series");
    assert_eq!(two.len(), 2);
    assert!(two.contains("[]"), "one series is solid: {two:?}");
    assert_eq!(dash_patterns("line_four_series").len(), 4);
}

#[test]
fn scatter_uses_three_shapes() {
    let scene = compile_gallery("scatter").scene.unwrap();
    let kinds: BTreeSet<_> =
        scene.nodes.iter().filter_map(|n| n.mark.as_ref().and_then(|m| m.shape)).map(|s| format!("{s:?}")).collect();
    assert_eq!(kinds.len(), 3);
    assert_eq!(scene.nodes.iter().filter(|n| n.role == Role::Mark).count(), 30);
}

#[test]
fn pie_slices_are_textured_and_cover_the_circle() {
    let scene = compile_gallery("pie").scene.unwrap();
    let mut total = 0.0;
    let mut textures = BTreeSet::new();
    for n in scene.nodes.iter().filter(|n| n.role == Role::Mark) {
        let Geometry::Sector { start, end, .. } = n.geometry else { panic!("{} is not a sector", n.path) };
        total += end - start;
        let Fill::Texture(t) = n.style.fill else { panic!("{} is untextured", n.path) };
        textures.insert(t);
    }
    assert_eq!(textures.len(), 5);
    assert!((total - std::f64::consts::TAU).abs() < 1e-9);
}

#[test]
fn stacked_bars_touch_within_a_month() {
    let scene = compile_gallery("stacked_bar").scene.unwrap();
    let bars: Vec<_> = scene.nodes.iter().filter(|n| n.role == Role::Mark).collect();
    let jan: Vec<_> = bars.iter().filter(|b| (b.bbox.x - bars[0].bbox.x).abs() < 1e-9).collect();
    assert_eq!(jan.len(), 5);
    let mut spans: Vec<(f64, f64)> = jan
        .iter()
        .map(|b| match b.geometry {
            Geometry::Rect { rect } => (rect.y, rect.y + rect.height),
            _ => unreachable!(),
        })
        .collect();
    spans.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in spans.windows(2) {
        assert!((w[0].1 - w[1].0).abs() < 1e-9, "{spans:?}");
    }
}

#[test]
fn every_gallery_spec_is_listed() {
    let mut on_disk: Vec<String> = std::fs::read_dir(gallery_dir())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str()?.strip_suffix(".json").map(str::to_string))
        .collect();
    on_disk.sort();
    let mut listed: Vec<String> = GALLERY.iter().map(|s| s.to_string()).collect();
    listed.sort();
    assert_eq!(on_disk, listed);
}
