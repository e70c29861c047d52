#![allow(dead_code)]

use std::path::{Path, PathBuf};

use tvl_core::compile::{CompileOptions, CompileOutput, Compiler};
use tvl_core::layout::{Role, SceneGraph};
use tvl_core::Rect;

pub const GALLERY: [&str; 8] = [
    "simple_bar",
    "grouped_bar",
    "line_two_series",
    "line_four_series",
    "scatter",
    "pie",
    "stacked_bar",
    "bird_lifespan",
];

pub fn gallery_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("gallery")
}

pub fn gallery_text(name: &str) -> String {
    let path = gallery_dir().join(format!("{name}.json"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn compile_text(text: &str) -> CompileOutput {
    Compiler::with_base_dir(gallery_dir()).compile(text, &CompileOptions::default())
}

pub fn compile_gallery(name: &str) -> CompileOutput {
    compile_text(&gallery_text(name))
}

/// Edit a gallery spec as JSON and compile the result.
pub fn compile_edited(name: &str, edit: impl FnOnce(&mut serde_json::Value)) -> CompileOutput {
    let mut v: serde_json::Value = serde_json::from_str(&gallery_text(name)).unwrap();
    edit(&mut v);
    compile_text(&v.to_string())
}

/// Separation of two boxes; negative when they overlap.
pub fn box_gap(a: &Rect, b: &Rect) -> f64 {
    let dx = (b.x - (a.x + a.width)).max(a.x - (b.x + b.width));
    let dy = (b.y - (a.y + a.height)).max(a.y - (b.y + b.height));
    dx.max(dy)
}

pub fn is_spaced(role: Role) -> bool {
    matches!(
        role,
        Role::Title
            | Role::Subtitle
            | Role::LegendTitle
            | Role::LegendLabel
            | Role::LegendSwatch
            | Role::AxisLabel
            | Role::AxisTitle
    )
}

/// Closest pair of label, legend or title boxes, by brute force.
pub fn tightest_pair(scene: &SceneGraph) -> Option<(f64, String, String)> {
    let nodes: Vec<_> = scene.nodes.iter().filter(|n| is_spaced(n.role)).collect();
    let mut best: Option<(f64, String, String)> = None;
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let g = box_gap(&nodes[i].bbox, &nodes[j].bbox);
            if best.as_ref().is_none_or(|b| g < b.0) {
                best = Some((g, nodes[i].path.clone(), nodes[j].path.clone()));
            }
        }
    }
    best
}

/// (max grid, min domain, max domain, min tick, min line mark) stroke widths.
pub struct Strokes {
    pub grid: Option<f64>,
    pub domain_min: Option<f64>,
    pub domain_max: Option<f64>,
    pub tick_min: Option<f64>,
    pub line_mark_min: Option<f64>,
}

fn fold(it: impl Iterator<Item = f64>, f: fn(f64, f64) -> f64) -> Option<f64> {
    it.reduce(f)
}

pub fn strokes(scene: &SceneGraph) -> Strokes {
    let w = |role: Role| scene.nodes.iter().filter(move |n| n.role == role).map(|n| n.style.stroke_width);
    let line_marks = scene
        .nodes
        .iter()
        .filter(|n| n.role == Role::Mark && n.path.starts_with("marks/line/"))
        .map(|n| n.style.stroke_width);
    Strokes {
        grid: fold(w(Role::GridLine), f64::max),
        domain_min: fold(w(Role::AxisDomain), f64::min),
        domain_max: fold(w(Role::AxisDomain), f64::max),
        tick_min: fold(w(Role::Tick), f64::min),
        line_mark_min: fold(line_marks, f64::min),
    }
}

/// Every stroke relation the hierarchy requires, as a list of failures.
pub fn hierarchy_violations(scene: &SceneGraph) -> Vec<String> {
    let s = strokes(scene);
    let mut bad = Vec::new();
    if let (Some(g), Some(d)) = (s.grid, s.domain_min) {
        if g >= d {
            bad.push(format!("grid {g} >= domain {d}"));
        }
    }
    if let (Some(d), Some(t)) = (s.domain_max, s.tick_min) {
        if d > t {
            bad.push(format!("domain {d} > tick {t}"));
        }
    }
    if let (Some(d), Some(l)) = (s.domain_max, s.line_mark_min) {
        if l <= d {
            bad.push(format!("line mark {l} <= domain {d}"));
        }
    }
    bad
}
