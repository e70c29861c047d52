//! The whole pipeline behind one call, plus the request/response shapes the
//! editor and the HTTP service exchange.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::braille::{Grade, TableRegistry};
use crate::data::{DataTable, Row};
use crate::defaults::{resolve_defaults, ResolvedSpec};
use crate::diagnostic::{rules, sort_diagnostics, Diagnostic, Severity};
use crate::layout::{build_scene_with, MarkRegistry, SceneGraph, SpacingRules};
use crate::lint::RuleRegistry;
use crate::render::render_svg;
use crate::spec::{parse_spec, validate_spec, ConfigSpec, RenderMode, SpecError, TvlSpec};

/// Settings that override the spec's `config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CompileOptions {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "grade_number")]
    pub grade: Option<Grade>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<RenderMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dpi: Option<f64>,
    /// Id of a registered translation table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braille_table: Option<String>,
}

mod grade_number {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::braille::Grade;

    pub fn serialize<S: Serializer>(g: &Option<Grade>, s: S) -> Result<S::Ok, S::Error> {
        match g {
            Some(g) => s.serialize_u8(g.number()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Grade>, D::Error> {
        match Option::<u8>::deserialize(d)? {
            None => Ok(None),
            Some(1) => Ok(Some(Grade::One)),
            Some(2) => Ok(Some(Grade::Two)),
            Some(n) => Err(de::Error::custom(format!("grade must be 1 or 2, got {n}"))),
        }
    }
}

impl CompileOptions {
    fn apply(&self, spec: &mut TvlSpec) {
        let cfg = spec.config.get_or_insert_with(ConfigSpec::default);
        if let Some(g) = self.grade {
            cfg.braille_grade = Some(g);
        }
        if let Some(m) = self.mode {
            cfg.render_mode = Some(m);
        }
        if let Some(d) = self.dpi {
            cfg.dpi = Some(d);
        }
        if let Some(t) = &self.braille_table {
            cfg.braille_translation = Some(t.clone());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompileRequest {
    pub spec: String,
    #[serde(default)]
    pub options: CompileOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompileResponse {
    /// `None` when the spec could not be compiled.
    pub svg: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
    pub duration_ms: f64,
}

/// Where compilation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Stage {
    /// Malformed JSON or an unreadable data file.
    Input,
    Schema,
    Validate,
    Resolve,
    Layout,
}

#[derive(Debug, Clone)]
pub struct CompileOutput {
    pub svg: Option<String>,
    pub resolved: Option<ResolvedSpec>,
    pub scene: Option<SceneGraph>,
    pub diagnostics: Vec<Diagnostic>,
    pub failed_at: Option<Stage>,
}

impl CompileOutput {
    fn failed(stage: Stage, mut diagnostics: Vec<Diagnostic>) -> Self {
        sort_diagnostics(&mut diagnostics);
        CompileOutput { svg: None, resolved: None, scene: None, diagnostics, failed_at: Some(stage) }
    }

    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }
}

/// Compiler with its table, mark and rule registries.
#[derive(Default)]
pub struct Compiler {
    pub tables: TableRegistry,
    pub marks: MarkRegistry,
    pub rules: RuleRegistry,
    /// Directory `data.url` is resolved against. Without one, url data
    /// cannot be loaded.
    pub base_dir: Option<PathBuf>,
}

fn has_error(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

fn load_rows(base: Option<&Path>, url: &str) -> Result<Vec<Row>, Box<Diagnostic>> {
    let fail = |msg: String| Box::new(Diagnostic::error(&rules::DATA_LOAD, "data.url", msg));
    if url.contains("://") {
        return Err(fail(format!("{url}: only local files can be loaded")));
    }
    let Some(base) = base else {
        return Err(fail(format!("{url}: no base directory to resolve the url against")));
    };
    let path = base.join(url);
    let text = std::fs::read_to_string(&path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| fail(format!("{}: expected a JSON array of rows: {e}", path.display())))
}

impl Compiler {
    pub fn with_base_dir(base_dir: impl Into<PathBuf>) -> Self {
        Compiler { base_dir: Some(base_dir.into()), ..Compiler::default() }
    }

    pub fn compile(&self, spec_text: &str, options: &CompileOptions) -> CompileOutput {
        let parsed = match parse_spec(spec_text) {
            Ok(p) => p,
            Err(e) => {
                let stage = match e {
                    SpecError::Syntax { .. } => Stage::Input,
                    SpecError::Schema { .. } => Stage::Schema,
                };
                return CompileOutput::failed(stage, vec![e.to_diagnostic()]);
            }
        };
        let mut diags = parsed.warnings;
        let mut spec = parsed.spec;
        options.apply(&mut spec);

        if let (None, Some(url)) = (&spec.data.values, &spec.data.url) {
            match load_rows(self.base_dir.as_deref(), url) {
                Ok(rows) => {
                    spec.data.values = Some(rows);
                    spec.data.url = None;
                }
                Err(d) => {
                    diags.push(*d);
                    return CompileOutput::failed(Stage::Input, diags);
                }
            }
        }

        diags.extend(validate_spec(&spec));
        if has_error(&diags) {
            return CompileOutput::failed(Stage::Validate, diags);
        }

        let (resolved, resolve_diags) = resolve_defaults(&spec);
        diags.extend(resolve_diags);
        if has_error(&diags) {
            return CompileOutput::failed(Stage::Resolve, diags);
        }

        let data = DataTable::from_rows(resolved.data.values.clone().unwrap_or_default());
        let (scene, layout_diags) = match build_scene_with(&resolved, &data, &self.tables, &self.marks) {
            Ok(s) => s,
            Err(e) => {
                diags.push(e.to_diagnostic());
                return CompileOutput::failed(Stage::Layout, diags);
            }
        };
        diags.extend(layout_diags);

        let spacing = SpacingRules::at_dpi(scene.dpi, &scene.metrics);
        for d in self.rules.lint(&scene, &spacing) {
            let dup = diags.iter().any(|e| e.rule_id == d.rule_id && e.node_path == d.node_path);
            if !dup {
                diags.push(d);
            }
        }
        sort_diagnostics(&mut diags);

        let svg = render_svg(&scene, scene.mode);
        CompileOutput { svg: Some(svg), resolved: Some(resolved), scene: Some(scene), diagnostics: diags, failed_at: None }
    }

    pub fn handle(&self, req: &CompileRequest) -> CompileResponse {
        let start = Instant::now();
        let out = self.compile(&req.spec, &req.options);
        CompileResponse {
            svg: out.svg,
            diagnostics: out.diagnostics,
            duration_ms: start.elapsed().as_secs_f64() * 1000.0,
        }
    }
}

/// Compile with the built-in registries. `data.url` is not available.
pub fn compile(spec_text: &str, options: &CompileOptions) -> CompileOutput {
    Compiler::default().compile(spec_text, options)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BAR: &str = r#"{
        "data": {"values": [{"a": "x", "b": 3}, {"a": "y", "b": 5}]},
        "mark": "bar",
        "encoding": {"x": {"field": "a", "type": "nominal"}, "y": {"field": "b", "type": "quantitative"}}
    }"#;

    #[test]
    fn compiles_inline_bar() {
        let out = compile(BAR, &CompileOptions::default());
        assert_eq!(out.failed_at, None, "{:?}", out.diagnostics);
        assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
        assert!(out.svg.unwrap().contains("marks/bar/1"));
    }

    #[test]
    fn syntax_error_stops_at_input() {
        let out = compile("{\"mark\": ", &CompileOptions::default());
        assert_eq!(out.failed_at, Some(Stage::Input));
        assert_eq!(out.diagnostics[0].rule_id, rules::PARSE.id);
        assert!(out.svg.is_none());
    }

    #[test]
    fn options_override_config() {
        let opts = CompileOptions { dpi: Some(192.0), mode: Some(RenderMode::Font), ..Default::default() };
        let out = compile(BAR, &opts);
        let r = out.resolved.unwrap();
        assert_eq!(r.config.dpi, 192.0);
        assert_eq!(r.config.render_mode, RenderMode::Font);
        assert!(out.svg.unwrap().contains("<text"));
    }

    #[test]
    fn url_needs_base_dir() {
        let spec = BAR.replace(r#""values": [{"a": "x", "b": 3}, {"a": "y", "b": 5}]"#, r#""url": "d.json""#);
        let out = compile(&spec, &CompileOptions::default());
        assert_eq!(out.failed_at, Some(Stage::Input));
        assert_eq!(out.diagnostics[0].rule_id, rules::DATA_LOAD.id);
    }

    #[test]
    fn request_json_shape() {
        let req: CompileRequest =
            serde_json::from_str(r#"{"spec": "{}", "options": {"grade": 1, "mode": "font", "dpi": 96}}"#).unwrap();
        assert_eq!(req.options.grade, Some(Grade::One));
        assert!(serde_json::from_str::<CompileRequest>(r#"{"spec": "{}", "options": {"grade": 3}}"#).is_err());
        let resp = Compiler::default().handle(&CompileRequest { spec: BAR.into(), options: Default::default() });
        let v = serde_json::to_value(&resp).unwrap();
        assert!(v["svg"].is_string());
        assert!(v["diagnostics"].as_array().unwrap().is_empty());
        assert!(v["durationMs"].as_f64().unwrap() >= 0.0);
    }

    #[test]
    fn deterministic() {
        let a = compile(BAR, &CompileOptions::default()).svg;
        let b = compile(BAR, &CompileOptions::default()).svg;
        assert_eq!(a, b);
    }
}
