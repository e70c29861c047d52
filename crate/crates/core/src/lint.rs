//! Guideline checks over a laid-out scene.
//!
//! Rules report and never change the scene: authors may break a rule on
//! purpose for a particular reader.

use std::collections::BTreeSet;

use crate::diagnostic::{rules, sort_diagnostics, Diagnostic, RuleInfo};
use crate::layout::{Fill, Role, SceneGraph, SceneNode, SpacingRules};
use crate::spec::MarkType;

const EPS: f64 = 1e-6;

pub trait LintRule: Send + Sync {
    fn info(&self) -> &'static RuleInfo;
    fn check(&self, scene: &SceneGraph, rules: &SpacingRules) -> Vec<Diagnostic>;
}

pub struct RuleRegistry {
    rules: Vec<Box<dyn LintRule>>,
}

impl Default for RuleRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl RuleRegistry {
    pub fn empty() -> Self {
        RuleRegistry { rules: vec![] }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(MinGap));
        r.register(Box::new(LineHierarchy));
        r.register(Box::new(BarWidth));
        r.register(Box::new(EncodingCount));
        r.register(Box::new(LegendFirst));
        r.register(Box::new(NoRotation));
        r
    }

    /// Add a rule, replacing any rule with the same id.
    pub fn register(&mut self, rule: Box<dyn LintRule>) {
        self.rules.retain(|r| r.info().id != rule.info().id);
        self.rules.push(rule);
    }

    pub fn get(&self, id: &str) -> Option<&dyn LintRule> {
        self.rules.iter().find(|r| r.info().id == id).map(|b| b.as_ref())
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.rules.iter().map(|r| r.info().id)
    }

    /// Run every rule; output is ordered by rule id then node path.
    pub fn lint(&self, scene: &SceneGraph, spacing: &SpacingRules) -> Vec<Diagnostic> {
        let mut out: Vec<Diagnostic> = self.rules.iter().flat_map(|r| r.check(scene, spacing)).collect();
        sort_diagnostics(&mut out);
        out
    }
}

pub fn lint_scene(scene: &SceneGraph, spacing: &SpacingRules) -> Vec<Diagnostic> {
    RuleRegistry::builtin().lint(scene, spacing)
}

/// Nodes whose boxes must keep the minimum gap from each other.
fn spaced(n: &SceneNode) -> bool {
    n.role.is_text() || n.role == Role::LegendSwatch
}

/// R1: labels, legend parts and titles keep 1/8 in. apart.
pub struct MinGap;

impl LintRule for MinGap {
    fn info(&self) -> &'static RuleInfo {
        &rules::R1_MIN_GAP
    }

    fn check(&self, scene: &SceneGraph, spacing: &SpacingRules) -> Vec<Diagnostic> {
        let nodes: Vec<&SceneNode> = scene.nodes.iter().filter(|n| spaced(n)).collect();
        let mut out = Vec::new();
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                let gap = a.bbox.gap(&b.bbox);
                if gap < spacing.min_element_gap - EPS {
                    let (first, second) = if a.path <= b.path { (a, b) } else { (b, a) };
                    out.push(
                        Diagnostic::warning(
                            self.info(),
                            first.path.clone(),
                            format!(
                                "{} is {:.1}px from {}; keep at least {:.1}px",
                                first.path, gap, second.path, spacing.min_element_gap
                            ),
                        )
                        .with_fix("increase padding or shorten the labels"),
                    );
                }
            }
        }
        out
    }
}

/// R2: grid lines weaker than axis lines, ticks as strong as axes, data
/// lines strongest.
pub struct LineHierarchy;

fn max_width<'a>(nodes: impl Iterator<Item = &'a SceneNode>) -> Option<(f64, &'a SceneNode)> {
    nodes.fold(None, |acc, n| match acc {
        Some((w, _)) if w >= n.style.stroke_width => acc,
        _ => Some((n.style.stroke_width, n)),
    })
}

impl LintRule for LineHierarchy {
    fn info(&self) -> &'static RuleInfo {
        &rules::R2_HIERARCHY
    }

    fn check(&self, scene: &SceneGraph, _: &SpacingRules) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut axis_max: f64 = 0.0;
        for axis in ["x", "y"] {
            let prefix = format!("axis/{axis}/");
            let Some(domain) = scene.node(&format!("axis/{axis}/domain")) else { continue };
            let dw = domain.style.stroke_width;
            axis_max = axis_max.max(dw);
            let prefix = prefix.as_str();
            let of = |role: Role| scene.nodes.iter().filter(move |n| n.role == role && n.path.starts_with(prefix));
            if let Some((gw, node)) = max_width(of(Role::GridLine)) {
                if gw >= dw {
                    out.push(
                        Diagnostic::error(
                            self.info(),
                            node.path.clone(),
                            format!("{axis} grid width {gw} is not below the axis width {dw}"),
                        )
                        .with_fix("make gridWidth smaller than domainWidth"),
                    );
                }
            }
            let ticks: Vec<&SceneNode> = of(Role::Tick).collect();
            if let Some(t) = ticks.iter().find(|t| t.style.stroke_width < dw) {
                out.push(
                    Diagnostic::error(
                        self.info(),
                        t.path.clone(),
                        format!("{axis} tick width {} is below the axis width {dw}", t.style.stroke_width),
                    )
                    .with_fix("make tickWidth at least domainWidth"),
                );
            } else if let Some(t) = ticks.iter().find(|t| t.style.stroke_width > dw) {
                out.push(Diagnostic::warning(
                    self.info(),
                    t.path.clone(),
                    format!("{axis} tick width {} is above the axis width {dw}", t.style.stroke_width),
                ));
            }
        }
        if axis_max > 0.0 {
            for n in scene.nodes.iter().filter(|n| n.mark.as_ref().is_some_and(|m| m.kind == MarkType::Line)) {
                if n.style.stroke_width <= axis_max {
                    out.push(
                        Diagnostic::error(
                            self.info(),
                            n.path.clone(),
                            format!("data line width {} is not above the axis width {axis_max}", n.style.stroke_width),
                        )
                        .with_fix("raise the mark strokeWidth"),
                    );
                }
            }
        }
        out
    }
}

/// R3: bars between 3/8 in. and 1 in. wide, unless drawn without gaps.
pub struct BarWidth;

impl LintRule for BarWidth {
    fn info(&self) -> &'static RuleInfo {
        &rules::R3_BAR_WIDTH
    }

    fn check(&self, scene: &SceneGraph, _: &SpacingRules) -> Vec<Diagnostic> {
        let (lo, hi) = (0.375 * scene.dpi, scene.dpi);
        let bad: Vec<(&SceneNode, f64)> = scene
            .nodes
            .iter()
            .filter_map(|n| {
                let m = n.mark.as_ref().filter(|m| m.kind == MarkType::Bar)?;
                let w = m.band_extent?;
                let histogram = m.band_gap.is_some_and(|g| g.abs() < EPS);
                (!histogram && (w < lo - EPS || w > hi + EPS)).then_some((n, w))
            })
            .collect();
        match bad.first() {
            Some((n, w)) => vec![Diagnostic::warning(
                self.info(),
                n.path.clone(),
                format!("{} bar(s) are {w:.1}px wide; keep bars between {lo:.1}px and {hi:.1}px", bad.len()),
            )
            .with_fix("change the bar size or the chart width")],
            None => vec![],
        }
    }
}

/// R4: at most five textures and four line styles.
pub struct EncodingCount;

impl LintRule for EncodingCount {
    fn info(&self) -> &'static RuleInfo {
        &rules::R4_ENCODING_COUNT
    }

    fn check(&self, scene: &SceneGraph, _: &SpacingRules) -> Vec<Diagnostic> {
        let marks = || scene.nodes.iter().filter(|n| n.role == Role::Mark);
        let textures: BTreeSet<_> = marks()
            .filter_map(|n| match n.style.fill {
                Fill::Texture(t) => Some(t),
                _ => None,
            })
            .collect();
        let styles: BTreeSet<String> =
            marks().filter_map(|n| n.mark.as_ref()?.line_style.as_ref().map(|s| s.label())).collect();
        let mut out = Vec::new();
        if textures.len() > crate::defaults::decided::TEXTURE_WARN_ABOVE {
            out.push(
                Diagnostic::warning(
                    self.info(),
                    "encoding.texture",
                    format!("{} textures in one chart; consider alternate encodings", textures.len()),
                )
                .with_fix("group small categories, or split the chart"),
            );
        }
        if styles.len() > crate::defaults::decided::LINE_STYLE_WARN_ABOVE {
            out.push(
                Diagnostic::warning(
                    self.info(),
                    "encoding.strokeDash",
                    format!("{} line styles in one chart; more than four are hard to tell apart", styles.len()),
                )
                .with_fix("split the series across multiple charts"),
            );
        }
        out
    }
}

/// R5: the legend comes before the chart.
pub struct LegendFirst;

impl LintRule for LegendFirst {
    fn info(&self) -> &'static RuleInfo {
        &rules::R5_LEGEND_FIRST
    }

    fn check(&self, scene: &SceneGraph, _: &SpacingRules) -> Vec<Diagnostic> {
        match (scene.legend_box, scene.chart_box) {
            (Some(l), Some(c)) if l.y > c.y => vec![Diagnostic::warning(
                self.info(),
                "legend",
                "the legend is placed after the chart; readers expect the key first",
            )
            .with_fix("use a top legend orient")],
            _ => vec![],
        }
    }
}

/// R6: braille is never rotated.
pub struct NoRotation;

impl LintRule for NoRotation {
    fn info(&self) -> &'static RuleInfo {
        &rules::R6_NO_ROTATION
    }

    fn check(&self, scene: &SceneGraph, _: &SpacingRules) -> Vec<Diagnostic> {
        scene
            .nodes
            .iter()
            .filter(|n| n.text.is_some() && n.angle.abs() > EPS)
            .map(|n| {
                Diagnostic::warning(self.info(), n.path.clone(), format!("braille rotated by {} degrees", n.angle))
                    .with_fix("set the angle to 0")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braille::{BrailleCell, BrailleMetrics, BrailleRun, Grade};
    use crate::geom::{Point, Rect};
    use crate::layout::{Geometry, Layer, MarkInfo, Style};

    fn metrics() -> BrailleMetrics {
        BrailleMetrics::at_dpi(96.0, 24.0)
    }

    fn spacing() -> SpacingRules {
        SpacingRules::at_dpi(96.0, &metrics())
    }

    fn label(path: &str, x: f64, y: f64) -> SceneNode {
        let run = BrailleRun {
            cells: vec![BrailleCell::new(1).unwrap(); 2],
            source_text: "ab".into(),
            grade: Grade::One,
            table_id: "t".into(),
        };
        SceneNode::text(path, Role::AxisLabel, Layer::Labels, run, Point::new(x, y), &metrics(), 24.0, "x")
    }

    fn line(path: &str, role: Role, width: f64) -> SceneNode {
        SceneNode::shape(
            path,
            role,
            Layer::Axes,
            Geometry::Line { from: Point::new(0.0, 0.0), to: Point::new(10.0, 0.0) },
            Style::stroke(width),
            "x",
        )
    }

    fn scene(nodes: Vec<SceneNode>) -> SceneGraph {
        let mut s = SceneGraph::empty(500.0, 500.0);
        s.nodes = nodes;
        s
    }

    fn ids(d: &[Diagnostic]) -> Vec<&str> {
        d.iter().map(|d| d.rule_id.as_str()).collect()
    }

    #[test]
    fn close_labels_warn() {
        // ink width of two cells is 38px
        let ok = scene(vec![label("a", 0.0, 0.0), label("b", 50.0, 0.0)]);
        assert!(lint_scene(&ok, &spacing()).is_empty());
        let tight = scene(vec![label("a", 0.0, 0.0), label("b", 49.0, 0.0)]);
        let d = lint_scene(&tight, &spacing());
        assert_eq!(ids(&d), vec!["R1"]);
        assert_eq!(d[0].node_path, "a");
    }

    #[test]
    fn hierarchy() {
        let base = |grid: f64, tick: f64| {
            scene(vec![
                line("axis/x/domain", Role::AxisDomain, 2.5),
                line("axis/x/grid/0", Role::GridLine, grid),
                line("axis/x/tick/0", Role::Tick, tick),
            ])
        };
        assert!(lint_scene(&base(1.0, 2.5), &spacing()).is_empty());
        let d = lint_scene(&base(3.0, 2.5), &spacing());
        assert_eq!(ids(&d), vec!["R2"]);
        assert!(d[0].is_error());
        let d = lint_scene(&base(1.0, 2.0), &spacing());
        assert!(d[0].is_error());
        let d = lint_scene(&base(1.0, 3.0), &spacing());
        assert_eq!(ids(&d), vec!["R2"]);
        assert!(!d[0].is_error());
    }

    fn bar(width: f64, gap: f64) -> SceneNode {
        let mut n = SceneNode::shape(
            "marks/bar/0",
            Role::Mark,
            Layer::Marks,
            Geometry::Rect { rect: Rect::new(0.0, 0.0, width, 100.0) },
            Style::filled(Fill::Black, 2.0),
            "mark",
        );
        n.mark = Some(MarkInfo {
            kind: MarkType::Bar,
            series: None,
            band_extent: Some(width),
            band_gap: Some(gap),
            line_style: None,
            shape: None,
        });
        n
    }

    #[test]
    fn bar_width_range() {
        assert!(lint_scene(&scene(vec![bar(48.0, 24.0)]), &spacing()).is_empty());
        assert!(lint_scene(&scene(vec![bar(36.0, 24.0)]), &spacing()).is_empty());
        assert!(lint_scene(&scene(vec![bar(96.0, 24.0)]), &spacing()).is_empty());
        assert_eq!(ids(&lint_scene(&scene(vec![bar(120.0, 24.0)]), &spacing())), vec!["R3"]);
        assert_eq!(ids(&lint_scene(&scene(vec![bar(30.0, 24.0)]), &spacing())), vec!["R3"]);
        // histogram-like bars touch and are exempt
        assert!(lint_scene(&scene(vec![bar(120.0, 0.0)]), &spacing()).is_empty());
    }

    #[test]
    fn legend_below_chart_and_rotation() {
        let mut s = scene(vec![]);
        s.legend_box = Some(Rect::new(0.0, 400.0, 10.0, 10.0));
        s.chart_box = Some(Rect::new(0.0, 100.0, 10.0, 10.0));
        assert_eq!(ids(&lint_scene(&s, &spacing())), vec!["R5"]);
        let mut l = label("axis/x/label/0", 0.0, 0.0);
        l.angle = 90.0;
        assert_eq!(ids(&lint_scene(&scene(vec![l]), &spacing())), vec!["R6"]);
    }

    #[test]
    fn output_is_sorted() {
        let mut l = label("z", 0.0, 0.0);
        l.angle = 45.0;
        let s = scene(vec![l, label("b", 10.0, 0.0), bar(200.0, 10.0)]);
        let d = lint_scene(&s, &spacing());
        assert_eq!(ids(&d), vec!["R1", "R3", "R6"]);
    }

    #[test]
    fn registry_is_keyed_by_id() {
        let reg = RuleRegistry::builtin();
        assert_eq!(reg.ids().collect::<Vec<_>>(), vec!["R1", "R2", "R3", "R4", "R5", "R6"]);
        assert!(reg.get("R4").is_some());
        assert!(reg.get("R7").is_none());
    }
}
