use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

/// A validation, resolution, layout or lint finding.
///
/// The JSON form (`severity`, `ruleId`, `message`, `citation`, `nodePath`,
/// optional `fix`) is shared by the CLI and the compile service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule_id: String,
    pub message: String,
    pub citation: String,
    pub node_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fix: Option<String>,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        rule: &RuleInfo,
        node_path: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            severity,
            rule_id: rule.id.to_string(),
            message: message.into(),
            citation: rule.citation.to_string(),
            node_path: node_path.into(),
            fix: None,
        }
    }

    pub fn error(rule: &RuleInfo, node_path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, rule, node_path, message)
    }

    pub fn warning(
        rule: &RuleInfo,
        node_path: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Self::new(Severity::Warning, rule, node_path, message)
    }

    pub fn with_fix(mut self, fix: impl Into<String>) -> Self {
        self.fix = Some(fix.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] {}: {}", self.severity, self.rule_id, self.node_path, self.message)?;
        if let Some(fix) = &self.fix {
            write!(f, " (fix: {fix})")?;
        }
        if !self.citation.is_empty() {
            write!(f, " [{}]", self.citation)?;
        }
        Ok(())
    }
}

/// Static description of a diagnostic source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleInfo {
    pub id: &'static str,
    pub citation: &'static str,
}

pub mod rules {
    use super::RuleInfo;

    pub const PARSE: RuleInfo = RuleInfo { id: "spec.parse", citation: "" };
    pub const SCHEMA: RuleInfo = RuleInfo { id: "spec.schema", citation: "" };
    pub const UNKNOWN_PROPERTY: RuleInfo = RuleInfo { id: "spec.unknown-property", citation: "" };
    pub const FIELD_MISSING: RuleInfo = RuleInfo { id: "spec.field-missing", citation: "" };
    pub const CHANNEL_TYPE: RuleInfo = RuleInfo { id: "spec.channel-type", citation: "" };
    pub const MARK_CHANNEL: RuleInfo = RuleInfo { id: "spec.mark-channel", citation: "" };
    pub const AGGREGATE_TYPE: RuleInfo = RuleInfo { id: "spec.aggregate-type", citation: "" };
    pub const SORT_DOMAIN: RuleInfo = RuleInfo { id: "spec.sort-domain", citation: "" };
    pub const DATA_FIELDS: RuleInfo = RuleInfo { id: "spec.data-fields", citation: "" };
    pub const DATA_LOAD: RuleInfo = RuleInfo { id: "spec.data-load", citation: "" };
    pub const VALUE_RANGE: RuleInfo = RuleInfo { id: "spec.value-range", citation: "" };
    pub const SCALE_RANGE: RuleInfo = RuleInfo { id: "spec.scale-range", citation: "" };
    pub const LABEL_OVERLAP: RuleInfo = RuleInfo {
        id: "layout.label-overlap",
        citation: "BANA tactile graphics guidelines: keep a clear space of at least 1/8 in. around each element",
    };

    pub const R1_MIN_GAP: RuleInfo = RuleInfo {
        id: "R1",
        citation: "BANA tactile graphics guidelines: keep a clear space of at least 1/8 in. around each element",
    };
    pub const R2_HIERARCHY: RuleInfo = RuleInfo {
        id: "R2",
        citation: "BANA 6.6.2.2 line hierarchy: grid weakest, axes stronger, data lines strongest",
    };
    pub const R3_BAR_WIDTH: RuleInfo = RuleInfo {
        id: "R3",
        citation: "BANA bar graphs: bar width from 3/8 in. (1 cm) up to 1 in.",
    };
    pub const R4_ENCODING_COUNT: RuleInfo = RuleInfo {
        id: "R4",
        citation: "More than five textures or four line styles in one chart are hard to tell apart by touch",
    };
    pub const R5_LEGEND_FIRST: RuleInfo = RuleInfo {
        id: "R5",
        citation: "BANA tactile graphics guidelines: the key comes before the graphic in reading order",
    };
    pub const R6_NO_ROTATION: RuleInfo = RuleInfo {
        id: "R6",
        citation: "Braille labels stay horizontal; rotated braille is unexpected and hard to track",
    };
}

/// Sort by rule id, then node path; stable otherwise.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| a.rule_id.cmp(&b.rule_id).then_with(|| a.node_path.cmp(&b.node_path)));
}
