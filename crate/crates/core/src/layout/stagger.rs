use serde::Serialize;

use crate::braille::{measure_run, BrailleMetrics, BrailleRun};
use crate::spec::StaggerMode;

/// Spacing rules derived from the output resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpacingRules {
    /// 1/8 in. in pixels.
    pub min_element_gap: f64,
    pub line_pitch: f64,
}

impl SpacingRules {
    pub fn at_dpi(dpi: f64, metrics: &BrailleMetrics) -> Self {
        SpacingRules { min_element_gap: dpi / 8.0, line_pitch: metrics.line_pitch }
    }
}

/// Lead line for a label on the second row: a vertical extension of its
/// tick, `length` long, at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadLine {
    pub index: usize,
    pub x: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaggerPlan {
    /// 0 or 1 per label.
    pub rows: Vec<u8>,
    pub lead_lines: Vec<LeadLine>,
    /// First pair of labels still closer than the minimum gap.
    pub overlap: Option<(usize, usize)>,
}

/// Gap between two labels of advance widths `wa`, `wb` centred `d` apart.
fn gap(d: f64, wa: f64, wb: f64) -> f64 {
    d.abs() - (wa + wb) / 2.0
}

/// Whether all adjacent labels fit on one row.
pub fn fits_one_row(widths: &[f64], centers: &[f64], min_gap: f64) -> bool {
    (1..widths.len()).all(|i| gap(centers[i] - centers[i - 1], widths[i - 1], widths[i]) >= min_gap - 1e-9)
}

fn first_conflict(rows: &[u8], widths: &[f64], centers: &[f64], min_gap: f64) -> Option<(usize, usize)> {
    let n = widths.len();
    for i in 0..n {
        // next label on the same row
        if let Some(j) = (i + 1..n).find(|&j| rows[j] == rows[i]) {
            if gap(centers[j] - centers[i], widths[i], widths[j]) < min_gap - 1e-9 {
                return Some((i, j));
            }
        }
        // a lead line crosses the first row, so it must clear its neighbours there
        if rows[i] == 1 {
            for j in [i.wrapping_sub(1), i + 1] {
                if j < n && rows[j] == 0 && (centers[i] - centers[j]).abs() - widths[j] / 2.0 < min_gap - 1e-9 {
                    return Some((j.min(i), j.max(i)));
                }
            }
        }
    }
    None
}

/// Assign x-axis labels to one or two rows.
///
/// `On` alternates rows, `Off` keeps one row and `Auto` alternates only when
/// some neighbours on a single row would sit closer than the minimum gap.
pub fn stagger_axis_labels(
    labels: &[BrailleRun],
    centers: &[f64],
    mode: StaggerMode,
    metrics: &BrailleMetrics,
    rules: &SpacingRules,
) -> StaggerPlan {
    assert_eq!(labels.len(), centers.len(), "one centre per label");
    let widths: Vec<f64> = labels.iter().map(|l| measure_run(l, metrics).width).collect();
    let stagger = match mode {
        StaggerMode::On => true,
        StaggerMode::Off => false,
        StaggerMode::Auto => !fits_one_row(&widths, centers, rules.min_element_gap),
    };
    let rows: Vec<u8> = (0..labels.len()).map(|i| u8::from(stagger && i % 2 == 1)).collect();
    let lead_lines = rows
        .iter()
        .enumerate()
        .filter(|(_, &r)| r == 1)
        .map(|(i, _)| LeadLine { index: i, x: centers[i], length: rules.line_pitch })
        .collect();
    let overlap = first_conflict(&rows, &widths, centers, rules.min_element_gap);
    StaggerPlan { rows, lead_lines, overlap }
}

/// Smallest uniform centre spacing at which the labels are clear of each
/// other, on one row or staggered over two.
pub fn min_label_step(widths: &[f64], staggered: bool, min_gap: f64) -> f64 {
    let mut step: f64 = 0.0;
    if !staggered {
        for w in widths.windows(2) {
            step = step.max((w[0] + w[1]) / 2.0 + min_gap);
        }
        return step;
    }
    for w in widths.windows(3) {
        step = step.max(((w[0] + w[2]) / 2.0 + min_gap) / 2.0);
    }
    // lead lines of odd labels pass their even neighbours
    for (i, w) in widths.iter().enumerate() {
        let has_lead_neighbour = (i % 2 == 0) && (i + 1 < widths.len() || i > 0);
        if has_lead_neighbour && widths.len() > 1 {
            step = step.max(w / 2.0 + min_gap);
        }
    }
    step
}
