//! Tables, aggregation, domains and scales.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::format_number;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Datum {
    Null,
    Bool(bool),
    Num(f64),
    Str(String),
}

impl Datum {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Datum::Num(v) => Some(*v),
            _ => None,
        }
    }

    /// Numeric value, reading ISO `YYYY` / `YYYY-MM-DD` strings as
    /// (fractional) years.
    pub fn as_temporal(&self) -> Option<f64> {
        match self {
            Datum::Num(v) => Some(*v),
            Datum::Str(s) => parse_iso_year(s),
            _ => None,
        }
    }

    /// Text used for grouping and for labels.
    pub fn key(&self) -> String {
        match self {
            Datum::Null => "null".to_string(),
            Datum::Bool(b) => b.to_string(),
            Datum::Num(v) => format_number(*v),
            Datum::Str(s) => s.clone(),
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Datum::Null)
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

fn parse_iso_year(s: &str) -> Option<f64> {
    let parts: Vec<&str> = s.split('-').collect();
    let year: i32 = parts.first()?.parse().ok()?;
    if parts[0].len() != 4 {
        return None;
    }
    match parts.len() {
        1 => Some(year as f64),
        3 => {
            let month: u32 = parts[1].parse().ok()?;
            let day: u32 = parts[2].parse().ok()?;
            if !(1..=12).contains(&month) || !(1..=31).contains(&day) {
                return None;
            }
            const CUM: [u32; 12] = [0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334];
            let leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
            let days_in_year = if leap { 366.0 } else { 365.0 };
            let doy = CUM[month as usize - 1] + day - 1 + u32::from(leap && month > 2);
            Some(year as f64 + doy as f64 / days_in_year)
        }
        _ => None,
    }
}

pub type Row = IndexMap<String, Datum>;

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DataTable {
    pub fields: Vec<String>,
    pub rows: Vec<Row>,
}

impl DataTable {
    pub fn from_rows(rows: Vec<Row>) -> Self {
        let mut fields: Vec<String> = Vec::new();
        for r in &rows {
            for k in r.keys() {
                if !fields.contains(k) {
                    fields.push(k.clone());
                }
            }
        }
        DataTable { fields, rows }
    }

    pub fn has_field(&self, f: &str) -> bool {
        self.fields.iter().any(|x| x == f)
    }

    pub fn column<'a>(&'a self, field: &'a str) -> impl Iterator<Item = &'a Datum> + 'a {
        self.rows.iter().map(move |r| r.get(field).unwrap_or(&Datum::Null))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregateOp {
    #[serde(alias = "mean")]
    Average,
    Sum,
    Count,
    Min,
    Max,
}

impl AggregateOp {
    pub fn name(self) -> &'static str {
        match self {
            AggregateOp::Average => "average",
            AggregateOp::Sum => "sum",
            AggregateOp::Count => "count",
            AggregateOp::Min => "min",
            AggregateOp::Max => "max",
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("field {field:?} has non-numeric value {value} for {op}")]
    NonNumeric { field: String, value: String, op: &'static str },
    #[error("{op} needs a field")]
    MissingField { op: &'static str },
    #[error("no rows to infer a domain from")]
    EmptyTable,
    #[error("band positions need a non-empty domain")]
    EmptyDomain,
    #[error("band step {step} must be at least the band width {width}, which must be positive")]
    BadBand { step: f64, width: f64 },
}

/// Name of the output column produced by [`aggregate_rows`].
pub fn aggregate_output_field(field: Option<&str>, op: AggregateOp) -> String {
    match (field, op) {
        (Some(f), _) => f.to_string(),
        (None, _) => "count".to_string(),
    }
}

/// Group by `group_by` and reduce `field` with `op`. Groups keep the order
/// in which their key first appears.
pub fn aggregate_rows(
    table: &DataTable,
    group_by: &[String],
    field: Option<&str>,
    op: AggregateOp,
) -> Result<DataTable, DataError> {
    if field.is_none() && op != AggregateOp::Count {
        return Err(DataError::MissingField { op: op.name() });
    }
    let mut groups: IndexMap<Vec<String>, (Row, Vec<f64>, usize)> = IndexMap::new();
    for row in &table.rows {
        let key: Vec<String> =
            group_by.iter().map(|g| row.get(g).unwrap_or(&Datum::Null).key()).collect();
        let entry = groups.entry(key).or_insert_with(|| {
            let head: Row = group_by
                .iter()
                .map(|g| (g.clone(), row.get(g).cloned().unwrap_or(Datum::Null)))
                .collect();
            (head, Vec::new(), 0)
        });
        entry.2 += 1;
        if op == AggregateOp::Count {
            continue;
        }
        let f = field.expect("checked above");
        match row.get(f).unwrap_or(&Datum::Null) {
            Datum::Num(v) => entry.1.push(*v),
            Datum::Null => {}
            other => {
                return Err(DataError::NonNumeric {
                    field: f.to_string(),
                    value: other.key(),
                    op: op.name(),
                })
            }
        }
    }
    let out_field = aggregate_output_field(field, op);
    let rows = groups
        .into_values()
        .map(|(mut head, values, count)| {
            let v = match op {
                AggregateOp::Count => count as f64,
                AggregateOp::Sum => values.iter().sum(),
                AggregateOp::Average => {
                    if values.is_empty() {
                        f64::NAN
                    } else {
                        values.iter().sum::<f64>() / values.len() as f64
                    }
                }
                AggregateOp::Min => values.iter().cloned().fold(f64::INFINITY, f64::min),
                AggregateOp::Max => values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            };
            head.insert(out_field.clone(), if v.is_finite() { Datum::Num(v) } else { Datum::Null });
            head
        })
        .collect();
    let mut fields = group_by.to_vec();
    fields.push(out_field);
    Ok(DataTable { fields, rows })
}

/// Baseline policy for a quantitative domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// Always include zero (bars).
    Zero,
    /// Include zero unless all values are positive and tightly clustered.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Quantitative { min: f64, max: f64 },
    Discrete(Vec<Datum>),
}

pub fn quantitative_domain(values: &[f64], baseline: Baseline) -> Result<(f64, f64), DataError> {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return Err(DataError::EmptyTable);
    }
    let lo = finite.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tight = lo > 0.0 && (hi - lo) / lo < 0.2;
    let (lo, hi) = match baseline {
        Baseline::Auto if tight => (lo, hi),
        _ => (lo.min(0.0), hi.max(0.0)),
    };
    Ok((lo, hi))
}

/// Distinct values in `order` first (when given), otherwise in order of
/// first appearance.
pub fn discrete_domain<'a>(
    values: impl Iterator<Item = &'a Datum>,
    order: Option<&[Datum]>,
) -> Vec<Datum> {
    if let Some(order) = order {
        let mut out: Vec<Datum> = Vec::new();
        for d in order {
            if !out.iter().any(|o| o.key() == d.key()) {
                out.push(d.clone());
            }
        }
        return out;
    }
    let mut out: Vec<Datum> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in values {
        if !v.is_null() && seen.insert(v.key()) {
            out.push(v.clone());
        }
    }
    out
}

/// Smallest set of ticks at a {1, 2, 5} x 10^k step that covers `[lo, hi]`
/// with a count as close as possible to `requested`. Ties go to fewer
/// ticks, then to the smaller step.
pub fn nice_ticks(lo: f64, hi: f64, requested: u32) -> Vec<f64> {
    if !(lo.is_finite() && hi.is_finite()) {
        return vec![];
    }
    if lo >= hi {
        return vec![lo];
    }
    let requested = requested.max(1) as f64;
    let rough = (hi - lo) / (requested - 1.0).max(1.0);
    let k0 = rough.log10().floor() as i32;
    // few requested ticks can need a step on the scale of the values themselves
    let magnitude = lo.abs().max(hi.abs()).log10().ceil() as i32;
    let mut best: Option<(f64, usize, f64, Step)> = None;
    for k in k0 - 1..=(k0 + 1).max(magnitude + 1) {
        for m in [1i64, 2, 5] {
            let step = Step { mantissa: m, exp: k };
            let (first, last) = step.cover(lo, hi);
            let count = (last - first + 1) as usize;
            let size = step.value();
            let score = (count as f64 - requested).abs();
            let better = match &best {
                None => true,
                Some((s, c, z, _)) => {
                    score < *s || (score == *s && (count < *c || (count == *c && size < *z)))
                }
            };
            if better {
                best = Some((score, count, size, step));
            }
        }
    }
    let (_, _, _, step) = best.expect("nine candidates");
    let (first, last) = step.cover(lo, hi);
    (first..=last).map(|i| step.at(i)).collect()
}

#[derive(Debug, Clone, Copy)]
struct Step {
    mantissa: i64,
    exp: i32,
}

impl Step {
    fn value(&self) -> f64 {
        self.mantissa as f64 * 10f64.powi(self.exp)
    }

    /// Tick `i` computed from integers so 0.1 steps print as 0.3, not 0.30000000000000004.
    fn at(&self, i: i64) -> f64 {
        let n = (i * self.mantissa) as f64;
        if self.exp >= 0 {
            n * 10f64.powi(self.exp)
        } else {
            n / 10f64.powi(-self.exp)
        }
    }

    fn cover(&self, lo: f64, hi: f64) -> (i64, i64) {
        let s = self.value();
        let eps = 1e-9 * (hi - lo) / s;
        ((lo / s + eps).floor() as i64, (hi / s - eps).ceil() as i64)
    }
}

/// Centre of each band: `origin + i * step + step / 2`.
pub fn band_positions(
    domain: &[String],
    step: f64,
    band_width: f64,
    origin: f64,
) -> Result<IndexMap<String, f64>, DataError> {
    if domain.is_empty() {
        return Err(DataError::EmptyDomain);
    }
    if !(band_width > 0.0 && step >= band_width) {
        return Err(DataError::BadBand { step, width: band_width });
    }
    Ok(domain
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), origin + i as f64 * step + step / 2.0))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearScale {
    pub domain: (f64, f64),
    pub range: (f64, f64),
    pub ticks: Vec<f64>,
}

impl LinearScale {
    pub fn apply(&self, v: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        if d1 == d0 {
            return (r0 + r1) / 2.0;
        }
        r0 + (v - d0) / (d1 - d0) * (r1 - r0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BandKind {
    Band,
    Point,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandScale {
    pub kind: BandKind,
    pub domain: Vec<String>,
    pub origin: f64,
    pub step: f64,
    pub bandwidth: f64,
}

impl BandScale {
    pub fn centers(&self) -> IndexMap<String, f64> {
        self.domain
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), self.origin + i as f64 * self.step + self.step / 2.0))
            .collect()
    }

    pub fn center(&self, key: &str) -> Option<f64> {
        let i = self.domain.iter().position(|k| k == key)?;
        Some(self.origin + i as f64 * self.step + self.step / 2.0)
    }

    pub fn len(&self) -> f64 {
        self.step * self.domain.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scale {
    Linear(LinearScale),
    Band(BandScale),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(pairs: &[(&str, Datum)]) -> Row {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    fn s(v: &str) -> Datum {
        Datum::Str(v.into())
    }

    #[test]
    fn average_by_group() {
        let t = DataTable::from_rows(vec![
            row(&[("k", s("a")), ("v", Datum::Num(2.0))]),
            row(&[("k", s("a")), ("v", Datum::Num(4.0))]),
            row(&[("k", s("b")), ("v", Datum::Num(6.0))]),
        ]);
        let out = aggregate_rows(&t, &["k".into()], Some("v"), AggregateOp::Average).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert_eq!(out.rows[0]["k"], s("a"));
        assert_eq!(out.rows[0]["v"], Datum::Num(3.0));
        assert_eq!(out.rows[1]["v"], Datum::Num(6.0));
    }

    #[test]
    fn count_without_grouping() {
        let t = DataTable::from_rows(vec![row(&[("k", s("a"))]), row(&[("k", s("b"))]), row(&[("k", s("c"))])]);
        let out = aggregate_rows(&t, &[], None, AggregateOp::Count).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0]["count"], Datum::Num(3.0));
    }

    #[test]
    fn non_numeric_field_is_an_error() {
        let t = DataTable::from_rows(vec![row(&[("k", s("a")), ("v", s("x"))])]);
        let err = aggregate_rows(&t, &["k".into()], Some("v"), AggregateOp::Sum).unwrap_err();
        assert!(matches!(err, DataError::NonNumeric { ref field, .. } if field == "v"));
    }

    #[test]
    fn zero_baseline_for_bars() {
        assert_eq!(quantitative_domain(&[72.0, 68.0, 81.0], Baseline::Zero).unwrap(), (0.0, 81.0));
        assert_eq!(quantitative_domain(&[72.0, 68.0, 81.0], Baseline::Auto).unwrap(), (68.0, 81.0));
        assert_eq!(quantitative_domain(&[1.0, 6.0], Baseline::Auto).unwrap(), (0.0, 6.0));
        assert_eq!(quantitative_domain(&[], Baseline::Auto), Err(DataError::EmptyTable));
    }

    #[test]
    fn discrete_domain_honours_sort() {
        let vals = [s("b"), s("a"), s("b")];
        assert_eq!(discrete_domain(vals.iter(), None), vec![s("b"), s("a")]);
        let order = [s("a"), s("c"), s("b")];
        assert_eq!(discrete_domain(vals.iter(), Some(&order)), order.to_vec());
    }

    #[test]
    fn ordinal_years_keep_data_order() {
        let years: Vec<Datum> = (0..11).map(|i| Datum::Num(1955.0 + 5.0 * i as f64)).collect();
        let d = discrete_domain(years.iter().chain(years.iter()), None);
        assert_eq!(d.len(), 11);
        assert_eq!(d[0].key(), "1955");
        assert_eq!(d[10].key(), "2005");
    }

    #[test]
    fn iso_dates() {
        assert_eq!(s("2004").as_temporal(), Some(2004.0));
        assert_eq!(s("2004-01-01").as_temporal(), Some(2004.0));
        assert!((s("2005-07-02").as_temporal().unwrap() - 2005.4986).abs() < 1e-3);
        assert_eq!(s("Jan").as_temporal(), None);
    }

    #[test]
    fn band_centers() {
        let dom: Vec<String> = ["a", "b", "c"].iter().map(|x| x.to_string()).collect();
        let c = band_positions(&dom, 72.0, 48.0, 0.0).unwrap();
        assert_eq!(c.values().copied().collect::<Vec<_>>(), vec![36.0, 108.0, 180.0]);
        let one = band_positions(&dom[..1], 72.0, 48.0, 10.0).unwrap();
        assert_eq!(one["a"], 46.0);
        assert_eq!(band_positions(&[], 72.0, 48.0, 0.0), Err(DataError::EmptyDomain));
        assert!(band_positions(&dom, 40.0, 48.0, 0.0).is_err());
    }

    #[test]
    fn nested_bands() {
        // three series inside a 144 px group: inner step is a third of the group width
        let outer: Vec<String> = ["1990", "1995", "2000"].iter().map(|x| x.to_string()).collect();
        let inner: Vec<String> = ["A", "C", "U"].iter().map(|x| x.to_string()).collect();
        let group_width = 144.0;
        let outer_c = band_positions(&outer, 168.0, group_width, 0.0).unwrap();
        let inner_step = group_width / 3.0;
        assert_eq!(inner_step, 48.0);
        for (_, c) in outer_c {
            let inner_c = band_positions(&inner, inner_step, inner_step, c - group_width / 2.0).unwrap();
            let xs: Vec<f64> = inner_c.values().copied().collect();
            assert_eq!(xs, vec![c - 48.0, c, c + 48.0]);
        }
    }

    #[test]
    fn linear_scale_maps_endpoints() {
        let s = LinearScale { domain: (0.0, 80.0), range: (400.0, 0.0), ticks: vec![] };
        assert_eq!(s.apply(0.0), 400.0);
        assert_eq!(s.apply(80.0), 0.0);
        assert_eq!(s.apply(40.0), 200.0);
    }

    /// Exhaustive reference: every {1,2,5} x 10^k step over a wide exponent range.
    fn brute_force_ticks(lo: f64, hi: f64, requested: u32) -> Vec<f64> {
        let mut best: Option<(f64, usize, f64, Vec<f64>)> = None;
        for k in -12..=12 {
            for m in [1.0, 2.0, 5.0] {
                let step: f64 = m * 10f64.powi(k);
                let eps = 1e-9 * (hi - lo) / step;
                let first = (lo / step + eps).floor();
                let last = (hi / step - eps).ceil();
                let count = (last - first) as usize + 1;
                if count > 10_000 {
                    continue;
                }
                let ticks: Vec<f64> = (0..count).map(|i| (first + i as f64) * step).collect();
                let score = (count as f64 - requested as f64).abs();
                let better = match &best {
                    None => true,
                    Some((s, c, z, _)) => score < *s || (score == *s && (count < *c || (count == *c && step < *z))),
                };
                if better {
                    best = Some((score, count, step, ticks));
                }
            }
        }
        best.unwrap().3
    }

    #[test]
    fn ticks_for_life_expectancy() {
        assert_eq!(brute_force_ticks(0.0, 82.3, 5), vec![0.0, 20.0, 40.0, 60.0, 80.0, 100.0]);
        assert_eq!(nice_ticks(0.0, 82.3, 5), vec![0.0, 20.0, 40.0, 60.0, 80.0, 100.0]);
        assert_eq!(nice_ticks(0.0, 78.0, 5), vec![0.0, 20.0, 40.0, 60.0, 80.0]);
    }

    #[test]
    fn ticks_unit_and_small_domains() {
        assert_eq!(nice_ticks(0.0, 1.0, 2), vec![0.0, 1.0]);
        assert_eq!(nice_ticks(1.0, 7.0, 7), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        assert_eq!(nice_ticks(0.0, 0.3, 4), vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(nice_ticks(2500.0, 6000.0, 8), (0..8).map(|i| 2500.0 + 500.0 * i as f64).collect::<Vec<_>>());
        assert_eq!(nice_ticks(180.0, 220.0, 5), vec![180.0, 190.0, 200.0, 210.0, 220.0]);
        assert_eq!(nice_ticks(5.0, 5.0, 4), vec![5.0]);
    }

    proptest! {
        #[test]
        fn ticks_match_brute_force(lo in -1.0e4f64..1.0e4, span in 1.0e-3f64..1.0e5, count in 1u32..15) {
            let hi = lo + span;
            let got = nice_ticks(lo, hi, count);
            let want = brute_force_ticks(lo, hi, count);
            prop_assert_eq!(got.len(), want.len());
            for (a, b) in got.iter().zip(&want) {
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{} vs {}", a, b);
            }
        }

        #[test]
        fn ticks_uniform_and_covering(lo in -1.0e3f64..1.0e3, span in 1.0e-2f64..1.0e4, count in 2u32..12) {
            let hi = lo + span;
            let t = nice_ticks(lo, hi, count);
            prop_assert!(t.len() >= 2);
            prop_assert!(t[0] <= lo + 1e-9 * lo.abs().max(1.0));
            prop_assert!(*t.last().unwrap() >= hi - 1e-9 * hi.abs().max(1.0));
            let step = t[1] - t[0];
            for w in t.windows(2) {
                prop_assert!(w[1] > w[0]);
                prop_assert!(((w[1] - w[0]) - step).abs() <= 1e-6 * step);
            }
            if lo <= 0.0 && hi >= 0.0 {
                prop_assert!(t.iter().any(|v| v.abs() < 1e-9 * step));
            }
        }

        #[test]
        fn linear_scale_is_monotone(a in -100.0f64..100.0, b in -100.0f64..100.0) {
            let s = LinearScale { domain: (-100.0, 100.0), range: (0.0, 500.0), ticks: vec![] };
            if a < b {
                prop_assert!(s.apply(a) < s.apply(b));
            }
        }

        #[test]
        fn aggregate_then_sum_preserves_total(vals in proptest::collection::vec((0u8..4, -100i32..100), 1..30)) {
            let rows: Vec<Row> = vals.iter().map(|(k, v)| {
                row(&[("k", Datum::Str(k.to_string())), ("v", Datum::Num(*v as f64))])
            }).collect();
            let t = DataTable::from_rows(rows);
            let out = aggregate_rows(&t, &["k".into()], Some("v"), AggregateOp::Sum).unwrap();
            let total: f64 = out.rows.iter().map(|r| r["v"].as_f64().unwrap()).sum();
            prop_assert_eq!(total, vals.iter().map(|(_, v)| *v as f64).sum::<f64>());
        }
    }
}
