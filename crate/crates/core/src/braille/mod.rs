//! Braille translation, measurement and dot geometry.
//!
//! Cells are six-dot masks: bit `n - 1` is dot `n`, dots 1-3 down the left
//! column and 4-6 down the right column.

mod table;
mod translate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;

pub use table::{
    Contraction, ContractionPosition, TableError, TableRegistry, TranslationTable, UEB_G1_ID, UEB_G2_ID,
};
pub use translate::{translate_text, TranslateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct BrailleCell(u8);

impl BrailleCell {
    pub const BLANK: BrailleCell = BrailleCell(0);

    pub fn new(mask: u8) -> Option<Self> {
        (mask < 64).then_some(BrailleCell(mask))
    }

    /// Build a cell from dot numbers, e.g. `&[3, 4, 5, 6]`.
    pub fn from_dots(dots: &[u8]) -> Option<Self> {
        let mut mask = 0u8;
        for &d in dots {
            if !(1..=6).contains(&d) {
                return None;
            }
            mask |= 1 << (d - 1);
        }
        Some(BrailleCell(mask))
    }

    /// Parse a dot-number string like `"2346"`. `"0"` or `""` is the blank cell.
    pub fn parse_dots(s: &str) -> Option<Self> {
        if s.is_empty() || s == "0" {
            return Some(Self::BLANK);
        }
        let mut dots = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c.to_digit(10)? as u8;
            if dots.contains(&d) {
                return None;
            }
            dots.push(d);
        }
        Self::from_dots(&dots)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn has_dot(self, dot: u8) -> bool {
        (1..=6).contains(&dot) && self.0 & (1 << (dot - 1)) != 0
    }

    pub fn dots(self) -> impl Iterator<Item = u8> {
        (1..=6).filter(move |&d| self.has_dot(d))
    }

    pub fn to_unicode(self) -> char {
        char::from_u32(0x2800 + self.0 as u32).expect("braille block is valid unicode")
    }

    pub fn from_unicode(c: char) -> Option<Self> {
        let cp = c as u32;
        (0x2800..0x2840).contains(&cp).then(|| BrailleCell((cp - 0x2800) as u8))
    }

    pub fn to_ascii_brf(self) -> char {
        BRF_BY_MASK[self.0 as usize] as char
    }

    pub fn from_ascii_brf(c: char) -> Option<Self> {
        let upper = c.to_ascii_uppercase() as u8;
        BRF_BY_MASK.iter().position(|&b| b == upper).map(|i| BrailleCell(i as u8))
    }
}

impl fmt::Display for BrailleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dots: String = self.dots().map(|d| char::from(b'0' + d)).collect();
        if dots.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&dots)
        }
    }
}

/// North American ASCII braille, indexed by dot mask.
const BRF_BY_MASK: &[u8; 64] =
    b" A1B'K2L@CIF/MSP\"E3H9O6R^DJG>NTQ,*5<-U8V.%[$+X!&;:4\\0Z7(_?W]#Y)=";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Grade {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Grade {
    pub fn number(self) -> u8 {
        match self {
            Grade::One => 1,
            Grade::Two => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BrailleRun {
    pub cells: Vec<BrailleCell>,
    pub source_text: String,
    pub grade: Grade,
    pub table_id: String,
}

impl BrailleRun {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn to_unicode(&self) -> String {
        encode_run(self, BrailleFormat::Unicode)
    }

    pub fn to_ascii_brf(&self) -> String {
        encode_run(self, BrailleFormat::AsciiBrf)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrailleFormat {
    Unicode,
    AsciiBrf,
}

pub fn encode_run(run: &BrailleRun, format: BrailleFormat) -> String {
    run.cells
        .iter()
        .map(|c| match format {
            BrailleFormat::Unicode => c.to_unicode(),
            BrailleFormat::AsciiBrf => c.to_ascii_brf(),
        })
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{0:?} at offset {1} is not a braille pattern")]
pub struct DecodeError(pub char, pub usize);

/// Inverse of [`encode_run`] in unicode form.
pub fn decode_unicode(text: &str) -> Result<Vec<BrailleCell>, DecodeError> {
    text.chars()
        .enumerate()
        .map(|(i, c)| BrailleCell::from_unicode(c).ok_or(DecodeError(c, i)))
        .collect()
}

/// Physical cell geometry in output pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BrailleMetrics {
    pub dot_diameter: f64,
    pub dot_pitch: f64,
    pub cell_pitch: f64,
    pub line_pitch: f64,
    pub font_size: f64,
}

impl BrailleMetrics {
    pub const BASE_DPI: f64 = 96.0;

    /// Standard North American cell geometry (about 1.5 mm dots, 6.1 mm
    /// cell advance, 10 mm line advance) expressed at `dpi`.
    pub fn at_dpi(dpi: f64, font_size: f64) -> Self {
        let s = dpi / Self::BASE_DPI;
        BrailleMetrics {
            dot_diameter: 6.0 * s,
            dot_pitch: 9.0 * s,
            cell_pitch: 23.0 * s,
            line_pitch: 38.0 * s,
            font_size,
        }
    }

    /// Height of the inked part of a cell.
    pub fn cell_height(&self) -> f64 {
        2.0 * self.dot_pitch + self.dot_diameter
    }

    /// Width of the inked part of `cells` cells, without the trailing
    /// inter-cell space that [`measure_run`] includes.
    pub fn ink_width(&self, cells: usize) -> f64 {
        if cells == 0 {
            0.0
        } else {
            (cells - 1) as f64 * self.cell_pitch + self.dot_pitch + self.dot_diameter
        }
    }

    pub fn is_valid(&self) -> bool {
        self.dot_diameter > 0.0
            && self.dot_pitch < self.cell_pitch
            && self.cell_pitch < self.line_pitch
            && self.dot_diameter <= self.dot_pitch
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSize {
    pub width: f64,
    pub height: f64,
}

/// Advance size of a single-line run.
pub fn measure_run(run: &BrailleRun, metrics: &BrailleMetrics) -> RunSize {
    RunSize {
        width: run.len() as f64 * metrics.cell_pitch,
        height: metrics.line_pitch,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dot {
    pub center: Point,
    pub diameter: f64,
}

/// Emit one circle per raised dot. `origin` is the centre of dot 1 of the
/// first cell.
pub fn run_to_dots(run: &BrailleRun, metrics: &BrailleMetrics, origin: Point) -> Vec<Dot> {
    let mut out = Vec::new();
    for (i, cell) in run.cells.iter().enumerate() {
        for d in cell.dots() {
            let col = if d <= 3 { 0.0 } else { 1.0 };
            let row = ((d - 1) % 3) as f64;
            out.push(Dot {
                center: Point::new(
                    origin.x + i as f64 * metrics.cell_pitch + col * metrics.dot_pitch,
                    origin.y + row * metrics.dot_pitch,
                ),
                diameter: metrics.dot_diameter,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(cells: &[u8]) -> BrailleRun {
        BrailleRun {
            cells: cells.iter().map(|&m| BrailleCell::new(m).unwrap()).collect(),
            source_text: "x".into(),
            grade: Grade::One,
            table_id: "t".into(),
        }
    }

    #[test]
    fn capital_indicator_codepoint() {
        let cap = BrailleCell::from_dots(&[6]).unwrap();
        assert_eq!(cap.to_unicode(), '\u{2820}');
        assert_eq!(cap.to_ascii_brf(), ',');
    }

    #[test]
    fn numeric_indicator_is_hash() {
        let num = BrailleCell::parse_dots("3456").unwrap();
        assert_eq!(num.mask(), 60);
        assert_eq!(num.to_ascii_brf(), '#');
    }

    #[test]
    fn brf_letters_follow_standard_table() {
        let letters = [
            "1", "12", "14", "145", "15", "124", "1245", "125", "24", "245", "13", "123", "134",
            "1345", "135", "1234", "12345", "1235", "234", "2345", "136", "1236", "2456", "1346",
            "13456", "1356",
        ];
        for (i, dots) in letters.iter().enumerate() {
            let cell = BrailleCell::parse_dots(dots).unwrap();
            assert_eq!(cell.to_ascii_brf(), (b'A' + i as u8) as char, "letter {i}");
        }
        assert_eq!(BrailleCell::parse_dots("34").unwrap().to_ascii_brf(), '/');
    }

    #[test]
    fn brf_round_trip_all_cells() {
        for m in 0..64u8 {
            let c = BrailleCell::new(m).unwrap();
            assert_eq!(BrailleCell::from_ascii_brf(c.to_ascii_brf()), Some(c));
            assert_eq!(BrailleCell::from_unicode(c.to_unicode()), Some(c));
        }
    }

    #[test]
    fn parse_dots_rejects_garbage() {
        assert!(BrailleCell::parse_dots("7").is_none());
        assert!(BrailleCell::parse_dots("11").is_none());
        assert!(BrailleCell::parse_dots("a").is_none());
        assert_eq!(BrailleCell::parse_dots("0"), Some(BrailleCell::BLANK));
    }

    #[test]
    fn measure_is_cells_times_pitch() {
        let m = BrailleMetrics::at_dpi(96.0, 24.0);
        assert!(m.is_valid());
        assert_eq!(measure_run(&run(&[1; 10]), &m).width, 230.0);
        assert_eq!(measure_run(&run(&[]), &m).width, 0.0);
        assert_eq!(measure_run(&run(&[1; 10]), &m).height, 38.0);
        assert!(measure_run(&run(&[1; 9]), &m).width < measure_run(&run(&[1; 10]), &m).width);
    }

    #[test]
    fn full_cell_is_six_dots_in_grid() {
        let m = BrailleMetrics::at_dpi(96.0, 24.0);
        let dots = run_to_dots(&run(&[63]), &m, Point::new(0.0, 0.0));
        assert_eq!(dots.len(), 6);
        let mut xs: Vec<f64> = dots.iter().map(|d| d.center.x).collect();
        xs.dedup();
        let mut ys: Vec<f64> = dots.iter().map(|d| d.center.y).collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        assert_eq!(ys, vec![0.0, 9.0, 18.0]);
        assert!(dots.iter().all(|d| d.center.x == 0.0 || d.center.x == 9.0));
        assert!(dots.iter().all(|d| d.diameter == 6.0));
    }

    #[test]
    fn letter_a_is_top_left_dot() {
        let m = BrailleMetrics::at_dpi(96.0, 24.0);
        let dots = run_to_dots(&run(&[1]), &m, Point::new(10.0, 20.0));
        assert_eq!(dots.len(), 1);
        assert_eq!(dots[0].center, Point::new(10.0, 20.0));
    }

    #[test]
    fn second_cell_offset_by_cell_pitch() {
        let m = BrailleMetrics::at_dpi(96.0, 24.0);
        // "no": n = 1345, o = 135
        let n = BrailleCell::parse_dots("1345").unwrap().mask();
        let o = BrailleCell::parse_dots("135").unwrap().mask();
        let dots = run_to_dots(&run(&[n, o]), &m, Point::new(0.0, 0.0));
        let first: Vec<f64> = dots[..4].iter().map(|d| d.center.x).collect();
        let second: Vec<f64> = dots[4..].iter().map(|d| d.center.x).collect();
        assert_eq!(first.iter().cloned().fold(f64::INFINITY, f64::min) + 23.0, second[0]);
        assert!(second.iter().all(|x| *x == 23.0 || *x == 32.0));
    }

    #[test]
    fn metrics_scale_with_dpi() {
        let m = BrailleMetrics::at_dpi(192.0, 24.0);
        assert_eq!(m.cell_pitch, 46.0);
        assert_eq!(m.cell_height(), 48.0);
    }
}
