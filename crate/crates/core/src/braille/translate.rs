use thiserror::Error;

use super::table::{ContractionPosition, TranslationTable};
use super::{BrailleCell, BrailleRun, Grade};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("character {ch:?} at offset {offset} has no braille translation")]
pub struct TranslateError {
    pub ch: char,
    pub offset: usize,
}

/// Translate print text to braille cells.
///
/// * each maximal digit run gets one numeric indicator; `.` and `,` between
///   digits stay inside the run,
/// * a capital letter gets the capital indicator, an all-caps letter run of
///   two or more letters gets the capital word indicator instead,
/// * a letter a-j directly after a digit gets the grade 1 indicator so it
///   does not read as a digit,
/// * Grade 2 tries contractions longest first before falling back to letters.
pub fn translate_text(
    text: &str,
    grade: Grade,
    table: &TranslationTable,
) -> Result<BrailleRun, TranslateError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::with_capacity(chars.len() + 4);
    let mut numeric = false;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if let Some(cell) = table.digit(c) {
            if !numeric {
                out.push(table.numeric_indicator);
                numeric = true;
            }
            out.push(cell);
            i += 1;
        } else if numeric
            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())
            && table.numeric_punctuation.contains_key(&c)
        {
            out.push(table.numeric_punctuation[&c]);
            i += 1;
        } else if c == '-'
            && !table.minus.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())
            && (i == 0 || !chars[i - 1].is_ascii_alphanumeric())
        {
            out.extend_from_slice(&table.minus);
            numeric = false;
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let end = i + chars[i..].iter().take_while(|c| c.is_ascii_alphabetic()).count();
            translate_letters(&chars, i, end, grade, table, &mut out);
            numeric = false;
            i = end;
        } else if c == ' ' {
            out.push(BrailleCell::BLANK);
            numeric = false;
            i += 1;
        } else if let Some(cells) = table.punctuation.get(&c) {
            out.extend_from_slice(cells);
            numeric = false;
            i += 1;
        } else {
            return Err(TranslateError { ch: c, offset: i });
        }
    }
    Ok(BrailleRun {
        cells: out,
        source_text: text.to_string(),
        grade,
        table_id: table.id.clone(),
    })
}

/// Translate the letter run `chars[start..end]`.
fn translate_letters(
    chars: &[char],
    start: usize,
    end: usize,
    grade: Grade,
    table: &TranslationTable,
    out: &mut Vec<BrailleCell>,
) {
    let run = &chars[start..end];
    let caps_word = run.len() >= 2 && run.iter().all(|c| c.is_ascii_uppercase());
    if caps_word {
        out.push(table.capital_indicator);
        out.push(table.capital_indicator);
    }
    let after_digit = start > 0 && chars[start - 1].is_ascii_digit();
    let whole_word_ok = !after_digit && chars.get(end).is_none_or(|c| !c.is_ascii_digit());

    let mut k = start;
    while k < end {
        let mut emitted: Option<(bool, &[BrailleCell], usize)> = None;
        if grade == Grade::Two {
            for con in table.contractions() {
                let len = con.pattern.len();
                if k + len > end {
                    continue;
                }
                let placed = match con.position {
                    ContractionPosition::Anywhere => true,
                    ContractionPosition::Word => k == start && k + len == end && whole_word_ok,
                    ContractionPosition::Middle => k > start && k + len < end,
                    ContractionPosition::NotStart => k > start,
                };
                if !placed {
                    continue;
                }
                let seg = &chars[k..k + len];
                if !seg.iter().zip(con.pattern.chars()).all(|(a, b)| a.to_ascii_lowercase() == b) {
                    continue;
                }
                let capital = if caps_word || seg.iter().all(|c| c.is_ascii_lowercase()) {
                    Some(false)
                } else if seg[0].is_ascii_uppercase() && seg[1..].iter().all(|c| c.is_ascii_lowercase()) {
                    Some(true)
                } else {
                    None
                };
                if let Some(capital) = capital {
                    emitted = Some((capital, &con.cells, len));
                    break;
                }
            }
        }
        let letter_cell;
        let (capital, cells, len) = match emitted {
            Some(e) => e,
            None => {
                let c = chars[k];
                letter_cell = [table.letter(c).expect("ascii letter")];
                (c.is_ascii_uppercase() && !caps_word, &letter_cell[..], 1)
            }
        };
        if capital {
            out.push(table.capital_indicator);
        } else if k == start && after_digit && !caps_word && table.digits.contains(&cells[0]) {
            out.push(table.grade1_indicator);
        }
        out.extend_from_slice(cells);
        k += len;
    }
}
