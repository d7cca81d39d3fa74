//! Line-oriented text format for laws and cumulant tables.
//!
//! ```text
//! # comment
//! vars 2
//! order 2
//! family free        (cumulant tables only)
//! 1 : 0, 1
//! 2 : 1/2
//! 1 2 : -3/4, 1/5
//! ```
//!
//! Every word of length `1..=order` must appear exactly once. The soul after
//! the comma defaults to zero. Output is canonical: words by length, then
//! lexicographically, always with an explicit soul.

use std::fmt::Write as _;

use num_traits::Zero;

use super::{all_words, CumulantFamily, Cumulants, Moments, Word, WordTable};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::{GScalar, Rational};

struct Parsed {
    family: Option<CumulantFamily>,
    table: WordTable<GScalar>,
}

fn parse(text: &str, expect_family: bool) -> Result<Parsed> {
    let mut k: Option<usize> = None;
    let mut order: Option<usize> = None;
    let mut family: Option<CumulantFamily> = None;
    let mut entries: Vec<(usize, Word, GScalar)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = line.split_once(':') {
            let (k, order) = match (k, order) {
                (Some(k), Some(o)) => (k, o),
                _ => return Err(Error::parse(line_no, "entry before 'vars' and 'order' headers")),
            };
            let word = parse_word(lhs, k, order, line_no)?;
            let value = parse_value(rhs, line_no)?;
            entries.push((line_no, word, value));
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or_default();
        let arg = parts.next();
        if parts.next().is_some() {
            return Err(Error::parse(line_no, format!("trailing text after {key:?}")));
        }
        let arg = arg.ok_or_else(|| Error::parse(line_no, format!("directive {key:?} needs a value")))?;
        let positive = |slot: &mut Option<usize>| -> Result<()> {
            if slot.is_some() {
                return Err(Error::parse(line_no, format!("duplicate {key:?} header")));
            }
            let v: usize = arg
                .parse()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::parse(line_no, format!("{key} must be a positive integer")))?;
            *slot = Some(v);
            Ok(())
        };
        match key {
            "vars" => {
                positive(&mut k)?;
                if k > Some(u8::MAX as usize) {
                    return Err(Error::parse(line_no, "at most 255 variables"));
                }
            }
            "order" => positive(&mut order)?,
            "family" if expect_family => {
                if family.is_some() {
                    return Err(Error::parse(line_no, "duplicate \"family\" header"));
                }
                family = Some(
                    arg.parse()
                        .map_err(|_| Error::parse(line_no, format!("unknown family {arg:?}")))?,
                );
            }
            _ => return Err(Error::parse(line_no, format!("unknown directive {key:?}"))),
        }
        if !entries.is_empty() {
            return Err(Error::parse(line_no, "header after entries"));
        }
    }

    let last_line = text.lines().count().max(1);
    let k = k.ok_or_else(|| Error::parse(last_line, "missing 'vars' header"))?;
    let order = order.ok_or_else(|| Error::parse(last_line, "missing 'order' header"))?;
    if expect_family && family.is_none() {
        return Err(Error::parse(last_line, "missing 'family' header"));
    }

    let size = super::table_size(k, order).map_err(|e| Error::parse(1, e.to_string()))?;
    let mut slots: Vec<Option<GScalar>> = vec![None; size];
    for (line_no, w, v) in entries {
        let slot = &mut slots[super::word_index(k, &w)];
        if slot.is_some() {
            return Err(Error::parse(line_no, format!("duplicate entry for word [{w}]")));
        }
        *slot = Some(v);
    }
    let mut values = slots.into_iter();
    let table = WordTable::try_from_fn(k, order, |w| {
        values
            .next()
            .flatten()
            .ok_or_else(|| Error::parse(last_line, format!("missing entry for word [{w}]")))
    })?;
    Ok(Parsed { family, table })
}

fn parse_word(text: &str, k: usize, order: usize, line: usize) -> Result<Word> {
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        let l: usize = tok
            .parse()
            .map_err(|_| Error::parse(line, format!("bad letter {tok:?}")))?;
        if l == 0 || l > k {
            return Err(Error::parse(line, format!("letter {l} outside 1..={k}")));
        }
        letters.push(l as u8);
    }
    if letters.is_empty() {
        return Err(Error::parse(line, "empty word"));
    }
    if letters.len() > order {
        return Err(Error::parse(
            line,
            format!("word of length {} exceeds order {order}", letters.len()),
        ));
    }
    Ok(Word::new(letters))
}

fn parse_value(text: &str, line: usize) -> Result<GScalar> {
    let mut parts = text.split(',');
    let body = parts.next().unwrap_or_default();
    let soul = parts.next();
    if parts.next().is_some() {
        return Err(Error::parse(line, "too many values"));
    }
    let body = parse_rational(body).map_err(|m| Error::parse(line, m))?;
    let soul = match soul {
        Some(s) => parse_rational(s).map_err(|m| Error::parse(line, m))?,
        None => Rational::zero(),
    };
    Ok(GScalar::new(body, soul))
}

fn write_table(header: &str, table: &WordTable<GScalar>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vars {}", table.k());
    let _ = writeln!(out, "order {}", table.order());
    out.push_str(header);
    for (w, v) in all_words(table.k(), table.order()).zip(table.values()) {
        let _ = writeln!(
            out,
            "{w} : {}, {}",
            format_rational(&v.body),
            format_rational(&v.soul)
        );
    }
    out
}

pub fn read_law(text: &str) -> Result<Moments<GScalar>> {
    parse(text, false).map(|p| Moments::new(p.table))
}

pub fn write_law(law: &Moments<GScalar>) -> String {
    write_table("", law.table())
}

pub fn read_cumulants(text: &str) -> Result<Cumulants<GScalar>> {
    let p = parse(text, true)?;
    Ok(Cumulants::new(p.family.expect("checked above"), p.table))
}

pub fn write_cumulants(c: &Cumulants<GScalar>) -> String {
    write_table(&format!("family {}\n", c.family), c.table())
}
