//! Key–value input files.
//!
//! ```text
//! # curve file            # intrinsic file
//! x = s                   kappa = s^2
//! y = 2/9*cosh(3*s)       tau = s
//! z = 2/9*sinh(3*s)       domain = [0.5, 2]
//! domain = [-1, 1]        step = 1e-3
//! ```
//!
//! One `key = value` per line, `#` starts a comment. Values are expressions
//! in `s` (or `t`); `domain` bounds and `step` must be constant expressions.
//! Unknown, duplicate and missing keys are errors.

use std::fmt;

use thiserror::Error;

use crate::expr::{parse_expr, Expr};

#[derive(Debug, Error, Clone, PartialEq)]
pub struct FileError {
    /// 1-based line, `None` for whole-file problems such as missing keys.
    pub line: Option<usize>,
    /// Byte offset from the start of the file.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l} (byte {}): {}", self.offset, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveFile {
    pub x: Expr,
    pub y: Expr,
    pub z: Expr,
    pub domain: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicFile {
    pub kappa: Expr,
    pub tau: Expr,
    pub domain: (f64, f64),
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputFile {
    Curve(CurveFile),
    Intrinsic(IntrinsicFile),
}

const CURVE_KEYS: [&str; 4] = ["x", "y", "z", "domain"];
const INTRINSIC_KEYS: [&str; 4] = ["kappa", "tau", "domain", "step"];

struct Entry<'a> {
    key: &'a str,
    value: &'a str,
    line: usize,
    /// File offset of the first byte of `value`.
    offset: usize,
}

fn err(line: usize, offset: usize, message: impl Into<String>) -> FileError {
    FileError { line: Some(line), offset, message: message.into() }
}

fn entries(text: &str) -> Result<Vec<Entry<'_>>, FileError> {
    let mut out: Vec<Entry> = Vec::new();
    let mut start = 0;
    for (i, raw) in text.split_inclusive('\n').enumerate() {
        let line_no = i + 1;
        let line_start = start;
        start += raw.len();
        let body = raw.split('#').next().unwrap_or("").trim_end_matches(['\n', '\r']);
        if body.trim().is_empty() {
            continue;
        }
        let Some(eq) = body.find('=') else {
            let lead = body.len() - body.trim_start().len();
            return Err(err(line_no, line_start + lead, "expected 'key = value'"));
        };
        let key = body[..eq].trim();
        let rhs = &body[eq + 1..];
        let lead = rhs.len() - rhs.trim_start().len();
        let entry = Entry { key, value: rhs.trim(), line: line_no, offset: line_start + eq + 1 + lead };
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            return Err(err(line_no, line_start, format!("duplicate key '{key}' (first on line {})", prev.line)));
        }
        out.push(entry);
    }
    Ok(out)
}

fn expr(e: &Entry) -> Result<Expr, FileError> {
    parse_expr(e.value).map_err(|pe| err(e.line, e.offset + pe.offset, format!("in '{}': {pe}", e.key)))
}

fn constant(e: &Entry, text: &str, offset: usize) -> Result<f64, FileError> {
    let ex = parse_expr(text).map_err(|pe| err(e.line, offset + pe.offset, format!("in '{}': {pe}", e.key)))?;
    if ex.depends_on_var() {
        return Err(err(e.line, offset, format!("'{}' must be a constant", e.key)));
    }
    let v: f64 = ex.value(0.0).map_err(|ee| err(e.line, offset, ee.to_string()))?;
    if !v.is_finite() {
        return Err(err(e.line, offset, format!("'{}' is not finite", e.key)));
    }
    Ok(v)
}

fn domain(e: &Entry) -> Result<(f64, f64), FileError> {
    let v = e.value;
    let bad = || err(e.line, e.offset, "expected 'domain = [lo, hi]'");
    let inner = v.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
    let comma = inner.find(',').ok_or_else(bad)?;
    let (a, b) = (&inner[..comma], &inner[comma + 1..]);
    let lo = constant(e, a, e.offset + 1)?;
    let hi = constant(e, b, e.offset + 2 + comma)?;
    if lo >= hi {
        return Err(err(e.line, e.offset, format!("empty domain [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

fn take<'a, 'b>(entries: &'b [Entry<'a>], key: &str) -> Result<&'b Entry<'a>, FileError> {
    entries
        .iter()
        .find(|e| e.key == key)
        .ok_or_else(|| FileError { line: None, offset: 0, message: format!("missing key '{key}'") })
}

fn check_keys(entries: &[Entry], allowed: &[&str]) -> Result<(), FileError> {
    for e in entries {
        if !allowed.contains(&e.key) {
            return Err(err(e.line, e.offset - 1, format!("unknown key '{}'; expected one of {allowed:?}", e.key)));
        }
    }
    Ok(())
}

pub fn parse_curve_file(text: &str) -> Result<CurveFile, FileError> {
    let es = entries(text)?;
    check_keys(&es, &CURVE_KEYS)?;
    Ok(CurveFile {
        x: expr(take(&es, "x")?)?,
        y: expr(take(&es, "y")?)?,
        z: expr(take(&es, "z")?)?,
        domain: domain(take(&es, "domain")?)?,
    })
}

pub fn parse_intrinsic_file(text: &str) -> Result<IntrinsicFile, FileError> {
    let es = entries(text)?;
    check_keys(&es, &INTRINSIC_KEYS)?;
    let step_entry = take(&es, "step")?;
    let step = constant(step_entry, step_entry.value, step_entry.offset)?;
    if step <= 0.0 {
        return Err(err(step_entry.line, step_entry.offset, "step must be positive"));
    }
    Ok(IntrinsicFile {
        kappa: expr(take(&es, "kappa")?)?,
        tau: expr(take(&es, "tau")?)?,
        domain: domain(take(&es, "domain")?)?,
        step,
    })
}

/// Parses either kind of file, deciding by the keys present.
pub fn parse_input_file(text: &str) -> Result<InputFile, FileError> {
    let es = entries(text)?;
    let intrinsic = es.iter().any(|e| matches!(e.key, "kappa" | "tau" | "step"));
    if intrinsic {
        parse_intrinsic_file(text).map(InputFile::Intrinsic)
    } else {
        parse_curve_file(text).map(InputFile::Curve)
    }
}
