//! Plain-text matrix files and number formatting.
//!
//! A matrix file holds the order `n` on its first line, followed by `n`
//! lines of `n` whitespace-separated reals. Readers reject matrices whose
//! mirrored entries differ by more than [`SYMMETRY_TOL`].

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matcore::SymMat;

pub const SYMMETRY_TOL: f64 = 1e-12;

/// Significant digits used for every number this crate prints.
pub const SIG_DIGITS: usize = 15;

/// Formats `x` like C's `%.15g`, always with `.` as the decimal point.
/// Negative zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// Rounds `x` to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    fmt_num(x).parse().expect("formatted number parses")
}

/// Rounds every floating-point number inside a JSON value to
/// [`SIG_DIGITS`] significant digits; integers are left alone.
pub fn round_json(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(num) if num.is_f64() => {
            let x = round_sig(num.as_f64().expect("f64 number"));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *num = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_matrix(x: &SymMat) -> String {
    let n = x.n();
    let mut out = String::new();
    writeln!(out, "{n}").unwrap();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| fmt_num(x.get(i, j))).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut consumed = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let col = line[..consumed + start].chars().count() + 1;
        let tok = &tail[..len];
        consumed += start + len;
        rest = &tail[len..];
        Some((col, tok))
    })
}

pub fn read_matrix(text: &str) -> Result<SymMat> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));

    let (lno, first) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty input; expected the matrix order"))?;
    let mut toks = tokens(first);
    let (col, tok) = toks
        .next()
        .ok_or_else(|| parse_err(lno, 1, "expected the matrix order"))?;
    let n: usize = tok
        .parse()
        .map_err(|_| parse_err(lno, col, format!("invalid matrix order `{tok}`")))?;
    if n == 0 {
        return Err(parse_err(lno, col, "matrix order must be positive"));
    }
    if let Some((col, tok)) = toks.next() {
        return Err(parse_err(lno, col, format!("unexpected token `{tok}` after the order")));
    }

    let mut dense = Vec::with_capacity(n * n);
    for row in 0..n {
        let (lno, line) = lines.next().ok_or_else(|| {
            parse_err(text.lines().count() + 1, 1, format!("missing row {} of {n}", row + 1))
        })?;
        let mut count = 0;
        for (col, tok) in tokens(line) {
            if count == n {
                return Err(parse_err(lno, col, format!("row has more than {n} entries")));
            }
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(lno, col, format!("invalid number `{tok}`")))?;
            if !v.is_finite() {
                return Err(parse_err(lno, col, format!("non-finite number `{tok}`")));
            }
            dense.push(v);
            count += 1;
        }
        if count < n {
            return Err(parse_err(
                lno,
                line.chars().count() + 1,
                format!("row has {count} entries, expected {n}"),
            ));
        }
    }
    for (lno, line) in lines {
        if let Some((col, tok)) = tokens(line).next() {
            return Err(parse_err(lno, col, format!("unexpected trailing content `{tok}`")));
        }
    }
    SymMat::from_dense(n, &dense, SYMMETRY_TOL)
}
