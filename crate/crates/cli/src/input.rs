use std::path::Path;

use levelraise::kernel::{Matrix, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::CliError;

/// Parses a product of factors such as `-l^2`, `3/4*l`, `l^-1`, `7`.
/// `l` is substituted by the given value when present.
pub fn expr(text: &str, l: Option<&Rational>) -> Result<Rational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty value".into());
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let mut acc = Rational::one();
    for factor in body.split('*') {
        acc *= factor_value(factor.trim(), l)?;
    }
    Ok(if neg { -acc } else { acc })
}

fn factor_value(f: &str, l: Option<&Rational>) -> Result<Rational, String> {
    if f.is_empty() {
        return Err("empty factor".into());
    }
    if let Some(rest) = f.strip_prefix('l') {
        let l = l.ok_or_else(|| format!("`{}` uses l but no --l was given", f))?;
        let k: i32 = match rest.strip_prefix('^') {
            None if rest.is_empty() => 1,
            Some(e) => e.parse().map_err(|_| format!("bad exponent in `{}`", f))?,
            None => return Err(format!("cannot parse `{}`", f)),
        };
        if k < 0 && l.is_zero() {
            return Err("negative power of zero".into());
        }
        return Ok(pow(l, k));
    }
    rational(f)
}

fn pow(x: &Rational, k: i32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k.unsigned_abs() {
        out *= x;
    }
    if k < 0 {
        out.recip()
    } else {
        out
    }
}

/// `a` or `a/b` with integers `a`, `b`.
pub fn rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("`{}` is not a rational number", s);
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(format!("zero denominator in `{}`", s));
            }
            Ok(Rational::new(a, b))
        }
    }
}

pub fn list(text: &str, l: Option<&Rational>) -> Result<Vec<Rational>, String> {
    text.split(',').map(|e| expr(e, l)).collect()
}

/// Rows separated by `;`, entries by `,`.
pub fn inline_matrix(text: &str, l: Option<&Rational>) -> Result<Matrix<Rational>, String> {
    let rows: Vec<Vec<Rational>> = text
        .split(';')
        .map(|r| list(r, l))
        .collect::<Result<_, _>>()?;
    square(rows)
}

fn square(rows: Vec<Vec<Rational>>) -> Result<Matrix<Rational>, String> {
    let n = rows.len();
    if n == 0 {
        return Err("empty matrix".into());
    }
    if let Some(r) = rows.iter().position(|r| r.len() != n) {
        return Err(format!(
            "row {} has {} entries, expected {}",
            r + 1,
            rows[r].len(),
            n
        ));
    }
    Matrix::from_rows(rows, ()).map_err(|e| e.to_string())
}

/// One row per line, entries separated by whitespace or commas; `#` starts a
/// comment.
pub fn matrix_text(text: &str, path: &str) -> Result<Matrix<Rational>, CliError> {
    let mut rows = Vec::new();
    let mut width = None;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Parse {
            path: path.to_string(),
            line: k + 1,
            msg,
        };
        let row: Vec<Rational> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(rational)
            .collect::<Result<_, _>>()
            .map_err(err)?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(err(format!("expected {} entries, found {}", w, row.len())))
            }
            _ => {}
        }
        rows.push(row);
    }
    square(rows).map_err(|msg| CliError::Parse {
        path: path.to_string(),
        line: 0,
        msg,
    })
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}
