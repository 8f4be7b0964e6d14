//! Plain-text matrix files.
//!
//! Each matrix starts with a `# dim N` line followed by `N` rows of `N`
//! whitespace-separated entries written as `a`, `bi`, `a+bi` or `a-bi`.
//! Blank lines and other `#` lines are ignored.

use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses one complex entry.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent or leading
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Option<f64> {
        match s {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => s.parse().ok(),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// Formats an entry with 17 significant digits, so parsing restores it
/// exactly.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

pub fn format_matrix(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = format!("# dim {n}\n");
    for r in 0..n {
        let row: Vec<String> = (0..n).map(|c| format_complex(m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// All matrices in a file, in order.
pub fn parse_matrices(text: &str) -> Result<Vec<ComplexMatrix>> {
    let mut out = Vec::new();
    let mut current: Option<(usize, usize, Vec<Complex64>)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut words = rest.split_whitespace();
            if words.next() == Some("dim") {
                if let Some((_, start, _)) = &current {
                    return Err(parse_error(
                        line_no,
                        format!("matrix started at line {start} is incomplete"),
                    ));
                }
                let n: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| parse_error(line_no, "expected `# dim N`"))?;
                if !(2..=8).contains(&n) {
                    return Err(parse_error(line_no, format!("dimension {n} outside 2..=8")));
                }
                current = Some((n, line_no, Vec::with_capacity(n * n)));
            }
            continue;
        }
        let Some((n, _, entries)) = current.as_mut() else {
            return Err(parse_error(line_no, "entries before a `# dim N` header"));
        };
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != *n {
            return Err(parse_error(
                line_no,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        for (col, tok) in row.iter().enumerate() {
            let z = parse_complex(tok)
                .ok_or_else(|| parse_error(line_no, format!("cannot parse entry {} `{tok}`", col + 1)))?;
            entries.push(z);
        }
        if entries.len() == *n * *n {
            let (n, _, entries) = current.take().expect("matrix in progress");
            out.push(ComplexMatrix::new(n, entries)?);
        }
    }
    if let Some((_, start, _)) = current {
        return Err(parse_error(start, "matrix is incomplete at end of file"));
    }
    Ok(out)
}
