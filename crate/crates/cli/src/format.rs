//! Reading and writing matrix polynomials.
//!
//! Two on-disk representations are supported, selected by file
//! extension:
//!
//! * **Text** (any extension other than `.json`): a header line
//!   `matpoly m n`, then for each coefficient index `i = 0..n` a line
//!   `coeff i` followed by `m` rows of `m` whitespace-separated complex
//!   entries. Entries are written `a+bi` (`a` for a real value, `bi`
//!   for a purely imaginary one). `#` starts a comment that runs to the
//!   end of the line.
//! * **JSON** (`.json`): an object `{"m": .., "n": .., "coeffs": [..]}`
//!   where `coeffs` holds `n + 1` arrays, each a row-major list of
//!   `m * m` `[re, im]` pairs.
//!
//! Values survive a write/parse round trip exactly: numbers are printed
//! with enough digits to reproduce the original bit pattern.

use std::path::Path;

use num_complex::Complex64;
use polyeig::matpoly::MatPolyError;
use polyeig::{ComplexMatrix, MatrixPolynomial};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Json(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Build(#[from] MatPolyError),
}

fn fmt_f64(x: f64) -> String {
    // `{:e}` prints the shortest decimal that parses back to the same
    // bits, keeping files compact without losing precision.
    format!("{x:e}")
}

/// Formats one complex entry in the `a+bi` grammar.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_f64(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_f64(z.im))
    } else {
        let im = fmt_f64(z.im);
        if im.starts_with('-') {
            format!("{}{}i", fmt_f64(z.re), im)
        } else {
            format!("{}+{}i", fmt_f64(z.re), im)
        }
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64, FormatError> {
    s.parse::<f64>().map_err(|_| FormatError::Parse {
        line,
        msg: format!("cannot read `{s}` as a number"),
    })
}

/// Parses one `a+bi` entry.
pub fn parse_complex(token: &str, line: usize) -> Result<Complex64, FormatError> {
    let bad = |msg: String| FormatError::Parse { line, msg };
    if token.is_empty() {
        return Err(bad("empty entry".into()));
    }
    let Some(body) = token.strip_suffix(['i', 'I']) else {
        return Ok(Complex64::new(parse_f64(token, line)?, 0.0));
    };
    // Split off the imaginary part at the last sign that is neither the
    // leading sign nor part of an exponent.
    let bytes = body.as_bytes();
    let split = body
        .char_indices()
        .rev()
        .find(|&(idx, ch)| {
            (ch == '+' || ch == '-') && idx > 0 && !matches!(bytes[idx - 1], b'e' | b'E')
        })
        .map(|(idx, _)| idx);
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let re = if re_str.is_empty() {
        0.0
    } else {
        parse_f64(re_str, line)?
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => parse_f64(s, line)?,
    };
    Ok(Complex64::new(re, im))
}

/// Renders a polynomial in the text format. Powers of `x` stripped
/// during normalization are written back as explicit zero blocks so
/// that a parse of the output reproduces the value exactly.
pub fn write_text(p: &MatrixPolynomial) -> String {
    let m = p.size();
    let n = p.degree() + p.stripped_power();
    let mut out = String::new();
    out.push_str(&format!("matpoly {m} {n}\n"));
    let zero = ComplexMatrix::zeros(m, m);
    for i in 0..=n {
        out.push_str(&format!("coeff {i}\n"));
        let block = if i < p.stripped_power() {
            &zero
        } else {
            p.coeff(i - p.stripped_power())
        };
        for r in 0..m {
            let row: Vec<String> = (0..m).map(|c| format_complex(block.get(r, c))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parses the text format.
pub fn parse_text(input: &str) -> Result<MatrixPolynomial, FormatError> {
    let bad = |line: usize, msg: String| FormatError::Parse { line, msg };
    // Non-blank lines with comments removed, tagged with 1-based numbers.
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| bad(1, "empty file: expected `matpoly m n` header".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "matpoly" {
        return Err(bad(hline, format!("expected `matpoly m n`, found `{header}`")));
    }
    let m: usize = tokens[1]
        .parse()
        .map_err(|_| bad(hline, format!("bad size `{}`", tokens[1])))?;
    let n: usize = tokens[2]
        .parse()
        .map_err(|_| bad(hline, format!("bad degree `{}`", tokens[2])))?;
    if m == 0 {
        return Err(bad(hline, "size m must be positive".into()));
    }

    let mut raw = Vec::with_capacity(n + 1);
    let mut last_line = hline;
    for i in 0..=n {
        let (lnum, l) = lines
            .next()
            .ok_or_else(|| bad(last_line, format!("expected `coeff {i}`")))?;
        if l != format!("coeff {i}") {
            return Err(bad(lnum, format!("expected `coeff {i}`, found `{l}`")));
        }
        last_line = lnum;
        let mut block = ComplexMatrix::zeros(m, m);
        for r in 0..m {
            let (lnum, l) = lines
                .next()
                .ok_or_else(|| bad(last_line, format!("expected row {r} of coeff {i}")))?;
            last_line = lnum;
            let entries: Vec<&str> = l.split_whitespace().collect();
            if entries.len() != m {
                return Err(bad(
                    lnum,
                    format!("expected {m} entries in the row, found {}", entries.len()),
                ));
            }
            for (c, tok) in entries.iter().enumerate() {
                block.set(r, c, parse_complex(tok, lnum)?);
            }
        }
        raw.push(block);
    }
    if let Some((lnum, l)) = lines.next() {
        return Err(bad(lnum, format!("unexpected trailing content `{l}`")));
    }
    Ok(MatrixPolynomial::normalize(raw)?)
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    m: usize,
    n: usize,
    coeffs: Vec<Vec<[f64; 2]>>,
}

/// Renders a polynomial in the JSON format.
pub fn write_json(p: &MatrixPolynomial) -> String {
    let m = p.size();
    let n = p.degree() + p.stripped_power();
    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut flat = Vec::with_capacity(m * m);
        if i >= p.stripped_power() {
            let block = p.coeff(i - p.stripped_power());
            for r in 0..m {
                for c in 0..m {
                    let z = block.get(r, c);
                    flat.push([z.re, z.im]);
                }
            }
        } else {
            flat.resize(m * m, [0.0, 0.0]);
        }
        coeffs.push(flat);
    }
    serde_json::to_string_pretty(&JsonPoly { m, n, coeffs }).expect("serializable")
}

/// Parses the JSON format.
pub fn parse_json(input: &str) -> Result<MatrixPolynomial, FormatError> {
    let jp: JsonPoly =
        serde_json::from_str(input).map_err(|e| FormatError::Json(e.to_string()))?;
    if jp.m == 0 {
        return Err(FormatError::Json("size m must be positive".into()));
    }
    if jp.coeffs.len() != jp.n + 1 {
        return Err(FormatError::Json(format!(
            "expected {} coefficient blocks, found {}",
            jp.n + 1,
            jp.coeffs.len()
        )));
    }
    let mut raw = Vec::with_capacity(jp.n + 1);
    for (i, flat) in jp.coeffs.iter().enumerate() {
        if flat.len() != jp.m * jp.m {
            return Err(FormatError::Json(format!(
                "coeff {i}: expected {} entries, found {}",
                jp.m * jp.m,
                flat.len()
            )));
        }
        let mut block = ComplexMatrix::zeros(jp.m, jp.m);
        for r in 0..jp.m {
            for c in 0..jp.m {
                let [re, im] = flat[r * jp.m + c];
                block.set(r, c, Complex64::new(re, im));
            }
        }
        raw.push(block);
    }
    Ok(MatrixPolynomial::normalize(raw)?)
}

/// Reads a polynomial from a file, selecting the format by extension.
pub fn read_file(path: &Path) -> Result<MatrixPolynomial, FormatError> {
    let content = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_json(&content)
    } else {
        parse_text(&content)
    }
}
