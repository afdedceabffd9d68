//! Matrix files: a `dim N` line, then `N` rows of `N` entries such as
//! `0.6`, `-0.8i` or `0.5+0.25i`. Lines starting with `#` are comments.

use num_complex::Complex64;
use qtm_core::numerics::{CertifiedReal, Cx, DenseMatrix, Tracked};

use crate::error::FormatError;
use crate::qtm_text::parse_real;

/// A matrix with entries kept both exactly and as `f64`.
#[derive(Clone, Debug)]
pub struct MatrixFile {
    pub dense: DenseMatrix,
    /// Row-major exact entries.
    pub exact: Vec<Cx<CertifiedReal>>,
}

impl MatrixFile {
    /// Sparse columns over certified scalars.
    pub fn certified_columns(&self) -> Vec<Vec<(usize, Cx<Tracked>)>> {
        let n = self.dense.dim();
        (0..n)
            .map(|c| {
                (0..n)
                    .map(|r| {
                        let z = &self.exact[r * n + c];
                        (
                            r,
                            Cx::new(Tracked::lift(z.re.clone()), Tracked::lift(z.im.clone())),
                        )
                    })
                    .collect()
            })
            .collect()
    }
}

fn split_complex(tok: &str) -> Option<(&str, &str)> {
    let Some(body) = tok.strip_suffix('i') else {
        return Some((tok, "0"));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E' | b'('));
    Some(match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    })
}

fn imag_literal(s: &str) -> &str {
    match s {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    }
}

pub fn parse_entry(tok: &str) -> Option<Cx<CertifiedReal>> {
    let (re, im) = split_complex(tok)?;
    let im = if tok.ends_with('i') {
        imag_literal(im)
    } else {
        im
    };
    Some(Cx {
        re: parse_real(re)?,
        im: parse_real(im)?,
    })
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile, FormatError> {
    let mut dim: Option<usize> = None;
    let mut exact = Vec::new();
    let mut rows = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some(n) = dim else {
            let n = content
                .strip_prefix("dim")
                .and_then(|r| r.trim().parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| FormatError::at(line, "expected `dim N` with N >= 1"))?;
            dim = Some(n);
            continue;
        };
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != n {
            return Err(FormatError::at(
                line,
                format!("row has {} entries, expected {n}", toks.len()),
            ));
        }
        if rows == n {
            return Err(FormatError::at(line, "more rows than the dimension"));
        }
        for t in toks {
            exact.push(
                parse_entry(t).ok_or_else(|| FormatError::at(line, format!("bad entry {t:?}")))?,
            );
        }
        rows += 1;
    }
    let n = dim.ok_or_else(|| FormatError::plain("missing dim line"))?;
    if rows != n {
        return Err(FormatError::plain(format!("{rows} rows for dimension {n}")));
    }
    let entries = exact
        .iter()
        .map(|z| Complex64::new(z.re.to_f64(), z.im.to_f64()))
        .collect();
    let dense =
        DenseMatrix::from_entries(n, entries).map_err(|e| FormatError::plain(e.to_string()))?;
    Ok(MatrixFile { dense, exact })
}

/// Text form with shortest round-trip decimals.
pub fn format_matrix(m: &DenseMatrix) -> String {
    let n = m.dim();
    let mut s = format!("dim {n}\n");
    for r in 0..n {
        let row: Vec<String> = (0..n)
            .map(|c| {
                let z = m.get(r, c);
                if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
                    format!("{}-{}i", z.re, -z.im)
                } else {
                    format!("{}+{}i", z.re, z.im)
                }
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}
