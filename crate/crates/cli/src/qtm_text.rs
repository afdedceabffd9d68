//! Machine description files.
//!
//! ```text
//! states 1 q0=0
//! alphabet 3 blank=0
//! symbols _ 0 1
//! time 0 1
//! delta 0 1 -> 0 1 1 sqrt(0.5) 0
//! ```
//!
//! `symbols` and `time` are optional. `time c0 c1 ...` gives the step bound
//! `c0 + c1 n + ...` for inputs of length `n`. Amplitudes are decimals,
//! fractions `a/b`, or `sqrt(...)` of either, optionally negated.

use qtm_core::numerics::CertifiedReal;
use qtm_core::qtm::{Amplitude, Move, QtmSpec};

use crate::error::FormatError;
use crate::symbols::Symbols;

#[derive(Clone, Debug)]
pub struct QtmFile {
    pub spec: QtmSpec,
    pub symbols: Symbols,
    /// Coefficients of the step bound, lowest degree first.
    pub time: Option<Vec<u64>>,
}

impl QtmFile {
    /// Step bound for inputs of length `n`, if the file gives one.
    pub fn steps_for(&self, n: usize) -> Option<usize> {
        let coeffs = self.time.as_ref()?;
        let mut acc: u64 = 0;
        for c in coeffs.iter().rev() {
            acc = acc.checked_mul(n as u64)?.checked_add(*c)?;
        }
        usize::try_from(acc).ok()
    }
}

/// Parses a real literal exactly.
pub fn parse_real(tok: &str) -> Option<CertifiedReal> {
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let value = match body.strip_prefix("sqrt(").and_then(|b| b.strip_suffix(')')) {
        Some(inner) => {
            let x = parse_ratio(inner)?;
            x.sqrt().ok()?
        }
        None => parse_ratio(body)?,
    };
    Some(if neg { value.neg() } else { value })
}

fn parse_ratio(s: &str) -> Option<CertifiedReal> {
    match s.split_once('/') {
        Some((a, b)) => {
            let a = CertifiedReal::from_decimal_str(a)?;
            let b = CertifiedReal::from_decimal_str(b)?;
            a.div(&b).ok()
        }
        None => CertifiedReal::from_decimal_str(s),
    }
}

fn parse_usize(tok: Option<&str>, what: &str, line: usize) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::at(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| {
        FormatError::at(
            line,
            format!("{what} {tok:?} is not a non-negative integer"),
        )
    })
}

fn parse_keyed<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str, FormatError> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| FormatError::at(line, format!("expected {key}=<index>")))
}

fn parse_move(tok: Option<&str>, line: usize) -> Result<Move, FormatError> {
    match tok {
        Some("-1" | "L") => Ok(Move::Left),
        Some("0" | "S" | "N") => Ok(Move::Stay),
        Some("1" | "+1" | "R") => Ok(Move::Right),
        other => Err(FormatError::at(
            line,
            format!("head move {other:?} must be -1, 0 or 1"),
        )),
    }
}

pub fn parse_qtm(text: &str) -> Result<QtmFile, FormatError> {
    let mut states: Option<(usize, usize)> = None;
    let mut alphabet: Option<usize> = None;
    let mut names: Option<Vec<char>> = None;
    let mut time: Option<Vec<u64>> = None;
    let mut deltas: Vec<(usize, Vec<&str>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("states") => {
                let n = parse_usize(toks.next(), "state count", line)?;
                let q0 = parse_keyed(toks.next(), "q0", line)?;
                let q0 = parse_usize(Some(q0), "initial state", line)?;
                states = Some((n, q0));
            }
            Some("alphabet") => {
                let m = parse_usize(toks.next(), "alphabet size", line)?;
                let blank = parse_usize(
                    Some(parse_keyed(toks.next(), "blank", line)?),
                    "blank",
                    line,
                )?;
                if blank != 0 {
                    return Err(FormatError::at(line, "the blank must be symbol 0"));
                }
                alphabet = Some(m);
            }
            Some("symbols") => {
                let mut v = Vec::new();
                for t in toks.by_ref() {
                    let mut cs = t.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => v.push(c),
                        _ => {
                            return Err(FormatError::at(
                                line,
                                format!("symbol name {t:?} must be one character"),
                            ))
                        }
                    }
                }
                names = Some(v);
            }
            Some("time") => {
                let coeffs: Result<Vec<u64>, _> = toks.by_ref().map(str::parse).collect();
                let coeffs = coeffs
                    .map_err(|_| FormatError::at(line, "time coefficients must be integers"))?;
                if coeffs.is_empty() {
                    return Err(FormatError::at(line, "time needs at least one coefficient"));
                }
                time = Some(coeffs);
            }
            Some("delta") => deltas.push((line, toks.by_ref().collect())),
            Some(other) => {
                return Err(FormatError::at(
                    line,
                    format!("unknown directive {other:?}"),
                ))
            }
            None => {}
        }
        if toks.next().is_some() {
            return Err(FormatError::at(line, "trailing tokens"));
        }
    }

    let (n, q0) = states.ok_or_else(|| FormatError::plain("missing states line"))?;
    let m = alphabet.ok_or_else(|| FormatError::plain("missing alphabet line"))?;
    let mut spec = QtmSpec::new(n, q0, m).map_err(|e| FormatError::plain(e.to_string()))?;
    for (line, toks) in deltas {
        if toks.len() != 8 || toks[2] != "->" {
            return Err(FormatError::at(
                line,
                "expected: delta p sigma -> q tau d re im",
            ));
        }
        let p = parse_usize(Some(toks[0]), "state", line)?;
        let s = parse_usize(Some(toks[1]), "symbol", line)?;
        let q = parse_usize(Some(toks[3]), "state", line)?;
        let tau = parse_usize(Some(toks[4]), "symbol", line)?;
        let d = parse_move(Some(toks[5]), line)?;
        let re = parse_real(toks[6])
            .ok_or_else(|| FormatError::at(line, format!("bad amplitude {:?}", toks[6])))?;
        let im = parse_real(toks[7])
            .ok_or_else(|| FormatError::at(line, format!("bad amplitude {:?}", toks[7])))?;
        spec.add_transition(p, s, q, tau, d, Amplitude::new(re, im))
            .map_err(|e| FormatError::at(line, e.to_string()))?;
    }
    let symbols = match names {
        Some(v) if v.len() != m => {
            return Err(FormatError::plain(format!(
                "{} symbol names for an alphabet of {m}",
                v.len()
            )))
        }
        Some(v) => Symbols::new(v)?,
        None => Symbols::default_for(m)?,
    };
    Ok(QtmFile {
        spec,
        symbols,
        time,
    })
}
