//! Single-tape quantum Turing machines: specification, well-formedness check,
//! superposition simulation and tape-window measurement.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::numerics::{CertifiedReal, Cx, Real};

/// Default cap on the configuration-space dimension used by [`validate`].
pub const VALIDATE_SIZE_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QtmError {
    InvalidSpec(String),
    RingTooSmall(usize),
    SizeLimit { dim: u128, cap: usize },
    SupportEscape { cell: i64 },
    UnknownSymbol(usize),
}

impl fmt::Display for QtmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidSpec(msg) => write!(f, "invalid machine: {msg}"),
            Self::RingTooSmall(n) => write!(f, "ring size {n} is below 3"),
            Self::SizeLimit { dim, cap } => {
                write!(
                    f,
                    "configuration space of dimension {dim} exceeds cap {cap}"
                )
            }
            Self::SupportEscape { cell } => {
                write!(f, "configuration touches cell {cell} outside the window")
            }
            Self::UnknownSymbol(s) => write!(f, "symbol index {s} is not in the alphabet"),
        }
    }
}

/// Head movement of one transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn offset(self) -> i64 {
        match self {
            Self::Left => -1,
            Self::Stay => 0,
            Self::Right => 1,
        }
    }

    pub fn from_offset(d: i64) -> Option<Self> {
        match d {
            -1 => Some(Self::Left),
            0 => Some(Self::Stay),
            1 => Some(Self::Right),
            _ => None,
        }
    }
}

/// A transition amplitude kept both as an exact value and its `f64` image.
#[derive(Clone, Debug)]
pub struct Amplitude {
    pub re: CertifiedReal,
    pub im: CertifiedReal,
    fast: Complex64,
}

impl Amplitude {
    pub fn new(re: CertifiedReal, im: CertifiedReal) -> Self {
        let fast = Complex64::new(re.to_f64(), im.to_f64());
        Self { re, im, fast }
    }

    /// Exact amplitude equal to the given `f64` pair.
    pub fn from_f64(re: f64, im: f64) -> Self {
        Self::new(
            CertifiedReal::from_f64(re).expect("finite amplitude"),
            CertifiedReal::from_f64(im).expect("finite amplitude"),
        )
    }

    pub fn value(&self) -> Complex64 {
        self.fast
    }

    pub fn lift<R: Real>(&self) -> Cx<R> {
        Cx::new(R::from_certified(&self.re), R::from_certified(&self.im))
    }
}

#[derive(Clone, Debug)]
pub struct Transition {
    pub next: usize,
    pub write: usize,
    pub moves: Move,
    pub amplitude: Amplitude,
}

/// A machine `(Q, Σ, δ)`; symbol 0 is the blank.
#[derive(Clone, Debug)]
pub struct QtmSpec {
    states: usize,
    initial: usize,
    symbols: usize,
    delta: BTreeMap<(usize, usize), Vec<Transition>>,
}

impl QtmSpec {
    pub fn new(states: usize, initial: usize, symbols: usize) -> Result<Self, QtmError> {
        if states == 0 || symbols == 0 {
            return Err(QtmError::InvalidSpec(
                "state set and alphabet must be nonempty".into(),
            ));
        }
        if initial >= states {
            return Err(QtmError::InvalidSpec(format!(
                "initial state {initial} out of range"
            )));
        }
        Ok(Self {
            states,
            initial,
            symbols,
            delta: BTreeMap::new(),
        })
    }

    /// Adds the amplitude of `(p, sigma) -> (q, tau, d)`.
    pub fn add_transition(
        &mut self,
        p: usize,
        sigma: usize,
        q: usize,
        tau: usize,
        moves: Move,
        amplitude: Amplitude,
    ) -> Result<(), QtmError> {
        if p >= self.states || q >= self.states {
            return Err(QtmError::InvalidSpec(format!(
                "state index out of range in ({p},{sigma})"
            )));
        }
        if sigma >= self.symbols || tau >= self.symbols {
            return Err(QtmError::InvalidSpec(format!(
                "symbol index out of range in ({p},{sigma})"
            )));
        }
        let row = self.delta.entry((p, sigma)).or_default();
        if row
            .iter()
            .any(|t| t.next == q && t.write == tau && t.moves == moves)
        {
            return Err(QtmError::InvalidSpec(format!(
                "duplicate transition ({p},{sigma}) -> ({q},{tau},{})",
                moves.offset()
            )));
        }
        row.push(Transition {
            next: q,
            write: tau,
            moves,
            amplitude,
        });
        Ok(())
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn row(&self, p: usize, sigma: usize) -> &[Transition] {
        self.delta
            .get(&(p, sigma))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Amplitude `δ(p, σ, q, τ, d)`, or `None` when absent.
    pub fn amplitude(
        &self,
        p: usize,
        sigma: usize,
        q: usize,
        tau: usize,
        moves: Move,
    ) -> Option<&Amplitude> {
        self.row(p, sigma)
            .iter()
            .find(|t| t.next == q && t.write == tau && t.moves == moves)
            .map(|t| &t.amplitude)
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, &Transition)> {
        self.delta
            .iter()
            .flat_map(|(&(p, s), row)| row.iter().map(move |t| (p, s, t)))
    }

    /// Deterministic text form with amplitudes rounded to 64 fractional bits.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states {} q0={}", self.states, self.initial);
        let _ = writeln!(out, "alphabet {} blank=0", self.symbols);
        for (&(p, s), row) in &self.delta {
            let mut lines: Vec<String> = row
                .iter()
                .map(|t| {
                    format!(
                        "delta {p} {s} -> {} {} {} {} {}",
                        t.next,
                        t.write,
                        t.moves.offset(),
                        t.amplitude.re.approx(64),
                        t.amplitude.im.approx(64)
                    )
                })
                .collect();
            lines.sort();
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        }
        out
    }

    /// SHA-256 of [`canonical_text`](Self::canonical_text), hex encoded.
    pub fn content_hash(&self) -> String {
        hex_digest(self.canonical_text().as_bytes())
    }
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Result of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    WellFormed,
    Violation(String),
}

/// Checks that the evolution operator on a circular tape of `ring_size` cells is unitary.
pub fn validate(spec: &QtmSpec, ring_size: usize, tol: f64) -> Result<Verdict, QtmError> {
    validate_with_cap(spec, ring_size, tol, VALIDATE_SIZE_CAP)
}

pub fn validate_with_cap(
    spec: &QtmSpec,
    ring_size: usize,
    tol: f64,
    cap: usize,
) -> Result<Verdict, QtmError> {
    if ring_size < 3 {
        return Err(QtmError::RingTooSmall(ring_size));
    }
    let m = spec.symbols as u128;
    let tapes = (0..ring_size)
        .try_fold(1u128, |acc, _| acc.checked_mul(m))
        .unwrap_or(u128::MAX);
    let dim = tapes
        .saturating_mul(ring_size as u128)
        .saturating_mul(spec.states as u128);
    if dim > cap as u128 {
        return Err(QtmError::SizeLimit { dim, cap });
    }
    for p in 0..spec.states {
        for s in 0..spec.symbols {
            let norm: f64 = spec
                .row(p, s)
                .iter()
                .map(|t| t.amplitude.value().norm_sqr())
                .sum();
            if (norm - 1.0).abs() > tol {
                return Ok(Verdict::Violation(format!(
                    "row ({p},{s}) has squared norm {norm}"
                )));
            }
        }
    }

    let tapes = tapes as usize;
    let dim = dim as usize;
    let r = ring_size;
    let msym = spec.symbols;
    let index = |state: usize, head: usize, tape: usize| (state * r + head) * tapes + tape;
    let mut pow = vec![1usize; r];
    for i in 1..r {
        pow[i] = pow[i - 1] * msym;
    }
    // rows[target] = list of (source column, amplitude)
    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
    for state in 0..spec.states {
        for head in 0..r {
            for tape in 0..tapes {
                let col = index(state, head, tape);
                let sigma = (tape / pow[head]) % msym;
                for t in spec.row(state, sigma) {
                    let new_tape = tape - sigma * pow[head] + t.write * pow[head];
                    let new_head = (head as i64 + t.moves.offset()).rem_euclid(r as i64) as usize;
                    let target = index(t.next, new_head, new_tape);
                    rows[target].push((col, t.amplitude.value()));
                }
            }
        }
    }
    let mut gram: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    for row in &rows {
        for (a, &(ca, va)) in row.iter().enumerate() {
            for &(cb, vb) in &row[a..] {
                let (lo, hi, z) = if ca <= cb {
                    (ca, cb, va.conj() * vb)
                } else {
                    (cb, ca, vb.conj() * va)
                };
                *gram.entry((lo, hi)).or_insert(Complex64::new(0.0, 0.0)) += z;
            }
        }
    }
    for col in 0..dim {
        let d = gram.get(&(col, col)).copied().unwrap_or_default();
        if (d - 1.0).norm() > tol {
            return Ok(Verdict::Violation(format!(
                "evolution column {col} has squared norm {}",
                d.re
            )));
        }
    }
    for (&(a, b), z) in &gram {
        if a != b && z.norm() > tol {
            return Ok(Verdict::Violation(format!(
                "evolution columns {a} and {b} overlap by {}",
                z.norm()
            )));
        }
    }
    Ok(Verdict::WellFormed)
}

/// Machine configuration. Cells absent from `tape` hold the blank.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: usize,
    pub head: i64,
    tape: BTreeMap<i64, usize>,
}

impl Configuration {
    pub fn new(state: usize, head: i64) -> Self {
        Self {
            state,
            head,
            tape: BTreeMap::new(),
        }
    }

    /// Initial configuration with `input` written from cell 0.
    pub fn initial(spec: &QtmSpec, input: &[usize]) -> Result<Self, QtmError> {
        let mut c = Self::new(spec.initial, 0);
        for (i, &s) in input.iter().enumerate() {
            if s >= spec.symbols {
                return Err(QtmError::UnknownSymbol(s));
            }
            c.write(i as i64, s);
        }
        Ok(c)
    }

    pub fn read(&self, cell: i64) -> usize {
        self.tape.get(&cell).copied().unwrap_or(0)
    }

    pub fn write(&mut self, cell: i64, symbol: usize) {
        if symbol == 0 {
            self.tape.remove(&cell);
        } else {
            self.tape.insert(cell, symbol);
        }
    }

    /// Non-blank cells in ascending order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.tape.iter().map(|(&c, &s)| (c, s))
    }
}

/// Finite superposition of configurations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Superposition {
    amplitudes: BTreeMap<Configuration, Complex64>,
}

impl Superposition {
    pub fn basis(c: Configuration) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(c, Complex64::new(1.0, 0.0));
        Self { amplitudes }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Configuration, Complex64)>) -> Self {
        let mut s = Self::default();
        for (c, a) in terms {
            s.add(c, a);
        }
        s
    }

    pub fn add(&mut self, c: Configuration, a: Complex64) {
        *self.amplitudes.entry(c).or_insert(Complex64::new(0.0, 0.0)) += a;
    }

    pub fn amplitude(&self, c: &Configuration) -> Complex64 {
        self.amplitudes.get(c).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Drops entries with modulus below `eps`.
    pub fn prune(&mut self, eps: f64) {
        self.amplitudes.retain(|_, a| a.norm() >= eps);
    }
}

/// One step of the machine.
pub fn step(spec: &QtmSpec, s: &Superposition) -> Superposition {
    let mut out = Superposition::default();
    for (c, &a) in s.iter() {
        let sigma = c.read(c.head);
        for t in spec.row(c.state, sigma) {
            let mut next = c.clone();
            next.write(c.head, t.write);
            next.head += t.moves.offset();
            next.state = t.next;
            out.add(next, a * t.amplitude.value());
        }
    }
    out.prune(1e-15);
    out
}

/// Runs `t` steps from the initial configuration on `input`.
pub fn run(spec: &QtmSpec, input: &[usize], t: usize) -> Result<Superposition, QtmError> {
    let mut s = Superposition::basis(Configuration::initial(spec, input)?);
    for _ in 0..t {
        s = step(spec, &s);
    }
    Ok(s)
}

/// Distribution over window contents (cells `-t..=t`, symbol indices).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WindowDistribution {
    probabilities: BTreeMap<Vec<usize>, f64>,
}

impl WindowDistribution {
    pub fn add(&mut self, window: Vec<usize>, p: f64) {
        *self.probabilities.entry(window).or_insert(0.0) += p;
    }

    pub fn probability(&self, window: &[usize]) -> f64 {
        self.probabilities.get(window).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &f64)> {
        self.probabilities.iter()
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Total-variation distance `½ Σ |p - q|` over the union of supports.
    pub fn tv_distance(&self, other: &Self) -> f64 {
        let mut sum = 0.0;
        for (w, p) in &self.probabilities {
            sum += (p - other.probability(w)).abs();
        }
        for (w, q) in &other.probabilities {
            if !self.probabilities.contains_key(w) {
                sum += q.abs();
            }
        }
        sum / 2.0
    }
}

/// Measures cells `-t..=t`, summing over processor state and head position.
pub fn measure_window(s: &Superposition, t: usize) -> Result<WindowDistribution, QtmError> {
    let t = t as i64;
    let mut dist = WindowDistribution::default();
    for (c, a) in s.iter() {
        if c.head.abs() > t {
            return Err(QtmError::SupportEscape { cell: c.head });
        }
        if let Some((cell, _)) = c.cells().find(|(cell, _)| cell.abs() > t) {
            return Err(QtmError::SupportEscape { cell });
        }
        let window: Vec<usize> = (-t..=t).map(|cell| c.read(cell)).collect();
        dist.add(window, a.norm_sqr());
    }
    Ok(dist)
}

/// Machines used throughout the tests and examples.
pub mod machines {
    use super::*;

    /// One state; every symbol is rewritten unchanged and the head moves right.
    pub fn move_right() -> QtmSpec {
        let mut spec = QtmSpec::new(1, 0, 3).expect("valid");
        for s in 0..3 {
            spec.add_transition(0, s, 0, s, Move::Right, Amplitude::from_f64(1.0, 0.0))
                .expect("valid");
        }
        spec
    }

    /// Symbols `blank, 0, 1`; a Hadamard on the scanned bit, then move right.
    pub fn hadamard_walk() -> QtmSpec {
        let h = CertifiedReal::from_ratio(1.into(), 2.into())
            .expect("nonzero")
            .sqrt()
            .expect("positive");
        let pos = Amplitude::new(h.clone(), CertifiedReal::zero());
        let neg = Amplitude::new(h.neg(), CertifiedReal::zero());
        let mut spec = QtmSpec::new(1, 0, 3).expect("valid");
        let (zero, one) = (1, 2);
        let add = |spec: &mut QtmSpec, s, w, a: &Amplitude| {
            spec.add_transition(0, s, 0, w, Move::Right, a.clone())
                .expect("valid")
        };
        add(&mut spec, zero, zero, &pos);
        add(&mut spec, zero, one, &pos);
        add(&mut spec, one, zero, &pos);
        add(&mut spec, one, one, &neg);
        add(&mut spec, 0, 0, &Amplitude::from_f64(1.0, 0.0));
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::machines::*;
    use super::*;

    #[test]
    fn ring_must_have_three_cells() {
        assert_eq!(
            validate(&move_right(), 2, 1e-10),
            Err(QtmError::RingTooSmall(2))
        );
    }

    #[test]
    fn heavy_row_is_a_violation() {
        let mut spec = QtmSpec::new(1, 0, 1).unwrap();
        spec.add_transition(0, 0, 0, 0, Move::Right, Amplitude::from_f64(1.0, 1.0))
            .unwrap();
        assert!(matches!(
            validate(&spec, 3, 1e-10).unwrap(),
            Verdict::Violation(_)
        ));
    }

    #[test]
    fn size_cap_is_enforced() {
        let err = validate_with_cap(&hadamard_walk(), 4, 1e-10, 100).unwrap_err();
        assert!(matches!(err, QtmError::SizeLimit { .. }));
    }

    #[test]
    fn tape_keeps_blanks_implicit() {
        let mut c = Configuration::new(0, 0);
        c.write(3, 2);
        c.write(3, 0);
        assert_eq!(c, Configuration::new(0, 0));
    }
}
