//! Sparse state-vector simulation of compiled circuits.

mod dense;
mod sparse;

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

pub use dense::{run_dense, DenseState};
pub use sparse::SparseState;

use crate::decompose::GateSeq;
use crate::qtm::WindowDistribution;
use crate::yao::{
    cell_contents, decode_output, Block, CompiledCircuit, G1Gate, Marker, SparseUnitary,
    WireLayout, YaoError, MAX_DENSE_WIRES,
};

/// Default amplitude modulus below which entries are dropped.
pub const PRUNE: f64 = 1e-14;
/// Default bound on the number of stored amplitudes.
pub const DEFAULT_SUPPORT_CAP: usize = 1 << 22;
/// Amplitude that the unreachable marker pattern must never exceed.
pub const FORBIDDEN_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum SimError {
    BadBinding {
        wire: usize,
        wires: usize,
    },
    ArityMismatch {
        pins: usize,
        wires: usize,
    },
    InputWidth {
        expected: usize,
        got: usize,
    },
    SupportCap {
        size: usize,
        cap: usize,
    },
    ForbiddenMarker {
        cell: i64,
        amplitude: f64,
    },
    /// Dictionary mode needs the matrix of a G1 block.
    MissingUnitary,
    TooWide(usize),
    Yao(YaoError),
}

impl From<YaoError> for SimError {
    fn from(e: YaoError) -> Self {
        Self::Yao(e)
    }
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BadBinding { wire, wires } => {
                write!(f, "wire {wire} is repeated or outside 0..{wires}")
            }
            Self::ArityMismatch { pins, wires } => {
                write!(f, "{pins} pins bound to a {wires}-wire gate")
            }
            Self::InputWidth { expected, got } => {
                write!(f, "state has {got} wires, circuit needs {expected}")
            }
            Self::SupportCap { size, cap } => {
                write!(f, "state support {size} exceeds the cap {cap}")
            }
            Self::ForbiddenMarker { cell, amplitude } => {
                write!(
                    f,
                    "cell {cell} reached the forbidden marker with amplitude {amplitude:e}"
                )
            }
            Self::MissingUnitary => {
                f.write_str("dictionary mode needs the G1 matrix; supply the machine")
            }
            Self::TooWide(w) => write!(f, "{w} wires is too many for the dense simulator"),
            Self::Yao(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// G1 and G2 act as whole gates.
    Dictionary,
    /// Every synthesized elementary gate is applied.
    Elementary,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimOptions {
    pub prune: f64,
    pub support_cap: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            prune: PRUNE,
            support_cap: DEFAULT_SUPPORT_CAP,
        }
    }
}

/// Images of G1's local basis states under its elementary gates, filled on demand.
#[derive(Debug, Default)]
pub struct ImageCache {
    images: BTreeMap<usize, BTreeMap<usize, Vec<(usize, Complex64)>>>,
}

impl ImageCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Images of `locals` under `gate`, computing any that are missing.
    fn images(
        &mut self,
        gate: &Arc<G1Gate>,
        locals: impl IntoIterator<Item = usize>,
        prune: f64,
    ) -> &BTreeMap<usize, Vec<(usize, Complex64)>> {
        let per_gate = self.images.entry(Arc::as_ptr(gate) as usize).or_default();
        for local in locals {
            per_gate.entry(local).or_insert_with(|| {
                sparse::local_image(gate.gates().wires(), gate.gates().gates(), local, prune)
            });
        }
        per_gate
    }
}

/// Matrix of a gate sequence on at most 16 wires, one basis column at a time.
pub fn materialize_sparse(gates: &GateSeq, prune: f64) -> Result<SparseUnitary, SimError> {
    let wires = gates.wires();
    if wires > MAX_DENSE_WIRES {
        return Err(SimError::TooWide(wires));
    }
    let columns = (0..1usize << wires)
        .map(|j| sparse::local_image(wires, gates.gates(), j, prune))
        .collect();
    Ok(SparseUnitary::new(wires, columns))
}

pub fn run_circuit(
    circ: &CompiledCircuit,
    input: u128,
    mode: Mode,
) -> Result<SparseState, SimError> {
    let mut cache = ImageCache::new();
    run_from(
        circ,
        SparseState::basis(circ.wires(), input),
        mode,
        &SimOptions::default(),
        &mut cache,
    )
}

/// Runs `circ` on `state`; `cache` may be shared between runs of circuits
/// that reuse the same G1.
pub fn run_from(
    circ: &CompiledCircuit,
    mut state: SparseState,
    mode: Mode,
    opts: &SimOptions,
    cache: &mut ImageCache,
) -> Result<SparseState, SimError> {
    if state.wires() != circ.wires() {
        return Err(SimError::InputWidth {
            expected: circ.wires(),
            got: state.wires(),
        });
    }
    for block in circ.blocks() {
        match (block, mode) {
            (Block::G1 { pins, gate }, Mode::Dictionary) => {
                let u = gate.unitary().ok_or(SimError::MissingUnitary)?;
                state.apply_unitary(pins, u)?;
            }
            (Block::G1 { pins, gate }, Mode::Elementary) => {
                if pins.len() != gate.gates().wires() {
                    return Err(SimError::ArityMismatch {
                        pins: pins.len(),
                        wires: gate.gates().wires(),
                    });
                }
                let locals = state.local_indices(pins)?;
                let images = cache.images(gate, locals, opts.prune);
                state.apply_local(pins, |local| Ok(&images[&local]))?;
            }
            (Block::G2 { pairs }, Mode::Dictionary) => {
                let w = circ.wires();
                let bits: Vec<(u32, u32)> = pairs
                    .iter()
                    .map(|&(a, b)| ((w - 1 - a) as u32, (w - 1 - b) as u32))
                    .collect();
                state.permute(|k| {
                    let mut k = k;
                    for &(a, b) in &bits {
                        if ((k >> a) ^ (k >> b)) & 1 == 1 {
                            k ^= (1 << a) | (1 << b);
                        }
                    }
                    k
                });
            }
            (Block::G2 { .. }, Mode::Elementary) => {
                let mut err = None;
                block.for_each_gate(|g| {
                    if err.is_none() {
                        err = state.apply_gate(g).err();
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
            (Block::Gates(seq), _) => {
                for g in seq.gates() {
                    state.apply_gate(g)?;
                    check_support(&state, opts)?;
                }
            }
        }
        state.prune(opts.prune);
        check_support(&state, opts)?;
        if let Some(layout) = circ.layout() {
            check_markers(&state, layout)?;
        }
    }
    Ok(state)
}

fn check_support(state: &SparseState, opts: &SimOptions) -> Result<(), SimError> {
    if state.len() > opts.support_cap {
        return Err(SimError::SupportCap {
            size: state.len(),
            cap: opts.support_cap,
        });
    }
    Ok(())
}

/// Fails if any cell carries the unreachable marker with non-negligible amplitude.
pub fn check_markers(state: &SparseState, layout: &WireLayout) -> Result<(), SimError> {
    let (lo, hi) = layout.cell_range();
    for (k, a) in state.iter() {
        if a.norm() <= FORBIDDEN_TOL {
            continue;
        }
        for cell in lo..=hi {
            if cell_contents(k, layout, cell).1 == Marker::Forbidden {
                return Err(SimError::ForbiddenMarker {
                    cell,
                    amplitude: a.norm(),
                });
            }
        }
    }
    Ok(())
}

/// Distribution of decoded window strings.
pub fn output_distribution(
    state: &SparseState,
    layout: &WireLayout,
) -> Result<WindowDistribution, SimError> {
    let mut d = WindowDistribution::default();
    for (k, a) in state.iter() {
        d.add(decode_output(k, layout)?, a.norm_sqr());
    }
    Ok(d)
}
