//! Compilation of a machine into a uniform family of circuits over a fixed
//! gate dictionary: G1 performs one local transition on a three-cell
//! neighbourhood, G2 resets the head markers, and the circuit for `t` steps is
//! `t` rounds of `2t-1` G1 placements followed by G2.

mod dictionary;
mod encode;
mod g1;
mod layout;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use dictionary::{GateDictionary, GateKey, KeyCache, ANGLE_BITS};
pub use encode::{
    cell_contents, decode_configuration, decode_output, encode_cells, encode_configuration,
    encode_input, local_index, processor_state, split_local, Marker,
};
pub use g1::{
    build_g1, fixed_basis_states, g1_residuals, right_arrival_family, stay_right_family,
    transition_pairs, G1Build, G1Residuals, SparseUnitary, COMPLETION_REJECT,
};
pub use layout::{WireLayout, MAX_WIRES};

use crate::decompose::{synthesize_work, DecomposeError, Gate, GateSeq, WorkMatrix};
use crate::numerics::{NumericsError, Real, Tracked};
use crate::qtm::QtmSpec;

/// Widest gate kept as an explicit matrix.
pub const MAX_DENSE_WIRES: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub enum YaoError {
    CompletionFailure(String),
    InputTooLong { len: usize, max: usize },
    BadSymbol { cell: i64, pattern: usize },
    UnknownSymbol(usize),
    OutsideWindow { cell: i64 },
    TooManyWires(usize),
    GateTooWide(usize),
    NoSteps,
    Decompose(DecomposeError),
}

impl From<DecomposeError> for YaoError {
    fn from(e: DecomposeError) -> Self {
        Self::Decompose(e)
    }
}

impl From<NumericsError> for YaoError {
    fn from(e: NumericsError) -> Self {
        Self::Decompose(DecomposeError::Numerics(e))
    }
}

impl fmt::Display for YaoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CompletionFailure(m) => write!(f, "unitary completion failed: {m}"),
            Self::InputTooLong { len, max } => {
                write!(f, "input of length {len} exceeds the window bound {max}")
            }
            Self::BadSymbol { cell, pattern } => {
                write!(f, "cell {cell} holds invalid symbol pattern {pattern}")
            }
            Self::UnknownSymbol(s) => write!(f, "symbol index {s} is not in the alphabet"),
            Self::OutsideWindow { cell } => write!(f, "cell {cell} lies outside the window"),
            Self::TooManyWires(w) => write!(f, "layout needs {w} wires, more than {MAX_WIRES}"),
            Self::GateTooWide(w) => write!(
                f,
                "a {w}-wire dense gate exceeds the {MAX_DENSE_WIRES}-wire cap"
            ),
            Self::NoSteps => f.write_str("step count must be at least 1"),
            Self::Decompose(e) => write!(f, "{e}"),
        }
    }
}

/// Scalar field used while building and synthesizing G1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Fast,
    /// Every angle carries a certified value, recorded to `bits` bits.
    Certified {
        bits: u32,
    },
}

impl Precision {
    pub fn angle_bits(self) -> u32 {
        match self {
            Self::Fast => ANGLE_BITS,
            Self::Certified { bits } => bits,
        }
    }
}

/// The synthesized G1 on its own wires `0..wires`.
#[derive(Clone, Debug)]
pub struct G1Gate {
    gates: GateSeq,
    unitary: Option<SparseUnitary>,
    keys: Vec<GateKey>,
    bits: u32,
}

impl G1Gate {
    pub fn new(gates: GateSeq, unitary: Option<SparseUnitary>, bits: u32) -> Self {
        let mut cache = KeyCache::new(bits);
        let keys = gates.gates().iter().map(|g| cache.key(g)).collect();
        Self {
            gates,
            unitary,
            keys,
            bits,
        }
    }

    /// Keeps keys read from a file instead of recomputing them from the angles.
    pub fn with_keys(gates: GateSeq, unitary: Option<SparseUnitary>, keys: Vec<GateKey>) -> Self {
        let bits = keys
            .iter()
            .find_map(|k| k.angle.as_ref().map(|d| d.exp))
            .unwrap_or(ANGLE_BITS);
        Self {
            gates,
            unitary,
            keys,
            bits,
        }
    }

    pub fn gates(&self) -> &GateSeq {
        &self.gates
    }

    /// The matrix G1 was synthesized from, when known.
    pub fn unitary(&self) -> Option<&SparseUnitary> {
        self.unitary.as_ref()
    }

    /// Dictionary key of each gate, in sequence order.
    pub fn keys(&self) -> &[GateKey] {
        &self.keys
    }

    /// Same gates with `unitary` attached.
    pub fn with_unitary(&self, unitary: SparseUnitary) -> Self {
        Self {
            unitary: Some(unitary),
            ..self.clone()
        }
    }

    /// Copy with one gate's angle shifted by `delta`; the matrix is dropped
    /// since it no longer describes the sequence.
    pub fn perturbed(&self, index: usize, delta: f64) -> Option<Self> {
        let mut gates = self.gates.clone();
        let g = gates.gates_mut().get_mut(index)?;
        let a = g.angle_mut()?;
        *a = a.perturbed(delta);
        Some(Self::new(gates, None, self.bits))
    }
}

#[derive(Clone, Debug)]
pub enum Block {
    /// G1 with its local wire `k` bound to `pins[k]`.
    G1 { pins: Vec<usize>, gate: Arc<G1Gate> },
    /// Marker swap on the listed `(high, low)` wire pairs, as CNOT triples.
    G2 { pairs: Vec<(usize, usize)> },
    /// Free-standing elementary gates on global wires.
    Gates(GateSeq),
}

impl Block {
    pub fn len(&self) -> usize {
        match self {
            Self::G1 { gate, .. } => gate.gates.len(),
            Self::G2 { pairs } => 3 * pairs.len(),
            Self::Gates(seq) => seq.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Elementary gates of the block on global wires.
    pub fn for_each_gate(&self, mut f: impl FnMut(&Gate)) {
        match self {
            Self::G1 { pins, gate } => {
                for g in gate.gates.gates() {
                    let wires: Vec<usize> = g.wires().iter().map(|&w| pins[w]).collect();
                    f(&g.rebind(&wires));
                }
            }
            Self::G2 { pairs } => {
                for &(a, b) in pairs {
                    for g in swap_gates(a, b) {
                        f(&g);
                    }
                }
            }
            Self::Gates(seq) => seq.gates().iter().for_each(f),
        }
    }
}

fn swap_gates(a: usize, b: usize) -> [Gate; 3] {
    [
        Gate::Cnot {
            control: a,
            target: b,
        },
        Gate::Cnot {
            control: b,
            target: a,
        },
        Gate::Cnot {
            control: a,
            target: b,
        },
    ]
}

/// G2 for `layout`: swaps the two marker bits of every cell.
pub fn build_g2(layout: &WireLayout) -> GateSeq {
    let mut seq = GateSeq::new(layout.wires());
    let (lo, hi) = layout.cell_range();
    for cell in lo..=hi {
        let (a, b) = layout.marker_wires(cell);
        seq.extend(swap_gates(a, b));
    }
    seq
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub n: Option<usize>,
    pub steps: usize,
    pub qtm_hash: Option<String>,
}

/// A circuit as an ordered list of blocks over `wires` wires.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    wires: usize,
    layout: Option<WireLayout>,
    provenance: Provenance,
    blocks: Vec<Block>,
}

impl CompiledCircuit {
    pub fn new(
        wires: usize,
        layout: Option<WireLayout>,
        provenance: Provenance,
        blocks: Vec<Block>,
    ) -> Self {
        Self {
            wires,
            layout,
            provenance,
            blocks,
        }
    }

    /// A plain gate sequence with no machine attached.
    pub fn from_gates(seq: GateSeq) -> Self {
        let wires = seq.wires();
        let provenance = Provenance {
            n: None,
            steps: 0,
            qtm_hash: None,
        };
        Self {
            wires,
            layout: None,
            provenance,
            blocks: alloc::vec![Block::Gates(seq)],
        }
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn layout(&self) -> Option<&WireLayout> {
        self.layout.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of elementary gate applications.
    pub fn gate_count(&self) -> usize {
        self.blocks.iter().map(Block::len).sum()
    }

    /// Dictionary keys of every application in order, with global wires.
    pub fn for_each_application(&self, cache: &mut KeyCache, mut f: impl FnMut(&GateKey, &Gate)) {
        let cnot = GateKey::cnot();
        for b in &self.blocks {
            match b {
                Block::G1 { pins, gate } => {
                    for (g, k) in gate.gates.gates().iter().zip(&gate.keys) {
                        let wires: Vec<usize> = g.wires().iter().map(|&w| pins[w]).collect();
                        f(k, &g.rebind(&wires));
                    }
                }
                Block::G2 { .. } => b.for_each_gate(|g| f(&cnot, g)),
                Block::Gates(seq) => {
                    for g in seq.gates() {
                        let k = cache.key(g);
                        f(&k, g);
                    }
                }
            }
        }
    }

    /// Dictionary of the gates that actually occur.
    pub fn dictionary(&self, cache: &mut KeyCache) -> GateDictionary {
        let mut keys = alloc::collections::BTreeSet::new();
        for b in &self.blocks {
            match b {
                Block::G1 { gate, .. } => keys.extend(gate.keys.iter().cloned()),
                Block::G2 { .. } => {
                    keys.insert(GateKey::cnot());
                }
                Block::Gates(seq) => keys.extend(seq.gates().iter().map(|g| cache.key(g))),
            }
        }
        GateDictionary::from_keys(keys)
    }

    /// Same circuit with every G1 block replaced by `gate`.
    pub fn with_g1(&self, gate: Arc<G1Gate>) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::G1 { pins, .. } => Block::G1 {
                    pins: pins.clone(),
                    gate: gate.clone(),
                },
                other => other.clone(),
            })
            .collect();
        Self {
            blocks,
            ..self.clone()
        }
    }

    /// The G1 shared by the circuit's placements, if any.
    pub fn g1(&self) -> Option<&Arc<G1Gate>> {
        self.blocks.iter().find_map(|b| match b {
            Block::G1 { gate, .. } => Some(gate),
            _ => None,
        })
    }
}

/// Holds the synthesized G1 of one machine and lays out circuits for any `t`.
#[derive(Clone, Debug)]
pub struct Compiler {
    spec: QtmSpec,
    g1: Arc<G1Gate>,
    residuals: G1Residuals,
}

impl Compiler {
    pub fn new(spec: &QtmSpec, precision: Precision) -> Result<Self, YaoError> {
        let (gates, unitary) = match precision {
            Precision::Fast => synthesize_g1::<f64>(spec)?,
            Precision::Certified { .. } => synthesize_g1::<Tracked>(spec)?,
        };
        let residuals = g1_residuals(spec, &unitary);
        let g1 = Arc::new(G1Gate::new(gates, Some(unitary), precision.angle_bits()));
        Ok(Self {
            spec: spec.clone(),
            g1,
            residuals,
        })
    }

    pub fn spec(&self) -> &QtmSpec {
        &self.spec
    }

    pub fn g1(&self) -> &Arc<G1Gate> {
        &self.g1
    }

    pub fn residuals(&self) -> &G1Residuals {
        &self.residuals
    }

    /// The fixed dictionary: G1's gates and CNOT.
    pub fn dictionary(&self) -> GateDictionary {
        GateDictionary::from_keys(self.g1.keys.iter().cloned().chain([GateKey::cnot()]))
    }

    pub fn layout(&self, steps: usize) -> Result<WireLayout, YaoError> {
        WireLayout::new(self.spec.states(), self.spec.symbols(), steps)
    }

    /// Circuit for inputs of length `n` run for `steps` steps.
    pub fn compile(
        &self,
        n: usize,
        steps: usize,
    ) -> Result<(GateDictionary, CompiledCircuit), YaoError> {
        let layout = self.layout(steps)?;
        if n > steps + 1 {
            return Err(YaoError::InputTooLong {
                len: n,
                max: steps + 1,
            });
        }
        let (lo, hi) = layout.cell_range();
        let pairs: Vec<(usize, usize)> = (lo..=hi).map(|c| layout.marker_wires(c)).collect();
        let mut blocks = Vec::with_capacity(steps * (layout.placements() + 1));
        for _ in 0..steps {
            for j in 1..=layout.placements() {
                blocks.push(Block::G1 {
                    pins: layout.g1_pins(j),
                    gate: self.g1.clone(),
                });
            }
            blocks.push(Block::G2 {
                pairs: pairs.clone(),
            });
        }
        let provenance = Provenance {
            n: Some(n),
            steps,
            qtm_hash: Some(self.spec.content_hash()),
        };
        let circ = CompiledCircuit::new(layout.wires(), Some(layout), provenance, blocks);
        Ok((self.dictionary(), circ))
    }
}

fn synthesize_g1<R: Real>(spec: &QtmSpec) -> Result<(GateSeq, SparseUnitary), YaoError> {
    let build = build_g1::<R>(spec)?;
    let unitary = SparseUnitary::from_build(&build);
    let dim = 1usize << build.wires;
    let gates = synthesize_work(WorkMatrix::from_columns(dim, build.columns))?;
    Ok((gates, unitary))
}

/// One-shot compile in fast precision.
pub fn compile(
    spec: &QtmSpec,
    n: usize,
    steps: usize,
) -> Result<(GateDictionary, CompiledCircuit), YaoError> {
    Compiler::new(spec, Precision::Fast)?.compile(n, steps)
}
