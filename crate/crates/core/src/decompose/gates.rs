use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use num_complex::Complex64;

use crate::numerics::{CertifiedReal, DenseMatrix, Real, DEFAULT_PRECISION_CAP};

/// Below this distance from a multiple of 2π a fast-mode angle is zero.
const ANGLE_ZERO: f64 = 1e-14;

/// A gate parameter in `[0, 2π)`, optionally with its certified value.
#[derive(Clone, Debug)]
pub struct Angle {
    value: f64,
    exact: Option<CertifiedReal>,
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Angle {
    pub fn from_f64(x: f64) -> Self {
        Self {
            value: normalize_fast(x),
            exact: None,
        }
    }

    /// Normalizes a fast or certified value. Certified values within
    /// `2^-cap` of a multiple of 2π become exactly zero.
    pub fn from_real<R: Real>(x: &R) -> Self {
        match x.certified() {
            None => Self::from_f64(x.to_f64()),
            Some(c) => Self::from_certified(&c),
        }
    }

    pub fn from_certified(c: &CertifiedReal) -> Self {
        let norm = c.normalize_angle(DEFAULT_PRECISION_CAP);
        if norm.sign_witness(DEFAULT_PRECISION_CAP).is_none() {
            return Self {
                value: 0.0,
                exact: Some(CertifiedReal::zero()),
            };
        }
        let value = norm.to_f64();
        let value = if value >= TAU {
            libm::nextafter(TAU, 0.0)
        } else {
            value
        };
        Self {
            value,
            exact: Some(norm),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&CertifiedReal> {
        self.exact.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0.0
    }

    /// Fast-mode angle shifted by `delta`; any certified value is dropped.
    pub fn perturbed(&self, delta: f64) -> Self {
        Self::from_f64(self.value + delta)
    }
}

pub(crate) fn rem_tau(x: f64) -> f64 {
    let v = x - TAU * libm::floor(x / TAU);
    if v >= TAU {
        0.0
    } else {
        v
    }
}

fn normalize_fast(x: f64) -> f64 {
    let v = rem_tau(x);
    if v < ANGLE_ZERO || TAU - v < ANGLE_ZERO {
        0.0
    } else {
        v
    }
}

/// Elementary gates. Wire 0 is the most significant bit of a basis index.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    R { wire: usize, angle: Angle },
    P { wire: usize, angle: Angle },
    GPhase { angle: Angle },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    Cnot,
    R,
    P,
    GPhase,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Cnot => "cnot",
            Self::R => "r",
            Self::P => "p",
            Self::GPhase => "gphase",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "cnot" => Some(Self::Cnot),
            "r" => Some(Self::R),
            "p" => Some(Self::P),
            "gphase" => Some(Self::GPhase),
            _ => None,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Self::Cnot => 2,
            Self::R | Self::P => 1,
            Self::GPhase => 0,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Self::Cnot { .. } => GateKind::Cnot,
            Self::R { .. } => GateKind::R,
            Self::P { .. } => GateKind::P,
            Self::GPhase { .. } => GateKind::GPhase,
        }
    }

    pub fn angle(&self) -> Option<&Angle> {
        match self {
            Self::Cnot { .. } => None,
            Self::R { angle, .. } | Self::P { angle, .. } | Self::GPhase { angle } => Some(angle),
        }
    }

    pub fn angle_mut(&mut self) -> Option<&mut Angle> {
        match self {
            Self::Cnot { .. } => None,
            Self::R { angle, .. } | Self::P { angle, .. } | Self::GPhase { angle } => Some(angle),
        }
    }

    /// Wires in pin order (control before target).
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Self::Cnot { control, target } => alloc::vec![control, target],
            Self::R { wire, .. } | Self::P { wire, .. } => alloc::vec![wire],
            Self::GPhase { .. } => Vec::new(),
        }
    }

    /// Same gate kind and angle on other wires.
    pub fn rebind(&self, wires: &[usize]) -> Self {
        match self {
            Self::Cnot { .. } => Self::Cnot {
                control: wires[0],
                target: wires[1],
            },
            Self::R { angle, .. } => Self::R {
                wire: wires[0],
                angle: angle.clone(),
            },
            Self::P { angle, .. } => Self::P {
                wire: wires[0],
                angle: angle.clone(),
            },
            Self::GPhase { angle } => Self::GPhase {
                angle: angle.clone(),
            },
        }
    }

    /// 2×2 matrix of a one-wire gate.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            Self::R { angle, .. } => {
                let (s, c) = libm::sincos(angle.value);
                Some([
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ])
            }
            Self::P { angle, .. } => {
                Some([[one, zero], [zero, Complex64::from_polar(1.0, angle.value)]])
            }
            _ => None,
        }
    }

    /// Applies the gate to a dense state vector over `wires` qubits.
    pub fn apply_dense(&self, state: &mut [Complex64], wires: usize) {
        let bit = |w: usize| 1usize << (wires - 1 - w);
        match self {
            Self::Cnot { control, target } => {
                let (cb, tb) = (bit(*control), bit(*target));
                for idx in 0..state.len() {
                    if idx & cb != 0 && idx & tb == 0 {
                        state.swap(idx, idx | tb);
                    }
                }
            }
            Self::GPhase { angle } => {
                let z = Complex64::from_polar(1.0, angle.value);
                for a in state.iter_mut() {
                    *a *= z;
                }
            }
            Self::R { wire, .. } | Self::P { wire, .. } => {
                let m = self.single_qubit_matrix().expect("one-wire gate");
                let b = bit(*wire);
                for idx in 0..state.len() {
                    if idx & b == 0 {
                        let (a0, a1) = (state[idx], state[idx | b]);
                        state[idx] = m[0][0] * a0 + m[0][1] * a1;
                        state[idx | b] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
            }
        }
    }
}

/// An ordered gate list over a fixed number of wires.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GateSeq {
    wires: usize,
    gates: Vec<Gate>,
}

impl GateSeq {
    pub fn new(wires: usize) -> Self {
        Self {
            wires,
            gates: Vec::new(),
        }
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gates_mut(&mut self) -> &mut [Gate] {
        &mut self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate; parameterized gates with a zero angle are dropped.
    pub fn push(&mut self, gate: Gate) {
        if matches!(gate.angle(), Some(a) if a.is_zero()) {
            return;
        }
        debug_assert!(gate.wires().iter().all(|&w| w < self.wires));
        self.gates.push(gate);
    }

    /// Appends a gate without zero-angle elision.
    pub fn push_raw(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        for g in gates {
            self.push(g);
        }
    }

    /// True if every wire index is in range and CNOT wires are distinct.
    pub fn is_well_formed(&self) -> bool {
        self.gates.iter().all(|g| match g {
            Gate::Cnot { control, target } => {
                control != target && *control < self.wires && *target < self.wires
            }
            other => other.wires().iter().all(|&w| w < self.wires),
        })
    }

    /// Product matrix of the sequence (first gate applied first).
    pub fn materialize(&self) -> DenseMatrix {
        let dim = 1usize << self.wires;
        let mut out = DenseMatrix::zeros(dim);
        let mut col = alloc::vec![Complex64::new(0.0, 0.0); dim];
        for c in 0..dim {
            col.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            col[c] = Complex64::new(1.0, 0.0);
            for g in &self.gates {
                g.apply_dense(&mut col, self.wires);
            }
            for (r, z) in col.iter().enumerate() {
                out.set(r, c, *z);
            }
        }
        out
    }
}
