use alloc::vec::Vec;

use super::gates::Gate;
use super::near_trivial::{NearKind, NearTrivialMatrix};
use super::DecomposeError;
use crate::numerics::Real;

/// Single-qubit operation at the heart of a controlled gate.
#[derive(Clone, Debug)]
pub enum CoreOp<R> {
    /// `R(θ)`.
    Rotation(R),
    /// `P(θ)`.
    Phase(R),
    /// `diag(e^{iθ}, 1)`.
    PhaseOnZero(R),
    /// Pauli X.
    Not,
}

/// `op` on `target`, conditioned on each `(wire, value)` control.
#[derive(Clone, Debug)]
pub struct ControlledOp<R> {
    pub target: usize,
    pub controls: Vec<(usize, bool)>,
    pub op: CoreOp<R>,
}

/// Conjugating CNOT ladders around one controlled operation.
#[derive(Clone, Debug)]
pub struct GrayReduction<R> {
    pub prefix: Vec<Gate>,
    pub core: ControlledOp<R>,
    pub suffix: Vec<Gate>,
}

/// Rewrites a near-trivial matrix of dimension `2^n` as `prefix`, a fully
/// controlled single-qubit `core`, and `suffix = reverse(prefix)`.
///
/// The target is the lowest differing bit of the index pair. Each CNOT of the
/// prefix, controlled by the target wire, walks one Gray-code step and clears
/// one further differing bit.
pub fn gray_reduce<R: Real>(nt: &NearTrivialMatrix<R>) -> Result<GrayReduction<R>, DecomposeError> {
    let dim = nt.dim;
    if dim == 0 || !dim.is_power_of_two() {
        return Err(DecomposeError::DimNotPow2(dim));
    }
    let n = dim.trailing_zeros() as usize;
    let wire_of = |bit: usize| n - 1 - bit;
    let controls_from = |index: usize, skip: usize| -> Vec<(usize, bool)> {
        (0..n)
            .filter(|&b| b != skip)
            .map(|b| (wire_of(b), index >> b & 1 == 1))
            .rev()
            .collect()
    };
    match &nt.kind {
        NearKind::Phase { j, theta } => {
            if *j == 0 {
                let core = ControlledOp {
                    target: wire_of(0),
                    controls: controls_from(0, 0),
                    op: CoreOp::PhaseOnZero(theta.clone()),
                };
                return Ok(GrayReduction {
                    prefix: Vec::new(),
                    core,
                    suffix: Vec::new(),
                });
            }
            let bit = j.trailing_zeros() as usize;
            let core = ControlledOp {
                target: wire_of(bit),
                controls: controls_from(*j, bit),
                op: CoreOp::Phase(theta.clone()),
            };
            Ok(GrayReduction {
                prefix: Vec::new(),
                core,
                suffix: Vec::new(),
            })
        }
        NearKind::Rotation { i, j, theta } => {
            let diff = i ^ j;
            let pivot = diff.trailing_zeros() as usize;
            let prefix: Vec<Gate> = (pivot + 1..n)
                .filter(|b| diff >> b & 1 == 1)
                .map(|b| Gate::Cnot {
                    control: wire_of(pivot),
                    target: wire_of(b),
                })
                .collect();
            let (low, i_is_low) = if i >> pivot & 1 == 0 {
                (*i, true)
            } else {
                (*j, false)
            };
            let op = if i_is_low {
                CoreOp::Rotation(theta.neg())
            } else {
                CoreOp::Rotation(theta.clone())
            };
            let core = ControlledOp {
                target: wire_of(pivot),
                controls: controls_from(low, pivot),
                op,
            };
            let suffix = prefix.iter().rev().cloned().collect();
            Ok(GrayReduction {
                prefix,
                core,
                suffix,
            })
        }
    }
}
