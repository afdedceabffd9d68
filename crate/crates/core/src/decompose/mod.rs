//! Exact synthesis: unitaries to near-trivial factors, near-trivial factors to
//! controlled single-qubit operations, and those to CNOT, R, P and GPhase.

mod controlled;
mod gates;
mod gray;
mod near_trivial;
mod synth;

use core::fmt;

pub use controlled::{single_qubit_gates, Constants, ControlledEmitter};
pub use gates::{Angle, Gate, GateKind, GateSeq};
pub use gray::{gray_reduce, ControlledOp, CoreOp, GrayReduction};
pub use near_trivial::{
    column_reduce, near_trivial_decompose, product, reduce_work, NearKind, NearTrivialMatrix,
    WorkMatrix,
};
pub use synth::{synthesize, synthesize_factors, synthesize_work};

use crate::numerics::NumericsError;

#[derive(Clone, Debug, PartialEq)]
pub enum DecomposeError {
    NotUnit { norm: f64 },
    NotUnitary { defect: f64 },
    DimNotPow2(usize),
    Numerics(NumericsError),
}

impl From<NumericsError> for DecomposeError {
    fn from(e: NumericsError) -> Self {
        Self::Numerics(e)
    }
}

impl fmt::Display for DecomposeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotUnit { norm } => write!(f, "vector norm {norm} is not 1"),
            Self::NotUnitary { defect } => write!(f, "matrix is not unitary (defect {defect:e})"),
            Self::DimNotPow2(d) => write!(f, "dimension {d} is not a power of two"),
            Self::Numerics(e) => write!(f, "{e}"),
        }
    }
}
