//! Scalars, certified reals and dense complex matrices.

mod certified;
mod dyadic;
mod matrix;
mod real;

use core::fmt;

pub use certified::{
    approx_all, cr_combine, cr_combine_with_cap, CertifiedReal, CrOp, DEFAULT_PRECISION_CAP,
};
pub use dyadic::Dyadic;
pub use matrix::{gram_schmidt, DenseMatrix};
pub use real::{Cx, Real, Tracked};

pub use num_complex::Complex64;

/// Default tolerance for construction-time checks (unitarity, completion).
pub const TOL_CONSTRUCT: f64 = 1e-10;
/// Default tolerance for end-to-end distribution comparisons.
pub const TOL_E2E: f64 = 1e-8;
/// Default tolerance for gate-synthesis reconstruction.
pub const TOL_SYNTH: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumericsError {
    /// No precision up to the cap separates the divisor from zero.
    ZeroDivisorUndecided {
        cap: u32,
    },
    /// The argument is provably outside the operation's domain.
    DomainError(&'static str),
    /// Wrong number of arguments for the requested operation.
    Arity {
        op: CrOp,
        expected: usize,
        got: usize,
    },
    DimensionMismatch {
        left: usize,
        right: usize,
    },
}

impl fmt::Display for NumericsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroDivisorUndecided { cap } => {
                write!(f, "divisor not separated from zero up to 2^-{cap}")
            }
            Self::DomainError(what) => write!(f, "domain error: {what}"),
            Self::Arity { op, expected, got } => {
                write!(f, "{op:?} expects {expected} arguments, got {got}")
            }
            Self::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
        }
    }
}
