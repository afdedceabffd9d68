use super::controlled::{Constants, ControlledEmitter};
use super::gates::GateSeq;
use super::gray::gray_reduce;
use super::near_trivial::{reduce_work, NearTrivialMatrix, WorkMatrix};
use super::DecomposeError;
use crate::numerics::{DenseMatrix, Real, TOL_CONSTRUCT};

/// Gate sequence whose product equals `u` exactly, global phase included.
pub fn synthesize(u: &DenseMatrix) -> Result<GateSeq, DecomposeError> {
    let dim = u.dim();
    if dim == 0 || !dim.is_power_of_two() {
        return Err(DecomposeError::DimNotPow2(dim));
    }
    let defect = u.unitarity_defect();
    if defect > TOL_CONSTRUCT {
        return Err(DecomposeError::NotUnitary { defect });
    }
    synthesize_work(WorkMatrix::<f64>::from_dense(u))
}

/// Synthesis over any scalar field; callers are responsible for unitarity.
pub fn synthesize_work<R: Real>(w: WorkMatrix<R>) -> Result<GateSeq, DecomposeError> {
    let dim = w.dim();
    if dim == 0 || !dim.is_power_of_two() {
        return Err(DecomposeError::DimNotPow2(dim));
    }
    let factors = reduce_work(w)?;
    synthesize_factors::<R>(dim.trailing_zeros() as usize, &factors)
}

/// Gates for near-trivial factors given in application order.
pub fn synthesize_factors<R: Real>(
    wires: usize,
    factors: &[NearTrivialMatrix<R>],
) -> Result<GateSeq, DecomposeError> {
    let consts = Constants::new::<R>();
    let mut out = GateSeq::new(wires);
    for f in factors {
        if f.dim != 1 << wires {
            return Err(DecomposeError::DimNotPow2(f.dim));
        }
        if f.theta().is_zero() {
            continue;
        }
        let g = gray_reduce(f)?;
        out.extend(g.prefix);
        ControlledEmitter::new(&mut out, &consts).emit(&g.core);
        out.extend(g.suffix);
    }
    Ok(out)
}
