use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{SimError, SparseState};
use crate::yao::CompiledCircuit;

/// Widest circuit the dense reference simulator accepts.
pub const MAX_DENSE_SIM_WIRES: usize = 16;

/// Full state vector over `wires` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    wires: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn basis(wires: usize, key: usize) -> Result<Self, SimError> {
        if wires > MAX_DENSE_SIM_WIRES {
            return Err(SimError::TooWide(wires));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << wires];
        amps[key] = Complex64::new(1.0, 0.0);
        Ok(Self { wires, amps })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Largest entry-wise difference from a sparse state of the same width.
    pub fn max_abs_diff(&self, s: &SparseState) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| (a - s.get(k as u128)).norm())
            .fold(0.0, f64::max)
    }
}

/// Reference run applying every elementary gate to a full state vector.
pub fn run_dense(circ: &CompiledCircuit, input: usize) -> Result<DenseState, SimError> {
    let mut s = DenseState::basis(circ.wires(), input)?;
    let mut bad = None;
    for b in circ.blocks() {
        b.for_each_gate(|g| {
            if bad.is_none() && g.wires().iter().any(|&w| w >= s.wires) {
                bad = g.wires().into_iter().find(|&w| w >= s.wires);
            }
            if bad.is_none() {
                g.apply_dense(&mut s.amps, s.wires);
            }
        });
    }
    match bad {
        Some(wire) => Err(SimError::BadBinding {
            wire,
            wires: circ.wires(),
        }),
        None => Ok(s),
    }
}
