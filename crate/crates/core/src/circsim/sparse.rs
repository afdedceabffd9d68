use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::SimError;
use crate::decompose::Gate;
use crate::yao::SparseUnitary;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Sparse state vector keyed by basis index; wire 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    wires: usize,
    amps: BTreeMap<u128, Complex64>,
}

impl SparseState {
    pub fn zero(wires: usize) -> Self {
        Self {
            wires,
            amps: BTreeMap::new(),
        }
    }

    pub fn basis(wires: usize, key: u128) -> Self {
        let mut s = Self::zero(wires);
        s.amps.insert(key, Complex64::new(1.0, 0.0));
        s
    }

    pub fn from_terms(wires: usize, terms: impl IntoIterator<Item = (u128, Complex64)>) -> Self {
        let mut s = Self::zero(wires);
        for (k, a) in terms {
            *s.amps.entry(k).or_insert(ZERO) += a;
        }
        s
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn get(&self, key: u128) -> Complex64 {
        self.amps.get(&key).copied().unwrap_or(ZERO)
    }

    /// Entries in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = (u128, Complex64)> + '_ {
        self.amps.iter().map(|(k, a)| (*k, *a))
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(Complex64::norm_sqr).sum()
    }

    /// Drops entries with modulus below `eps`.
    pub fn prune(&mut self, eps: f64) {
        self.amps.retain(|_, a| a.norm() >= eps && a.norm() > 0.0);
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .map(|(k, a)| a.conj() * other.get(*k))
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Largest entry-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, a) in &self.amps {
            worst = worst.max((a - other.get(*k)).norm());
        }
        for (k, b) in &other.amps {
            if !self.amps.contains_key(k) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    fn bit(&self, wire: usize) -> u128 {
        1u128 << (self.wires - 1 - wire)
    }

    fn check_wire(&self, wire: usize) -> Result<(), SimError> {
        if wire >= self.wires {
            return Err(SimError::BadBinding {
                wire,
                wires: self.wires,
            });
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<(), SimError> {
        match g {
            Gate::Cnot { control, target } => {
                self.check_wire(*control)?;
                self.check_wire(*target)?;
                if control == target {
                    return Err(SimError::BadBinding {
                        wire: *target,
                        wires: self.wires,
                    });
                }
                let (cb, tb) = (self.bit(*control), self.bit(*target));
                let old = core::mem::take(&mut self.amps);
                self.amps = old
                    .into_iter()
                    .map(|(k, a)| if k & cb != 0 { (k ^ tb, a) } else { (k, a) })
                    .collect();
            }
            Gate::GPhase { angle } => {
                let z = Complex64::from_polar(1.0, angle.value());
                self.amps.values_mut().for_each(|a| *a *= z);
            }
            Gate::P { wire, angle } => {
                self.check_wire(*wire)?;
                let b = self.bit(*wire);
                let z = Complex64::from_polar(1.0, angle.value());
                for (k, a) in self.amps.iter_mut() {
                    if k & b != 0 {
                        *a *= z;
                    }
                }
            }
            Gate::R { wire, .. } => {
                self.check_wire(*wire)?;
                let b = self.bit(*wire);
                let m = g.single_qubit_matrix().expect("one-wire gate");
                let mut out = BTreeMap::new();
                for (&k, &a) in &self.amps {
                    let lo = k & !b;
                    if k & b != 0 && self.amps.contains_key(&lo) {
                        continue;
                    }
                    let (a0, a1) = if k & b == 0 {
                        (a, self.get(k | b))
                    } else {
                        (ZERO, a)
                    };
                    let n0 = m[0][0] * a0 + m[0][1] * a1;
                    let n1 = m[1][0] * a0 + m[1][1] * a1;
                    if n0 != ZERO {
                        out.insert(lo, n0);
                    }
                    if n1 != ZERO {
                        out.insert(lo | b, n1);
                    }
                }
                self.amps = out;
            }
        }
        Ok(())
    }

    /// Applies a dense-gate action on `pins`, the image of each local basis
    /// state supplied by `column`.
    pub fn apply_local<'a>(
        &mut self,
        pins: &[usize],
        mut column: impl FnMut(usize) -> Result<&'a [(usize, Complex64)], SimError>,
    ) -> Result<(), SimError> {
        let map = PinMap::new(self.wires, pins)?;
        let mut out: BTreeMap<u128, Complex64> = BTreeMap::new();
        for (&k, &a) in &self.amps {
            let (local, rest) = map.split(k);
            for &(r, z) in column(local)? {
                *out.entry(rest | map.scatter(r)).or_insert(ZERO) += a * z;
            }
        }
        out.retain(|_, a| *a != ZERO);
        self.amps = out;
        Ok(())
    }

    /// Distinct local indices the state occupies on `pins`.
    pub fn local_indices(
        &self,
        pins: &[usize],
    ) -> Result<alloc::collections::BTreeSet<usize>, SimError> {
        let map = PinMap::new(self.wires, pins)?;
        Ok(self.amps.keys().map(|&k| map.split(k).0).collect())
    }

    /// Applies a sparse unitary to `pins`.
    pub fn apply_unitary(&mut self, pins: &[usize], u: &SparseUnitary) -> Result<(), SimError> {
        if pins.len() != u.wires() {
            return Err(SimError::ArityMismatch {
                pins: pins.len(),
                wires: u.wires(),
            });
        }
        self.apply_local(pins, |j| Ok(u.column(j)))
    }

    /// Applies a basis permutation given on whole keys.
    pub fn permute(&mut self, f: impl Fn(u128) -> u128) {
        let old = core::mem::take(&mut self.amps);
        self.amps = old.into_iter().map(|(k, a)| (f(k), a)).collect();
    }
}

/// Gathers and scatters the bits of a pin tuple within a global key.
#[derive(Clone, Debug)]
pub(crate) struct PinMap {
    shifts: Vec<u32>,
    mask: u128,
}

impl PinMap {
    pub(crate) fn new(wires: usize, pins: &[usize]) -> Result<Self, SimError> {
        let mut mask = 0u128;
        let mut shifts = Vec::with_capacity(pins.len());
        for &p in pins {
            if p >= wires {
                return Err(SimError::BadBinding { wire: p, wires });
            }
            let s = (wires - 1 - p) as u32;
            if mask & (1 << s) != 0 {
                return Err(SimError::BadBinding { wire: p, wires });
            }
            mask |= 1 << s;
            shifts.push(s);
        }
        Ok(Self { shifts, mask })
    }

    /// Local index (pin 0 most significant) and the key with pin bits cleared.
    pub(crate) fn split(&self, key: u128) -> (usize, u128) {
        let k = self.shifts.len();
        let mut local = 0usize;
        for (i, &s) in self.shifts.iter().enumerate() {
            local |= (((key >> s) & 1) as usize) << (k - 1 - i);
        }
        (local, key & !self.mask)
    }

    pub(crate) fn scatter(&self, local: usize) -> u128 {
        let k = self.shifts.len();
        let mut key = 0u128;
        for (i, &s) in self.shifts.iter().enumerate() {
            key |= (((local >> (k - 1 - i)) & 1) as u128) << s;
        }
        key
    }
}

/// Image of one basis state under a gate sequence on a few wires, tracked as
/// a short sparse vector.
pub(crate) fn local_image(
    wires: usize,
    gates: &[Gate],
    input: usize,
    prune: f64,
) -> Vec<(usize, Complex64)> {
    let mut v: Vec<(usize, Complex64)> = alloc::vec![(input, Complex64::new(1.0, 0.0))];
    let mut scratch: Vec<(usize, Complex64)> = Vec::new();
    let bit = |w: usize| 1usize << (wires - 1 - w);
    for g in gates {
        match g {
            Gate::Cnot { control, target } => {
                let (cb, tb) = (bit(*control), bit(*target));
                for e in v.iter_mut() {
                    if e.0 & cb != 0 {
                        e.0 ^= tb;
                    }
                }
            }
            Gate::GPhase { angle } => {
                let z = Complex64::from_polar(1.0, angle.value());
                v.iter_mut().for_each(|e| e.1 *= z);
            }
            Gate::P { wire, angle } => {
                let b = bit(*wire);
                let z = Complex64::from_polar(1.0, angle.value());
                for e in v.iter_mut() {
                    if e.0 & b != 0 {
                        e.1 *= z;
                    }
                }
            }
            Gate::R { wire, .. } => {
                let b = bit(*wire);
                let m = g.single_qubit_matrix().expect("one-wire gate");
                let (c, s) = (m[0][0].re, m[1][0].re);
                scratch.clear();
                for &(k, a) in &v {
                    let (own, other) = if k & b == 0 {
                        (c * a, s * a)
                    } else {
                        (c * a, -s * a)
                    };
                    for (key, z) in [(k, own), (k ^ b, other)] {
                        match scratch.iter_mut().find(|e| e.0 == key) {
                            Some(e) => e.1 += z,
                            None => scratch.push((key, z)),
                        }
                    }
                }
                scratch.retain(|e| e.1.norm() > prune);
                core::mem::swap(&mut v, &mut scratch);
            }
        }
    }
    v.sort_by_key(|e| e.0);
    v
}
