use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::encode::{local_index, Marker};
use super::{WireLayout, YaoError};
use crate::numerics::{Cx, Real, TOL_CONSTRUCT};
use crate::qtm::{Move, QtmSpec};

/// Residual norm below which a Gram–Schmidt candidate is rejected.
pub const COMPLETION_REJECT: f64 = 1e-8;

type SparseVec<R> = BTreeMap<usize, Cx<R>>;

fn inner<R: Real>(a: &SparseVec<R>, b: &SparseVec<R>) -> Option<Cx<R>> {
    let (small, large, flip) = if a.len() <= b.len() {
        (a, b, false)
    } else {
        (b, a, true)
    };
    let mut acc: Option<Cx<R>> = None;
    for (k, x) in small {
        if let Some(y) = large.get(k) {
            let term = if flip {
                y.conj().mul(x)
            } else {
                x.conj().mul(y)
            };
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term),
            });
        }
    }
    acc
}

fn norm_sqr<R: Real>(v: &SparseVec<R>) -> R {
    v.values().fold(R::zero(), |acc, z| acc.add(&z.norm_sqr()))
}

/// `v -= k * b`, dropping entries that cancel.
fn sub_scaled<R: Real>(v: &mut SparseVec<R>, b: &SparseVec<R>, k: &Cx<R>) {
    for (i, z) in b {
        let d = k.mul(z);
        let next = match v.get(i) {
            Some(x) => x.sub(&d),
            None => d.neg(),
        };
        if next.is_zero() {
            v.remove(i);
        } else {
            v.insert(*i, next);
        }
    }
}

/// Orthogonalizes `v` against `basis` and normalizes it, or returns `None`
/// when the residual is below the rejection threshold.
fn orthonormalize<R: Real>(
    basis: &[SparseVec<R>],
    mut v: SparseVec<R>,
) -> Result<Option<SparseVec<R>>, YaoError> {
    for b in basis {
        if let Some(ov) = inner(b, &v) {
            if !ov.is_zero() {
                sub_scaled(&mut v, b, &ov);
            }
        }
    }
    let n2 = norm_sqr(&v);
    if libm::sqrt(n2.to_f64().max(0.0)) <= COMPLETION_REJECT {
        return Ok(None);
    }
    let inv = R::one().div(&n2.sqrt()?)?;
    for z in v.values_mut() {
        *z = z.scale(&inv);
    }
    Ok(Some(v))
}

fn push_term<R: Real>(v: &mut SparseVec<R>, idx: usize, a: Cx<R>) {
    let next = match v.remove(&idx) {
        Some(x) => x.add(&a),
        None => a,
    };
    if !next.is_zero() {
        v.insert(idx, next);
    }
}

/// `(w, v)` pairs: G1 must send the basis state `w` to `v`.
pub fn transition_pairs<R: Real>(spec: &QtmSpec) -> Vec<(usize, SparseVec<R>)> {
    let lay = WireLayout::local(spec.states(), spec.symbols());
    let sym = spec.symbols();
    let mut out = Vec::new();
    for p in 0..spec.states() {
        for s1 in 0..sym {
            for s in 0..sym {
                for s3 in 0..sym {
                    let w = local_index(
                        &lay,
                        p,
                        [(s1, Marker::Idle), (s, Marker::Head), (s3, Marker::Idle)],
                    );
                    let mut v = SparseVec::new();
                    for tr in spec.row(p, s) {
                        let cells = match tr.moves {
                            Move::Left => [
                                (s1, Marker::Arrived),
                                (tr.write, Marker::Idle),
                                (s3, Marker::Idle),
                            ],
                            Move::Stay => [
                                (s1, Marker::Idle),
                                (tr.write, Marker::Arrived),
                                (s3, Marker::Idle),
                            ],
                            Move::Right => [
                                (s1, Marker::Idle),
                                (tr.write, Marker::Idle),
                                (s3, Marker::Arrived),
                            ],
                        };
                        push_term(
                            &mut v,
                            local_index(&lay, tr.next, cells),
                            tr.amplitude.lift(),
                        );
                    }
                    out.push((w, v));
                }
            }
        }
    }
    out
}

/// Basis states fixed outright: middle marker not `Head`, no marker `Arrived`.
pub fn fixed_basis_states(spec: &QtmSpec) -> Vec<usize> {
    let lay = WireLayout::local(spec.states(), spec.symbols());
    let sym = spec.symbols();
    let quiet = [Marker::Idle, Marker::Head];
    let mut out = Vec::new();
    for p in 0..spec.states() {
        for s1 in 0..sym {
            for s2 in 0..sym {
                for s3 in 0..sym {
                    for m1 in quiet {
                        for m3 in quiet {
                            out.push(local_index(
                                &lay,
                                p,
                                [(s1, m1), (s2, Marker::Idle), (s3, m3)],
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Vectors that must be fixed because they hold a head that left the middle
/// cell to the right or stayed there.
pub fn stay_right_family<R: Real>(spec: &QtmSpec) -> Vec<SparseVec<R>> {
    let lay = WireLayout::local(spec.states(), spec.symbols());
    let sym = spec.symbols();
    let mut out = Vec::new();
    for p in 0..spec.states() {
        for s in 0..sym {
            for s2 in 0..sym {
                for s3 in 0..sym {
                    let mut v = SparseVec::new();
                    for tr in spec.row(p, s) {
                        let cells = match tr.moves {
                            Move::Stay => [
                                (tr.write, Marker::Arrived),
                                (s2, Marker::Idle),
                                (s3, Marker::Idle),
                            ],
                            Move::Right => [
                                (tr.write, Marker::Idle),
                                (s2, Marker::Arrived),
                                (s3, Marker::Idle),
                            ],
                            Move::Left => continue,
                        };
                        push_term(
                            &mut v,
                            local_index(&lay, tr.next, cells),
                            tr.amplitude.lift(),
                        );
                    }
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Vectors that must be fixed because a right move landed on the left cell.
pub fn right_arrival_family<R: Real>(spec: &QtmSpec) -> Vec<SparseVec<R>> {
    let lay = WireLayout::local(spec.states(), spec.symbols());
    let sym = spec.symbols();
    let mut out = Vec::new();
    for p in 0..spec.states() {
        for s in 0..sym {
            for tau in 0..sym {
                for s1 in 0..sym {
                    for s2 in 0..sym {
                        for s3 in 0..sym {
                            let mut v = SparseVec::new();
                            for q in 0..spec.states() {
                                if let Some(a) = spec.amplitude(p, s, q, tau, Move::Right) {
                                    let cells = [
                                        (s1, Marker::Arrived),
                                        (s2, Marker::Idle),
                                        (s3, Marker::Idle),
                                    ];
                                    push_term(&mut v, local_index(&lay, q, cells), a.lift());
                                }
                            }
                            out.push(v);
                        }
                    }
                }
            }
        }
    }
    out
}

/// G1 as sparse columns: `columns[j]` lists the nonzero `(row, value)` of `G1 e_j`.
#[derive(Clone, Debug)]
pub struct G1Build<R> {
    pub wires: usize,
    pub columns: Vec<Vec<(usize, Cx<R>)>>,
}

/// Builds G1 by completing the specified partial isometry. Outside the
/// combined support of the specified vectors G1 is the identity.
pub fn build_g1<R: Real>(spec: &QtmSpec) -> Result<G1Build<R>, YaoError> {
    let lay = WireLayout::local(spec.states(), spec.symbols());
    let wires = lay.g1_wires();
    if wires > super::MAX_DENSE_WIRES {
        return Err(YaoError::GateTooWide(wires));
    }
    let dim = 1usize << wires;

    let pairs = transition_pairs::<R>(spec);
    let images: Vec<&SparseVec<R>> = pairs.iter().map(|(_, v)| v).collect();
    for (a, va) in images.iter().enumerate() {
        let n = norm_sqr(va).to_f64();
        if (n - 1.0).abs() > TOL_CONSTRUCT {
            return Err(YaoError::CompletionFailure(format!(
                "transition image {a} has squared norm {n}"
            )));
        }
        for vb in &images[a + 1..] {
            if let Some(ov) = inner(va, vb) {
                let m = ov.to_c64().norm();
                if m > TOL_CONSTRUCT {
                    return Err(YaoError::CompletionFailure(format!(
                        "transition images overlap by {m:e}"
                    )));
                }
            }
        }
    }

    // Orthonormal basis of the fixed subspace spanned by the two derived families.
    let mut fixed: Vec<SparseVec<R>> = Vec::new();
    for v in stay_right_family::<R>(spec)
        .into_iter()
        .chain(right_arrival_family::<R>(spec))
    {
        if v.is_empty() {
            continue;
        }
        if let Some(b) = orthonormalize(&fixed, v)? {
            fixed.push(b);
        }
    }
    for (a, v) in images.iter().enumerate() {
        for h in &fixed {
            if let Some(ov) = inner(h, v) {
                let m = ov.to_c64().norm();
                if m > TOL_CONSTRUCT {
                    return Err(YaoError::CompletionFailure(format!(
                        "transition image {a} overlaps the fixed subspace by {m:e}"
                    )));
                }
            }
        }
    }

    let mut domain: Vec<SparseVec<R>> = Vec::new();
    let mut codomain: Vec<SparseVec<R>> = Vec::new();
    for (w, v) in &pairs {
        let mut e = SparseVec::new();
        e.insert(*w, Cx::one());
        domain.push(e);
        codomain.push(v.clone());
    }
    for h in &fixed {
        domain.push(h.clone());
        codomain.push(h.clone());
    }

    let mut support: Vec<usize> = domain
        .iter()
        .chain(&codomain)
        .flat_map(|v| v.keys().copied())
        .collect();
    support.sort_unstable();
    support.dedup();

    let complete = |system: &mut Vec<SparseVec<R>>| -> Result<(), YaoError> {
        for &s in &support {
            let mut e = SparseVec::new();
            e.insert(s, Cx::one());
            if let Some(b) = orthonormalize(system, e)? {
                system.push(b);
            }
        }
        Ok(())
    };
    complete(&mut domain)?;
    complete(&mut codomain)?;
    if domain.len() != support.len() || codomain.len() != support.len() {
        return Err(YaoError::CompletionFailure(format!(
            "completion produced {} and {} vectors for a {}-dimensional support",
            domain.len(),
            codomain.len(),
            support.len()
        )));
    }

    // G1 e_s = sum_k conj(D_k[s]) C_k.
    let mut columns: Vec<Vec<(usize, Cx<R>)>> = (0..dim).map(|j| vec![(j, Cx::one())]).collect();
    let mut by_row: BTreeMap<usize, Vec<(usize, Cx<R>)>> = BTreeMap::new();
    for (k, d) in domain.iter().enumerate() {
        for (s, z) in d {
            by_row.entry(*s).or_default().push((k, z.conj()));
        }
    }
    for &s in &support {
        let mut col = SparseVec::new();
        for (k, coeff) in by_row.get(&s).map(Vec::as_slice).unwrap_or(&[]) {
            for (r, z) in &codomain[*k] {
                push_term(&mut col, *r, coeff.mul(z));
            }
        }
        columns[s] = col.into_iter().collect();
    }
    Ok(G1Build { wires, columns })
}

/// A `2^wires`-dimensional unitary stored by sparse columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseUnitary {
    wires: usize,
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl SparseUnitary {
    pub fn new(wires: usize, columns: Vec<Vec<(usize, Complex64)>>) -> Self {
        debug_assert_eq!(columns.len(), 1 << wires);
        Self { wires, columns }
    }

    pub fn from_build<R: Real>(b: &G1Build<R>) -> Self {
        let columns = b
            .columns
            .iter()
            .map(|c| c.iter().map(|(r, z)| (*r, z.to_c64())).collect())
            .collect();
        Self {
            wires: b.wires,
            columns,
        }
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, Complex64)] {
        &self.columns[j]
    }

    /// `U v` for a sparse `v`.
    pub fn apply(&self, v: &BTreeMap<usize, Complex64>) -> BTreeMap<usize, Complex64> {
        let mut out = BTreeMap::new();
        for (j, a) in v {
            for (r, z) in &self.columns[*j] {
                *out.entry(*r).or_insert(Complex64::new(0.0, 0.0)) += a * z;
            }
        }
        out
    }

    /// Max-entry deviation of `U^dagger U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim()];
        for (j, col) in self.columns.iter().enumerate() {
            for (r, z) in col {
                rows[*r].push((j, *z));
            }
        }
        let mut worst: f64 = 0.0;
        for (a, col) in self.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, Complex64> = BTreeMap::new();
            for (r, z) in col {
                for (b, y) in &rows[*r] {
                    *acc.entry(*b).or_insert(Complex64::new(0.0, 0.0)) += z.conj() * y;
                }
            }
            if !acc.contains_key(&a) {
                worst = worst.max(1.0);
            }
            for (b, g) in acc {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

/// Largest residuals of the defining conditions for a candidate G1.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct G1Residuals {
    pub transitions: f64,
    pub fixed_basis: f64,
    pub stay_right: f64,
    pub right_arrival: f64,
}

impl G1Residuals {
    pub fn max(&self) -> f64 {
        self.transitions
            .max(self.fixed_basis)
            .max(self.stay_right)
            .max(self.right_arrival)
    }
}

fn to_fast(v: &SparseVec<f64>) -> BTreeMap<usize, Complex64> {
    v.iter().map(|(k, z)| (*k, z.to_c64())).collect()
}

fn distance(a: &BTreeMap<usize, Complex64>, b: &BTreeMap<usize, Complex64>) -> f64 {
    let mut acc = 0.0;
    for (k, x) in a {
        acc += (x - b.get(k).copied().unwrap_or_default()).norm_sqr();
    }
    for (k, y) in b {
        if !a.contains_key(k) {
            acc += y.norm_sqr();
        }
    }
    libm::sqrt(acc)
}

/// Checks `u` against the transition condition and every fixed vector
/// generated from the transition function.
pub fn g1_residuals(spec: &QtmSpec, u: &SparseUnitary) -> G1Residuals {
    let mut r = G1Residuals::default();
    for (w, v) in transition_pairs::<f64>(spec) {
        let mut e = BTreeMap::new();
        e.insert(w, Complex64::new(1.0, 0.0));
        r.transitions = r.transitions.max(distance(&u.apply(&e), &to_fast(&v)));
    }
    for s in fixed_basis_states(spec) {
        let mut e = BTreeMap::new();
        e.insert(s, Complex64::new(1.0, 0.0));
        r.fixed_basis = r.fixed_basis.max(distance(&u.apply(&e), &e));
    }
    for h in stay_right_family::<f64>(spec) {
        let h = to_fast(&h);
        r.stay_right = r.stay_right.max(distance(&u.apply(&h), &h));
    }
    for h in right_arrival_family::<f64>(spec) {
        let h = to_fast(&h);
        r.right_arrival = r.right_arrival.max(distance(&u.apply(&h), &h));
    }
    r
}
