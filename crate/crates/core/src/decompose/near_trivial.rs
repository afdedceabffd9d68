use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::DecomposeError;
use crate::numerics::{Cx, DenseMatrix, Real, TOL_CONSTRUCT};

/// Two-level unitaries. Indices are 0-based.
#[derive(Clone, Debug)]
pub enum NearKind<R> {
    /// `e_j ↦ e^{iθ} e_j`.
    Phase { j: usize, theta: R },
    /// `e_i ↦ cos θ e_i − sin θ e_j`, `e_j ↦ sin θ e_i + cos θ e_j`, with `i < j`.
    Rotation { i: usize, j: usize, theta: R },
}

#[derive(Clone, Debug)]
pub struct NearTrivialMatrix<R = f64> {
    pub dim: usize,
    pub kind: NearKind<R>,
}

impl<R: Real> NearTrivialMatrix<R> {
    pub fn phase(dim: usize, j: usize, theta: R) -> Self {
        Self {
            dim,
            kind: NearKind::Phase { j, theta },
        }
    }

    pub fn rotation(dim: usize, i: usize, j: usize, theta: R) -> Self {
        debug_assert!(i < j);
        Self {
            dim,
            kind: NearKind::Rotation { i, j, theta },
        }
    }

    pub fn theta(&self) -> &R {
        match &self.kind {
            NearKind::Phase { theta, .. } | NearKind::Rotation { theta, .. } => theta,
        }
    }

    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            NearKind::Phase { j, theta } => NearKind::Phase {
                j: *j,
                theta: theta.neg(),
            },
            NearKind::Rotation { i, j, theta } => NearKind::Rotation {
                i: *i,
                j: *j,
                theta: theta.neg(),
            },
        };
        Self {
            dim: self.dim,
            kind,
        }
    }

    pub fn is_identity(&self) -> bool {
        let t = super::gates::rem_tau(self.theta().to_f64());
        t.min(core::f64::consts::TAU - t) <= 1e-15
    }

    pub fn materialize(&self) -> DenseMatrix {
        let mut m = DenseMatrix::identity(self.dim);
        match &self.kind {
            NearKind::Phase { j, theta } => {
                m.set(*j, *j, Complex64::from_polar(1.0, theta.to_f64()));
            }
            NearKind::Rotation { i, j, theta } => {
                let (s, c) = libm::sincos(theta.to_f64());
                m.set(*i, *i, Complex64::new(c, 0.0));
                m.set(*j, *i, Complex64::new(-s, 0.0));
                m.set(*i, *j, Complex64::new(s, 0.0));
                m.set(*j, *j, Complex64::new(c, 0.0));
            }
        }
        m
    }

    /// Applies the matrix to a dense vector in place.
    pub fn apply(&self, v: &mut [Complex64]) {
        match &self.kind {
            NearKind::Phase { j, theta } => v[*j] *= Complex64::from_polar(1.0, theta.to_f64()),
            NearKind::Rotation { i, j, theta } => {
                let (s, c) = libm::sincos(theta.to_f64());
                let (a, b) = (v[*i], v[*j]);
                v[*i] = a * c + b * s;
                v[*j] = -a * s + b * c;
            }
        }
    }
}

/// Multiplies a factor list given in application order.
pub fn product<R: Real>(dim: usize, factors: &[NearTrivialMatrix<R>]) -> DenseMatrix {
    let mut out = DenseMatrix::identity(dim);
    for f in factors {
        out = f.materialize().mat_mul(&out).expect("matching dims");
    }
    out
}

/// Angle `φ` with `e^{iφ} v` real and nonnegative.
pub(crate) fn phase_angle<R: Real>(v: &Cx<R>) -> Result<R, DecomposeError> {
    if v.is_zero() {
        return Ok(R::zero());
    }
    let norm = v.norm_sqr().sqrt()?;
    match v.im.sign() {
        core::cmp::Ordering::Greater => Ok(R::pi().shift(1).sub(&v.re.div(&norm)?.acos()?)),
        core::cmp::Ordering::Less => Ok(v.re.div(&norm)?.acos()?),
        core::cmp::Ordering::Equal => {
            if v.re.sign() == core::cmp::Ordering::Less {
                Ok(R::pi())
            } else {
                Ok(R::zero())
            }
        }
    }
}

/// Angle moving weight `tail` (already a norm) onto a coordinate of size `head >= 0`.
pub(crate) fn rotation_angle<R: Real>(head: &R, tail: &R) -> Result<R, DecomposeError> {
    if tail.is_zero() {
        Ok(R::zero())
    } else if head.is_zero() {
        Ok(R::pi().shift(-1))
    } else {
        Ok(tail.div(head)?.atan())
    }
}

/// Factors `P_1..P_N` then `R_{N-1}..R_1` whose application maps the unit vector `v` to `e_1`.
pub fn column_reduce<R: Real>(v: &[Cx<R>]) -> Result<Vec<NearTrivialMatrix<R>>, DecomposeError> {
    let n = v.len();
    if n == 0 {
        return Err(DecomposeError::NotUnit { norm: 0.0 });
    }
    let norm = libm::sqrt(v.iter().map(|z| z.to_c64().norm_sqr()).sum::<f64>());
    if (norm - 1.0).abs() > TOL_CONSTRUCT {
        return Err(DecomposeError::NotUnit { norm });
    }
    let mut factors = Vec::with_capacity(2 * n - 1);
    let mut mags = Vec::with_capacity(n);
    for (j, z) in v.iter().enumerate() {
        factors.push(NearTrivialMatrix::phase(n, j, phase_angle(z)?));
        mags.push(z.norm_sqr());
    }
    // tail[i] = Σ_{j > i} |v_j|²
    let mut tail = R::zero();
    let mut rotations = Vec::with_capacity(n - 1);
    for i in (0..n - 1).rev() {
        tail = tail.add(&mags[i + 1]);
        let theta = rotation_angle(&mags[i].sqrt()?, &tail.sqrt()?)?;
        rotations.push(NearTrivialMatrix::rotation(n, i, i + 1, theta));
    }
    factors.extend(rotations);
    Ok(factors)
}

/// Sparse working copy of a square matrix, reduced by left row operations.
#[derive(Clone, Debug)]
pub struct WorkMatrix<R> {
    dim: usize,
    rows: Vec<BTreeMap<usize, Cx<R>>>,
    cols: Vec<BTreeSet<usize>>,
}

impl<R: Real> WorkMatrix<R> {
    pub fn from_dense(m: &DenseMatrix) -> Self {
        let dim = m.dim();
        let columns = (0..dim)
            .map(|c| (0..dim).map(|r| (r, Cx::from_c64(m.get(r, c)))).collect())
            .collect();
        Self::from_columns(dim, columns)
    }

    /// Builds from per-column `(row, value)` lists; zero entries are dropped.
    pub fn from_columns(dim: usize, columns: Vec<Vec<(usize, Cx<R>)>>) -> Self {
        let mut rows = vec![BTreeMap::new(); dim];
        let mut cols = vec![BTreeSet::new(); dim];
        for (c, entries) in columns.into_iter().enumerate() {
            for (r, z) in entries {
                if !z.is_zero() {
                    rows[r].insert(c, z);
                    cols[c].insert(r);
                }
            }
        }
        Self { dim, rows, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn get(&self, r: usize, c: usize) -> Option<&Cx<R>> {
        self.rows[r].get(&c)
    }

    fn store(&mut self, r: usize, c: usize, z: Cx<R>) {
        if z.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, z);
            self.cols[c].insert(r);
        }
    }

    /// Multiplies row `r` (columns after `k`) by `z`, then sets column `k` to `pivot`.
    fn scale_row(&mut self, r: usize, k: usize, z: &Cx<R>, pivot: Cx<R>) {
        let keys: Vec<usize> = self.rows[r].range(k + 1..).map(|(&c, _)| c).collect();
        for c in keys {
            let v = self.rows[r][&c].mul(z);
            self.store(r, c, v);
        }
        self.store(r, k, pivot);
    }

    /// `row_i ← c·row_i + s·row_j`, `row_j ← −s·row_i + c·row_j` beyond column `k`;
    /// column `k` becomes `(pivot, 0)`.
    fn rotate_rows(&mut self, i: usize, j: usize, k: usize, c: &R, s: &R, pivot: Cx<R>) {
        let keys: BTreeSet<usize> = self.rows[i]
            .range(k + 1..)
            .chain(self.rows[j].range(k + 1..))
            .map(|(&col, _)| col)
            .collect();
        let zero = Cx::zero();
        for col in keys {
            let a = self.get(i, col).unwrap_or(&zero).clone();
            let b = self.get(j, col).unwrap_or(&zero).clone();
            let ni = a.scale(c).add(&b.scale(s));
            let nj = b.scale(c).sub(&a.scale(s));
            self.store(i, col, ni);
            self.store(j, col, nj);
        }
        self.store(i, k, pivot);
        self.store(j, k, Cx::zero());
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, z) in row {
                m.set(r, c, z.to_c64());
            }
        }
        m
    }
}

/// Factors `U_1..U_m` (application order) with `U = U_m ⋯ U_1`.
pub fn near_trivial_decompose(
    u: &DenseMatrix,
) -> Result<Vec<NearTrivialMatrix<f64>>, DecomposeError> {
    let defect = u.unitarity_defect();
    if defect > TOL_CONSTRUCT {
        return Err(DecomposeError::NotUnitary { defect });
    }
    reduce_work(WorkMatrix::<f64>::from_dense(u))
}

/// Column sweep over a sparse work matrix.
///
/// Each column is made real by phases and its weight is then folded onto the
/// pivot by rotations between consecutive nonzero rows, so zero entries cost
/// no factors.
pub fn reduce_work<R: Real>(
    mut w: WorkMatrix<R>,
) -> Result<Vec<NearTrivialMatrix<R>>, DecomposeError> {
    let n = w.dim;
    let mut applied: Vec<NearTrivialMatrix<R>> = Vec::new();
    for k in 0..n {
        let support: Vec<usize> = w.cols[k].range(k..).copied().collect();
        let mut mags: Vec<(usize, R)> = Vec::with_capacity(support.len() + 1);
        if support.first() != Some(&k) {
            mags.push((k, R::zero()));
        }
        for &r in &support {
            let z = w.get(r, k).expect("support entry").clone();
            let phi = phase_angle(&z)?;
            if phi.is_zero() {
                mags.push((r, z.re.clone()));
                continue;
            }
            let mag = z.norm_sqr().sqrt()?;
            let unit = Cx::new(z.re.div(&mag)?, z.im.neg().div(&mag)?);
            w.scale_row(r, k, &unit, Cx::real(mag.clone()));
            applied.push(NearTrivialMatrix::phase(n, r, phi));
            mags.push((r, mag));
        }
        let mut acc = mags.last().expect("pivot present").1.clone();
        for idx in (1..mags.len()).rev() {
            let (i, head) = (mags[idx - 1].0, mags[idx - 1].1.clone());
            let j = mags[idx].0;
            let theta = rotation_angle(&head, &acc)?;
            let norm = head.mul(&head).add(&acc.mul(&acc)).sqrt()?;
            let (c, s) = (head.div(&norm)?, acc.div(&norm)?);
            w.rotate_rows(i, j, k, &c, &s, Cx::real(norm.clone()));
            applied.push(NearTrivialMatrix::rotation(n, i, j, theta));
            acc = norm;
        }
    }
    Ok(applied
        .iter()
        .rev()
        .map(NearTrivialMatrix::inverse)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Cx::new(re, im)
    }

    #[test]
    fn basis_vector_has_zero_angles() {
        let f = column_reduce(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(f.len(), 5);
        assert!(f.iter().all(|m| *m.theta() == 0.0));
    }

    #[test]
    fn non_unit_vector_is_rejected() {
        assert!(matches!(
            column_reduce(&[c(1.0, 1.0)]),
            Err(DecomposeError::NotUnit { .. })
        ));
    }

    #[test]
    fn imaginary_entry_uses_upper_branch() {
        let f = column_reduce(&[c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert!((f[0].theta() - 1.5 * core::f64::consts::PI).abs() < 1e-15);
    }
}
