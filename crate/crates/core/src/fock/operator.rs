use std::ops::{Add, Mul, Sub};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, RMatrix, C64};

/// Complex sparse matrix in compressed-row form over an occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl FockOperator {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            indptr: vec![0; dim + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            indptr: (0..=dim).collect(),
            indices: (0..dim).collect(),
            values: vec![C64::new(1.0, 0.0); dim],
        }
    }

    /// Sums duplicate entries and drops exact zeros.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0; dim + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside {dim}x{dim}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                indices.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        let mut out_idx = Vec::with_capacity(indices.len());
        let mut out_val = Vec::with_capacity(values.len());
        for ((r, c), v) in rows.into_iter().zip(indices).zip(values) {
            if v != C64::new(0.0, 0.0) {
                indptr[r + 1] += 1;
                out_idx.push(c);
                out_val.push(v);
            }
        }
        for r in 0..dim {
            indptr[r + 1] += indptr[r];
        }
        Self {
            dim,
            indptr,
            indices: out_idx,
            values: out_val,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.row(r).find(|&(j, _)| j == c).map(|(_, v)| v).unwrap_or_default()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn scale(&self, alpha: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        if alpha == C64::new(0.0, 0.0) {
            return Self::zero(self.dim);
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::Domain(format!("operator dimensions differ: {} vs {}", self.dim, other.dim)))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_triplets(self.dim, self.triplets().chain(other.triplets()).collect()))
    }

    /// Sparse product (row-wise accumulation into a dense scratch row).
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut touched = vec![false; n];
        let mut cols = Vec::new();
        let mut indptr = Vec::with_capacity(n + 1);
        indptr.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for r in 0..n {
            for (k, x) in self.row(r) {
                for (c, y) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        cols.push(c);
                    }
                    acc[c] += x * y;
                }
            }
            cols.sort_unstable();
            for &c in &cols {
                if acc[c] != C64::new(0.0, 0.0) {
                    indices.push(c);
                    values.push(acc[c]);
                }
                acc[c] = C64::new(0.0, 0.0);
                touched[c] = false;
            }
            cols.clear();
            indptr.push(indices.len());
        }
        Ok(Self {
            dim: n,
            indptr,
            indices,
            values,
        })
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        assert_eq!(v.len(), self.dim);
        DVector::from_iterator(self.dim, (0..self.dim).map(|r| self.row(r).map(|(c, x)| x * v[c]).sum::<C64>()))
    }

    /// Real part applied to a real vector; meaningful when [`Self::is_real`].
    pub fn apply_real(&self, v: &DVector<f64>) -> DVector<f64> {
        assert_eq!(v.len(), self.dim);
        DVector::from_iterator(self.dim, (0..self.dim).map(|r| self.row(r).map(|(c, x)| x.re * v[c]).sum::<f64>()))
    }

    /// Largest entry modulus (0 for the zero operator).
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn to_dense_real(&self) -> RMatrix {
        let mut m = RMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v.re;
        }
        m
    }

    pub fn from_dense(m: &CMatrix) -> Self {
        let mut triplets = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                triplets.push((r, c, m[(r, c)]));
            }
        }
        Self::from_triplets(m.nrows(), triplets)
    }

    /// `⟨u| X |v⟩`.
    pub fn matrix_element(&self, u: &DVector<C64>, v: &DVector<C64>) -> C64 {
        u.dotc(&self.apply(v))
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: Self) -> FockOperator {
        self.try_add(rhs).expect("operator dimensions differ")
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: Self) -> FockOperator {
        self.try_add(&rhs.scale(C64::new(-1.0, 0.0))).expect("operator dimensions differ")
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: Self) -> FockOperator {
        self.try_mul(rhs).expect("operator dimensions differ")
    }
}

impl Mul<&FockOperator> for C64 {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        rhs.scale(self)
    }
}

impl Mul<&FockOperator> for f64 {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        rhs.scale(C64::new(self, 0.0))
    }
}

/// `‖XY - YX‖_max`.
pub fn commutator_norm(x: &FockOperator, y: &FockOperator) -> Result<f64> {
    let xy = x.try_mul(y)?;
    let yx = y.try_mul(x)?;
    Ok((&xy - &yx).max_abs())
}

/// `‖XY + YX - target‖_max`.
pub fn anticommutator_defect(x: &FockOperator, y: &FockOperator, target: &FockOperator) -> Result<f64> {
    let sum = x.try_mul(y)?.try_add(&y.try_mul(x)?)?;
    Ok((&sum - target).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let op = FockOperator::from_triplets(3, vec![(0, 1, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0)), (2, 0, c(0.0, 2.0)), (2, 0, c(1.0, 0.0))]);
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(2, 0), c(1.0, 2.0));
    }

    #[test]
    fn product_matches_dense() {
        let x = FockOperator::from_triplets(3, vec![(0, 1, c(1.0, 1.0)), (1, 2, c(2.0, 0.0)), (2, 2, c(0.0, -1.0))]);
        let y = FockOperator::from_triplets(3, vec![(1, 0, c(3.0, 0.0)), (2, 1, c(1.0, 0.5)), (0, 0, c(1.0, 0.0))]);
        let dense = x.to_dense() * y.to_dense();
        assert_eq!((&x * &y).to_dense(), dense);
        assert_eq!(x.adjoint().to_dense(), x.to_dense().adjoint());
    }

    #[test]
    fn self_commutator_is_zero() {
        let x = FockOperator::from_triplets(2, vec![(0, 1, c(0.3, 0.2)), (1, 0, c(-1.0, 0.0))]);
        assert_eq!(commutator_norm(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_domain_error() {
        let err = commutator_norm(&FockOperator::identity(2), &FockOperator::identity(4)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
