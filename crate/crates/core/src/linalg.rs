//! Thin wrappers over nalgebra's dense eigen/singular-value solvers plus the
//! multiset comparisons used by the verification reports.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

const EIG_EPS: f64 = f64::EPSILON;
const EIG_MAX_ITER: usize = 0;

fn no_convergence<T: nalgebra::ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Error {
    let max_entry = m.iter().map(|z| z.clone().modulus()).fold(0.0, f64::max);
    Error::NoConvergence {
        dimension: m.nrows(),
        max_entry,
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let eig = SymmetricEigen::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER).ok_or_else(|| no_convergence(m))?;
    Ok(sort_eigenpairs(eig.eigenvalues, eig.eigenvectors))
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigh(m: &RMatrix) -> Result<(Vec<f64>, RMatrix)> {
    let eig = SymmetricEigen::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER).ok_or_else(|| no_convergence(m))?;
    Ok(sort_eigenpairs(eig.eigenvalues, eig.eigenvectors))
}

fn sort_eigenpairs<T: nalgebra::Scalar>(values: DVector<f64>, vectors: DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let columns: Vec<_> = order.iter().map(|&i| vectors.column(i).into_owned()).collect();
    (sorted, DMatrix::from_columns(&columns))
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER).ok_or_else(|| no_convergence(m))?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Singular values of a square matrix, ascending.
///
/// Computed from the symmetric embedding `[[0, M], [Mᵀ, 0]]`, whose
/// eigenvalues are `±σ`; nalgebra's bidiagonal SVD loses accuracy on the
/// exactly paired singular values of antisymmetric matrices.
pub fn singular_values(m: &RMatrix) -> Result<Vec<f64>> {
    let (values, _) = symmetric_eigh(&symmetric_embedding(m))?;
    let n = m.nrows();
    Ok(values[n..].iter().map(|s| s.max(0.0)).collect())
}

fn symmetric_embedding(m: &RMatrix) -> RMatrix {
    let n = m.nrows();
    let mut big = RMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, n), (n, n)).copy_from(m);
    big.view_mut((n, 0), (n, n)).copy_from(&m.transpose());
    big
}

/// Orthonormal basis of `{v : M v = 0 and Mᵀ v = 0}` up to singular values `<= tol`.
/// For antisymmetric `M` this is the null space.
pub fn kernel_basis(m: &RMatrix, tol: f64) -> Result<Vec<DVector<f64>>> {
    let n = m.nrows();
    let (values, vectors) = symmetric_eigh(&symmetric_embedding(m))?;
    let mut spanning = Vec::new();
    for (j, &v) in values.iter().enumerate() {
        if v.abs() <= tol {
            spanning.push(vectors.view((0, j), (n, 1)).column(0).into_owned());
            spanning.push(vectors.view((n, j), (n, 1)).column(0).into_owned());
        }
    }
    orthonormal_span(&spanning, n)
}

/// Orthonormal basis of the span of `vectors` (all of length `dim`), from
/// the dominant eigenvectors of `Σ v vᵀ`. Vectors come out ordered by
/// decreasing weight.
pub fn orthonormal_span(vectors: &[DVector<f64>], dim: usize) -> Result<Vec<DVector<f64>>> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let mut gram = RMatrix::zeros(dim, dim);
    for v in vectors {
        gram += v * v.transpose();
    }
    let (values, basis) = symmetric_eigh(&gram)?;
    let top = values.last().copied().unwrap_or(0.0);
    let cutoff = 1e-6 * top.max(f64::MIN_POSITIVE);
    Ok((0..dim).rev().filter(|&j| values[j] > cutoff).map(|j| basis.column(j).into_owned()).collect())
}

pub fn spectral_norm(m: &RMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).map(|s| s.last().copied().unwrap_or(0.0)).unwrap_or(f64::NAN)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &RMatrix) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn commutator(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x * y - y * x
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Largest pairwise deviation between two sorted lists of equal length.
/// Returns `f64::INFINITY` when the lengths differ.
pub fn sorted_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Single-linkage clustering of sorted values: a new cluster starts whenever
/// the gap to the previous value exceeds `tol(previous)`.
pub fn cluster_sorted(values: &[f64], tol: impl Fn(f64) -> f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol(values[i - 1]) {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}
