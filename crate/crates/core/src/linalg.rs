//! Dense Hermitian eigensolver with exact block splitting.
//!
//! Matrices built from Dicke bases are block diagonal in a conserved charge.
//! The solver finds the connected components of the exact nonzero pattern,
//! diagonalizes each component on its own and scatters the results back, so
//! a few-thousand-dimensional qudit operator costs only as much as its
//! largest block.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type CMatrix<T> = DMatrix<Complex<T>>;

const MAX_SWEEPS: usize = 100_000;

type SparseColumn<T> = Vec<(usize, Complex<T>)>;

/// Eigenvalues ascending, eigenvectors as matching columns.
#[derive(Debug, Clone)]
pub struct Eigh<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

/// Largest `|m_ij - conj(m_ji)|`.
pub fn hermitian_defect<T: Scalar>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m^dagger) / 2`.
pub fn symmetrize<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = T::of(0.5);
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()).scale(half))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Index sets of the irreducible diagonal blocks, each sorted, ordered by
/// smallest member.
pub fn diagonal_blocks<T: Scalar>(m: &CMatrix<T>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if !m[(i, j)].is_zero() || !m[(j, i)].is_zero() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Inputs farther than `1e-10` (scaled to the precision of `T`) from
/// Hermitian are rejected; otherwise `(m + m^dagger)/2` is diagonalized.
pub fn eigh<T: Scalar>(m: &CMatrix<T>) -> Result<Eigh<T>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    let defect = hermitian_defect(m);
    if defect > T::tolerance(1e-10) {
        return Err(Error::NotHermitian(defect.to_f64().unwrap_or(f64::NAN)));
    }
    let sym = symmetrize(m);

    // (eigenvalue, sparse eigenvector) from every block
    let mut pairs: Vec<(T, SparseColumn<T>)> = Vec::with_capacity(n);
    for block in diagonal_blocks(&sym) {
        let size = block.len();
        let sub = CMatrix::from_fn(size, size, |i, j| sym[(block[i], block[j])]);
        let (values, vectors) = T::hermitian_eigen(sub, T::epsilon(), MAX_SWEEPS).ok_or(Error::NoConvergence(size))?;
        for (col, &value) in values.iter().enumerate() {
            let v = block.iter().enumerate().map(|(row, &idx)| (idx, vectors[(row, col)])).collect();
            pairs.push((value, v));
        }
    }
    // stable: equal eigenvalues keep block order
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("eigenvalues are finite"));

    let mut vectors = CMatrix::zeros(n, n);
    let values = pairs
        .into_iter()
        .enumerate()
        .map(|(col, (value, entries))| {
            for (idx, z) in entries {
                vectors[(idx, col)] = z;
            }
            value
        })
        .collect();
    Ok(Eigh { values, vectors })
}

pub fn eigenvalues<T: Scalar>(m: &CMatrix<T>) -> Result<Vec<T>> {
    eigh(m).map(|e| e.values)
}

/// `||(m - lambda) v||_2` for a single column vector `v`.
pub fn residual<T: Scalar>(m: &CMatrix<T>, lambda: T, v: &[Complex<T>]) -> T {
    let n = m.nrows();
    let mut acc = T::zero();
    for i in 0..n {
        let mut row = Complex::zero();
        for (j, vj) in v.iter().enumerate() {
            row += m[(i, j)] * vj;
        }
        row -= v[i].scale(lambda);
        acc += row.norm_sqr();
    }
    acc.sqrt()
}

/// Conjugate transpose.
pub fn adjoint<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    CMatrix::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

/// Every entry multiplied by a real factor.
pub fn scaled<T: Scalar>(m: &CMatrix<T>, factor: T) -> CMatrix<T> {
    m.map(|z| z.scale(factor))
}

/// Frobenius norm.
pub fn frobenius<T: Scalar>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Number of singular values above `tol`, read off the positive eigenvalues
/// of the Hermitian dilation `[[0, m], [m^dagger, 0]]`.
pub fn numeric_rank<T: Scalar>(m: &CMatrix<T>, tol: T) -> Result<usize> {
    let (r, c) = (m.nrows(), m.ncols());
    let dilation = CMatrix::from_fn(r + c, r + c, |i, j| match (i < r, j < r) {
        (true, false) => m[(i, j - r)],
        (false, true) => m[(j, i - r)].conj(),
        _ => Complex::zero(),
    });
    Ok(eigenvalues(&dilation)?.iter().filter(|&&v| v > tol).count())
}
