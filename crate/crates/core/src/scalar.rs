//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type the numeric side of the crate is generic over.
///
/// Implemented for `f32` and `f64`. Exact quantities live in
/// [`ExactRational`](crate::combx::ExactRational) and are converted to a
/// `Scalar` only when a matrix is assembled.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Diagonalizes a Hermitian matrix, returning unsorted eigenvalues and
    /// the eigenvectors as columns. `None` on non-convergence.
    fn hermitian_eigen(
        m: DMatrix<Complex<Self>>,
        eps: Self,
        max_iter: usize,
    ) -> Option<(DVector<Self>, DMatrix<Complex<Self>>)>;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 is representable")
    }

    /// `base` for `f64`; widened to a few hundred ulps of one for narrower types.
    fn tolerance(base: f64) -> Self {
        let floor = Self::epsilon() * Self::of(256.0);
        Self::of(base).max(floor)
    }
}

impl Scalar for f64 {
    fn hermitian_eigen(
        m: DMatrix<Complex<f64>>,
        eps: f64,
        max_iter: usize,
    ) -> Option<(DVector<f64>, DMatrix<Complex<f64>>)> {
        nalgebra::linalg::SymmetricEigen::try_new(m, eps, max_iter).map(|e| (e.eigenvalues, e.eigenvectors))
    }
}

impl Scalar for f32 {
    fn hermitian_eigen(
        m: DMatrix<Complex<f32>>,
        eps: f32,
        max_iter: usize,
    ) -> Option<(DVector<f32>, DMatrix<Complex<f32>>)> {
        nalgebra::linalg::SymmetricEigen::try_new(m, eps, max_iter).map(|e| (e.eigenvalues, e.eigenvectors))
    }
}

pub(crate) fn c<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
