//! One-dimensional bracketed minimization.

use crate::scalar::Scalar;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `tol`. Returns the best point seen,
/// endpoints included, so boundary minima are found exactly.
pub fn golden_section<T: Scalar>(f: impl Fn(T) -> T, lo: T, hi: T, tol: T) -> (T, T) {
    let inv_phi = (T::of(5.0).sqrt() - T::one()) / T::of(2.0);
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut best = [(a, f(a)), (b, f(b))]
        .into_iter()
        .fold((a, T::infinity()), |acc, (x, fx)| if fx < acc.1 { (x, fx) } else { acc });
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}
