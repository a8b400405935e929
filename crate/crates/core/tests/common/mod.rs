//! Test-only oracles built in the full d^N computational space, plus seeded
//! random states. Nothing here goes through the Dicke-splitting code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symppt::symstate::{DickeBasis, PureSymmetricState, SymmetricDensityMatrix};
use symppt::Bipartition;

pub type C = Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Digits of `idx` in base `d`, most significant (particle 0) first.
pub fn digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

pub fn occupation(ds: &[usize], d: usize) -> Vec<u32> {
    let mut occ = vec![0u32; d];
    for &x in ds {
        occ[x] += 1;
    }
    occ
}

/// Dicke state with occupation `label`, as a normalized d^N vector built by
/// enumerating every basis string.
pub fn dicke_full(n: usize, d: usize, label: &[u32]) -> Vec<f64> {
    let size = d.pow(n as u32);
    let mut v: Vec<f64> = (0..size).map(|i| if occupation(&digits(i, d, n), d) == label { 1.0 } else { 0.0 }).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

pub fn kron(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// Product Dicke basis of the bipartition embedded in d^N, in the crate's
/// `a * dim_b + b` order.
pub fn product_basis_full(bip: &Bipartition) -> Vec<Vec<f64>> {
    let (n, k, d) = (bip.n() as usize, bip.k() as usize, bip.d() as usize);
    let (ba, bb) = (DickeBasis::new(k as u32, d as u32), DickeBasis::new((n - k) as u32, d as u32));
    let a_vecs: Vec<_> = ba.labels().iter().map(|l| dicke_full(k, d, l)).collect();
    let b_vecs: Vec<_> = bb.labels().iter().map(|l| dicke_full(n - k, d, l)).collect();
    a_vecs.iter().flat_map(|a| b_vecs.iter().map(move |b| kron(a, b))).collect()
}

/// `<a, b | D_m>` for every product row (a, b) and whole-system label m,
/// from a single pass over the d^N strings: each Dicke state is the uniform
/// superposition over the strings with its occupation, normalized by
/// counting them.
pub fn split_overlaps_full(bip: &Bipartition) -> DMatrix<f64> {
    let (n, k, d) = (bip.n() as usize, bip.k() as usize, bip.d() as usize);
    let size = d.pow(n as u32);
    let (ba, bb, whole) = (
        DickeBasis::new(k as u32, d as u32),
        DickeBasis::new((n - k) as u32, d as u32),
        DickeBasis::new(n as u32, d as u32),
    );
    let tags: Vec<(usize, usize)> = (0..size)
        .map(|i| {
            let ds = digits(i, d, n);
            let a = ba.index_of(&occupation(&ds[..k], d)).unwrap();
            let b = bb.index_of(&occupation(&ds[k..], d)).unwrap();
            let m = whole.index_of(&occupation(&ds, d)).unwrap();
            (bip.index(a, b), m)
        })
        .collect();
    let mut row_count = vec![0usize; bip.dim()];
    let mut label_count = vec![0usize; whole.len()];
    for &(r, m) in &tags {
        row_count[r] += 1;
        label_count[m] += 1;
    }
    let mut out = DMatrix::<f64>::zeros(bip.dim(), whole.len());
    for &(r, m) in &tags {
        out[(r, m)] += 1.0 / ((row_count[r] * label_count[m]) as f64).sqrt();
    }
    out
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Maximally mixed symmetric state in d^N with the first k particles
/// transposed, projected on the product Dicke basis.
pub fn rho0_pt_full(bip: &Bipartition) -> DMatrix<f64> {
    let (n, k, d) = (bip.n() as usize, bip.k() as usize, bip.d() as usize);
    let size = d.pow(n as u32);
    let whole = DickeBasis::new(n as u32, d as u32);
    let mut rho = DMatrix::<f64>::zeros(size, size);
    for label in whole.labels() {
        let v = dicke_full(n, d, label);
        rho += DMatrix::from_fn(size, size, |i, j| v[i] * v[j]);
    }
    rho /= whole.len() as f64;
    let tail = d.pow((n - k) as u32);
    let mut pt = DMatrix::<f64>::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            let (ia, ib) = (i / tail, i % tail);
            let (ja, jb) = (j / tail, j % tail);
            pt[(ja * tail + ib, ia * tail + jb)] = rho[(i, j)];
        }
    }
    let basis = product_basis_full(bip);
    let dim = basis.len();
    let images: Vec<Vec<f64>> =
        basis.iter().map(|v| (0..size).map(|i| (0..size).map(|j| pt[(i, j)] * v[j]).sum()).collect()).collect();
    DMatrix::from_fn(dim, dim, |r, s| dot(&basis[r], &images[s]))
}

pub fn random_amplitudes(dim: usize, rng: &mut impl Rng) -> Vec<C> {
    (0..dim).map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

pub fn random_pure(n: u32, d: u32, rng: &mut impl Rng) -> PureSymmetricState<f64> {
    let dim = DickeBasis::new(n, d).len();
    PureSymmetricState::normalized(n, d, random_amplitudes(dim, rng)).unwrap()
}

/// Random mixture of a few random pure states.
pub fn random_density(n: u32, d: u32, rng: &mut impl Rng) -> SymmetricDensityMatrix<f64> {
    let dim = DickeBasis::new(n, d).len();
    let terms = rng.random_range(1..=4);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = DMatrix::<C>::zeros(dim, dim);
    for w in weights {
        let psi = random_pure(n, d, rng);
        let v = psi.amplitudes();
        m += DMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj() * (w / total));
    }
    SymmetricDensityMatrix::new(n, d, m).unwrap()
}

pub fn max_abs_diff(x: &DMatrix<C>, y: &DMatrix<C>) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}
