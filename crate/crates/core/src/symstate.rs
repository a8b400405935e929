//! Symmetric states in the Dicke basis and their bipartite embedding.
//!
//! A Dicke label for N qudits of local dimension d is a weak composition
//! `(m_0, ..., m_{d-1})` of N: `m_j` particles sit in level `j`. Labels are
//! ordered lexicographically descending, so for qubits index `alpha` is the
//! label `(N - alpha, alpha)`, i.e. the number of excitations.
//!
//! Bipartite operators act on `Sym^k (C^d) (x) Sym^{N-k} (C^d)` with row
//! index `a * dim_b + b`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combx::{binomial, chi, multinomial, symmetric_dimension, SqrtRational};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, hermitian_defect, scaled, CMatrix};
use crate::scalar::{c, Scalar};

/// Canonically ordered Dicke labels for `(N, d)`.
#[derive(Debug, Clone)]
pub struct DickeBasis {
    n: u32,
    d: u32,
    labels: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl DickeBasis {
    pub fn new(n: u32, d: u32) -> Self {
        assert!(d >= 1, "local dimension must be positive");
        let mut labels = Vec::new();
        let mut current = vec![0u32; d as usize];
        compositions(n, 0, &mut current, &mut labels);
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Self { n, d, labels, index }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &[u32] {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    pub fn index_of(&self, label: &[u32]) -> Option<usize> {
        self.index.get(label).copied()
    }
}

// Emits compositions with m_0 descending, then m_1 descending, ...
fn compositions(remaining: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for m in (0..=remaining).rev() {
        current[pos] = m;
        compositions(remaining - m, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// Split of N particles into parties of `k` and `N - k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    n: u32,
    k: u32,
    d: u32,
}

impl Bipartition {
    /// Requires `1 <= k <= floor(N/2)` and `d >= 2`.
    pub fn new(n: u32, k: u32, d: u32) -> Result<Self> {
        if k == 0 || k > n / 2 {
            return Err(Error::InvalidBipartition { n, k });
        }
        if d < 2 {
            return Err(Error::Domain(format!("local dimension d = {d} must be at least 2")));
        }
        Ok(Self { n, k, d })
    }

    pub fn qubits(n: u32, k: u32) -> Result<Self> {
        Self::new(n, k, 2)
    }

    /// All valid `k` for `(N, d)`, i.e. `1..=floor(N/2)`.
    pub fn all(n: u32, d: u32) -> impl Iterator<Item = Bipartition> {
        (1..=n / 2).map(move |k| Bipartition { n, k, d })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_qubit(&self) -> bool {
        self.d == 2
    }

    pub fn dim_a(&self) -> usize {
        dimension_usize(self.k, self.d)
    }

    pub fn dim_b(&self) -> usize {
        dimension_usize(self.n - self.k, self.d)
    }

    pub fn dim(&self) -> usize {
        self.dim_a() * self.dim_b()
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.dim_b() + b
    }

    pub fn basis_a(&self) -> DickeBasis {
        DickeBasis::new(self.k, self.d)
    }

    pub fn basis_b(&self) -> DickeBasis {
        DickeBasis::new(self.n - self.k, self.d)
    }

    pub fn basis(&self) -> DickeBasis {
        DickeBasis::new(self.n, self.d)
    }
}

pub(crate) fn dimension_usize(n: u32, d: u32) -> usize {
    symmetric_dimension(n, d).to_usize().expect("symmetric dimension fits in usize")
}

/// One term `coefficient |a>_A |b>_B` of a split Dicke state; `a`, `b` are
/// indices into the party bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DickeSplit {
    pub a: usize,
    pub b: usize,
    pub coefficient: SqrtRational,
}

/// Decomposes the Dicke state with index `label` into products of party
/// Dicke states, ordered by ascending B index. Coefficients are exact.
pub fn dicke_decomposition(bip: &Bipartition, label: usize) -> Result<Vec<DickeSplit>> {
    let (n, k) = (bip.n(), bip.k());
    let whole = bip.basis();
    if label >= whole.len() {
        return Err(Error::InvalidLabel { n, d: bip.d(), label: vec![label as u32] });
    }
    if bip.is_qubit() {
        let alpha = label as u32;
        let lo = alpha.saturating_sub(k);
        let hi = alpha.min(n - k);
        return (lo..=hi)
            .map(|beta| {
                Ok(DickeSplit {
                    a: (alpha - beta) as usize,
                    b: beta as usize,
                    coefficient: chi(n, k, alpha, i64::from(beta))?,
                })
            })
            .collect();
    }
    let m = whole.label(label).to_vec();
    let basis_a = bip.basis_a();
    let basis_b = bip.basis_b();
    let norm = multinomial(&m);
    let mut out = Vec::new();
    for (ai, a) in basis_a.labels().iter().enumerate() {
        if a.iter().zip(&m).any(|(x, y)| x > y) {
            continue;
        }
        let rest: Vec<u32> = m.iter().zip(a).map(|(y, x)| y - x).collect();
        let bi = basis_b.index_of(&rest).expect("complement is a valid B label");
        let coefficient = SqrtRational::from_ratio(multinomial(a) * multinomial(&rest), norm.clone())?;
        out.push(DickeSplit { a: ai, b: bi, coefficient });
    }
    out.sort_by_key(|s| s.b);
    Ok(out)
}

/// Same as [`dicke_decomposition`], addressed by the composition itself.
pub fn dicke_decomposition_by_label(bip: &Bipartition, label: &[u32]) -> Result<Vec<DickeSplit>> {
    let idx = bip.basis().index_of(label).ok_or_else(|| Error::InvalidLabel {
        n: bip.n(),
        d: bip.d(),
        label: label.to_vec(),
    })?;
    dicke_decomposition(bip, idx)
}

/// For every Dicke index of the whole system, its image as
/// `(bipartite row, coefficient)` pairs.
pub(crate) fn split_table<T: Scalar>(bip: &Bipartition) -> Result<Vec<Vec<(usize, T)>>> {
    (0..dimension_usize(bip.n(), bip.d()))
        .map(|label| {
            Ok(dicke_decomposition(bip, label)?
                .into_iter()
                .map(|s| (bip.index(s.a, s.b), s.coefficient.to_scalar::<T>()))
                .collect())
        })
        .collect()
}

/// Normalized pure state in the symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct PureSymmetricState<T: Scalar> {
    n: u32,
    d: u32,
    amplitudes: Vec<Complex<T>>,
}

/// Wire format `{"n", "d", "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub n: u32,
    pub d: u32,
    pub amplitudes: Vec<[f64; 2]>,
}

/// Relative sign between the two branches of a GHZ state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhzSign {
    /// `(|D^(0)> - |D^(N)>)/sqrt(2)`
    Minus,
    /// `(|D^(0)> + |D^(N)>)/sqrt(2)`, the convention under which the
    /// published witnesses take their quoted negative expectation values.
    Plus,
}

impl<T: Scalar> PureSymmetricState<T> {
    /// Checks length and unit norm (within `1e-12`, widened for `f32`).
    pub fn new(n: u32, d: u32, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let expected = dimension_usize(n, d);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: amplitudes.len() });
        }
        let norm = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        let deviation = (norm - T::one()).abs();
        if deviation > T::tolerance(1e-12) {
            return Err(Error::NotNormalized(deviation.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { n, d, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(n: u32, d: u32, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm.is_zero() {
            return Err(Error::NotNormalized(1.0));
        }
        let scaled = amplitudes.into_iter().map(|z| z.unscale(norm)).collect();
        Self::new(n, d, scaled)
    }

    /// Basis state with Dicke index `label`.
    pub fn dicke(n: u32, d: u32, label: usize) -> Result<Self> {
        let dim = dimension_usize(n, d);
        if label >= dim {
            return Err(Error::InvalidLabel { n, d, label: vec![label as u32] });
        }
        let mut amps = vec![Complex::zero(); dim];
        amps[label] = c(T::one());
        Self::new(n, d, amps)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn projector(&self) -> SymmetricDensityMatrix<T> {
        let v = &self.amplitudes;
        let matrix = CMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj());
        SymmetricDensityMatrix { n: self.n, d: self.d, matrix }
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            n: self.n,
            d: self.d,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|z| [z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)])
                .collect(),
        }
    }

    pub fn from_json(json: &StateJson) -> Result<Self> {
        let amps = json.amplitudes.iter().map(|[re, im]| Complex::new(T::of(*re), T::of(*im))).collect();
        Self::new(json.n, json.d, amps)
    }
}

/// `(|D^(0)> - |D^(N)>)/sqrt(2)`.
pub fn ghz_state<T: Scalar>(n: u32) -> Result<PureSymmetricState<T>> {
    ghz_state_signed(n, GhzSign::Minus)
}

pub fn ghz_state_signed<T: Scalar>(n: u32, sign: GhzSign) -> Result<PureSymmetricState<T>> {
    if n < 2 {
        return Err(Error::Domain(format!("GHZ state needs N >= 2, got {n}")));
    }
    let h = T::FRAC_1_SQRT_2();
    let mut amps = vec![Complex::zero(); n as usize + 1];
    amps[0] = c(h);
    amps[n as usize] = match sign {
        GhzSign::Minus => c(-h),
        GhzSign::Plus => c(h),
    };
    PureSymmetricState::new(n, 2, amps)
}

/// Spin-coherent state `(cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>)^{(x) N}`.
pub fn coherent_state<T: Scalar>(n: u32, theta: T, phi: T) -> PureSymmetricState<T> {
    let half = theta * T::of(0.5);
    let (s, co) = half.sin_cos();
    let amps = (0..=n)
        .map(|alpha| {
            let weight = T::of(binomial(u64::from(n), i64::from(alpha)).to_f64().unwrap_or(f64::NAN)).sqrt();
            let magnitude = weight * co.powi((n - alpha) as i32) * s.powi(alpha as i32);
            Complex::from_polar(magnitude, phi * T::of(f64::from(alpha)))
        })
        .collect();
    PureSymmetricState { n, d: 2, amplitudes: amps }
}

/// Density matrix supported on the symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricDensityMatrix<T: Scalar> {
    n: u32,
    d: u32,
    matrix: CMatrix<T>,
}

impl<T: Scalar> SymmetricDensityMatrix<T> {
    /// Validates Hermiticity and unit trace (within `1e-12`) and positivity
    /// (smallest eigenvalue `>= -1e-10`).
    pub fn new(n: u32, d: u32, matrix: CMatrix<T>) -> Result<Self> {
        let dim = dimension_usize(n, d);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows() });
        }
        let defect = hermitian_defect(&matrix);
        if defect > T::tolerance(1e-12) {
            return Err(Error::NotHermitian(defect.to_f64().unwrap_or(f64::NAN)));
        }
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > T::tolerance(1e-12) {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
        }
        let lowest = eigenvalues(&matrix)?[0];
        if lowest < -T::tolerance(1e-10) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {lowest}")));
        }
        Ok(Self { n, d, matrix })
    }

    /// `1 / D` on the symmetric subspace.
    pub fn maximally_mixed(n: u32, d: u32) -> Self {
        let dim = dimension_usize(n, d);
        let matrix = scaled(&CMatrix::identity(dim, dim), T::one() / T::of(dim as f64));
        Self { n, d, matrix }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }
}

/// `p 1/D + (1 - p) |psi0><psi0|`.
pub fn rho_p<T: Scalar>(n: u32, p: T, psi0: &PureSymmetricState<T>) -> Result<SymmetricDensityMatrix<T>> {
    if psi0.n() != n {
        return Err(Error::DimensionMismatch { expected: n as usize, found: psi0.n() as usize });
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::ProbabilityOutOfRange(p.to_f64().unwrap_or(f64::NAN)));
    }
    let mixed = SymmetricDensityMatrix::<T>::maximally_mixed(n, psi0.d());
    let pure = psi0.projector();
    let matrix = scaled(&mixed.matrix, p) + scaled(&pure.matrix, T::one() - p);
    Ok(SymmetricDensityMatrix { n, d: psi0.d(), matrix })
}

/// Operator on the product of the two parties' symmetric subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator<T: Scalar> {
    bipartition: Bipartition,
    matrix: CMatrix<T>,
}

impl<T: Scalar> BipartiteOperator<T> {
    /// Checks the dimension and Hermiticity (within `1e-12`).
    pub fn new(bipartition: Bipartition, matrix: CMatrix<T>) -> Result<Self> {
        let dim = bipartition.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows() });
        }
        let defect = hermitian_defect(&matrix);
        if defect > T::tolerance(1e-12) {
            return Err(Error::NotHermitian(defect.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { bipartition, matrix })
    }

    pub(crate) fn from_parts(bipartition: Bipartition, matrix: CMatrix<T>) -> Self {
        debug_assert_eq!(matrix.nrows(), bipartition.dim());
        Self { bipartition, matrix }
    }

    pub fn identity(bipartition: Bipartition) -> Self {
        let dim = bipartition.dim();
        Self { bipartition, matrix: DMatrix::identity(dim, dim) }
    }

    pub fn bipartition(&self) -> &Bipartition {
        &self.bipartition
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// Entry `<a, b| op |a', b'>`.
    pub fn entry(&self, a: usize, b: usize, a2: usize, b2: usize) -> Complex<T> {
        let bip = &self.bipartition;
        self.matrix[(bip.index(a, b), bip.index(a2, b2))]
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim();
        (0..n)
            .map(|i| v.iter().enumerate().fold(Complex::zero(), |acc, (j, vj)| acc + self.matrix[(i, j)] * vj))
            .collect()
    }
}

/// `V rho V^dagger`, where `V` sends each Dicke state to its split image.
pub fn embed_bipartite<T: Scalar>(rho: &SymmetricDensityMatrix<T>, bip: &Bipartition) -> Result<BipartiteOperator<T>> {
    if rho.n() != bip.n() || rho.d() != bip.d() {
        return Err(Error::DimensionMismatch { expected: dimension_usize(bip.n(), bip.d()), found: rho.dim() });
    }
    let table = split_table::<T>(bip)?;
    let dim = bip.dim();
    let mut out = CMatrix::zeros(dim, dim);
    let m = rho.matrix();
    for (i, row_split) in table.iter().enumerate() {
        for (j, col_split) in table.iter().enumerate() {
            let value = m[(i, j)];
            if value.is_zero() {
                continue;
            }
            for &(r, cr) in row_split {
                for &(s, cs) in col_split {
                    out[(r, s)] += value.scale(cr * cs);
                }
            }
        }
    }
    Ok(BipartiteOperator::from_parts(*bip, out))
}

/// Image of a pure symmetric state as a `dim_a x dim_b` coefficient matrix.
pub fn coefficient_matrix<T: Scalar>(psi: &PureSymmetricState<T>, bip: &Bipartition) -> Result<CMatrix<T>> {
    if psi.n() != bip.n() || psi.d() != bip.d() {
        return Err(Error::DimensionMismatch { expected: dimension_usize(bip.n(), bip.d()), found: psi.dim() });
    }
    let mut out = CMatrix::zeros(bip.dim_a(), bip.dim_b());
    for (label, amp) in psi.amplitudes().iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        for s in dicke_decomposition(bip, label)? {
            out[(s.a, s.b)] += amp.scale(s.coefficient.to_scalar::<T>());
        }
    }
    Ok(out)
}
