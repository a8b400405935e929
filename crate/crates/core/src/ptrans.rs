//! Partial transposition and spectra of partially transposed symmetric states.
//!
//! The centerpiece is the partially transposed maximally mixed symmetric
//! state `rho0^{T_A}`. For qubits its spectrum is known in closed form:
//! `lambda_n = C(N+1, n) / ((N+1) C(N, k))` with multiplicity `N + 1 - 2n`,
//! `n = 0..=k`. The eigenvectors are organized by the ladder operators
//! `M_+ = K_-^A - K_+^B`, `M_- = K_+^A - K_-^B`, `M_0 = K_0^A - K_0^B`,
//! which commute with `rho0^{T_A}`.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combx::{binomial, chi, lambda_min_rho0, ExactRational, SqrtRational};
use crate::error::{Error, Result};
use crate::linalg::{adjoint, eigenvalues, eigh, residual, CMatrix};
use crate::scalar::{c, Scalar};
use crate::symstate::{
    coefficient_matrix, dimension_usize, embed_bipartite, ghz_state, rho_p, split_table, BipartiteOperator,
    Bipartition, PureSymmetricState,
};

/// Largest bipartite dimension accepted by the desk-scale qudit routines.
pub const DESK_DIMENSION_CAP: usize = 5000;

/// Absolute gap below which sorted numeric eigenvalues are grouped together.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// `T_A`: `<a,b| op |a',b'>` moves to `<a',b| . |a,b'>`.
pub fn partial_transpose_a<T: Scalar>(op: &BipartiteOperator<T>) -> BipartiteOperator<T> {
    let bip = *op.bipartition();
    let (da, db) = (bip.dim_a(), bip.dim_b());
    let m = op.matrix();
    let mut out = CMatrix::zeros(bip.dim(), bip.dim());
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    out[(bip.index(a2, b), bip.index(a, b2))] = m[(bip.index(a, b), bip.index(a2, b2))];
                }
            }
        }
    }
    BipartiteOperator::from_parts(bip, out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry<V> {
    pub value: V,
    pub multiplicity: usize,
}

/// Eigenvalues with multiplicities, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<V> {
    entries: Vec<SpectrumEntry<V>>,
}

impl<V: Clone> Spectrum<V> {
    pub fn entries(&self) -> &[SpectrumEntry<V>] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Every eigenvalue repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<V> {
        self.entries.iter().flat_map(|e| std::iter::repeat_n(e.value.clone(), e.multiplicity)).collect()
    }

    pub fn min(&self) -> Option<&V> {
        self.entries.first().map(|e| &e.value)
    }
}

impl Spectrum<ExactRational> {
    pub fn from_exact(mut entries: Vec<SpectrumEntry<ExactRational>>) -> Self {
        entries.sort_by(|a, b| a.value.cmp(&b.value));
        Self { entries }
    }

    /// `sum value * multiplicity`, exactly.
    pub fn weighted_sum(&self) -> ExactRational {
        self.entries.iter().map(|e| &e.value * &ExactRational::from(e.multiplicity as i64)).sum()
    }

    pub fn to_f64(&self) -> Spectrum<f64> {
        Spectrum {
            entries: self
                .entries
                .iter()
                .map(|e| SpectrumEntry { value: e.value.to_f64(), multiplicity: e.multiplicity })
                .collect(),
        }
    }
}

impl<T: Scalar> Spectrum<T> {
    /// Groups values whose consecutive sorted gaps are below `gap`; a group's
    /// value is its mean.
    pub fn from_values(mut values: Vec<T>, gap: T) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        let mut entries: Vec<SpectrumEntry<T>> = Vec::new();
        let mut group: Vec<T> = Vec::new();
        let flush = |group: &mut Vec<T>, entries: &mut Vec<SpectrumEntry<T>>| {
            if !group.is_empty() {
                let sum = group.iter().fold(T::zero(), |a, &b| a + b);
                entries.push(SpectrumEntry { value: sum / T::of(group.len() as f64), multiplicity: group.len() });
                group.clear();
            }
        };
        for v in values {
            if let Some(&last) = group.last() {
                if v - last > gap {
                    flush(&mut group, &mut entries);
                }
            }
            group.push(v);
        }
        flush(&mut group, &mut entries);
        Self { entries }
    }
}

/// Value field of a spectrum dump: `"num/den"` or a float.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpectrumValue {
    Exact(String),
    Float(f64),
}

/// Wire format `{"n", "k", "entries": [{"value", "multiplicity"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub n: u32,
    pub k: u32,
    pub entries: Vec<SpectrumEntry<SpectrumValue>>,
}

impl SpectrumJson {
    pub fn exact(bip: &Bipartition, spectrum: &Spectrum<ExactRational>) -> Self {
        Self {
            n: bip.n(),
            k: bip.k(),
            entries: spectrum
                .entries()
                .iter()
                .map(|e| SpectrumEntry {
                    value: SpectrumValue::Exact(e.value.to_string()),
                    multiplicity: e.multiplicity,
                })
                .collect(),
        }
    }

    pub fn numeric<T: Scalar>(bip: &Bipartition, spectrum: &Spectrum<T>) -> Self {
        Self {
            n: bip.n(),
            k: bip.k(),
            entries: spectrum
                .entries()
                .iter()
                .map(|e| SpectrumEntry {
                    value: SpectrumValue::Float(e.value.to_f64().unwrap_or(f64::NAN)),
                    multiplicity: e.multiplicity,
                })
                .collect(),
        }
    }
}

/// Lowest eigenpair with its residual `||(op - lambda) v||`.
#[derive(Debug, Clone)]
pub struct MinEigenpair<T: Scalar> {
    pub value: T,
    pub vector: Vec<Complex<T>>,
    pub residual: T,
}

/// Smallest eigenvalue together with its eigenvector; fails if the
/// residual exceeds `1e-10` (widened for `f32`).
pub fn min_eigenpair<T: Scalar>(op: &BipartiteOperator<T>) -> Result<MinEigenpair<T>> {
    let e = eigh(op.matrix())?;
    let value = e.values[0];
    let vector: Vec<Complex<T>> = e.vectors.column(0).iter().copied().collect();
    let res = residual(op.matrix(), value, &vector);
    let tolerance = T::tolerance(1e-10);
    if res > tolerance {
        return Err(Error::Residual {
            residual: res.to_f64().unwrap_or(f64::NAN),
            tolerance: tolerance.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(MinEigenpair { value, vector, residual: res })
}

pub fn min_eigenvalue<T: Scalar>(op: &BipartiteOperator<T>) -> Result<T> {
    min_eigenpair(op).map(|p| p.value)
}

/// Degeneracy-grouped numeric spectrum of any bipartite operator.
pub fn numeric_spectrum<T: Scalar>(op: &BipartiteOperator<T>) -> Result<Spectrum<T>> {
    Ok(Spectrum::from_values(eigenvalues(op.matrix())?, T::of(DEGENERACY_GAP)))
}

/// `rho0^{T_A}` assembled term by term from the split of every Dicke state.
///
/// For qubits this is the double sum over `chi(alpha, beta) chi(alpha, gamma)`
/// with ket `|alpha-gamma, beta>` and bra `|alpha-beta, gamma>`; for qudits
/// the same sum runs over multinomial splits.
pub fn rho0_pt<T: Scalar>(bip: &Bipartition) -> Result<BipartiteOperator<T>> {
    let dim = bip.dim();
    let total = T::of(dimension_usize(bip.n(), bip.d()) as f64);
    let mut out = CMatrix::zeros(dim, dim);
    if bip.is_qubit() {
        let (n, k) = (bip.n(), bip.k());
        for alpha in 0..=n {
            let lo = alpha.saturating_sub(k);
            let hi = alpha.min(n - k);
            for beta in lo..=hi {
                let cb = chi(n, k, alpha, i64::from(beta))?.to_scalar::<T>();
                for gamma in lo..=hi {
                    let cg = chi(n, k, alpha, i64::from(gamma))?.to_scalar::<T>();
                    let row = bip.index((alpha - gamma) as usize, beta as usize);
                    let col = bip.index((alpha - beta) as usize, gamma as usize);
                    out[(row, col)] += c(cb * cg / total);
                }
            }
        }
    } else {
        let db = bip.dim_b();
        for splits in split_table::<T>(bip)? {
            for &(s, cs) in &splits {
                for &(t, ct) in &splits {
                    let (a_s, b_s) = (s / db, s % db);
                    let (a_t, b_t) = (t / db, t % db);
                    out[(bip.index(a_t, b_s), bip.index(a_s, b_t))] += c(cs * ct / total);
                }
            }
        }
    }
    Ok(BipartiteOperator::from_parts(*bip, out))
}

/// `lambda_n = C(N+1, n) / ((N+1) C(N, k))` with multiplicity `N + 1 - 2n`.
pub fn rho0_pt_eigenvalue(bip: &Bipartition, level: u32) -> Result<ExactRational> {
    if !bip.is_qubit() {
        return Err(Error::QubitOnly(bip.d()));
    }
    let (n, k) = (u64::from(bip.n()), i64::from(bip.k()));
    let numer = ExactRational::from(binomial(n + 1, i64::from(level)));
    let denom = ExactRational::from(binomial(n, k)) * ExactRational::from((n + 1) as i64);
    Ok(numer / denom)
}

/// Closed-form spectrum of `rho0^{T_A}` for qubits.
pub fn rho0_pt_spectrum_analytic(bip: &Bipartition) -> Result<Spectrum<ExactRational>> {
    if !bip.is_qubit() {
        return Err(Error::QubitOnly(bip.d()));
    }
    let entries = (0..=bip.k())
        .map(|level| {
            Ok(SpectrumEntry {
                value: rho0_pt_eigenvalue(bip, level)?,
                multiplicity: (bip.n() + 1 - 2 * level) as usize,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum::from_exact(entries))
}

/// `M_+`, `M_-`, `M_0` on the bipartite qubit space.
#[derive(Debug, Clone)]
pub struct LadderOperators<T: Scalar> {
    pub bipartition: Bipartition,
    pub plus: CMatrix<T>,
    pub minus: CMatrix<T>,
    pub zero: CMatrix<T>,
}

/// `(K_+, K_-, K_0)` on the `m + 1` Dicke states of `m` qubits.
fn dicke_ladder<T: Scalar>(m: u32) -> (CMatrix<T>, CMatrix<T>, CMatrix<T>) {
    let dim = m as usize + 1;
    let mut raise = CMatrix::zeros(dim, dim);
    let mut lower = CMatrix::zeros(dim, dim);
    let mut diag = CMatrix::zeros(dim, dim);
    for alpha in 0..=m {
        let a = alpha as usize;
        if alpha < m {
            raise[(a + 1, a)] = c(T::of(f64::from((m - alpha) * (alpha + 1))).sqrt());
        }
        if alpha > 0 {
            lower[(a - 1, a)] = c(T::of(f64::from(alpha * (m - alpha + 1))).sqrt());
        }
        diag[(a, a)] = c(T::of(f64::from(m) / 2.0 - f64::from(alpha)));
    }
    (raise, lower, diag)
}

pub fn ladder_operators<T: Scalar>(bip: &Bipartition) -> Result<LadderOperators<T>> {
    if !bip.is_qubit() {
        return Err(Error::QubitOnly(bip.d()));
    }
    let (k, rest) = (bip.k(), bip.n() - bip.k());
    let (ka_plus, ka_minus, ka_zero) = dicke_ladder::<T>(k);
    let (kb_plus, kb_minus, kb_zero) = dicke_ladder::<T>(rest);
    let id_a = CMatrix::<T>::identity(bip.dim_a(), bip.dim_a());
    let id_b = CMatrix::<T>::identity(bip.dim_b(), bip.dim_b());
    let on_a = |m: &CMatrix<T>| m.kronecker(&id_b);
    let on_b = |m: &CMatrix<T>| id_a.kronecker(m);
    Ok(LadderOperators {
        bipartition: *bip,
        plus: on_a(&ka_minus) - on_b(&kb_plus),
        minus: on_a(&ka_plus) - on_b(&kb_minus),
        zero: on_a(&ka_zero) - on_b(&kb_zero),
    })
}

pub fn commutator<T: Scalar>(x: &CMatrix<T>, y: &CMatrix<T>) -> CMatrix<T> {
    x * y - y * x
}

/// Exact amplitudes of the state annihilated by `M_-` in the `M_0 = n - N/2`
/// sector, as `(a, b, coefficient)` on `|D_k^(a)> |D_{N-k}^(b)>`.
///
/// The weights are `sqrt(C(k-r, n-r) C(N-k-n+r, r) / C(N-n+1, n))` on
/// `|D_k^(k-r)> |D_{N-k}^(n-r)>` for `r = 0..=n`.
pub fn lowest_weight_state(bip: &Bipartition, level: u32) -> Result<Vec<(usize, usize, SqrtRational)>> {
    weight_state(bip, level, false)
}

/// Mirror of [`lowest_weight_state`]: annihilated by `M_+` in the
/// `M_0 = N/2 - n` sector, supported on `|D_k^(n-r)> |D_{N-k}^(N-k-r)>`.
pub fn highest_weight_state(bip: &Bipartition, level: u32) -> Result<Vec<(usize, usize, SqrtRational)>> {
    weight_state(bip, level, true)
}

fn weight_state(bip: &Bipartition, level: u32, highest: bool) -> Result<Vec<(usize, usize, SqrtRational)>> {
    if !bip.is_qubit() {
        return Err(Error::QubitOnly(bip.d()));
    }
    let (n, k) = (i64::from(bip.n()), i64::from(bip.k()));
    let level = i64::from(level);
    if level > k {
        return Err(Error::Domain(format!("level n = {level} exceeds k = {k}")));
    }
    // the highest-weight branch swaps the roles of k and N - k
    let side = if highest { n - k } else { k };
    let norm = binomial((n - level + 1) as u64, level);
    (0..=level)
        .map(|r| {
            let weight = binomial((side - r) as u64, level - r) * binomial((n - side - level + r) as u64, r);
            let coefficient = SqrtRational::from_ratio(weight, norm.clone())?;
            let (a, b) = if highest { (level - r, n - k - r) } else { (k - r, level - r) };
            Ok((a as usize, b as usize, coefficient))
        })
        .collect()
}

/// Common eigenvector `|n, m>` of `rho0^{T_A}` and `M_0`.
#[derive(Debug, Clone)]
pub struct Rho0Eigenstate<T: Scalar> {
    pub n: u32,
    pub m: u32,
    pub lambda: ExactRational,
    pub vector: Vec<Complex<T>>,
}

fn normalize<T: Scalar>(v: &mut [Complex<T>]) -> T {
    let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    if !norm.is_zero() {
        for z in v.iter_mut() {
            *z = z.unscale(norm);
        }
    }
    norm
}

fn mat_vec<T: Scalar>(m: &CMatrix<T>, v: &[Complex<T>]) -> Vec<Complex<T>> {
    (0..m.nrows()).map(|i| v.iter().enumerate().fold(Complex::zero(), |acc, (j, vj)| acc + m[(i, j)] * vj)).collect()
}

/// Full eigenbasis of `rho0^{T_A}`: for each `n = 0..=k`, `|n, n>` from its
/// closed form, then `|n, m>` by repeated `M_+` with renormalization, up to
/// `m = N - n`. Ordered by `(n, m)`.
pub fn rho0_pt_eigenbasis<T: Scalar>(bip: &Bipartition) -> Result<Vec<Rho0Eigenstate<T>>> {
    let ladder = ladder_operators::<T>(bip)?;
    let n_total = bip.n();
    let mut out = Vec::with_capacity(bip.dim());
    for level in 0..=bip.k() {
        let lambda = rho0_pt_eigenvalue(bip, level)?;
        let mut v = vec![Complex::zero(); bip.dim()];
        for (a, b, coefficient) in lowest_weight_state(bip, level)? {
            v[bip.index(a, b)] = c(coefficient.to_scalar::<T>());
        }
        for m in level..=(n_total - level) {
            if m > level {
                v = mat_vec(&ladder.plus, &v);
                normalize(&mut v);
            }
            out.push(Rho0Eigenstate { n: level, m, lambda: lambda.clone(), vector: v.clone() });
        }
    }
    Ok(out)
}

/// Squared Schmidt coefficients `Gamma_1 >= Gamma_2 >= ...`, one per A basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum<T: Scalar> {
    pub coefficients: Vec<T>,
}

impl<T: Scalar> SchmidtSpectrum<T> {
    pub fn leading_pair(&self) -> (T, T) {
        let get = |i: usize| self.coefficients.get(i).copied().unwrap_or_else(T::zero);
        (get(0), get(1))
    }

    /// `-sqrt(Gamma_1 Gamma_2)`, the smallest eigenvalue of `(|psi><psi|)^{T_A}`.
    pub fn pure_pt_min_eigenvalue(&self) -> T {
        let (g1, g2) = self.leading_pair();
        -(g1 * g2).sqrt()
    }
}

pub fn schmidt<T: Scalar>(psi: &PureSymmetricState<T>, bip: &Bipartition) -> Result<SchmidtSpectrum<T>> {
    let coeffs = coefficient_matrix(psi, bip)?;
    let gram = &coeffs * adjoint(&coeffs);
    let mut values: Vec<T> = eigenvalues(&gram)?.into_iter().map(|v| v.max(T::zero())).collect();
    values.reverse();
    Ok(SchmidtSpectrum { coefficients: values })
}

/// `p / ((N+1) C(N,k)) - (1-p) sqrt(Gamma_1 Gamma_2)`, a lower bound on the
/// smallest eigenvalue of `rho(p)^{T_A}`.
pub fn sigma_bound<T: Scalar>(psi: &PureSymmetricState<T>, p: T, bip: &Bipartition) -> Result<T> {
    if !bip.is_qubit() {
        return Err(Error::QubitOnly(bip.d()));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::ProbabilityOutOfRange(p.to_f64().unwrap_or(f64::NAN)));
    }
    let lambda0 = lambda_min_rho0(bip.n(), 2, bip.k())?.to_scalar::<T>();
    let pure_min = schmidt(psi, bip)?.pure_pt_min_eigenvalue();
    Ok(p * lambda0 + (T::one() - p) * pure_min)
}

/// `rho(p)^{T_A}` for `rho(p) = p 1/D + (1-p)|psi0><psi0|`.
pub fn rho_p_pt<T: Scalar>(p: T, psi0: &PureSymmetricState<T>, bip: &Bipartition) -> Result<BipartiteOperator<T>> {
    let rho = rho_p(psi0.n(), p, psi0)?;
    Ok(partial_transpose_a(&embed_bipartite(&rho, bip)?))
}

/// Rayleigh quotient and residual of `(|D_k^(0)> |D_{N-k}^(N-k)> + |D_k^(k)> |D_{N-k}^(0)>)/sqrt(2)`
/// under `rho(p)^{T_A}` with the GHZ admixture. Exact eigenvector means a
/// residual at rounding level and eigenvalue `p/((N+1)C(N,k)) - (1-p)/2`.
pub fn ghz_npt_eigencheck<T: Scalar>(n: u32, k: u32, p: T) -> Result<(T, T)> {
    let bip = Bipartition::qubits(n, k)?;
    let op = rho_p_pt(p, &ghz_state::<T>(n)?, &bip)?;
    let h = T::FRAC_1_SQRT_2();
    let mut v = vec![Complex::zero(); bip.dim()];
    v[bip.index(0, (n - k) as usize)] = c(h);
    v[bip.index(k as usize, 0)] = c(h);
    let image = op.apply(&v);
    let lambda = v.iter().zip(&image).fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y).re;
    let res = image.iter().zip(&v).fold(T::zero(), |acc, (y, x)| acc + (y - x.scale(lambda)).norm_sqr()).sqrt();
    Ok((lambda, res))
}

/// `(numeric lambda_min(rho0^{T_A}), 1/(D C(N,k)))` on a qudit bipartition.
pub fn qudit_rho0_pt_min_eig<T: Scalar>(n: u32, d: u32, k: u32) -> Result<(T, ExactRational)> {
    let bip = Bipartition::new(n, k, d)?;
    let dim = bip.dim();
    if dim > DESK_DIMENSION_CAP {
        return Err(Error::SizeCap { dim, cap: DESK_DIMENSION_CAP });
    }
    let numeric = min_eigenvalue(&rho0_pt::<T>(&bip)?)?;
    Ok((numeric, lambda_min_rho0(n, d, k)?))
}
