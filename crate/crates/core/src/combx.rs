//! Exact combinatorics: binomials, rationals and square roots of rationals.
//!
//! Every closed-form quantity (threshold probabilities, analytic eigenvalues,
//! Dicke splitting coefficients) is computed here without rounding. Floats
//! appear only when a caller asks for one.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Binomial coefficient C(n, r), zero outside `0 <= r <= n`.
pub fn binomial(n: u64, r: i64) -> BigUint {
    if r < 0 || r as u64 > n {
        return BigUint::zero();
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = BigUint::one();
    for i in 0..r {
        // acc * (n - i) is always divisible by i + 1 at this point
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binomial coefficient with the upper index allowed to be negative:
/// C(n, r) = (-1)^r C(r - n - 1, r) for n < 0. Zero for r < 0.
pub fn binomial_signed(n: i64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        return BigInt::from(binomial(n as u64, r));
    }
    let magnitude = BigInt::from(binomial((r - n - 1) as u64, r));
    if r % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

/// Multinomial coefficient (sum parts)! / prod(part!).
pub fn multinomial(parts: &[u32]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &p in parts {
        total += u64::from(p);
        acc *= binomial(total, i64::from(p));
    }
    acc
}

/// Dimension C(N + d - 1, d - 1) of the symmetric subspace of N qudits.
pub fn symmetric_dimension(n: u32, d: u32) -> BigUint {
    assert!(d >= 1, "local dimension must be positive");
    binomial(u64::from(n + d - 1), i64::from(d - 1))
}

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Self(self.0.recip()))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Nearest `f64` (correctly rounded by `num-rational`).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_scalar<T: Scalar>(&self) -> T {
        T::of(self.to_f64())
    }

    /// Exact value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self)
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl From<BigUint> for ExactRational {
    fn from(n: BigUint) -> Self {
        Self::from_integer(BigInt::from_biguint(Sign::Plus, n))
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `a/b`, integers, and plain decimals such as `0.96774` or `-1.5`.
impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            return Self::new(num, den).map_err(|_| bad());
        }
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|ch| ch.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = Self::new(digits, scale)?;
        Ok(if negative { -value } else { value })
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// The nonnegative number `sqrt(radicand)` with a rational radicand.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    radicand: ExactRational,
}

impl SqrtRational {
    pub fn new(radicand: ExactRational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::Domain(format!("negative radicand {radicand}")));
        }
        Ok(Self { radicand })
    }

    pub fn zero() -> Self {
        Self { radicand: ExactRational::zero() }
    }

    pub fn one() -> Self {
        Self { radicand: ExactRational::one() }
    }

    /// `sqrt(numer / denom)` for nonnegative integers, zero if `numer` is zero.
    pub fn from_ratio(numer: BigUint, denom: BigUint) -> Result<Self> {
        Self::new(ExactRational::new(BigInt::from(numer), BigInt::from(denom))?)
    }

    pub fn radicand(&self) -> &ExactRational {
        &self.radicand
    }

    /// The exact square, i.e. the radicand.
    pub fn square(&self) -> ExactRational {
        self.radicand.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.radicand.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.radicand.to_f64().sqrt()
    }

    pub fn to_scalar<T: Scalar>(&self) -> T {
        T::of(self.radicand.to_f64()).sqrt()
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        SqrtRational { radicand: &self.radicand * &rhs.radicand }
    }
}

impl Mul for SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: SqrtRational) -> SqrtRational {
        &self * &rhs
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.radicand.cmp(&other.radicand)
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt({})", self.radicand)
    }
}

impl fmt::Debug for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Weight of |D_k^{(alpha-beta)}> |D_{N-k}^{(beta)}> in the split of |D_N^{(alpha)}>:
/// `sqrt(C(k, alpha-beta) C(N-k, beta) / C(N, alpha))`.
pub fn chi(n: u32, k: u32, alpha: u32, beta: i64) -> Result<SqrtRational> {
    if k > n {
        return Err(Error::Domain(format!("bipartition size k = {k} exceeds N = {n}")));
    }
    if alpha > n {
        return Err(Error::Domain(format!("excitation alpha = {alpha} exceeds N = {n}")));
    }
    let a_side = binomial(u64::from(k), i64::from(alpha) - beta);
    let b_side = binomial(u64::from(n - k), beta);
    let whole = binomial(u64::from(n), i64::from(alpha));
    SqrtRational::from_ratio(a_side * b_side, whole)
}

/// Both sides of the convolution
/// `C(a + b, g) = sum_{j=0}^{g} C(a - j, g - j) C(b + j - 1, j)`.
///
/// Upper indices that go negative use [`binomial_signed`], which is what
/// makes the identity polynomial in `a` and valid for every `g`.
pub fn vandermonde_lhs_rhs(a: u32, b: u32, g: u32) -> (BigInt, BigInt) {
    let (a, b, g) = (i64::from(a), i64::from(b), i64::from(g));
    let lhs = binomial_signed(a + b, g);
    let rhs = (0..=g).map(|j| binomial_signed(a - j, g - j) * binomial_signed(b + j - 1, j)).sum();
    (lhs, rhs)
}

/// `1 / (1 + 2 / (D C(N, floor(N/2))))` as an exact fraction.
fn threshold_from_dimension(n: u32, dimension: BigUint) -> ExactRational {
    let weight = BigInt::from(dimension * binomial(u64::from(n), i64::from(n / 2)));
    ExactRational(BigRational::new(weight.clone(), weight + 2))
}

/// Smallest mixing probability for which the two-level spectrum
/// `(1 - Np/(N+1), p/(N+1), ...)` is symmetric absolutely PPT.
pub fn p_min_qubits(n: u32) -> Result<ExactRational> {
    if n < 2 {
        return Err(Error::Domain(format!("p_min needs N >= 2, got {n}")));
    }
    Ok(threshold_from_dimension(n, BigUint::from(n + 1)))
}

/// Qudit generalization of [`p_min_qubits`] with `D = C(N + d - 1, d - 1)`.
pub fn p_min_qudits(n: u32, d: u32) -> Result<ExactRational> {
    if n < 2 || d < 2 {
        return Err(Error::Domain(format!("p_min needs N >= 2 and d >= 2, got N = {n}, d = {d}")));
    }
    Ok(threshold_from_dimension(n, symmetric_dimension(n, d)))
}

/// `1 / (D C(N, k))`, the smallest eigenvalue of the partially transposed
/// maximally mixed symmetric state (proved for qubits, conjectured for qudits).
pub fn lambda_min_rho0(n: u32, d: u32, k: u32) -> Result<ExactRational> {
    if k > n || d < 2 {
        return Err(Error::Domain(format!("need k <= N and d >= 2, got N = {n}, d = {d}, k = {k}")));
    }
    let weight = symmetric_dimension(n, d) * binomial(u64::from(n), i64::from(k));
    ExactRational::from(weight).recip()
}
