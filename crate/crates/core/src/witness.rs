//! Entanglement witnesses of the form "palindromic diagonal plus an
//! anti-corner coupling" in the Dicke basis.
//!
//! A witness is valid for symmetric states when its expectation is
//! nonnegative on every spin-coherent product state `|theta, phi>`. On such
//! a state the expectation is
//! `f(theta) + 2 w_c cos^N(theta/2) sin^N(theta/2) cos(N phi)`,
//! so for a negative corner `w_c` the minimum sits on `cos(N phi) = 1` and
//! the search reduces to one dimension.

use std::path::Path;

use num_complex::Complex;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combx::{binomial, p_min_qubits, ExactRational};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{c, Scalar};
use crate::search::golden_section;
use crate::symstate::{coherent_state, SymmetricDensityMatrix};

/// Default grid for [`min_over_products`]: 721 polar by 360 azimuthal points.
pub const DEFAULT_GRID: (usize, usize) = (721, 360);

/// Bracket width at which the polar refinement stops.
pub const THETA_TOLERANCE: f64 = 1e-8;

/// The witnesses reported for five, seven and nine qubits, as published
/// (six significant figures).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinWitness {
    W5,
    W7,
    W9,
}

impl BuiltinWitness {
    pub const ALL: [BuiltinWitness; 3] = [BuiltinWitness::W5, BuiltinWitness::W7, BuiltinWitness::W9];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinWitness::W5 => "W5",
            BuiltinWitness::W7 => "W7",
            BuiltinWitness::W9 => "W9",
        }
    }

    pub fn qubits(self) -> u32 {
        match self {
            BuiltinWitness::W5 => 5,
            BuiltinWitness::W7 => 7,
            BuiltinWitness::W9 => 9,
        }
    }

    /// Distinct diagonal entries from the outside in, then the corner.
    fn constants(self) -> (&'static [&'static str], &'static str) {
        match self {
            BuiltinWitness::W5 => (&["0.0366656", "-0.134595", "1"], "-9.31947"),
            BuiltinWitness::W7 => (&["0.00197514", "0.0643064", "-0.189017", "1"], "-31.2405"),
            BuiltinWitness::W9 => (&["0.00235791", "-0.013747", "0.0621661", "-0.1636915", "1"], "-114.305"),
        }
    }

    /// Case-insensitive lookup of `W5`, `W7` or `W9`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "W5" => Ok(BuiltinWitness::W5),
            "W7" => Ok(BuiltinWitness::W7),
            "W9" => Ok(BuiltinWitness::W9),
            _ => Err(Error::UnknownWitness(name.to_string())),
        }
    }
}

/// Real symmetric witness with palindromic diagonal and a coupling between
/// `|D^(0)>` and `|D^(N)>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T: Scalar> {
    name: String,
    diagonal: Vec<T>,
    corner: T,
}

/// Wire format `{"name", "dim", "diagonal", "corner"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub name: String,
    pub dim: usize,
    pub diagonal: Vec<f64>,
    pub corner: f64,
}

impl<T: Scalar> Witness<T> {
    pub fn new(name: impl Into<String>, diagonal: Vec<T>, corner: T) -> Result<Self> {
        let dim = diagonal.len();
        if dim < 2 {
            return Err(Error::InvalidWitness(format!("dimension {dim} is below 2")));
        }
        if !corner.is_finite() || diagonal.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidWitness("non-finite entry".into()));
        }
        for i in 0..dim / 2 {
            let (x, y) = (diagonal[i], diagonal[dim - 1 - i]);
            if (x - y).abs() > T::tolerance(1e-12) * T::one().max(x.abs()) {
                return Err(Error::InvalidWitness(format!("diagonal is not palindromic at entry {i}: {x} vs {y}")));
            }
        }
        Ok(Self { name: name.into(), diagonal, corner })
    }

    pub fn builtin(which: BuiltinWitness) -> Self {
        let (inner, corner) = which.constants();
        let parse = |s: &str| T::of(s.parse::<f64>().expect("literal witness constant"));
        let half: Vec<T> = inner.iter().map(|s| parse(s)).collect();
        let mut diagonal = half.clone();
        diagonal.extend(half.iter().rev());
        Self::new(which.name(), diagonal, parse(corner)).expect("published witnesses are well formed")
    }

    pub fn from_json(json: &WitnessJson) -> Result<Self> {
        if json.dim != json.diagonal.len() {
            return Err(Error::InvalidWitness(format!(
                "dim = {} but the diagonal has {} entries",
                json.dim,
                json.diagonal.len()
            )));
        }
        Self::new(json.name.clone(), json.diagonal.iter().map(|&x| T::of(x)).collect(), T::of(json.corner))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidWitness(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            name: self.name.clone(),
            dim: self.dim(),
            diagonal: self.diagonal.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
            corner: self.corner.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Number of qubits, `dim - 1`.
    pub fn qubits(&self) -> u32 {
        (self.dim() - 1) as u32
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    pub fn corner(&self) -> T {
        self.corner
    }

    pub fn trace(&self) -> T {
        self.diagonal.iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn matrix(&self) -> CMatrix<T> {
        let dim = self.dim();
        let mut m = CMatrix::from_fn(dim, dim, |i, j| if i == j { c(self.diagonal[i]) } else { c(T::zero()) });
        m[(0, dim - 1)] = c(self.corner);
        m[(dim - 1, 0)] = c(self.corner);
        m
    }

    /// `<GHZ+|W|GHZ+>` with `GHZ+ = (|D^(0)> + |D^(N)>)/sqrt(2)`.
    pub fn ghz_expectation(&self) -> T {
        let last = self.dim() - 1;
        (self.diagonal[0] + self.diagonal[last]) * T::of(0.5) + self.corner
    }
}

/// `Tr(rho W)`.
pub fn expectation<T: Scalar>(rho: &SymmetricDensityMatrix<T>, w: &Witness<T>) -> Result<T> {
    if rho.d() != 2 || rho.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), found: rho.dim() });
    }
    let m = rho.matrix();
    let last = w.dim() - 1;
    let diag = w.diagonal.iter().enumerate().fold(T::zero(), |acc, (i, &wi)| acc + wi * m[(i, i)].re);
    Ok(diag + w.corner * (m[(0, last)] + m[(last, 0)]).re)
}

/// `<theta, phi| W |theta, phi>` on the spin-coherent product state.
pub fn product_expectation<T: Scalar>(w: &Witness<T>, theta: T, phi: T) -> T {
    let state = coherent_state(w.qubits(), theta, phi);
    let amps = state.amplitudes();
    let last = amps.len() - 1;
    let diag = w.diagonal.iter().zip(amps).fold(T::zero(), |acc, (&wi, z)| acc + wi * z.norm_sqr());
    let cross: Complex<T> = amps[0].conj() * amps[last];
    diag + T::of(2.0) * w.corner * cross.re
}

/// Same as [`product_expectation`], evaluated from the closed form
/// `sum_a w_a C(N,a) cos^{2(N-a)} sin^{2a} + 2 w_c cos^N sin^N cos(N phi)`.
pub fn product_expectation_closed_form<T: Scalar>(w: &Witness<T>, theta: T, phi: T) -> T {
    let n = w.qubits();
    let (s, co) = (theta * T::of(0.5)).sin_cos();
    let diag = w.diagonal.iter().enumerate().fold(T::zero(), |acc, (a, &wa)| {
        let weight = T::of(binomial(u64::from(n), a as i64).to_f64().unwrap_or(f64::NAN));
        acc + wa * weight * co.powi(2 * (n as i32 - a as i32)) * s.powi(2 * a as i32)
    });
    let nf = T::of(f64::from(n));
    diag + T::of(2.0) * w.corner * co.powi(n as i32) * s.powi(n as i32) * (nf * phi).cos()
}

/// Result of the search over product states. `theta` is folded into
/// `[0, pi/2]`, which is no loss because palindromic witnesses are invariant
/// under `theta -> pi - theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductMinimum<T: Scalar> {
    pub value: T,
    pub theta: T,
    pub phi: T,
    pub grid_value: T,
    pub grid_theta: T,
    pub grid_phi: T,
}

/// Global minimum of the product-state expectation: a full
/// `grid.0 x grid.1` sweep over `[0, pi] x [0, 2 pi)` for verification, and a
/// golden-section refinement in `theta` on the azimuth that minimizes the
/// corner term.
pub fn min_over_products<T: Scalar>(w: &Witness<T>, grid: (usize, usize)) -> Result<ProductMinimum<T>> {
    let (rows, cols) = grid;
    if rows < 2 || cols < 1 {
        return Err(Error::Domain(format!("grid {rows}x{cols} is too small")));
    }
    let pi = T::PI();
    let theta_at = |i: usize| pi * T::of(i as f64) / T::of((rows - 1) as f64);
    let phi_at = |j: usize| T::of(2.0) * pi * T::of(j as f64) / T::of(cols as f64);

    let row_minima: Vec<(T, usize, usize)> = (0..rows)
        .into_par_iter()
        .map(|i| {
            let theta = theta_at(i);
            (0..cols)
                .map(|j| (product_expectation(w, theta, phi_at(j)), i, j))
                .fold((T::infinity(), i, 0), |best, cand| if cand.0 < best.0 { cand } else { best })
        })
        .collect();
    // lexicographic (value, theta, phi): rows arrive in index order and ties keep the first
    let (grid_value, gi, gj) =
        row_minima.into_iter().fold((T::infinity(), 0, 0), |best, cand| if cand.0 < best.0 { cand } else { best });

    let n = T::of(f64::from(w.qubits()));
    let phi_star = if w.corner <= T::zero() { T::zero() } else { pi / n };
    let profile = |theta: T| product_expectation(w, theta, phi_star);

    let half = (rows - 1) / 2;
    let step = pi / T::of((rows - 1) as f64);
    let (coarse_i, _) =
        (0..=half)
            .map(|i| (i, profile(theta_at(i))))
            .fold((0, T::infinity()), |best, (i, v)| if v < best.1 { (i, v) } else { best });
    let centre = theta_at(coarse_i);
    let lo = (centre - step).max(T::zero());
    let hi = (centre + step).min(pi * T::of(0.5));
    let (theta, value) = golden_section(profile, lo, hi, T::of(THETA_TOLERANCE));

    Ok(ProductMinimum { value, theta, phi: phi_star, grid_value, grid_theta: theta_at(gi), grid_phi: phi_at(gj) })
}

/// `p*` solving `Tr(rho(p) W) = 0` for `rho(p) = p 1/(N+1) + (1-p)|GHZ+><GHZ+|`,
/// with the certified entangled-and-SAPPT interval `[p_min, p*]` when nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionThreshold<T: Scalar> {
    pub threshold: T,
    pub p_min: ExactRational,
    pub certified: Option<(T, T)>,
}

pub fn detection_threshold<T: Scalar>(w: &Witness<T>, n: u32) -> Result<DetectionThreshold<T>> {
    if w.dim() != n as usize + 1 {
        return Err(Error::DimensionMismatch { expected: n as usize + 1, found: w.dim() });
    }
    let ghz = w.ghz_expectation();
    let mixed = w.trace() / T::of(f64::from(n + 1));
    let denom = ghz - mixed;
    if denom.abs() <= T::epsilon() * (ghz.abs() + mixed.abs()) {
        return Err(Error::DegenerateThreshold);
    }
    let threshold = ghz / denom;
    let p_min = p_min_qubits(n)?;
    let lower = p_min.to_scalar::<T>();
    let certified = (threshold > lower).then_some((lower, threshold));
    Ok(DetectionThreshold { threshold, p_min, certified })
}
