//! Exchange classes and the N-particle amplitude function `H`.
//!
//! For identical particles the amplitude of a transition between two
//! configurations is `Σ_π χ(π) ∏_i a[i][π(i)]`, with `χ ≡ 1` for bosons
//! (the permanent) and `χ = sgn` for fermions (the determinant).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitude::{Amplitude, Probability};
use crate::determinant::determinant;
use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;
use crate::permanent::permanent_ryser;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExchangeClass {
    Boson,
    Fermion,
    #[serde(alias = "dist")]
    Distinguishable,
}

impl ExchangeClass {
    pub const ALL: [ExchangeClass; 3] =
        [ExchangeClass::Boson, ExchangeClass::Fermion, ExchangeClass::Distinguishable];

    pub fn name(self) -> &'static str {
        match self {
            ExchangeClass::Boson => "boson",
            ExchangeClass::Fermion => "fermion",
            ExchangeClass::Distinguishable => "distinguishable",
        }
    }

    /// `+1` for every permutation (bosons) or the permutation sign (fermions).
    pub fn character(self, sign: i8) -> Result<i8> {
        match self {
            ExchangeClass::Boson => Ok(1),
            ExchangeClass::Fermion => Ok(sign),
            ExchangeClass::Distinguishable => Err(Error::NoAmplitude(self)),
        }
    }
}

impl fmt::Display for ExchangeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExchangeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "boson" | "bosons" => Ok(ExchangeClass::Boson),
            "fermion" | "fermions" => Ok(ExchangeClass::Fermion),
            "dist" | "distinguishable" => Ok(ExchangeClass::Distinguishable),
            other => Err(Error::Validation(format!("unknown exchange class {other:?}"))),
        }
    }
}

/// Two-particle amplitude `a¹₁a²₂ ± a¹₂a²₁`.
pub fn h2(m: &TransitionMatrix, class: ExchangeClass) -> Result<Amplitude> {
    if m.n_rows() != 2 || m.n_cols() != 2 {
        return Err(Error::Dimension(format!(
            "h2 needs a 2x2 matrix, got {}x{}",
            m.n_rows(),
            m.n_cols()
        )));
    }
    let direct = m.get(0, 0) * m.get(1, 1);
    let crossed = m.get(0, 1) * m.get(1, 0);
    match class {
        ExchangeClass::Boson => Ok(direct + crossed),
        ExchangeClass::Fermion => Ok(direct - crossed),
        ExchangeClass::Distinguishable => Err(Error::NoAmplitude(class)),
    }
}

/// N-particle amplitude: permanent for bosons, determinant for fermions.
pub fn h_n(m: &TransitionMatrix, class: ExchangeClass) -> Result<Amplitude> {
    match class {
        ExchangeClass::Boson => permanent_ryser(m),
        ExchangeClass::Fermion => determinant(m),
        ExchangeClass::Distinguishable => Err(Error::NoAmplitude(class)),
    }
}

/// Classical baseline `Σ_π ∏_i |a[i][π(i)]|²`: the permanent of the matrix
/// of squared moduli.
pub fn distinguishable_probability(m: &TransitionMatrix) -> Result<Probability> {
    m.square_dim()?;
    let (row, sum) = m.max_row_weight();
    if sum > 1.0 + 1e-9 {
        return Err(Error::RowNormExceeded { row, sum });
    }
    Probability::new(distinguishable_weight(m)?)
}

/// `perm(|a|²)` without the row-weight check, for matrices restricted to a
/// final configuration with repeated outcomes (duplicated columns).
pub fn distinguishable_weight(m: &TransitionMatrix) -> Result<f64> {
    let weights = m.map(|z| Complex64::new(z.norm_sqr(), 0.0));
    Ok(permanent_ryser(&weights)?.re)
}
