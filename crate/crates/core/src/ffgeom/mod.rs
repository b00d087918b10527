//! Varieties over finite fields: point counts, Hasse–Weil zeta functions,
//! closed points and effective 0-cycles.

mod count;
mod cycles;
pub mod field;
mod zeta;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{PolyError, Polynomial};

pub use count::{count_points, count_points_brute_force, DEFAULT_BUDGET};
pub use cycles::{
    enumerate_0cycles, mobius_0cycle, visit_0cycles, zero_cycle_series, zero_cycles_of_degree, ClosedPoint,
    ZeroCycle, ZeroCyclePoset,
};
pub use field::{prime_power, FiniteField};
pub use zeta::{
    check_functional_equation, closed_point_counts, hasse_weil_zeta, mobius_series, point_counts,
    product_formula_series, weil_functional_check, zeta_from_counts,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be positive, got {0}")]
    BadExtensionDegree(u32),
    #[error("enumeration needs {needed} evaluations, budget is {budget}")]
    FieldTooLarge { needed: String, budget: u64 },
    #[error("point counts are inconsistent at degree {degree}: {reason}")]
    InconsistentCounts { degree: usize, reason: String },
    #[error("zeta series has a non-integral coefficient at t^{0}")]
    NonIntegralZeta(usize),
    #[error("series is not a rational function within the requested degree bounds")]
    NotRational,
    #[error("polynomial {index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("polynomial {index} has {found} variables, ambient space needs {expected}")]
    WrongArity { index: usize, expected: usize, found: usize },
    #[error("bad ambient space {0:?}; expected affine:m or projective:m")]
    BadAmbient(String),
    #[error("{0} closed points of one degree are too many to enumerate")]
    TooManyPoints(String),
    #[error("cannot parse 0-cycle {0:?}; expected 0 or terms like 2*1.3")]
    BadCycle(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Affine `𝔸^m` or projective `ℙ^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    Affine(usize),
    Projective(usize),
}

impl Ambient {
    /// Number of coordinates: `m` affine, `m + 1` projective.
    pub fn nvars(&self) -> usize {
        match *self {
            Ambient::Affine(m) => m,
            Ambient::Projective(m) => m + 1,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Affine(m) => write!(f, "affine:{m}"),
            Ambient::Projective(m) => write!(f, "projective:{m}"),
        }
    }
}

impl FromStr for Ambient {
    type Err = FfError;

    fn from_str(s: &str) -> Result<Self, FfError> {
        let bad = || FfError::BadAmbient(s.to_string());
        let (kind, dim) = s.split_once(':').ok_or_else(bad)?;
        let m: usize = dim.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "affine" => Ok(Ambient::Affine(m)),
            "projective" => Ok(Ambient::Projective(m)),
            _ => Err(bad()),
        }
    }
}

/// A closed subscheme of affine or projective space cut out by integer
/// polynomials; over `𝔽_q` the coefficients are read mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    ambient: Ambient,
    polys: Vec<Polynomial>,
}

impl VarietySpec {
    pub fn new(ambient: Ambient, polys: Vec<Polynomial>) -> Result<Self, FfError> {
        let expected = ambient.nvars();
        for (index, p) in polys.iter().enumerate() {
            if p.nvars() != expected {
                return Err(FfError::WrongArity { index, expected, found: p.nvars() });
            }
            if matches!(ambient, Ambient::Projective(_)) && !p.is_homogeneous() {
                return Err(FfError::NotHomogeneous { index });
            }
        }
        Ok(Self { ambient, polys })
    }

    /// Parses each polynomial with the ambient's variable count.
    pub fn parse(ambient: Ambient, polys: &[&str]) -> Result<Self, FfError> {
        let n = ambient.nvars();
        let parsed = polys.iter().map(|s| Polynomial::parse(s, n)).collect::<Result<Vec<_>, _>>()?;
        Self::new(ambient, parsed)
    }

    pub fn affine_space(m: usize) -> Self {
        Self { ambient: Ambient::Affine(m), polys: Vec::new() }
    }

    pub fn projective_space(m: usize) -> Self {
        Self { ambient: Ambient::Projective(m), polys: Vec::new() }
    }

    /// `Spec 𝔽_q`, a single rational point.
    pub fn point() -> Self {
        Self::affine_space(0)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    /// Same variety with coefficients reduced into `0..p`.
    pub fn reduce_mod(&self, p: u64) -> Self {
        Self { ambient: self.ambient, polys: self.polys.iter().map(|f| f.reduce_mod(p)).collect() }
    }
}

/// JSON form of a variety: `{"ambient": "affine:2", "polys": ["y^2+y-x^3"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyFile {
    pub ambient: String,
    #[serde(default)]
    pub polys: Vec<String>,
}

impl VarietyFile {
    pub fn to_spec(&self) -> Result<VarietySpec, FfError> {
        let ambient: Ambient = self.ambient.parse()?;
        let refs: Vec<&str> = self.polys.iter().map(String::as_str).collect();
        VarietySpec::parse(ambient, &refs)
    }
}
