//! Zeta functions of arithmetic schemes, `ζ_X(s) = Π_p Z(X_p, p^{-s})`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{self, euler_product_from_factors, is_prime, kronecker, ArithError, QuadraticField, SplittingType};
use crate::ffgeom::{hasse_weil_zeta, Ambient, FfError, VarietySpec};
use crate::poly::Polynomial;
use crate::series::{DirichletCoefficients, PowerSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scheme {0:?}; expected specz, affine:n, projective:n, specok:D or poly:<ambient>:<f1>;<f2>...")]
    Parse(String),
    #[error(transparent)]
    Ff(#[from] FfError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A scheme of finite type over `ℤ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithmeticScheme {
    SpecZ,
    AffineSpace(usize),
    ProjectiveSpace(usize),
    /// `Spec O_K` for the quadratic field of the given discriminant.
    SpecOK(QuadraticField),
    /// Closed subscheme of `𝔸^m_ℤ` or `ℙ^m_ℤ`.
    Polynomial(VarietySpec),
}

impl ArithmeticScheme {
    pub fn spec_ok(discriminant: i64) -> Result<Self, SchemeError> {
        Ok(Self::SpecOK(QuadraticField::new(discriminant)?))
    }

    pub fn polynomial(ambient: Ambient, polys: &[&str]) -> Result<Self, SchemeError> {
        Ok(Self::Polynomial(VarietySpec::parse(ambient, polys)?))
    }

    /// The fibre `X_p` over `𝔽_p`, coefficients reduced naively.
    ///
    /// `Spec O_K` has no polynomial data; its fibre is modelled by a
    /// polynomial with the same splitting: `x(x-1)` split, an irreducible
    /// quadratic inert, `x²` ramified.
    pub fn reduce_mod_p(&self, p: u64) -> Result<VarietySpec, SchemeError> {
        if !is_prime(p) {
            return Err(SchemeError::NotPrime(p));
        }
        Ok(match self {
            Self::SpecZ => VarietySpec::point(),
            Self::AffineSpace(n) => VarietySpec::affine_space(*n),
            Self::ProjectiveSpace(n) => VarietySpec::projective_space(*n),
            Self::SpecOK(k) => {
                let f = match k.splitting(p) {
                    SplittingType::Split => "x^2 - x".to_string(),
                    SplittingType::Ramified => "x^2".to_string(),
                    SplittingType::Inert if p == 2 => "x^2 + x + 1".to_string(),
                    SplittingType::Inert => {
                        let r = (2..p).find(|&r| kronecker(r as i64, p as i64) == -1).expect("odd prime has a non-residue");
                        format!("x^2 - {r}")
                    }
                };
                VarietySpec::parse(Ambient::Affine(1), &[&f])?
            }
            Self::Polynomial(x) => x.reduce_mod(p),
        })
    }

    /// `Z(X_p, t)` to order `order`.
    pub fn local_factor(&self, p: u64, order: usize, budget: u64) -> Result<PowerSeries, SchemeError> {
        match self {
            Self::SpecOK(k) => {
                if !is_prime(p) {
                    return Err(SchemeError::NotPrime(p));
                }
                Ok(k.local_zeta_factor(p, order))
            }
            _ => Ok(hasse_weil_zeta(&self.reduce_mod_p(p)?, p, order, budget)?),
        }
    }

    /// Coefficients `c_n`, `n ≤ bound`, of `ζ_X(s) = Σ c_n n^{-s}`.
    pub fn global_coeffs(&self, bound: usize, budget: u64) -> Result<DirichletCoefficients, SchemeError> {
        let factors = arith::primes_up_to(bound as u64)
            .into_par_iter()
            .map(|p| {
                let order = arith::max_exponent(p, bound as u64);
                self.local_factor(p, order, budget).map(|f| (p, f))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(euler_product_from_factors(&factors, bound.max(1))?)
    }
}

/// Whether `ζ_X = ζ_Z · ζ_U` up to `bound`, for a closed `Z ⊂ X` with open
/// complement `U` supplied by the caller.
pub fn check_decomposition_identity(
    x: &ArithmeticScheme,
    z: &ArithmeticScheme,
    u: &ArithmeticScheme,
    bound: usize,
    budget: u64,
) -> Result<bool, SchemeError> {
    let whole = x.global_coeffs(bound, budget)?;
    let pieces = z.global_coeffs(bound, budget)?.mul(&u.global_coeffs(bound, budget)?);
    Ok(whole == pieces)
}

impl fmt::Display for ArithmeticScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SpecZ => write!(f, "specz"),
            Self::AffineSpace(n) => write!(f, "affine:{n}"),
            Self::ProjectiveSpace(n) => write!(f, "projective:{n}"),
            Self::SpecOK(k) => write!(f, "specok:{}", k.discriminant()),
            Self::Polynomial(x) => {
                let polys: Vec<String> = x.polys().iter().map(Polynomial::to_text).collect();
                write!(f, "poly:{}:{}", x.ambient(), polys.join(";"))
            }
        }
    }
}

impl FromStr for ArithmeticScheme {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, SchemeError> {
        let bad = || SchemeError::Parse(s.to_string());
        let s = s.trim();
        if s == "specz" {
            return Ok(Self::SpecZ);
        }
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "affine" => Ok(Self::AffineSpace(rest.trim().parse().map_err(|_| bad())?)),
            "projective" => Ok(Self::ProjectiveSpace(rest.trim().parse().map_err(|_| bad())?)),
            "specok" => Self::spec_ok(rest.trim().parse().map_err(|_| bad())?),
            "poly" => {
                let mut parts = rest.splitn(3, ':');
                let (kind, dim, polys) = (parts.next(), parts.next(), parts.next());
                let ambient: Ambient = format!("{}:{}", kind.ok_or_else(bad)?, dim.ok_or_else(bad)?).parse()?;
                let polys: Vec<&str> =
                    polys.unwrap_or("").split(';').map(str::trim).filter(|p| !p.is_empty()).collect();
                Self::polynomial(ambient, &polys)
            }
            _ => Err(bad()),
        }
    }
}
