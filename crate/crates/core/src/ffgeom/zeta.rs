//! Hasse–Weil zeta functions and the closed-point product formula.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::field::{prime_power, FiniteField};
use super::{count_points, FfError, VarietySpec};
use crate::exact::{self, big};
use crate::series::{rational_reconstruct, PowerSeries, RationalFunction};
use crate::Rational;

/// `#X(𝔽_{q^n})` for `n = 1..=order`, where `q = p^k`.
pub fn point_counts(x: &VarietySpec, q: u64, order: usize, budget: u64) -> Result<Vec<BigUint>, FfError> {
    let (p, k) = prime_power(q).ok_or(FfError::NotPrimePower(q))?;
    (1..=order as u32)
        .map(|n| {
            let field = FiniteField::new(p, k * n)?;
            count_points(x, &field, budget)
        })
        .collect()
}

/// `exp(Σ_{n≥1} N_n tⁿ / n)` with `counts[n-1] = N_n`, checked to have
/// integer coefficients.
pub fn zeta_from_counts(counts: &[BigUint]) -> Result<PowerSeries, FfError> {
    let order = counts.len();
    let mut log = vec![Rational::zero()];
    for (i, c) in counts.iter().enumerate() {
        log.push(big(BigInt::from(c.clone())) / big(BigInt::from(i + 1)));
    }
    let z = PowerSeries::from_coeffs(log, order).exp().expect("constant term is zero");
    if let Some(n) = z.coeffs().iter().position(|c| !c.is_integer()) {
        return Err(FfError::NonIntegralZeta(n));
    }
    Ok(z)
}

/// `Z(X, t)` over `𝔽_q`, truncated at `t^order`.
pub fn hasse_weil_zeta(x: &VarietySpec, q: u64, order: usize, budget: u64) -> Result<PowerSeries, FfError> {
    zeta_from_counts(&point_counts(x, q, order, budget)?)
}

/// Number `a_d` of closed points of each degree `d`, from
/// `N_n = Σ_{d | n} d·a_d`.
pub fn closed_point_counts(counts: &[BigUint]) -> Result<Vec<BigUint>, FfError> {
    let mut a: Vec<BigInt> = Vec::with_capacity(counts.len());
    for n in 1..=counts.len() {
        let mut rest = BigInt::from(counts[n - 1].clone());
        for d in (1..n).filter(|d| n % d == 0) {
            rest -= &a[d - 1] * BigInt::from(d);
        }
        let (quot, rem) = rest.div_rem(&BigInt::from(n));
        if !rem.is_zero() {
            return Err(FfError::InconsistentCounts { degree: n, reason: format!("{rest} is not divisible by {n}") });
        }
        if quot.is_negative() {
            return Err(FfError::InconsistentCounts { degree: n, reason: format!("negative count {quot}") });
        }
        a.push(quot);
    }
    Ok(a.into_iter().map(|v| v.to_biguint().expect("checked nonnegative")).collect())
}

fn closed_point_product(a: &[BigUint], order: usize, sign: Sign) -> PowerSeries {
    let order = order.min(a.len());
    let mut out = PowerSeries::one(order);
    for (i, ad) in a.iter().enumerate().take(order) {
        if ad.is_zero() {
            continue;
        }
        let e = BigInt::from_biguint(sign, ad.clone());
        out = out.mul(&PowerSeries::one_minus_t_pow(i + 1, e, order));
    }
    out
}

/// `Π_d (1 - t^d)^{-a_d}`, to order `min(order, a.len())`.
pub fn product_formula_series(a: &[BigUint], order: usize) -> PowerSeries {
    closed_point_product(a, order, Sign::Minus)
}

/// `M(X, t) = Π_d (1 - t^d)^{a_d}`, to order `min(order, a.len())`.
pub fn mobius_series(a: &[BigUint], order: usize) -> PowerSeries {
    closed_point_product(a, order, Sign::Plus)
}

fn reflect(coeffs: &[BigInt], c: &Rational, degree: usize) -> Vec<Rational> {
    // t^D f(c/t): coefficient f_i c^i lands on t^{D-i}
    let mut out = vec![Rational::zero(); degree + 1];
    let mut power = Rational::from_integer(1.into());
    for (i, f) in coeffs.iter().enumerate() {
        out[degree - i] = big(f.clone()) * &power;
        power *= c;
    }
    out
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Tests `Z(q^{-n} t^{-1}) = ε q^{nE/2} t^E Z(t)` as an identity of rational
/// functions and returns the sign `ε` that makes it hold, if any.
pub fn weil_functional_check(z: &RationalFunction, q: u64, n: u32, e: u32) -> Option<i8> {
    if z.numerator().is_empty() {
        return None;
    }
    let q = BigInt::from(q);
    let qn = num_traits::pow(q.clone(), n as usize);
    let c = Rational::new(1.into(), qn.clone());
    // q^{nE/2} must be rational for a rational identity
    let qne = num_traits::pow(qn, e as usize);
    let root = qne.sqrt();
    if &root * &root != qne {
        return None;
    }
    let num: Vec<Rational> = z.numerator().iter().cloned().map(big).collect();
    let den: Vec<Rational> = z.denominator().iter().cloned().map(big).collect();
    let degree = z.numerator().len().max(z.denominator().len()) - 1;
    let lhs = poly_mul(&reflect(z.numerator(), &c, degree), &den);
    let mut rhs = vec![Rational::zero(); e as usize];
    rhs.extend(poly_mul(&num, &reflect(z.denominator(), &c, degree)));
    let k = big(root);
    let same = |sign: i64| {
        let len = lhs.len().max(rhs.len());
        (0..len).all(|i| {
            let l = lhs.get(i).cloned().unwrap_or_else(Rational::zero);
            let r = rhs.get(i).cloned().unwrap_or_else(Rational::zero);
            l == r * &k * exact::int(sign)
        })
    };
    if same(1) {
        Some(1)
    } else if same(-1) {
        Some(-1)
    } else {
        None
    }
}

/// Reconstructs `Z` from its series within the degree bounds, then runs
/// [`weil_functional_check`].
pub fn check_functional_equation(
    series: &PowerSeries,
    bounds: (usize, usize),
    q: u64,
    n: u32,
    e: u32,
) -> Result<(RationalFunction, Option<i8>), FfError> {
    let z = rational_reconstruct(series, bounds.0, bounds.1)
        .map_err(|_| FfError::NotRational)?
        .ok_or(FfError::NotRational)?;
    let eps = weil_functional_check(&z, q, n, e);
    Ok((z, eps))
}
