//! Truncated formal power series, truncated Dirichlet series and rational
//! functions, all over exact rationals.
//!
//! A [`PowerSeries`] of order `T` stores the coefficients of `t^0..=t^T`. Binary
//! operations take the minimum order of their operands, so no coefficient is
//! ever reported beyond what both inputs determine.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, int, Rational};
use crate::linalg::{self, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("power series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("constant term must be {expected}, found {found}")]
    BadConstantTerm { expected: String, found: String },
    #[error("Dirichlet series with f(1) = 0 is not invertible")]
    NonInvertible,
    #[error("need truncation order at least {needed}, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("denominator must have a nonzero constant term")]
    ZeroDenominatorConstant,
    #[error("a series needs at least one coefficient")]
    Empty,
}

/// Truncated formal power series `Σ_{n ≤ T} c_n t^n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct SeriesRepr(#[serde(with = "crate::exact::text_vec")] Vec<Rational>);

impl TryFrom<SeriesRepr> for PowerSeries {
    type Error = SeriesError;
    fn try_from(r: SeriesRepr) -> Result<Self, SeriesError> {
        PowerSeries::new(r.0)
    }
}

impl From<PowerSeries> for SeriesRepr {
    fn from(s: PowerSeries) -> Self {
        SeriesRepr(s.coeffs)
    }
}

impl PowerSeries {
    /// Series of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    /// Pads with zeros or truncates so that the result has order `order`.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::from_ints(&[1], order)
    }

    /// `(1 - r t)^{-1} = Σ rⁿ tⁿ`.
    pub fn geometric(ratio: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut power = Rational::one();
        for _ in 0..=order {
            coeffs.push(power.clone());
            power *= ratio;
        }
        Self { coeffs }
    }

    /// `(1 - t^d)^e` for any integer exponent `e`, expanded with the binomial
    /// series so large exponents cost nothing extra.
    pub fn one_minus_t_pow(d: usize, exponent: impl Into<BigInt>, order: usize) -> Self {
        assert!(d >= 1, "degree must be positive");
        let mut out = Self::zero(order);
        // (1-x)^e = Σ_k C(e, k) (-x)^k, with C(e,k) the generalized binomial
        let e: BigInt = exponent.into();
        let mut binom = BigInt::one();
        let mut k = 0usize;
        while k * d <= order {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out.coeffs[k * d] = exact::big(&binom * sign);
            // C(e, k+1) = C(e, k) (e - k) / (k + 1)
            binom = binom * (&e - BigInt::from(k)) / BigInt::from(k + 1);
            k += 1;
            if binom.is_zero() {
                break;
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Self { coeffs: self.coeffs[..=order].to_vec() }
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(exact::as_integer).collect()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// `a(t) ↦ a(t^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut out = Self::zero(self.order());
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * k > self.order() {
                break;
            }
            out.coeffs[n * k] = c.clone();
        }
        out
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = a0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.order() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// `exp(a)` for `a_0 = 0`, from `n b_n = Σ_{k=1}^n k a_k b_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm {
                expected: "0".into(),
                found: exact::to_text(&self.coeffs[0]),
            });
        }
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(Rational::one());
        for n in 1..=self.order() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * int(k as i64) * &out[n - k];
                }
            }
            out.push(acc / int(n as i64));
        }
        Ok(Self { coeffs: out })
    }

    /// `log(a)` for `a_0 = 1`, from `n b_n = n a_n - Σ_{k=1}^{n-1} k b_k a_{n-k}`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::BadConstantTerm {
                expected: "1".into(),
                found: exact::to_text(&self.coeffs[0]),
            });
        }
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(Rational::zero());
        for n in 1..=self.order() {
            let mut acc = &self.coeffs[n] * int(n as i64);
            for k in 1..n {
                if !out[k].is_zero() {
                    acc -= &out[k] * int(k as i64) * &self.coeffs[n - k];
                }
            }
            out.push(acc / int(n as i64));
        }
        Ok(Self { coeffs: out })
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}] + O(t^{})", terms.join(", "), self.order() + 1)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect(),
        }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}

/// Truncated Dirichlet series `Σ_{n ≤ N} c_n n^{-s}`, stored as `c_1..=c_N`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct DirichletCoefficients {
    coeffs: Vec<Rational>,
}

impl TryFrom<SeriesRepr> for DirichletCoefficients {
    type Error = SeriesError;
    fn try_from(r: SeriesRepr) -> Result<Self, SeriesError> {
        DirichletCoefficients::new(r.0)
    }
}

impl From<DirichletCoefficients> for SeriesRepr {
    fn from(s: DirichletCoefficients) -> Self {
        SeriesRepr(s.coeffs)
    }
}

impl fmt::Debug for DirichletCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "D[{}; N={}]", terms.join(", "), self.bound())
    }
}

impl DirichletCoefficients {
    /// `coeffs[0]` is the coefficient of `1^{-s}`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    pub fn from_fn(bound: usize, mut f: impl FnMut(u64) -> Rational) -> Self {
        assert!(bound >= 1, "bound must be at least 1");
        Self { coeffs: (1..=bound as u64).map(&mut f).collect() }
    }

    /// The convolution unit `δ = (1, 0, 0, …)`.
    pub fn delta(bound: usize) -> Self {
        Self::from_fn(bound, |n| if n == 1 { Rational::one() } else { Rational::zero() })
    }

    /// Coefficients of `ζ_ℚ(s)`.
    pub fn ones(bound: usize) -> Self {
        Self::from_fn(bound, |_| Rational::one())
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `n^{-s}`, `1 ≤ n ≤ N`.
    pub fn get(&self, n: u64) -> &Rational {
        assert!(n >= 1, "Dirichlet coefficients start at n = 1");
        &self.coeffs[(n - 1) as usize]
    }

    pub fn truncate(&self, bound: usize) -> Self {
        assert!(bound >= 1 && bound <= self.bound());
        Self { coeffs: self.coeffs[..bound].to_vec() }
    }

    /// Dirichlet convolution `(f*g)(n) = Σ_{ij=n} f(i) g(j)`.
    pub fn mul(&self, other: &Self) -> Self {
        let bound = self.bound().min(other.bound());
        let mut coeffs = vec![Rational::zero(); bound];
        for i in 1..=bound {
            let fi = &self.coeffs[i - 1];
            if fi.is_zero() {
                continue;
            }
            for j in 1..=bound / i {
                let gj = &other.coeffs[j - 1];
                if !gj.is_zero() {
                    coeffs[i * j - 1] += fi * gj;
                }
            }
        }
        Self { coeffs }
    }

    /// Dirichlet inverse; requires `f(1) ≠ 0`.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let f1 = &self.coeffs[0];
        if f1.is_zero() {
            return Err(SeriesError::NonInvertible);
        }
        let n_max = self.bound();
        let inv1 = f1.recip();
        // acc[n] = Σ_{d | n, d < n} g(d) f(n/d), filled as g(d) becomes known
        let mut acc = vec![Rational::zero(); n_max + 1];
        let mut g = vec![Rational::zero(); n_max];
        for n in 1..=n_max {
            let delta = if n == 1 { Rational::one() } else { Rational::zero() };
            let gn = (delta - &acc[n]) * &inv1;
            if !gn.is_zero() {
                let mut k = 2;
                while n * k <= n_max {
                    let fk = &self.coeffs[k - 1];
                    if !fk.is_zero() {
                        acc[n * k] += &gn * fk;
                    }
                    k += 1;
                }
            }
            g[n - 1] = gn;
        }
        Ok(Self { coeffs: g })
    }
}

/// Quotient `P/Q` of integer polynomials, stored in lowest terms with
/// `Q(0) > 0` and coprime integer content.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalFunction {
    #[serde(with = "int_vec")]
    numerator: Vec<BigInt>,
    #[serde(with = "int_vec")]
    denominator: Vec<BigInt>,
}

mod int_vec {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| BigInt::from_str(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl RationalFunction {
    /// Builds `num/den` from ascending rational coefficient vectors and
    /// normalizes it.
    pub fn from_rational(num: &[Rational], den: &[Rational]) -> Result<Self, SeriesError> {
        if den.first().is_none_or(Zero::is_zero) {
            return Err(SeriesError::ZeroDenominatorConstant);
        }
        let mut p = upoly::trim(num.to_vec());
        let mut q = upoly::trim(den.to_vec());
        let g = upoly::gcd(&p, &q);
        if upoly::degree(&g) > 0 {
            p = upoly::div_exact(&p, &g);
            q = upoly::div_exact(&q, &g);
        }
        if p.is_empty() {
            q = vec![Rational::one()];
        }
        // clear denominators, then strip the common integer content
        let lcm = p
            .iter()
            .chain(&q)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut pn: Vec<BigInt> = p.iter().map(|c| (c * exact::big(lcm.clone())).to_integer()).collect();
        let mut qn: Vec<BigInt> = q.iter().map(|c| (c * exact::big(lcm.clone())).to_integer()).collect();
        let content = pn.iter().chain(&qn).fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if qn[0].is_negative() { -BigInt::one() } else { BigInt::one() };
        let scale = content * sign;
        for c in pn.iter_mut().chain(qn.iter_mut()) {
            *c = &*c / &scale;
        }
        Ok(Self { numerator: pn, denominator: qn })
    }

    pub fn from_ints(num: &[i64], den: &[i64]) -> Result<Self, SeriesError> {
        let n: Vec<Rational> = num.iter().map(|&c| int(c)).collect();
        let d: Vec<Rational> = den.iter().map(|&c| int(c)).collect();
        Self::from_rational(&n, &d)
    }

    /// Ascending coefficients; empty for the zero function.
    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.denominator
    }

    pub fn numerator_degree(&self) -> Option<usize> {
        self.numerator.len().checked_sub(1)
    }

    pub fn denominator_degree(&self) -> usize {
        self.denominator.len() - 1
    }

    /// Power-series expansion to order `order`.
    pub fn expand(&self, order: usize) -> PowerSeries {
        let p = PowerSeries::from_coeffs(self.numerator.iter().cloned().map(exact::big).collect(), order);
        let q = PowerSeries::from_coeffs(self.denominator.iter().cloned().map(exact::big).collect(), order);
        p.mul(&q.inv().expect("denominator has nonzero constant term"))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", upoly::display(&self.numerator), upoly::display(&self.denominator))
    }
}

/// Padé-style reconstruction of `a` as `P/Q` with `deg P ≤ max_num_deg`,
/// `deg Q ≤ max_den_deg` and `Q·a ≡ P` through order `T`.
///
/// Denominator degrees are tried in increasing order and the first consistent
/// system wins. `Ok(None)` means no such pair exists.
pub fn rational_reconstruct(
    a: &PowerSeries,
    max_num_deg: usize,
    max_den_deg: usize,
) -> Result<Option<RationalFunction>, SeriesError> {
    let needed = max_num_deg + max_den_deg + 1;
    if a.order() < needed {
        return Err(SeriesError::InsufficientPrecision { needed, have: a.order() });
    }
    let coeff = |i: isize| -> Rational {
        if i < 0 {
            Rational::zero()
        } else {
            a.coeffs[i as usize].clone()
        }
    };
    for den_deg in 0..=max_den_deg {
        // unknowns q_1..q_e with q_0 = 1; rows k = max_num_deg+1..=T demand
        // Σ_j q_j a_{k-j} = 0
        let rows: Vec<usize> = (max_num_deg + 1..=a.order()).collect();
        let matrix: Vec<Vec<Rational>> = rows
            .iter()
            .map(|&k| (1..=den_deg).map(|j| coeff(k as isize - j as isize)).collect())
            .collect();
        let rhs: Vec<Rational> = rows.iter().map(|&k| -coeff(k as isize)).collect();
        let q_tail = if den_deg == 0 {
            if rhs.iter().all(Zero::is_zero) {
                Some(Vec::new())
            } else {
                None
            }
        } else {
            match linalg::solve(&matrix, &rhs) {
                Solution::Found { x, .. } => Some(x),
                Solution::Inconsistent { .. } => None,
            }
        };
        let Some(q_tail) = q_tail else { continue };
        let mut q = vec![Rational::one()];
        q.extend(q_tail);
        let p: Vec<Rational> = (0..=max_num_deg)
            .map(|k| {
                (0..=den_deg.min(k))
                    .map(|j| &q[j] * coeff(k as isize - j as isize))
                    .fold(Rational::zero(), |s, v| s + v)
            })
            .collect();
        return RationalFunction::from_rational(&p, &q).map(Some);
    }
    Ok(None)
}

/// Dense univariate polynomials over ℚ, ascending, with no trailing zeros.
pub(crate) mod upoly {
    use super::*;

    pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    /// Degree, with the zero polynomial treated as degree 0.
    pub fn degree(p: &[Rational]) -> usize {
        p.len().saturating_sub(1)
    }

    fn divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![Rational::zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = &r[i + db] / &lead;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    r[i + j] -= &c * bj;
                }
            }
            q[i] = c;
        }
        (trim(q), trim(r))
    }

    pub fn div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let (q, r) = divmod(a, b);
        debug_assert!(r.is_empty());
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let (_, r) = divmod(&x, &y);
            x = y;
            y = r;
        }
        if let Some(lead) = x.last().cloned() {
            for c in x.iter_mut() {
                *c /= &lead;
            }
        }
        x
    }

    pub fn display(p: &[BigInt]) -> String {
        let terms: Vec<String> = p
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn ints(s: &PowerSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                let i = exact::as_integer(c).expect("integer coefficient");
                i64::try_from(i).unwrap()
            })
            .collect()
    }

    #[test]
    fn telescoping_product_is_one() {
        let a = PowerSeries::from_ints(&[1, -1], 8);
        let b = PowerSeries::from_ints(&[1; 9], 8);
        assert_eq!(a.mul(&b), PowerSeries::one(8));
    }

    #[test]
    fn identity_and_binomial() {
        let a = PowerSeries::from_ints(&[3, -1, 4, 1, 5], 4);
        assert_eq!(PowerSeries::one(4).mul(&a), a);
        let b = PowerSeries::from_ints(&[1, 1], 5);
        assert_eq!(ints(&b.mul(&b)), vec![1, 2, 1, 0, 0, 0]);
    }

    #[test]
    fn truncation_takes_the_minimum_order() {
        let a = PowerSeries::one(3);
        let b = PowerSeries::one(7);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn geometric_inverses() {
        let inv = PowerSeries::from_ints(&[1, -1], 6).inv().unwrap();
        assert_eq!(ints(&inv), vec![1; 7]);
        let inv = PowerSeries::from_ints(&[1, -2], 6).inv().unwrap();
        assert_eq!(ints(&inv), vec![1, 2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn inverse_of_p1_denominator_matches_long_division() {
        // long division of 1 by 1 - 3t + 2t^2: r_n = 3 r_{n-1} - 2 r_{n-2}
        let mut oracle = vec![1i64, 3];
        for n in 2..12 {
            oracle.push(3 * oracle[n - 1] - 2 * oracle[n - 2]);
        }
        let q = PowerSeries::from_ints(&[1, -3, 2], 11);
        assert_eq!(ints(&q.inv().unwrap()), oracle);
        assert_eq!(oracle[..4], [1, 3, 7, 15]);
        assert!(oracle.iter().enumerate().all(|(n, &c)| c == (1 << (n + 1)) - 1));
    }

    #[test]
    fn inverse_needs_unit_constant() {
        assert_eq!(PowerSeries::from_ints(&[0, 1], 3).inv(), Err(SeriesError::ZeroConstantTerm));
    }

    #[test]
    fn exp_of_minus_log_one_minus_t() {
        let order = 10;
        let s = PowerSeries::from_coeffs(
            (0..=order).map(|n| if n == 0 { Rational::zero() } else { frac(1, n as i64) }).collect(),
            order,
        );
        assert_eq!(ints(&s.exp().unwrap()), vec![1; order + 1]);
        assert_eq!(PowerSeries::zero(5).exp().unwrap(), PowerSeries::one(5));
        let log = PowerSeries::from_ints(&[1, -1], order).log().unwrap();
        for n in 1..=order {
            assert_eq!(log.coeff(n), &frac(-1, n as i64));
        }
    }

    #[test]
    fn exp_log_report_bad_constant() {
        let err = PowerSeries::one(3).exp().unwrap_err();
        assert_eq!(err, SeriesError::BadConstantTerm { expected: "0".into(), found: "1/1".into() });
        assert!(matches!(PowerSeries::zero(3).log(), Err(SeriesError::BadConstantTerm { .. })));
    }

    #[test]
    fn binomial_powers() {
        let a = PowerSeries::one_minus_t_pow(2, -1, 8);
        assert_eq!(ints(&a), vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let b = PowerSeries::one_minus_t_pow(1, 3, 5);
        assert_eq!(ints(&b), vec![1, -3, 3, -1, 0, 0]);
        let c = PowerSeries::one_minus_t_pow(1, -2, 4);
        assert_eq!(ints(&c), vec![1, 2, 3, 4, 5]);
    }

    fn divisor_count(n: u64) -> i64 {
        (1..=n).filter(|d| n % d == 0).count() as i64
    }

    #[test]
    fn ones_squared_is_divisor_count() {
        let z = DirichletCoefficients::ones(60);
        let d = z.mul(&z);
        for n in 1..=60 {
            assert_eq!(d.get(n), &int(divisor_count(n)));
        }
        assert_eq!(d.coeffs()[..6], [int(1), int(2), int(2), int(3), int(2), int(4)]);
    }

    #[test]
    fn delta_is_a_unit_and_inverse_works() {
        let f = DirichletCoefficients::from_fn(40, |n| int((n * n % 7) as i64 + 1));
        assert_eq!(f.mul(&DirichletCoefficients::delta(40)), f);
        let g = f.inv().unwrap();
        assert_eq!(f.mul(&g), DirichletCoefficients::delta(40));
        let bad = DirichletCoefficients::from_fn(5, |n| int(n as i64 - 1));
        assert_eq!(bad.inv(), Err(SeriesError::NonInvertible));
    }

    #[test]
    fn reconstructs_geometric_and_p1() {
        let geo = PowerSeries::from_ints(&[1; 6], 5);
        let r = rational_reconstruct(&geo, 0, 1).unwrap().unwrap();
        assert_eq!(r, RationalFunction::from_ints(&[1], &[1, -1]).unwrap());

        let p1 = RationalFunction::from_ints(&[1], &[1, -3, 2]).unwrap();
        let series = p1.expand(10);
        let r = rational_reconstruct(&series, 0, 2).unwrap().unwrap();
        assert_eq!(r.denominator(), &[BigInt::from(1), BigInt::from(-3), BigInt::from(2)]);
        assert_eq!(r.numerator(), &[BigInt::from(1)]);
    }

    #[test]
    fn factorial_series_is_not_rational() {
        let mut f = vec![1i64];
        for n in 1..=10 {
            f.push(f[n - 1] * n as i64);
        }
        let s = PowerSeries::from_ints(&f, 10);
        assert_eq!(rational_reconstruct(&s, 3, 3).unwrap(), None);
    }

    #[test]
    fn reconstruction_needs_precision() {
        let s = PowerSeries::one(3);
        assert_eq!(
            rational_reconstruct(&s, 2, 2),
            Err(SeriesError::InsufficientPrecision { needed: 5, have: 3 })
        );
    }

    #[test]
    fn normalization_cancels_common_factors() {
        // (1 - t)/(1 - t^2) = 1/(1 + t)
        let r = RationalFunction::from_ints(&[2, -2], &[2, 0, -2]).unwrap();
        assert_eq!(r, RationalFunction::from_ints(&[1], &[1, 1]).unwrap());
        let neg = RationalFunction::from_ints(&[3], &[-6, 3]).unwrap();
        assert_eq!(neg.numerator(), &[BigInt::from(-1)]);
        assert_eq!(neg.denominator(), &[BigInt::from(2), BigInt::from(-1)]);
        assert!(RationalFunction::from_ints(&[1], &[0, 1]).is_err());
    }

    #[test]
    fn json_uses_fraction_strings() {
        let s = PowerSeries::from_coeffs(vec![int(1), frac(1, 2)], 1);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["1/1","1/2"]"#);
        let back: PowerSeries = serde_json::from_str(r#"["1/1","1/2"]"#).unwrap();
        assert_eq!(back, s);
        let r = RationalFunction::from_ints(&[1], &[1, -3, 2]).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"numerator":["1"],"denominator":["1","-3","2"]}"#
        );
    }
}
