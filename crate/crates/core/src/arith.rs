//! Dirichlet arithmetic over ℚ and over quadratic fields.
//!
//! Dedekind zeta coefficients are assembled from local Euler factors read off
//! the splitting type of each rational prime, which the Kronecker symbol
//! `(D | p)` determines.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::int;
use crate::poset::{not_comparable, IntervalLabel, LocallyFinitePoset, PosetError};
use crate::series::PowerSeries;
use crate::{DirichletCoefficients, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("local factor at p = {p} has constant term {found}, expected 1")]
    BadLocalFactor { p: u64, found: String },
    #[error("local factor at p = {p} has order {have}, need {needed}")]
    ShortLocalFactor { p: u64, needed: usize, have: usize },
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("cannot parse ideal {0:?}")]
    BadIdeal(String),
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "cannot factor 0");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Classical Möbius function: `0` if a square divides `n`, otherwise `(-1)^r`
/// for `r` distinct prime factors.
pub fn mobius_classical(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `⌊log_p n⌋`: the largest `k` with `p^k ≤ n`.
pub fn max_exponent(p: u64, n: u64) -> usize {
    let mut k = 0;
    let mut pk = p;
    while pk <= n {
        k += 1;
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    k
}

/// Euler product `Π_p F_p(p^{-s})` truncated at `n ≤ bound`. `local_factor`
/// is called once per prime `p ≤ bound` with the order it must supply.
pub fn euler_product(
    mut local_factor: impl FnMut(u64, usize) -> PowerSeries,
    bound: usize,
) -> Result<DirichletCoefficients, ArithError> {
    let factors: Vec<(u64, PowerSeries)> = primes_up_to(bound as u64)
        .into_iter()
        .map(|p| {
            let order = max_exponent(p, bound as u64);
            (p, local_factor(p, order))
        })
        .collect();
    euler_product_from_factors(&factors, bound)
}

/// Assembles `c_n = Π_{p^k ∥ n} [t^k] F_p` from precomputed local factors,
/// which must cover every prime `≤ bound`.
pub fn euler_product_from_factors(
    factors: &[(u64, PowerSeries)],
    bound: usize,
) -> Result<DirichletCoefficients, ArithError> {
    let mut table = BTreeMap::new();
    for (p, f) in factors {
        if !f.coeff(0).is_one() {
            return Err(ArithError::BadLocalFactor { p: *p, found: crate::exact::to_text(f.coeff(0)) });
        }
        let needed = max_exponent(*p, bound as u64);
        if f.order() < needed {
            return Err(ArithError::ShortLocalFactor { p: *p, needed, have: f.order() });
        }
        table.insert(*p, f);
    }
    let mut coeffs = Vec::with_capacity(bound);
    for n in 1..=bound as u64 {
        let mut c = Rational::one();
        for (p, k) in factorize(n) {
            let f = table.get(&p).unwrap_or_else(|| panic!("no local factor supplied for p = {p}"));
            c *= f.coeff(k as usize);
        }
        coeffs.push(c);
    }
    Ok(DirichletCoefficients::new(coeffs).expect("bound ≥ 1"))
}

/// Coefficients of `ζ_ℚ(s)`: all ones.
pub fn riemann_zeta_coeffs(bound: usize) -> DirichletCoefficients {
    DirichletCoefficients::ones(bound)
}

/// Coefficients of `1/ζ_ℚ(s) = Σ μ(n) n^{-s}`.
pub fn riemann_mobius_coeffs(bound: usize) -> DirichletCoefficients {
    DirichletCoefficients::from_fn(bound, |n| int(mobius_classical(n) as i64))
}

/// Kronecker symbol `(a | n)` for all integers, via quadratic reciprocity.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i8;
    let mut n = n as i128;
    let a = a as i128;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a | 2) = (-1)^{(a²-1)/8}
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a | n), n odd and positive
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// How a rational prime decomposes in `O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplittingType {
    /// `pO_K = 𝔭𝔭'`, two primes of norm `p`.
    Split,
    /// `pO_K` stays prime, of norm `p²`.
    Inert,
    /// `pO_K = 𝔭²`, one prime of norm `p`.
    Ramified,
}

/// `ℚ(√D)` for a fundamental discriminant `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticField {
    discriminant: i64,
}

impl QuadraticField {
    pub fn new(discriminant: i64) -> Result<Self, ArithError> {
        let d = discriminant;
        let ok = if d == 0 || d == 1 {
            false
        } else if d.rem_euclid(4) == 1 {
            squarefree(d.unsigned_abs())
        } else if d.rem_euclid(4) == 0 {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        } else {
            false
        };
        if ok {
            Ok(Self { discriminant: d })
        } else {
            Err(ArithError::NotFundamental(d))
        }
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn splitting(&self, p: u64) -> SplittingType {
        match kronecker(self.discriminant, p as i64) {
            1 => SplittingType::Split,
            -1 => SplittingType::Inert,
            _ => SplittingType::Ramified,
        }
    }

    /// Inertia degrees `f_i` of the primes above `p`.
    pub fn inertia_degrees(&self, p: u64) -> Vec<u32> {
        match self.splitting(p) {
            SplittingType::Split => vec![1, 1],
            SplittingType::Inert => vec![2],
            SplittingType::Ramified => vec![1],
        }
    }

    /// `Π_i (1 - t^{f_i})^{-1}`, the local zeta factor at `p`.
    pub fn local_zeta_factor(&self, p: u64, order: usize) -> PowerSeries {
        self.inertia_degrees(p)
            .into_iter()
            .map(|f| PowerSeries::one_minus_t_pow(f as usize, -1, order))
            .fold(PowerSeries::one(order), |acc, s| acc.mul(&s))
    }

    /// `Π_i (1 - t^{f_i})`, the local Möbius factor at `p`.
    pub fn local_mobius_factor(&self, p: u64, order: usize) -> PowerSeries {
        self.inertia_degrees(p)
            .into_iter()
            .map(|f| PowerSeries::one_minus_t_pow(f as usize, 1, order))
            .fold(PowerSeries::one(order), |acc, s| acc.mul(&s))
    }

    /// Prime ideals above `p`.
    pub fn primes_above(&self, p: u64) -> Vec<PrimeIdeal> {
        match self.splitting(p) {
            SplittingType::Split => vec![PrimeIdeal { p, branch: Branch::Plus }, PrimeIdeal { p, branch: Branch::Minus }],
            SplittingType::Inert => vec![PrimeIdeal { p, branch: Branch::Inert }],
            SplittingType::Ramified => vec![PrimeIdeal { p, branch: Branch::Ramified }],
        }
    }

    /// Every ideal of norm exactly `n`, sorted.
    pub fn ideals_of_norm(&self, n: u64) -> Vec<Ideal> {
        let mut out = vec![Ideal::unit()];
        for (p, k) in factorize(n) {
            let local: Vec<Vec<(PrimeIdeal, u32)>> = match self.splitting(p) {
                SplittingType::Split => {
                    let [a, b]: [PrimeIdeal; 2] = self.primes_above(p).try_into().expect("two primes");
                    (0..=k).map(|i| vec![(a, i), (b, k - i)]).collect()
                }
                SplittingType::Inert if k % 2 == 0 => {
                    vec![vec![(PrimeIdeal { p, branch: Branch::Inert }, k / 2)]]
                }
                SplittingType::Inert => return Vec::new(),
                SplittingType::Ramified => vec![vec![(PrimeIdeal { p, branch: Branch::Ramified }, k)]],
            };
            out = out
                .iter()
                .flat_map(|base| {
                    local.iter().map(move |choice| {
                        let mut ideal = base.clone();
                        for &(q, e) in choice {
                            if e > 0 {
                                ideal.0.insert(q, e);
                            }
                        }
                        ideal
                    })
                })
                .collect();
        }
        out.sort();
        out
    }
}

/// Coefficients of `ζ_K(s)`: the number of ideals of each norm.
pub fn dedekind_zeta_coeffs(field: &QuadraticField, bound: usize) -> DirichletCoefficients {
    euler_product(|p, order| field.local_zeta_factor(p, order), bound).expect("local factors are unital")
}

/// Coefficients of `μ_K(s) = Σ_𝔞 μ(𝔞) N(𝔞)^{-s}`.
pub fn dedekind_mobius_coeffs(field: &QuadraticField, bound: usize) -> DirichletCoefficients {
    euler_product(|p, order| field.local_mobius_factor(p, order), bound).expect("local factors are unital")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
    Inert,
    Ramified,
}

/// A nonzero prime ideal of a quadratic ring of integers, named by the
/// rational prime below it. The two primes above a split `p` are told apart
/// as `+` and `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub branch: Branch,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        match self.branch {
            Branch::Inert => self.p * self.p,
            _ => self.p,
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.branch {
            Branch::Plus => "+",
            Branch::Minus => "-",
            Branch::Inert | Branch::Ramified => "",
        };
        write!(f, "p{}{}", self.p, suffix)
    }
}

/// A nonzero ideal, stored by its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ideal(pub BTreeMap<PrimeIdeal, u32>);

impl Ideal {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn norm(&self) -> u64 {
        self.0.iter().map(|(q, &e)| q.norm().pow(e)).product()
    }

    /// Parses the `Display` form, e.g. `p2^3*p5+*p5-^2` or `1`, checking each
    /// prime against the splitting of `field`.
    pub fn parse(field: &QuadraticField, s: &str) -> Result<Self, ArithError> {
        let bad = || ArithError::BadIdeal(s.to_string());
        let s = s.trim();
        let mut ideal = Ideal::unit();
        if s == "1" {
            return Ok(ideal);
        }
        for factor in s.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b.trim(), u32::from_str(e.trim()).map_err(|_| bad())?),
                None => (factor.trim(), 1),
            };
            let body = base.strip_prefix('p').ok_or_else(bad)?;
            let (digits, sign) = match body.strip_suffix('+') {
                Some(d) => (d, Some(Branch::Plus)),
                None => match body.strip_suffix('-') {
                    Some(d) => (d, Some(Branch::Minus)),
                    None => (body, None),
                },
            };
            let p = u64::from_str(digits).map_err(|_| bad())?;
            if !is_prime(p) {
                return Err(bad());
            }
            let branch = match (field.splitting(p), sign) {
                (SplittingType::Split, Some(b)) => b,
                (SplittingType::Inert, None) => Branch::Inert,
                (SplittingType::Ramified, None) => Branch::Ramified,
                _ => return Err(bad()),
            };
            if exp > 0 {
                *ideal.0.entry(PrimeIdeal { p, branch }).or_insert(0) += exp;
            }
        }
        Ok(ideal)
    }

    pub fn divides(&self, other: &Ideal) -> bool {
        self.0.iter().all(|(q, &e)| other.0.get(q).copied().unwrap_or(0) >= e)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(q, &e)| if e == 1 { q.to_string() } else { format!("{q}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `(I_K⁺, ∣)`: nonzero ideals of `O_K` under divisibility. Intervals are
/// labelled by the sorted exponent gaps, which determine the interval up to
/// isomorphism as a product of chains.
#[derive(Debug, Clone, Copy)]
pub struct IdealPoset {
    pub field: QuadraticField,
}

impl LocallyFinitePoset for IdealPoset {
    type Elem = Ideal;

    fn leq(&self, x: &Ideal, y: &Ideal) -> bool {
        x.divides(y)
    }

    fn interval(&self, x: &Ideal, y: &Ideal) -> Result<Vec<Ideal>, PosetError> {
        if !x.divides(y) {
            return Err(not_comparable(x, y));
        }
        let mut out = vec![x.clone()];
        for (q, &top) in &y.0 {
            let low = x.0.get(q).copied().unwrap_or(0);
            out = out
                .iter()
                .flat_map(|base| {
                    (low..=top).map(move |e| {
                        let mut next = base.clone();
                        if e > 0 {
                            next.0.insert(*q, e);
                        }
                        next
                    })
                })
                .collect();
        }
        out.sort_by_key(|i| (i.norm(), i.clone()));
        Ok(out)
    }

    fn classify(&self, x: &Ideal, y: &Ideal) -> Option<IntervalLabel> {
        let mut gaps: Vec<i64> = y
            .0
            .iter()
            .map(|(q, &e)| (e - x.0.get(q).copied().unwrap_or(0)) as i64)
            .filter(|&g| g > 0)
            .collect();
        gaps.sort_unstable();
        Some(gaps)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::poset::{Divisibility, Incidence};

    #[test]
    fn classical_mobius_values() {
        assert_eq!(mobius_classical(1), 1);
        assert_eq!(mobius_classical(30), -1);
        assert_eq!(mobius_classical(12), 0);
        assert_eq!(mobius_classical(6), 1);
    }

    #[test]
    fn factorization_and_primes() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(max_exponent(2, 100), 6);
        assert_eq!(max_exponent(7, 48), 1);
        assert_eq!(max_exponent(11, 10), 0);
    }

    #[test]
    fn euler_products_of_classical_factors() {
        let zeta = euler_product(|_, order| PowerSeries::one_minus_t_pow(1, -1, order), 100).unwrap();
        assert_eq!(zeta, DirichletCoefficients::ones(100));
        let mu = euler_product(|_, order| PowerSeries::one_minus_t_pow(1, 1, order), 100).unwrap();
        assert_eq!(mu, riemann_mobius_coeffs(100));
        // c_{p^k} = p^k and multiplicativity give c_n = n
        let shifted = euler_product(|p, order| PowerSeries::geometric(&int(p as i64), order), 100).unwrap();
        for n in 1..=100 {
            assert_eq!(shifted.get(n), &int(n as i64));
        }
    }

    #[test]
    fn euler_product_rejects_non_unital_factor() {
        let err = euler_product(|_, order| PowerSeries::from_ints(&[2, 1], order), 10).unwrap_err();
        assert_eq!(err, ArithError::BadLocalFactor { p: 2, found: "2/1".into() });
    }

    #[test]
    fn zeta_times_mobius_is_delta() {
        let n = 300;
        assert_eq!(riemann_zeta_coeffs(n).mul(&riemann_mobius_coeffs(n)), DirichletCoefficients::delta(n));
    }

    fn euler_criterion(a: i64, p: i64) -> i8 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        let mut r = 1i64;
        for _ in 0..(p - 1) / 2 {
            r = r * a % p;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in -60..60 {
                assert_eq!(kronecker(a, p as i64), euler_criterion(a, p as i64), "({a}|{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two_and_composites() {
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        // multiplicative in the bottom argument
        for a in [-20i64, -7, -4, -3, 5, 8, 13] {
            for m in 1..30i64 {
                for n in 1..30i64 {
                    assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
                }
            }
        }
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(2, 0), 0);
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [-4, -3, 5, 8, -8, 12, -7, 13, -20] {
            assert!(QuadraticField::new(d).is_ok(), "{d}");
        }
        for d in [0, 1, 4, -1, 2, 9, -12, 16, 20, 45] {
            assert_eq!(QuadraticField::new(d), Err(ArithError::NotFundamental(d)), "{d}");
        }
    }

    fn sum_of_two_squares(n: i64) -> i64 {
        let mut count = 0;
        let r = (n as f64).sqrt() as i64 + 1;
        for x in -r..=r {
            for y in -r..=r {
                if x * x + y * y == n {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn gaussian_integers_count_lattice_points() {
        let k = QuadraticField::new(-4).unwrap();
        let z = dedekind_zeta_coeffs(&k, 50);
        for n in 1..=50 {
            assert_eq!(z.get(n), &int(sum_of_two_squares(n as i64) / 4), "n = {n}");
        }
        assert_eq!(z.coeffs()[..5], [int(1), int(1), int(0), int(1), int(2)]);
        assert_eq!(z.get(9), &int(1));
    }

    #[test]
    fn dedekind_mobius_examples() {
        let k = QuadraticField::new(-4).unwrap();
        let m = dedekind_mobius_coeffs(&k, 30);
        assert_eq!(m.get(1), &int(1));
        assert_eq!(m.get(2), &int(-1));
        assert_eq!(m.get(5), &int(-2));
        assert_eq!(m.get(4), &int(0));
        // inert 3: the prime of norm 9
        assert_eq!(m.get(3), &int(0));
        assert_eq!(m.get(9), &int(-1));
        for d in [-3, 5, 8] {
            let k = QuadraticField::new(d).unwrap();
            assert_eq!(dedekind_zeta_coeffs(&k, 10).get(1), &int(1));
        }
    }

    #[test]
    fn ideals_of_norm_agree_with_coefficients() {
        for d in [-4, -3, 5, 8, -20] {
            let k = QuadraticField::new(d).unwrap();
            let z = dedekind_zeta_coeffs(&k, 120);
            for n in 1..=120u64 {
                let ideals = k.ideals_of_norm(n);
                assert_eq!(z.get(n), &int(ideals.len() as i64), "D = {d}, n = {n}");
                assert!(ideals.iter().all(|i| i.norm() == n));
            }
        }
    }

    #[test]
    fn ideal_poset_mobius_sums_to_dedekind_mobius() {
        let k = QuadraticField::new(-4).unwrap();
        let poset = Arc::new(IdealPoset { field: k });
        let mu = Incidence::mobius(Arc::clone(&poset));
        let coeffs = dedekind_mobius_coeffs(&k, 100);
        for n in 1..=100u64 {
            let total: Rational = k
                .ideals_of_norm(n)
                .iter()
                .map(|a| mu.value(&Ideal::unit(), a).unwrap())
                .sum();
            assert_eq!(&total, coeffs.get(n), "n = {n}");
        }
    }

    #[test]
    fn ideal_text_round_trip() {
        let k = QuadraticField::new(-4).unwrap();
        for n in [1u64, 2, 10, 25, 45, 50, 65] {
            for ideal in k.ideals_of_norm(n) {
                assert_eq!(Ideal::parse(&k, &ideal.to_string()).unwrap(), ideal);
            }
        }
        assert!(Ideal::parse(&k, "p5").is_err()); // split prime needs a sign
        assert!(Ideal::parse(&k, "p3+").is_err()); // 3 is inert in ℚ(i)
        assert_eq!(Ideal::parse(&k, "p3^2").unwrap().norm(), 81);
    }

    #[test]
    fn classical_matches_poset_mobius() {
        let p = Arc::new(Divisibility);
        let mu = Incidence::mobius(Arc::clone(&p));
        for n in 1..=500 {
            assert_eq!(mu.value(&1, &n).unwrap(), int(mobius_classical(n) as i64));
        }
    }
}
