//! Point counting by enumeration.
//!
//! Variables that occur in no equation contribute a factor `q` each. Of the
//! rest, all but the last are enumerated; for each assignment the equations
//! become univariate in the last variable, and its solutions are counted as
//! `deg gcd(g, y^q - y)` where `g` is the gcd of the specialized equations.
//! Projective space is covered by the charts `(0, …, 0, 1, *, …, *)`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::field::{Elem, FiniteField};
use super::{Ambient, FfError, VarietySpec};
use crate::poly::Polynomial;

/// Default cap on enumerated assignments.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `#X(𝔽)`: affine solutions, or projective solutions up to scalars.
pub fn count_points(x: &VarietySpec, f: &FiniteField, budget: u64) -> Result<BigUint, FfError> {
    let x = x.reduce_mod(f.characteristic());
    match x.ambient() {
        Ambient::Affine(m) => count_affine(x.polys(), m, f, budget),
        Ambient::Projective(m) => {
            let mut total = BigUint::zero();
            for (nvars, chart) in chart_systems(x.polys(), m) {
                total += count_affine(&chart, nvars, f, budget)?;
            }
            Ok(total)
        }
    }
}

/// Independent oracle: evaluates every equation at every tuple (affine) or
/// at every normalized representative (projective).
pub fn count_points_brute_force(x: &VarietySpec, f: &FiniteField, budget: u64) -> Result<BigUint, FfError> {
    let x = x.reduce_mod(f.characteristic());
    let n = x.ambient().nvars();
    let q = f.order();
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| FfError::FieldTooLarge { needed: format!("{q}^{n}"), budget })?;
    let projective = matches!(x.ambient(), Ambient::Projective(_));
    let systems: Vec<Vec<(Vec<u32>, Elem)>> = x
        .polys()
        .iter()
        .map(|p| p.terms().iter().map(|(m, c)| (m.clone(), f.from_int(c.to_i64().expect("reduced")))).collect())
        .collect();
    let count: u64 = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let point = decode(idx, q, n);
            if projective && point.iter().find(|&&v| v != 0) != Some(&1) {
                return false;
            }
            systems.iter().all(|terms| evaluate(f, terms, &point) == 0)
        })
        .count() as u64;
    Ok(BigUint::from(count))
}

fn decode(mut idx: u64, q: u64, n: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(idx % q);
        idx /= q;
    }
    out
}

fn evaluate(f: &FiniteField, terms: &[(Vec<u32>, Elem)], point: &[Elem]) -> Elem {
    terms.iter().fold(0, |acc, (m, c)| {
        let mono = m
            .iter()
            .zip(point)
            .fold(*c, |v, (&e, &x)| if e == 0 { v } else { f.mul(v, f.pow(x, e as u64)) });
        f.add(acc, mono)
    })
}

/// One affine system per chart `i`: coordinates before `i` are zero, `x_i = 1`,
/// and the remaining `m - i` coordinates become the chart's variables.
fn chart_systems(polys: &[Polynomial], m: usize) -> Vec<(usize, Vec<Polynomial>)> {
    (0..=m)
        .map(|i| {
            let keep: Vec<usize> = (i + 1..=m).collect();
            let system = polys
                .iter()
                .map(|p| {
                    let mut s = p.clone();
                    for j in 0..i {
                        s = s.substitute(j, 0);
                    }
                    s.substitute(i, 1).select_variables(&keep)
                })
                .collect();
            (m - i, system)
        })
        .collect()
}

/// Solutions in `𝔽^n` of a system whose coefficients are already in `0..p`.
fn count_affine(polys: &[Polynomial], n: usize, f: &FiniteField, budget: u64) -> Result<BigUint, FfError> {
    let q = f.order();
    let mut systems = Vec::new();
    for p in polys.iter().filter(|p| !p.is_zero()) {
        if p.total_degree() == Some(0) {
            // a nonzero constant equation has no solutions
            return Ok(BigUint::zero());
        }
        systems.push(p);
    }
    let occurring: Vec<usize> = (0..n).filter(|&i| systems.iter().any(|p| p.uses_variable(i))).collect();
    let free = n - occurring.len();
    let free_factor = BigUint::from(q).pow(free as u32);
    let Some((&elim, enumerated)) = occurring.split_last() else {
        return Ok(free_factor);
    };
    let assignments = q
        .checked_pow(enumerated.len() as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| FfError::FieldTooLarge { needed: format!("{q}^{}", enumerated.len()), budget })?;

    // per equation: (exponents of the enumerated variables, exponent of the
    // eliminated one, coefficient)
    let prepared: Vec<Vec<(Vec<u32>, usize, Elem)>> = systems
        .iter()
        .map(|p| {
            p.terms()
                .iter()
                .map(|(m, c)| {
                    let exps = enumerated.iter().map(|&v| m[v]).collect();
                    (exps, m[elim] as usize, f.from_int(c.to_i64().expect("reduced coefficient")))
                })
                .collect()
        })
        .collect();

    let solutions: u128 = (0..assignments)
        .into_par_iter()
        .map(|idx| {
            let values = decode(idx, q, enumerated.len());
            let mut g: Vec<Elem> = Vec::new();
            for terms in &prepared {
                let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
                let mut uni = vec![0; deg + 1];
                for (exps, e, c) in terms {
                    let v = exps
                        .iter()
                        .zip(&values)
                        .fold(*c, |acc, (&k, &x)| if k == 0 { acc } else { f.mul(acc, f.pow(x, k as u64)) });
                    uni[*e] = f.add(uni[*e], v);
                }
                g = fq_poly::gcd(f, &g, &uni);
                if g.len() == 1 {
                    return 0;
                }
            }
            fq_poly::count_roots(f, &g) as u128
        })
        .sum();
    Ok(BigUint::from(solutions) * free_factor)
}

mod fq_poly {
    //! Dense univariate polynomials over a finite field, ascending, trimmed.

    use super::{Elem, FiniteField};

    pub fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let inv_lead = f.inv(b[db]);
        while r.len() > db {
            let c = f.mul(*r.last().expect("nonempty"), inv_lead);
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
            }
            r = trim(r);
        }
        r
    }

    /// Monic-free gcd; `gcd(0, b) = b`.
    pub fn gcd(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let r = rem(f, &x, &y);
            x = y;
            y = r;
        }
        x
    }

    fn mul_mod(f: &FiniteField, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        rem(f, &prod, m)
    }

    /// Distinct roots of `g` in the field; the zero polynomial vanishes
    /// everywhere.
    pub fn count_roots(f: &FiniteField, g: &[Elem]) -> u64 {
        let q = f.order();
        match g.len() {
            0 => return q,
            1 => return 0,
            2 => return 1,
            _ => {}
        }
        if q <= 64 {
            return f
                .elements()
                .filter(|&y| g.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, y), c)) == 0)
                .count() as u64;
        }
        // y^q mod g by square-and-multiply
        let mut acc = vec![1];
        let mut base = rem(f, &[0, 1], g);
        let mut e = q;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(f, &acc, &base, g);
            }
            base = mul_mod(f, &base, &base, g);
            e >>= 1;
        }
        let mut h = acc;
        h.resize(h.len().max(2), 0);
        h[1] = f.sub(h[1], 1);
        let d = gcd(f, g, &h);
        (d.len() - 1) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffgeom::Ambient;

    fn small(n: &BigUint) -> u64 {
        n.to_u64().unwrap()
    }

    #[test]
    fn affine_and_projective_spaces() {
        for (p, k) in [(2, 1), (2, 3), (3, 2), (5, 1)] {
            let f = FiniteField::new(p, k).unwrap();
            let q = f.order();
            for n in 0..4 {
                let a = count_points(&VarietySpec::affine_space(n), &f, DEFAULT_BUDGET).unwrap();
                assert_eq!(small(&a), q.pow(n as u32));
            }
            let p1 = count_points(&VarietySpec::projective_space(1), &f, DEFAULT_BUDGET).unwrap();
            assert_eq!(small(&p1), q + 1);
            let p2 = count_points(&VarietySpec::projective_space(2), &f, DEFAULT_BUDGET).unwrap();
            assert_eq!(small(&p2), q * q + q + 1);
        }
    }

    #[test]
    fn huge_fields_need_no_enumeration_for_linear_spaces() {
        let f = FiniteField::new(5, 20).unwrap();
        let n = count_points(&VarietySpec::projective_space(1), &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(n, BigUint::from(5u64.pow(20) + 1));
    }

    #[test]
    fn curve_over_f2() {
        // x = 0: y ∈ {0, 1}; x = 1: y² + y + 1 has no root in 𝔽₂
        let x = VarietySpec::parse(Ambient::Affine(2), &["y^2+y-x^3"]).unwrap();
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(small(&count_points(&x, &f, DEFAULT_BUDGET).unwrap()), 2);
        assert_eq!(small(&count_points_brute_force(&x, &f, DEFAULT_BUDGET).unwrap()), 2);
    }

    #[test]
    fn matches_brute_force_on_assorted_systems() {
        let cases: Vec<(Ambient, Vec<&str>)> = vec![
            (Ambient::Affine(2), vec!["y^2+y-x^3"]),
            (Ambient::Affine(2), vec!["y^2 - x^3 - x - 1"]),
            (Ambient::Affine(2), vec!["x*y - 1"]),
            (Ambient::Affine(3), vec!["x^2 + y^2 + z^2", "x + y + z"]),
            (Ambient::Affine(3), vec!["x*z - y^2"]),
            (Ambient::Affine(1), vec!["x^2 + 1"]),
            (Ambient::Affine(2), vec!["0"]),
            (Ambient::Affine(2), vec!["3"]),
            (Ambient::Affine(3), vec!["y^3 - y"]),
            (Ambient::Projective(2), vec!["x^2 + y^2 - z^2"]),
            (Ambient::Projective(2), vec!["y^2*z + y*z^2 - x^3"]),
            (Ambient::Projective(2), vec!["x*y", "y*z"]),
            (Ambient::Projective(1), vec!["x^2 + x*y + y^2"]),
        ];
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = FiniteField::with_order(q).unwrap();
            for (ambient, polys) in &cases {
                let x = VarietySpec::parse(*ambient, polys).unwrap();
                let fast = count_points(&x, &f, DEFAULT_BUDGET).unwrap();
                let slow = count_points_brute_force(&x, &f, DEFAULT_BUDGET).unwrap();
                assert_eq!(fast, slow, "{polys:?} over GF({q})");
            }
        }
    }

    #[test]
    fn root_counting_uses_gcd_on_large_fields() {
        let f = FiniteField::new(2, 10).unwrap();
        let x = VarietySpec::parse(Ambient::Affine(2), &["y^2+y-x^3"]).unwrap();
        let fast = count_points(&x, &f, DEFAULT_BUDGET).unwrap();
        let slow = count_points_brute_force(&x, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(fast, slow);
        let f = FiniteField::new(3, 5).unwrap();
        let x = VarietySpec::parse(Ambient::Affine(2), &["y^2 - x^3 + x"]).unwrap();
        assert_eq!(count_points(&x, &f, DEFAULT_BUDGET).unwrap(), count_points_brute_force(&x, &f, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let f = FiniteField::new(2, 8).unwrap();
        let x = VarietySpec::parse(Ambient::Affine(3), &["x*y*z - 1"]).unwrap();
        let err = count_points(&x, &f, 1000).unwrap_err();
        assert_eq!(err, FfError::FieldTooLarge { needed: "256^2".into(), budget: 1000 });
        assert!(count_points(&x, &f, 1 << 16).is_ok());
    }

    #[test]
    fn count_is_independent_of_thread_count() {
        let f = FiniteField::new(2, 8).unwrap();
        let x = VarietySpec::parse(Ambient::Affine(3), &["x*y + z^3 + 1"]).unwrap();
        let counts: Vec<BigUint> = [1, 3, 8]
            .iter()
            .map(|&t| {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
                pool.install(|| count_points(&x, &f, DEFAULT_BUDGET).unwrap())
            })
            .collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn constant_equation_has_no_solutions() {
        let f = FiniteField::new(3, 1).unwrap();
        let x = VarietySpec::parse(Ambient::Affine(1), &["x - x + 1"]).unwrap();
        assert_eq!(small(&count_points(&x, &f, 10).unwrap()), 0);
    }
}
