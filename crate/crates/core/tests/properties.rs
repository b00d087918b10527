use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use zeta_core::exact::int;
use zeta_core::ffgeom::{count_points, count_points_brute_force, Ambient, FiniteField, VarietySpec};
use zeta_core::poly::Polynomial;
use zeta_core::poset::{mobius, FinitePoset};
use zeta_core::simplicial::nerve;
use zeta_core::{DirichletCoefficients, PowerSeries};

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn series(order: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(small_rational(), order)
}

fn random_poset() -> impl Strategy<Value = FinitePoset> {
    (2usize..7).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            // upper-triangular relation, transitively closed
            let mut leq = vec![vec![false; n]; n];
            for i in 0..n {
                leq[i][i] = true;
                for j in i + 1..n {
                    leq[i][j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if leq[i][k] && leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
            let names = (0..n).map(|i| format!("e{i}")).collect();
            FinitePoset::from_relation(names, |i, j| leq[i][j]).unwrap()
        })
    })
}

// Philip Hall: μ(x, y) = Σ_k (-1)^k · #{chains x = z_0 < … < z_k = y}.
fn hall_mobius(leq: &dyn Fn(usize, usize) -> bool, n: usize, x: usize, y: usize) -> i64 {
    fn chains(leq: &dyn Fn(usize, usize) -> bool, n: usize, from: usize, y: usize, sign: i64) -> i64 {
        if from == y {
            return sign;
        }
        (0..n)
            .filter(|&z| z != from && leq(from, z) && leq(z, y))
            .map(|z| chains(leq, n, z, y, -sign))
            .sum()
    }
    chains(leq, n, x, y, 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_inverse_round_trip(mut c in series(8), c0 in 1i64..5) {
        c[0] = int(c0);
        let s = PowerSeries::new(c).unwrap();
        let prod = s.mul(&s.inv().unwrap());
        prop_assert_eq!(prod, PowerSeries::one(7));
    }

    #[test]
    fn series_exp_log_round_trip(mut c in series(8)) {
        c[0] = int(0);
        let s = PowerSeries::new(c).unwrap();
        prop_assert_eq!(s.exp().unwrap().log().unwrap(), s.clone());
        let mut u = s.coeffs().to_vec();
        u[0] = int(1);
        let u = PowerSeries::new(u).unwrap();
        prop_assert_eq!(u.log().unwrap().exp().unwrap(), u);
    }

    #[test]
    fn dirichlet_mul_is_associative(a in series(24), b in series(24), c in series(24)) {
        let (a, b, c) = (
            DirichletCoefficients::new(a).unwrap(),
            DirichletCoefficients::new(b).unwrap(),
            DirichletCoefficients::new(c).unwrap(),
        );
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn dirichlet_inverse(mut a in series(30), a1 in 1i64..4) {
        a[0] = int(a1);
        let a = DirichletCoefficients::new(a).unwrap();
        prop_assert_eq!(a.mul(&a.inv().unwrap()), DirichletCoefficients::delta(30));
    }

    #[test]
    fn poset_mobius_matches_hall(p in random_poset()) {
        let n = p.len();
        let leq = |i: usize, j: usize| {
            use zeta_core::poset::LocallyFinitePoset;
            p.leq(&i, &j)
        };
        let arc = Arc::new(p.clone());
        for (x, y) in p.intervals() {
            let mu = mobius(&arc, &x, &y).unwrap();
            prop_assert_eq!(mu, int(hall_mobius(&leq, n, x, y)), "interval {} {}", x, y);
        }
    }

    #[test]
    fn nerves_satisfy_simplicial_identities(p in random_poset()) {
        let k = nerve(&p, 3);
        for n in 1..=k.level() {
            for x in 0..k.size(n) {
                for j in 0..=n {
                    for i in 0..j {
                        if n >= 2 {
                            prop_assert_eq!(k.d(n - 1, i, k.d(n, j, x)), k.d(n - 1, j - 1, k.d(n, i, x)));
                        }
                    }
                }
            }
        }
        for n in 0..k.level() {
            for x in 0..k.size(n) {
                for i in 0..=n {
                    let y = k.s(n, i, x);
                    prop_assert_eq!(k.d(n + 1, i, y), x);
                    prop_assert_eq!(k.d(n + 1, i + 1, y), x);
                    for j in 0..=n + 1 {
                        if j < i {
                            prop_assert_eq!(k.d(n + 1, j, y), k.s(n - 1, i - 1, k.d(n, j, x)));
                        } else if j > i + 1 {
                            prop_assert_eq!(k.d(n + 1, j, y), k.s(n - 1, i, k.d(n, j - 1, x)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn point_counts_match_brute_force(
        coeffs in prop::collection::vec(-3i64..=3, 10),
        q in prop::sample::select(vec![2u64, 3, 4, 5, 7]),
        projective in any::<bool>(),
    ) {
        // a random quadric in 2 or 3 variables
        let monos: Vec<&str> = if projective {
            vec!["x^2", "y^2", "z^2", "x*y", "y*z", "x*z"]
        } else {
            vec!["x^2", "y^2", "x*y", "x", "y", "1", "x^3", "y^3", "x^2*y", "x*y^2"]
        };
        let text: Vec<String> = monos.iter().zip(&coeffs).map(|(m, c)| format!("({c})*{m}")).collect();
        let (ambient, nvars) = if projective { (Ambient::Projective(2), 3) } else { (Ambient::Affine(2), 2) };
        let f = Polynomial::parse(&text.join("+"), nvars).unwrap();
        let x = VarietySpec::new(ambient, vec![f]).unwrap();
        let field = FiniteField::with_order(q).unwrap();
        let fast = count_points(&x, &field, 1 << 20).unwrap();
        let slow = count_points_brute_force(&x, &field, 1 << 20).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn polynomial_print_parse_round_trip(
        terms in prop::collection::vec((prop::collection::vec(0u32..4, 3), -50i64..=50), 0..6),
    ) {
        let f = Polynomial::from_terms(3, terms.into_iter().map(|(m, c)| (m, BigInt::from(c))));
        let g = Polynomial::parse(&f.to_text(), 3).unwrap();
        prop_assert_eq!(g, f);
    }
}

#[test]
fn brute_force_counts_affine_plane() {
    let x = VarietySpec::affine_space(2);
    let field = FiniteField::with_order(9).unwrap();
    assert_eq!(count_points_brute_force(&x, &field, 1000).unwrap(), BigUint::from(81u32));
}
