//! Built-in verification suites with deterministic JSON reports.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, QuadraticField};
use crate::arithscheme::{ArithmeticScheme, SchemeError};
use crate::exact::{self, int};
use crate::ffgeom::{
    closed_point_counts, enumerate_0cycles, hasse_weil_zeta, mobius_series, point_counts,
    product_formula_series, weil_functional_check, Ambient, FfError, VarietySpec,
};
use crate::poset::{divisors, Chain, Divisibility, FinitePoset, Incidence, LocallyFinitePoset};
use crate::series::{rational_reconstruct, DirichletCoefficients, PowerSeries, RationalFunction};
use crate::simplicial::{
    boundary_simplex, check_algebra_laws, check_decomposition, convolve_functionals, nerve, Functional, Verdict,
};
use crate::Rational;

pub const SUITES: [&str; 7] = ["mobius", "euler", "dedekind", "hasseweil", "cycles", "arith", "decomp"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected one of mobius, euler, dedekind, hasseweil, cycles, arith, decomp, all")]
    UnknownSuite(String),
    #[error(transparent)]
    Ff(#[from] FfError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    /// How many cases were examined.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub failures: usize,
    pub checks: Vec<Check>,
}

struct Builder {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Builder {
    fn new(suite: &'static str) -> Self {
        Self { suite, checks: Vec::new() }
    }

    /// Records a check from its cases; the first failing case becomes the
    /// counterexample.
    fn cases(&mut self, name: &str, cases: impl IntoIterator<Item = (bool, String)>) {
        let mut checked = 0;
        let mut counterexample = None;
        for (ok, what) in cases {
            checked += 1;
            if !ok && counterexample.is_none() {
                counterexample = Some(what);
            }
        }
        self.checks.push(Check {
            suite: self.suite.to_string(),
            name: name.to_string(),
            passed: counterexample.is_none(),
            checked,
            counterexample,
        });
    }

    fn single(&mut self, name: &str, ok: bool, what: impl Into<String>) {
        self.cases(name, [(ok, what.into())]);
    }
}

/// Runs a suite by name, or every suite for `"all"`.
pub fn run_verify(suite: &str, budget: u64) -> Result<Report, VerifyError> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(VerifyError::UnknownSuite(s.to_string())),
    };
    let mut checks = Vec::new();
    for name in names {
        checks.extend(match name {
            "mobius" => mobius_suite(),
            "euler" => euler_suite(),
            "dedekind" => dedekind_suite(),
            "hasseweil" => hasseweil_suite(budget)?,
            "cycles" => cycles_suite(budget)?,
            "arith" => arith_suite(budget)?,
            "decomp" => decomp_suite(),
            _ => unreachable!("suite names are checked above"),
        });
    }
    let failures = checks.iter().filter(|c| !c.passed).count();
    Ok(Report { suite: suite.to_string(), passed: failures == 0, failures, checks })
}

fn delta_cases<P: LocallyFinitePoset + 'static>(
    poset: Arc<P>,
    intervals: Vec<(P::Elem, P::Elem)>,
) -> Vec<(bool, String)> {
    let mu = Incidence::mobius(poset.clone());
    let zeta = Incidence::zeta(poset.clone());
    let (left, right) = (mu.convolve(&zeta), zeta.convolve(&mu));
    intervals
        .into_iter()
        .map(|(x, y)| {
            let expected = if x == y { Rational::one() } else { Rational::zero() };
            let ok = left.value(&x, &y).as_ref() == Ok(&expected) && right.value(&x, &y).as_ref() == Ok(&expected);
            (ok, format!("[{x:?}, {y:?}]"))
        })
        .collect()
}

fn mobius_suite() -> Vec<Check> {
    let mut b = Builder::new("mobius");
    let div: Vec<(u64, u64)> = (1..=200u64).flat_map(|y| divisors(y).into_iter().map(move |x| (x, y))).collect();
    b.cases("divisibility mu*zeta = delta = zeta*mu, y <= 200", delta_cases(Arc::new(Divisibility), div));
    let chain: Vec<(u64, u64)> = (0..=200u64).flat_map(|y| (0..=y).map(move |x| (x, y))).collect();
    b.cases("chain mu*zeta = delta = zeta*mu, y <= 200", delta_cases(Arc::new(Chain), chain));
    let mu = Incidence::mobius(Arc::new(Divisibility));
    b.cases(
        "classical mobius equals poset mobius on [1, n], 2 <= n <= 200",
        (2..=200u64).map(|n| (mu.value(&1, &n) == Ok(int(arith::mobius_classical(n) as i64)), format!("n = {n}"))),
    );
    b.checks
}

fn first_mismatch(got: &[Rational], expected: &[Rational]) -> Vec<(bool, String)> {
    got.iter()
        .zip(expected)
        .enumerate()
        .map(|(i, (g, e))| (g == e, format!("n = {}: got {}, expected {}", i + 1, exact::to_text(g), exact::to_text(e))))
        .collect()
}

fn euler_suite() -> Vec<Check> {
    let mut b = Builder::new("euler");
    let n = 100;
    let ones = arith::euler_product(|_, m| PowerSeries::one_minus_t_pow(1, -1, m), n).expect("unit constant terms");
    b.cases("prod (1-t)^-1 gives all ones, n <= 100", first_mismatch(ones.coeffs(), DirichletCoefficients::ones(n).coeffs()));
    let mu = arith::euler_product(|_, m| PowerSeries::one_minus_t_pow(1, 1, m), n).expect("unit constant terms");
    let classical: Vec<Rational> = (1..=n as u64).map(|k| int(arith::mobius_classical(k) as i64)).collect();
    b.cases("prod (1-t) gives the classical mobius function, n <= 100", first_mismatch(mu.coeffs(), &classical));
    b.checks
}

/// `#{(x, y) ∈ ℤ² : x² + y² = n}`.
fn lattice_points(n: i64) -> i64 {
    let r = (n as f64).sqrt() as i64 + 1;
    (-r..=r).map(|x| (-r..=r).filter(|y| x * x + y * y == n).count() as i64).sum()
}

fn dedekind_suite() -> Vec<Check> {
    let mut b = Builder::new("dedekind");
    let k = QuadraticField::new(-4).expect("fundamental");
    let n = 500;
    let zeta = arith::dedekind_zeta_coeffs(&k, n);
    let oracle: Vec<Rational> = (1..=n as i64).map(|m| exact::frac(lattice_points(m), 4)).collect();
    b.cases("zeta_Q(i) equals lattice points / 4, n <= 500", first_mismatch(zeta.coeffs(), &oracle));
    let prod = zeta.mul(&arith::dedekind_mobius_coeffs(&k, n));
    b.cases("zeta_K * mu_K = delta, n <= 500", first_mismatch(prod.coeffs(), DirichletCoefficients::delta(n).coeffs()));
    b.checks
}

fn p1_zeta(q: i64) -> RationalFunction {
    RationalFunction::from_ints(&[1], &[1, -(q + 1), q]).expect("nonzero constant")
}

fn hasseweil_suite(budget: u64) -> Result<Vec<Check>, VerifyError> {
    let mut b = Builder::new("hasseweil");
    let p1 = VarietySpec::projective_space(1);
    let mut series = Vec::new();
    let mut recon = Vec::new();
    let mut weil = Vec::new();
    for q in [2u64, 3, 5] {
        let expected = p1_zeta(q as i64);
        let z = hasse_weil_zeta(&p1, q, 20, budget)?;
        series.push((z == expected.expand(20), format!("q = {q}")));
        let rf = rational_reconstruct(&z, 0, 2).ok().flatten();
        recon.push((rf.as_ref() == Some(&expected), format!("q = {q}: got {rf:?}")));
        let eps = rf.as_ref().and_then(|rf| weil_functional_check(rf, q, 1, 2));
        weil.push((eps == Some(1), format!("q = {q}: epsilon {eps:?}")));
    }
    b.cases("Z(P^1, t) = 1/((1-t)(1-qt)) to order 20", series);
    b.cases("reconstruction with bounds (0, 2) recovers Z(P^1)", recon);
    b.cases("functional equation with n = 1, E = 2 holds with epsilon = +1", weil);
    Ok(b.checks)
}

fn cycles_suite(budget: u64) -> Result<Vec<Check>, VerifyError> {
    let mut b = Builder::new("cycles");
    let order = 16;
    let curve = VarietySpec::parse(Ambient::Affine(2), &["y^2+y-x^3"])?;
    let mut product = Vec::new();
    let mut inverse = Vec::new();
    for (name, x) in [("P^1/F_2", VarietySpec::projective_space(1)), ("y^2+y=x^3 over F_2", curve)] {
        let counts = point_counts(&x, 2, order, budget)?;
        let z = crate::ffgeom::zeta_from_counts(&counts)?;
        match closed_point_counts(&counts) {
            Ok(a) => {
                product.push((product_formula_series(&a, order) == z, name.to_string()));
                inverse.push((mobius_series(&a, order).mul(&z) == PowerSeries::one(order), name.to_string()));
            }
            Err(e) => {
                product.push((false, format!("{name}: {e}")));
                inverse.push((false, format!("{name}: {e}")));
            }
        }
    }
    b.cases("product formula equals Z to order 16 with a_d >= 0", product);
    b.cases("M(X, t) Z(X, t) = 1 to order 16", inverse);
    let mut extracted = Vec::new();
    let mut enumerated = Vec::new();
    for q in [2u64, 3] {
        let n_max = 10;
        let counts: Vec<BigUint> = (1..=n_max as u32).map(|k| BigUint::from(q.pow(k) + 1)).collect();
        let a = closed_point_counts(&counts)?;
        let series = product_formula_series(&a, n_max);
        for n in 0..=n_max {
            let expected = (q.pow(n as u32 + 1) - 1) / (q - 1);
            extracted.push((series.coeff(n) == &int(expected as i64), format!("q = {q}, n = {n}")));
            let listed = enumerate_0cycles(&a, n)?;
            enumerated.push((listed == BigUint::from(expected), format!("q = {q}, n = {n}: {listed}")));
        }
    }
    b.cases("effective 0-cycles on P^1 by coefficient extraction", extracted);
    b.cases("effective 0-cycles on P^1 by multiset enumeration", enumerated);
    Ok(b.checks)
}

fn arith_suite(budget: u64) -> Result<Vec<Check>, VerifyError> {
    let mut b = Builder::new("arith");
    let n = 100;
    let sigma = |k: u64| divisors(k).iter().sum::<u64>() as i64;
    let k = QuadraticField::new(-4).expect("fundamental");
    let cases: [(&str, ArithmeticScheme, DirichletCoefficients); 4] = [
        ("Spec Z gives all ones", ArithmeticScheme::SpecZ, DirichletCoefficients::ones(n)),
        ("A^1 gives c_n = n", ArithmeticScheme::AffineSpace(1), DirichletCoefficients::from_fn(n, |k| int(k as i64))),
        ("P^1 gives c_n = sigma_1(n)", ArithmeticScheme::ProjectiveSpace(1), DirichletCoefficients::from_fn(n, |k| int(sigma(k)))),
        ("Spec O_K for D = -4 gives the Dedekind coefficients", ArithmeticScheme::SpecOK(k), arith::dedekind_zeta_coeffs(&k, n)),
    ];
    for (name, x, expected) in cases {
        let got = x.global_coeffs(n, budget)?;
        b.cases(name, first_mismatch(got.coeffs(), expected.coeffs()));
    }
    Ok(b.checks)
}

fn decomp_suite() -> Vec<Check> {
    let mut b = Builder::new("decomp");
    let poset = Arc::new(FinitePoset::divisors_of(60));
    let k = nerve(&poset, 4);
    match check_decomposition(&k, 4) {
        Ok(Verdict::Pass { squares, .. }) => b.cases("nerve of divisors of 60 passes at level 4", (0..squares).map(|_| (true, String::new()))),
        other => b.single("nerve of divisors of 60 passes at level 4", false, format!("{other:?}")),
    }
    let boundary = boundary_simplex(3, 3);
    match check_decomposition(&boundary, 3) {
        Ok(Verdict::Fail { witness, .. }) => b.single("boundary of the 3-simplex fails at level 3 (expected failure)", true, witness.to_string()),
        other => b.single("boundary of the 3-simplex fails at level 3 (expected failure)", false, format!("{other:?}")),
    }
    let laws = check_algebra_laws(&k);
    b.single("convolution on the nerve is associative and unital", laws.is_none(), format!("{laws:?}"));

    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let edges = k.size(1);
    let pair = |e: usize| -> (usize, usize) {
        let names: Vec<String> = serde_json::from_str(k.id(1, e)).expect("nerve ids are JSON arrays");
        (poset.index_of(&names[0]).expect("element"), poset.index_of(&names[1]).expect("element"))
    };
    let mut cases = Vec::new();
    for _ in 0..100 {
        let mut random = || Functional::from_fn(&k, |_| exact::frac(rng.gen_range(-9..=9), rng.gen_range(1..=4)));
        let (phi, psi) = (random(), random());
        let e = rng.gen_range(0..edges);
        let table = |f: &Functional| -> std::collections::HashMap<(usize, usize), Rational> {
            (0..edges).map(|e| (pair(e), f.get(e).clone())).collect()
        };
        let (tp, tq) = (table(&phi), table(&psi));
        let ip = Incidence::from_fn(poset.clone(), move |x, y| tp[&(*x, *y)].clone());
        let iq = Incidence::from_fn(poset.clone(), move |x, y| tq[&(*x, *y)].clone());
        let (x, y) = pair(e);
        let via_poset = ip.convolve(&iq).value(&x, &y);
        let via_nerve = convolve_functionals(&phi, &psi, &k).get(e).clone();
        cases.push((via_poset == Ok(via_nerve), format!("interval {}", k.id(1, e))));
    }
    b.cases("nerve convolution equals poset convolution on 100 random intervals", cases);
    b.checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffgeom::DEFAULT_BUDGET;

    #[test]
    fn lattice_oracle() {
        assert_eq!(lattice_points(1), 4);
        assert_eq!(lattice_points(5), 8);
        assert_eq!(lattice_points(3), 0);
        assert_eq!(lattice_points(25), 12);
    }

    #[test]
    fn mobius_suite_counts() {
        let report = run_verify("mobius", DEFAULT_BUDGET).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.checks[2].checked, 199);
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run_verify("zeta", DEFAULT_BUDGET).unwrap_err(), VerifyError::UnknownSuite("zeta".into()));
    }

    #[test]
    fn decomp_suite_reports_the_expected_failure_as_pass() {
        let report = run_verify("decomp", DEFAULT_BUDGET).unwrap();
        assert!(report.passed, "{report:?}");
        let expected = report.checks.iter().find(|c| c.name.contains("expected failure")).unwrap();
        assert!(expected.counterexample.is_none());
    }

    #[test]
    fn budget_errors_propagate() {
        assert!(matches!(run_verify("cycles", 10), Err(VerifyError::Ff(FfError::FieldTooLarge { .. }))));
    }
}
