//! Incidence algebras of locally finite posets.
//!
//! An [`Incidence`] element is a lazily evaluated function on intervals
//! `[x, y]`. Values are memoized per interval, or per interval label when the
//! element is *reduced* and the poset supplies a classifier, which is how the
//! reduced incidence algebra is realized.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

/// Canonical label of an isomorphism class of intervals.
pub type IntervalLabel = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("{x} is not below {y}")]
    NotComparable { x: String, y: String },
    #[error("interval [{x}, {y}] is not finite")]
    NonFiniteInterval { x: String, y: String },
    #[error("value on the trivial interval at {x} is zero, so the element is not invertible")]
    NonInvertibleOnDiagonal { x: String },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("invalid poset: {0}")]
    Invalid(String),
}

/// A partial order whose intervals are finite.
pub trait LocallyFinitePoset: Send + Sync {
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// All `z` with `x ≤ z ≤ y`, listed in a linear extension order, so `x`
    /// comes first and `y` last. Errors with `NotComparable` unless `x ≤ y`.
    fn interval(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Vec<Self::Elem>, PosetError>;

    /// Label of the isomorphism class of `[x, y]`, if the poset has one.
    fn classify(&self, _x: &Self::Elem, _y: &Self::Elem) -> Option<IntervalLabel> {
        None
    }
}

pub(crate) fn not_comparable<E: fmt::Debug>(x: &E, y: &E) -> PosetError {
    PosetError::NotComparable { x: format!("{x:?}"), y: format!("{y:?}") }
}

type Eval<P> = dyn Fn(&Incidence<P>, &<P as LocallyFinitePoset>::Elem, &<P as LocallyFinitePoset>::Elem) -> Result<Rational, PosetError>
    + Send
    + Sync;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key<E> {
    Label(IntervalLabel),
    Pair(E, E),
}

/// Element of the incidence algebra `I(P)`.
pub struct Incidence<P: LocallyFinitePoset> {
    poset: Arc<P>,
    eval: Arc<Eval<P>>,
    reduced: bool,
    cache: Arc<Mutex<HashMap<Key<P::Elem>, Rational>>>,
}

impl<P: LocallyFinitePoset> Clone for Incidence<P> {
    fn clone(&self) -> Self {
        Self {
            poset: Arc::clone(&self.poset),
            eval: Arc::clone(&self.eval),
            reduced: self.reduced,
            cache: Arc::clone(&self.cache),
        }
    }
}

impl<P: LocallyFinitePoset + 'static> Incidence<P> {
    fn build(
        poset: Arc<P>,
        reduced: bool,
        eval: impl Fn(&Incidence<P>, &P::Elem, &P::Elem) -> Result<Rational, PosetError> + Send + Sync + 'static,
    ) -> Self {
        Self { poset, eval: Arc::new(eval), reduced, cache: Arc::new(Mutex::new(HashMap::new())) }
    }

    /// Arbitrary function of the interval endpoints.
    pub fn from_fn(
        poset: Arc<P>,
        f: impl Fn(&P::Elem, &P::Elem) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Self::build(poset, false, move |_, x, y| Ok(f(x, y)))
    }

    /// Element of the reduced algebra: `f` sees only the interval label.
    /// Evaluation fails with `Invalid` on intervals the poset cannot classify.
    pub fn from_label_fn(
        poset: Arc<P>,
        f: impl Fn(&[i64]) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Self::build(poset, true, move |this, x, y| {
            let label = this.poset.classify(x, y).ok_or_else(|| {
                PosetError::Invalid(format!("no classifier label for [{x:?}, {y:?}]"))
            })?;
            Ok(f(&label))
        })
    }

    /// `ζ([x, y]) = 1`.
    pub fn zeta(poset: Arc<P>) -> Self {
        Self::build(poset, true, |_, _, _| Ok(Rational::one()))
    }

    /// `δ([x, y]) = 1` iff `x = y`.
    pub fn delta(poset: Arc<P>) -> Self {
        Self::build(poset, true, |_, x, y| {
            Ok(if x == y { Rational::one() } else { Rational::zero() })
        })
    }

    /// The Möbius function, by `μ([x,x]) = 1` and
    /// `μ([x,y]) = -Σ_{x ≤ z < y} μ([x,z])`.
    pub fn mobius(poset: Arc<P>) -> Self {
        Self::build(poset, true, |this, x, y| {
            if x == y {
                return Ok(Rational::one());
            }
            let mut sum = Rational::zero();
            for z in this.poset.interval(x, y)? {
                if &z != y {
                    sum += this.value(x, &z)?;
                }
            }
            Ok(-sum)
        })
    }

    pub fn poset(&self) -> &Arc<P> {
        &self.poset
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Value on `[x, y]`; `NotComparable` unless `x ≤ y`.
    pub fn value(&self, x: &P::Elem, y: &P::Elem) -> Result<Rational, PosetError> {
        if !self.poset.leq(x, y) {
            return Err(not_comparable(x, y));
        }
        let key = match self.reduced.then(|| self.poset.classify(x, y)).flatten() {
            Some(label) => Key::Label(label),
            None => Key::Pair(x.clone(), y.clone()),
        };
        if let Some(v) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        // evaluated without holding the lock: evaluation may recurse into
        // this same element
        let v = (self.eval)(self, x, y)?;
        self.cache.lock().expect("cache poisoned").insert(key, v.clone());
        Ok(v)
    }

    /// `(φ*ψ)([x,y]) = Σ_{z ∈ [x,y]} φ([x,z]) ψ([z,y])`.
    pub fn convolve(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::build(Arc::clone(&self.poset), self.reduced && other.reduced, move |this, x, y| {
            let mut sum = Rational::zero();
            for z in this.poset.interval(x, y)? {
                let left = a.value(x, &z)?;
                if left.is_zero() {
                    continue;
                }
                sum += left * b.value(&z, y)?;
            }
            Ok(sum)
        })
    }

    /// Two-sided convolution inverse. Diagonal zeros surface lazily as
    /// `NonInvertibleOnDiagonal` when an affected interval is evaluated.
    pub fn invert(&self) -> Self {
        let phi = self.clone();
        Self::build(Arc::clone(&self.poset), self.reduced, move |this, x, y| {
            let diag = phi.value(x, x)?;
            if diag.is_zero() {
                return Err(PosetError::NonInvertibleOnDiagonal { x: format!("{x:?}") });
            }
            if x == y {
                return Ok(diag.recip());
            }
            // Σ_{z ∈ [x,y]} φ([x,z]) ψ([z,y]) = 0 solved for ψ([x,y])
            let mut sum = Rational::zero();
            for z in this.poset.interval(x, y)? {
                if &z == x {
                    continue;
                }
                let left = phi.value(x, &z)?;
                if !left.is_zero() {
                    sum += left * this.value(&z, y)?;
                }
            }
            Ok(-sum / diag)
        })
    }

    pub fn scale(&self, k: Rational) -> Self {
        let a = self.clone();
        Self::build(Arc::clone(&self.poset), self.reduced, move |_, x, y| Ok(a.value(x, y)? * &k))
    }
}

/// `μ([x, y])` evaluated afresh.
pub fn mobius<P: LocallyFinitePoset + 'static>(
    poset: &Arc<P>,
    x: &P::Elem,
    y: &P::Elem,
) -> Result<Rational, PosetError> {
    Incidence::mobius(Arc::clone(poset)).value(x, y)
}

/// Rota inversion: given cumulative data `f = g * ζ`, recovers `g = f * μ`.
pub fn rota_invert<P: LocallyFinitePoset + 'static>(f: &Incidence<P>) -> Incidence<P> {
    f.convolve(&Incidence::mobius(Arc::clone(f.poset())))
}

/// `(ℕ₀, ≤)`; intervals are labelled by their length `y - x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Chain;

impl LocallyFinitePoset for Chain {
    type Elem = u64;

    fn leq(&self, x: &u64, y: &u64) -> bool {
        x <= y
    }

    fn interval(&self, x: &u64, y: &u64) -> Result<Vec<u64>, PosetError> {
        if x > y {
            return Err(not_comparable(x, y));
        }
        Ok((*x..=*y).collect())
    }

    fn classify(&self, x: &u64, y: &u64) -> Option<IntervalLabel> {
        Some(vec![(y - x) as i64])
    }
}

/// `(ℕ, ∣)`; intervals are labelled by the quotient `y / x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Divisibility;

/// Divisors of `n ≥ 1` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl LocallyFinitePoset for Divisibility {
    type Elem = u64;

    fn leq(&self, x: &u64, y: &u64) -> bool {
        *x >= 1 && *y >= 1 && y % x == 0
    }

    fn interval(&self, x: &u64, y: &u64) -> Result<Vec<u64>, PosetError> {
        if !self.leq(x, y) {
            return Err(not_comparable(x, y));
        }
        Ok(divisors(y / x).into_iter().map(|d| x * d).collect())
    }

    fn classify(&self, x: &u64, y: &u64) -> Option<IntervalLabel> {
        Some(vec![(y / x) as i64])
    }
}

/// JSON form of a finite poset: element names and covering pairs `[a, b]`
/// meaning `a ⋖ b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePosetSpec {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

/// A finite poset on named elements, with the order stored as a reachability
/// matrix and a fixed linear extension.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    leq: Vec<Vec<bool>>,
    // position of each element in the linear extension
    rank: Vec<usize>,
}

impl FinitePoset {
    /// Builds from an order relation given as a predicate; the predicate must
    /// be reflexive, antisymmetric and transitive (checked).
    pub fn from_relation(
        names: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, PosetError> {
        let n = names.len();
        let matrix: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| leq(i, j)).collect()).collect();
        for i in 0..n {
            if !matrix[i][i] {
                return Err(PosetError::Invalid(format!("{} is not ≤ itself", names[i])));
            }
            for j in 0..n {
                if i != j && matrix[i][j] && matrix[j][i] {
                    return Err(PosetError::Invalid(format!("cycle between {} and {}", names[i], names[j])));
                }
                for k in 0..n {
                    if matrix[i][j] && matrix[j][k] && !matrix[i][k] {
                        return Err(PosetError::Invalid("relation is not transitive".into()));
                    }
                }
            }
        }
        Self::finish(names, matrix)
    }

    pub fn from_spec(spec: &FinitePosetSpec) -> Result<Self, PosetError> {
        let names = spec.elements.clone();
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(PosetError::Invalid(format!("duplicate element {name}")));
            }
        }
        let n = names.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &spec.covers {
            let ia = *index.get(a).ok_or_else(|| PosetError::UnknownElement(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| PosetError::UnknownElement(b.clone()))?;
            reach[ia][ib] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if reach[i][j] && reach[j][i] {
                    return Err(PosetError::Invalid(format!("cycle through {} and {}", names[i], names[j])));
                }
            }
        }
        Self::finish(names, reach)
    }

    fn finish(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let n = names.len();
        let index: BTreeMap<String, usize> = names.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        if index.len() != n {
            return Err(PosetError::Invalid("duplicate element names".into()));
        }
        // linear extension: sort by number of strict predecessors, ties by index
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| ((0..n).filter(|&i| leq[i][j]).count(), j));
        let mut rank = vec![0; n];
        for (pos, &e) in order.iter().enumerate() {
            rank[e] = pos;
        }
        Ok(Self { names, index, leq, rank })
    }

    /// Divisors of `n` under divisibility, named by their decimal value.
    pub fn divisors_of(n: u64) -> Self {
        let ds = divisors(n);
        let names = ds.iter().map(u64::to_string).collect();
        Self::from_relation(names, |i, j| ds[j] % ds[i] == 0).expect("divisibility is a partial order")
    }

    /// `{0 < 1 < … < n-1}`.
    pub fn chain(n: usize) -> Self {
        Self::from_relation((0..n).map(|i| i.to_string()).collect(), |i, j| i <= j).expect("chain")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PosetError> {
        self.index.get(name).copied().ok_or_else(|| PosetError::UnknownElement(name.to_string()))
    }

    /// Elements in linear extension order.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&e| self.rank[e]);
        order
    }

    /// All comparable pairs `(x, y)`, `x ≤ y`, in lexicographic index order.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| (0..self.len()).filter(move |&y| self.leq[x][y]).map(move |y| (x, y)))
            .collect()
    }
}

impl LocallyFinitePoset for FinitePoset {
    type Elem = usize;

    fn leq(&self, x: &usize, y: &usize) -> bool {
        *x < self.len() && *y < self.len() && self.leq[*x][*y]
    }

    fn interval(&self, x: &usize, y: &usize) -> Result<Vec<usize>, PosetError> {
        if !LocallyFinitePoset::leq(self, x, y) {
            return Err(not_comparable(x, y));
        }
        Ok(self
            .linear_extension()
            .into_iter()
            .filter(|&z| self.leq[*x][z] && self.leq[z][*y])
            .collect())
    }
}
