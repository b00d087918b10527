//! Effective 0-cycles over abstract closed points.
//!
//! Only the counts `a_d` of closed points of each degree are needed; point
//! `d.i` is the `i`-th closed point of degree `d`, with `1 ≤ i ≤ a_d`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::FfError;
use crate::exact::big;
use crate::poset::{not_comparable, IntervalLabel, LocallyFinitePoset, PosetError};
use crate::series::PowerSeries;

/// Largest `a_d` the enumerators will materialize.
const MAX_POINTS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedPoint {
    pub degree: u32,
    pub index: u64,
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.degree, self.index)
    }
}

/// `Σ a_x·x` with every `a_x > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZeroCycle(BTreeMap<ClosedPoint, u32>);

impl ZeroCycle {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_points(points: impl IntoIterator<Item = (ClosedPoint, u32)>) -> Self {
        let mut out = Self::zero();
        for (x, m) in points {
            out.add_point(x, m);
        }
        out
    }

    pub fn add_point(&mut self, x: ClosedPoint, m: u32) {
        if m > 0 {
            *self.0.entry(x).or_insert(0) += m;
        }
    }

    pub fn multiplicity(&self, x: &ClosedPoint) -> u32 {
        self.0.get(x).copied().unwrap_or(0)
    }

    pub fn points(&self) -> impl Iterator<Item = (&ClosedPoint, &u32)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(x, &m)| x.degree as u64 * m as u64).sum()
    }

    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().all(|(x, &m)| m <= other.multiplicity(x))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&x, &m) in &other.0 {
            out.add_point(x, m);
        }
        out
    }

    /// `self - other`, if effective.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !other.le(self) {
            return None;
        }
        Some(Self(
            self.0
                .iter()
                .filter_map(|(&x, &m)| {
                    let rest = m - other.multiplicity(&x);
                    (rest > 0).then_some((x, rest))
                })
                .collect(),
        ))
    }

    /// Flattened `[degree, index, multiplicity, ...]` triples.
    pub fn encode(&self) -> IntervalLabel {
        self.0
            .iter()
            .flat_map(|(x, &m)| [x.degree as i64, x.index as i64, m as i64])
            .collect()
    }

    pub fn decode(label: &[i64]) -> Option<Self> {
        if label.len() % 3 != 0 {
            return None;
        }
        let mut out = Self::zero();
        for t in label.chunks(3) {
            let degree = u32::try_from(t[0]).ok().filter(|&d| d > 0)?;
            let index = u64::try_from(t[1]).ok().filter(|&i| i > 0)?;
            out.add_point(ClosedPoint { degree, index }, u32::try_from(t[2]).ok()?);
        }
        Some(out)
    }
}

impl fmt::Display for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (x, &m)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m == 1 {
                write!(f, "{x}")?;
            } else {
                write!(f, "{m}*{x}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for ZeroCycle {
    type Err = FfError;

    /// Parses the `Display` form, e.g. `0`, `1.2` or `2*1.1 + 3.1`.
    fn from_str(s: &str) -> Result<Self, FfError> {
        let bad = || FfError::BadCycle(s.to_string());
        let s = s.trim();
        let mut out = Self::zero();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split('+') {
            let (m, point) = match term.split_once('*') {
                Some((m, p)) => (m.trim().parse::<u32>().map_err(|_| bad())?, p.trim()),
                None => (1, term.trim()),
            };
            let (d, i) = point.split_once('.').ok_or_else(bad)?;
            let degree: u32 = d.parse().map_err(|_| bad())?;
            let index: u64 = i.parse().map_err(|_| bad())?;
            if degree == 0 || index == 0 {
                return Err(bad());
            }
            out.add_point(ClosedPoint { degree, index }, m);
        }
        Ok(out)
    }
}

fn small_counts(a: &[BigUint]) -> Result<Vec<u64>, FfError> {
    a.iter()
        .map(|ad| ad.to_u64().filter(|&n| n <= MAX_POINTS).ok_or_else(|| FfError::TooManyPoints(format!("{ad} closed points of one degree"))))
        .collect()
}

/// Closed points of degree at most `n`, sorted by degree then index.
fn points_up_to(a: &[u64], n: usize) -> Vec<ClosedPoint> {
    a.iter()
        .take(n)
        .enumerate()
        .flat_map(|(d, &ad)| (1..=ad).map(move |index| ClosedPoint { degree: d as u32 + 1, index }))
        .collect()
}

/// Calls `visit` on every effective 0-cycle of degree exactly `n`, built as
/// non-decreasing sequences of closed points.
pub fn visit_0cycles(a: &[BigUint], n: usize, mut visit: impl FnMut(&ZeroCycle)) -> Result<(), FfError> {
    let a = small_counts(a)?;
    if n > a.len() && n > 0 {
        return Err(FfError::InconsistentCounts { degree: n, reason: format!("a_d known only for d ≤ {}", a.len()) });
    }
    let points = points_up_to(&a, n);
    fn walk(points: &[ClosedPoint], start: usize, rest: usize, cur: &mut ZeroCycle, visit: &mut dyn FnMut(&ZeroCycle)) {
        if rest == 0 {
            visit(cur);
            return;
        }
        for (i, &x) in points.iter().enumerate().skip(start) {
            if x.degree as usize > rest {
                break;
            }
            *cur.0.entry(x).or_insert(0) += 1;
            walk(points, i, rest - x.degree as usize, cur, visit);
            let m = cur.0.get_mut(&x).expect("just inserted");
            *m -= 1;
            if *m == 0 {
                cur.0.remove(&x);
            }
        }
    }
    walk(&points, 0, n, &mut ZeroCycle::zero(), &mut visit);
    Ok(())
}

pub fn zero_cycles_of_degree(a: &[BigUint], n: usize) -> Result<Vec<ZeroCycle>, FfError> {
    let mut out = Vec::new();
    visit_0cycles(a, n, |c| out.push(c.clone()))?;
    Ok(out)
}

/// Number of effective 0-cycles of degree `n`, by direct enumeration.
pub fn enumerate_0cycles(a: &[BigUint], n: usize) -> Result<BigUint, FfError> {
    let a = small_counts(a)?;
    if n > a.len() && n > 0 {
        return Err(FfError::InconsistentCounts { degree: n, reason: format!("a_d known only for d ≤ {}", a.len()) });
    }
    let degrees: Vec<usize> = points_up_to(&a, n).iter().map(|x| x.degree as usize).collect();
    fn walk(degrees: &[usize], start: usize, rest: usize) -> u64 {
        if rest == 0 {
            return 1;
        }
        let mut total = 0;
        for (i, &d) in degrees.iter().enumerate().skip(start) {
            if d > rest {
                break;
            }
            total += walk(degrees, i, rest - d);
        }
        total
    }
    Ok(BigUint::from(walk(&degrees, 0, n)))
}

/// `Σ_α t^{deg α}` to order `min(order, a.len())`, coefficient by coefficient
/// from [`enumerate_0cycles`].
pub fn zero_cycle_series(a: &[BigUint], order: usize) -> Result<PowerSeries, FfError> {
    let order = order.min(a.len());
    let coeffs = (0..=order)
        .map(|n| enumerate_0cycles(a, n).map(|c| big(c.into())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PowerSeries::from_coeffs(coeffs, order))
}

/// `μ([0, α])` in `(Z₀^eff, ≤)`: `(-1)^r` if `α` is a sum of `r` distinct
/// points, otherwise 0.
pub fn mobius_0cycle(alpha: &ZeroCycle) -> i8 {
    if alpha.0.values().any(|&m| m > 1) {
        0
    } else if alpha.0.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(Z₀^eff(X), ≤)` for a variety with `a_d` closed points of degree `d`.
#[derive(Clone, Debug)]
pub struct ZeroCyclePoset {
    a: Vec<u64>,
}

impl ZeroCyclePoset {
    pub fn new(a: &[BigUint]) -> Result<Self, FfError> {
        Ok(Self { a: small_counts(a)? })
    }

    pub fn counts(&self) -> &[u64] {
        &self.a
    }

    pub fn contains(&self, alpha: &ZeroCycle) -> bool {
        alpha.0.keys().all(|x| {
            x.degree >= 1 && x.index >= 1 && self.a.get(x.degree as usize - 1).is_some_and(|&ad| x.index <= ad)
        })
    }
}

impl LocallyFinitePoset for ZeroCyclePoset {
    type Elem = ZeroCycle;

    fn leq(&self, x: &ZeroCycle, y: &ZeroCycle) -> bool {
        x.le(y)
    }

    fn interval(&self, x: &ZeroCycle, y: &ZeroCycle) -> Result<Vec<ZeroCycle>, PosetError> {
        if !self.contains(y) {
            return Err(PosetError::UnknownElement(y.to_string()));
        }
        let gap = y.checked_sub(x).ok_or_else(|| not_comparable(x, y))?;
        let mut out = vec![x.clone()];
        for (&p, &m) in &gap.0 {
            out = out
                .iter()
                .flat_map(|base| {
                    (0..=m).map(move |k| {
                        let mut next = base.clone();
                        next.add_point(p, k);
                        next
                    })
                })
                .collect();
        }
        out.sort_by_key(|c| (c.degree(), c.clone()));
        Ok(out)
    }

    fn classify(&self, x: &ZeroCycle, y: &ZeroCycle) -> Option<IntervalLabel> {
        y.checked_sub(x).map(|d| d.encode())
    }
}
