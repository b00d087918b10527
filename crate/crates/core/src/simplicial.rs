//! Truncated simplicial sets, nerves, the discrete decomposition-space
//! condition and the incidence algebra of a simplicial set.
//!
//! Simplices are opaque string identifiers; internally each level is indexed
//! `0..|K_n|` in the order the identifiers were given.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact;
use crate::linalg::{self, Solution};
use crate::poset::{FinitePoset, LocallyFinitePoset};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("invalid simplicial set: {0}")]
    Invalid(String),
    #[error("simplicial identity {identity} fails on {simplex}")]
    IdentityViolated { identity: String, simplex: String },
    #[error("unknown simplex {id:?} at level {level}")]
    UnknownSimplex { level: usize, id: String },
    #[error("level {0} is too shallow; pushout squares need level at least 2")]
    LevelTooShallow(usize),
    #[error("level {requested} exceeds the truncation level {available}")]
    LevelTooDeep { requested: usize, available: usize },
    #[error("not a monotone map: {0}")]
    BadMap(String),
    #[error("zeta is not invertible; no solution at edge {edge}")]
    NotInvertible { edge: String },
    #[error("functional has {found} values, K_1 has {expected} edges")]
    FunctionalSize { expected: usize, found: usize },
}

/// An order-preserving map `[source] → [target]`, stored as its value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexMap {
    source: usize,
    target: usize,
    values: Vec<usize>,
}

impl SimplexMap {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self, SimplicialError> {
        if values.is_empty() {
            return Err(SimplicialError::BadMap("empty table".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) || values.iter().any(|&v| v > target) {
            return Err(SimplicialError::BadMap(format!("{values:?} into [{target}]")));
        }
        Ok(Self { source: values.len() - 1, target, values })
    }

    pub fn identity(n: usize) -> Self {
        Self { source: n, target: n, values: (0..=n).collect() }
    }

    /// The inert map `i ↦ offset + i`, `[n] → [m]`.
    pub fn inert(n: usize, m: usize, offset: usize) -> Self {
        assert!(offset + n <= m, "inert map does not fit");
        Self { source: n, target: m, values: (offset..=offset + n).collect() }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SimplexMap) -> SimplexMap {
        assert_eq!(other.target, self.source, "maps are not composable");
        Self { source: other.source, target: self.target, values: other.values.iter().map(|&i| self.values[i]).collect() }
    }

    /// `g(0) = 0` and `g(m) = n`.
    pub fn is_active(&self) -> bool {
        self.values[0] == 0 && self.values[self.source] == self.target
    }

    /// `g(i + 1) = g(i) + 1`.
    pub fn is_inert(&self) -> bool {
        self.values.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

/// Active maps `[n] → [l]` in lexicographic order of their tables.
pub fn active_maps(n: usize, l: usize) -> Vec<SimplexMap> {
    if n == 0 {
        return if l == 0 { vec![SimplexMap::identity(0)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut table = vec![0; n + 1];
    table[n] = l;
    fn fill(table: &mut Vec<usize>, i: usize, n: usize, l: usize, out: &mut Vec<SimplexMap>) {
        if i == n {
            out.push(SimplexMap { source: n, target: l, values: table.clone() });
            return;
        }
        for v in table[i - 1]..=l {
            table[i] = v;
            fill(table, i + 1, n, l, out);
        }
    }
    fill(&mut table, 1, n, l, &mut out);
    out
}

/// JSON form: `{"levels": [[ids]], "faces": {"n,i": {src: dst}}, "degeneracies": {"n,i": {src: dst}}}`,
/// where `n` is the level of the source simplices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialFile {
    pub levels: Vec<Vec<String>>,
    pub faces: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub degeneracies: BTreeMap<String, BTreeMap<String, String>>,
}

/// Levels `K_0..K_L` with faces and degeneracies, satisfying the simplicial
/// identities wherever every map involved is defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    ids: Vec<Vec<String>>,
    index: Vec<HashMap<String, usize>>,
    // faces[n][i]: K_n → K_{n-1}, n ≥ 1
    faces: Vec<Vec<Vec<usize>>>,
    // degens[n][i]: K_n → K_{n+1}, n < L
    degens: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSimplicialSet {
    /// `faces[n - 1][i][x] = d_i x` for `x ∈ K_n`; `degens[n][i][x] = s_i x`
    /// for `x ∈ K_n`, `n < L`.
    pub fn new(
        ids: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, SimplicialError> {
        let levels = ids.len();
        if levels == 0 {
            return Err(SimplicialError::Invalid("no levels".into()));
        }
        let mut index = Vec::with_capacity(levels);
        for (n, level) in ids.iter().enumerate() {
            let map: HashMap<String, usize> = level.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
            if map.len() != level.len() {
                return Err(SimplicialError::Invalid(format!("duplicate simplex at level {n}")));
            }
            index.push(map);
        }
        if faces.len() != levels - 1 || degens.len() != levels - 1 {
            return Err(SimplicialError::Invalid("map count does not match the number of levels".into()));
        }
        let mut all_faces = vec![Vec::new()];
        all_faces.extend(faces);
        for n in 0..levels {
            if n > 0 {
                Self::check_maps(&all_faces[n], n + 1, ids[n].len(), ids[n - 1].len(), "d", n)?;
            }
            if n + 1 < levels {
                Self::check_maps(&degens[n], n + 1, ids[n].len(), ids[n + 1].len(), "s", n)?;
            }
        }
        let k = Self { ids, index, faces: all_faces, degens };
        k.check_identities()?;
        Ok(k)
    }

    fn check_maps(maps: &[Vec<usize>], count: usize, len: usize, target: usize, name: &str, n: usize) -> Result<(), SimplicialError> {
        if maps.len() != count {
            return Err(SimplicialError::Invalid(format!("level {n} needs {count} {name}-maps, found {}", maps.len())));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.len() != len || m.iter().any(|&v| v >= target) {
                return Err(SimplicialError::Invalid(format!("{name}_{i} on level {n} is not a total map into the next level")));
            }
        }
        Ok(())
    }

    fn check_identities(&self) -> Result<(), SimplicialError> {
        let top = self.level();
        let fail = |identity: String, n: usize, x: usize| {
            Err(SimplicialError::IdentityViolated { identity, simplex: format!("{} ∈ K_{n}", self.ids[n][x]) })
        };
        for n in 0..=top {
            for x in 0..self.ids[n].len() {
                // d_i d_j = d_{j-1} d_i, i < j
                if n >= 2 {
                    for j in 0..=n {
                        for i in 0..j {
                            if self.d(n - 1, i, self.d(n, j, x)) != self.d(n - 1, j - 1, self.d(n, i, x)) {
                                return fail(format!("d{i} d{j} = d{} d{i}", j - 1), n, x);
                            }
                        }
                    }
                }
                if n < top {
                    for j in 0..=n {
                        let y = self.s(n, j, x);
                        for i in 0..=n + 1 {
                            let lhs = self.d(n + 1, i, y);
                            let ok = if i == j || i == j + 1 {
                                lhs == x
                            } else if i < j {
                                lhs == self.s(n - 1, j - 1, self.d(n, i, x))
                            } else {
                                lhs == self.s(n - 1, j, self.d(n, i - 1, x))
                            };
                            if !ok {
                                return fail(format!("d{i} s{j}"), n, x);
                            }
                        }
                    }
                }
                // s_i s_j = s_{j+1} s_i, i ≤ j
                if n + 2 <= top {
                    for j in 0..=n {
                        for i in 0..=j {
                            if self.s(n + 1, i, self.s(n, j, x)) != self.s(n + 1, j + 1, self.s(n, i, x)) {
                                return fail(format!("s{i} s{j} = s{} s{i}", j + 1), n, x);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_file(file: &SimplicialFile) -> Result<Self, SimplicialError> {
        let levels = file.levels.len();
        let index: Vec<HashMap<&str, usize>> =
            file.levels.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()).collect();
        let read = |kind: &str, table: &BTreeMap<String, BTreeMap<String, String>>, n: usize, i: usize, to: usize| {
            let key = format!("{n},{i}");
            let map = table.get(&key).ok_or_else(|| SimplicialError::Invalid(format!("missing {kind} map {key}")))?;
            file.levels[n]
                .iter()
                .map(|src| {
                    let dst = map.get(src).ok_or_else(|| SimplicialError::Invalid(format!("{kind} map {key} undefined on {src}")))?;
                    index[to]
                        .get(dst.as_str())
                        .copied()
                        .ok_or_else(|| SimplicialError::UnknownSimplex { level: to, id: dst.clone() })
                })
                .collect::<Result<Vec<usize>, _>>()
        };
        let mut faces = Vec::new();
        let mut degens = Vec::new();
        for n in 0..levels {
            if n > 0 {
                faces.push((0..=n).map(|i| read("face", &file.faces, n, i, n - 1)).collect::<Result<Vec<_>, _>>()?);
            }
            if n + 1 < levels {
                degens.push((0..=n).map(|i| read("degeneracy", &file.degeneracies, n, i, n + 1)).collect::<Result<Vec<_>, _>>()?);
            }
        }
        Self::new(file.levels.clone(), faces, degens)
    }

    pub fn to_file(&self) -> SimplicialFile {
        let write = |maps: &[Vec<usize>], n: usize, to: usize| {
            maps.iter()
                .enumerate()
                .map(|(i, m)| {
                    let entries = m.iter().enumerate().map(|(x, &y)| (self.ids[n][x].clone(), self.ids[to][y].clone())).collect();
                    (format!("{n},{i}"), entries)
                })
                .collect::<Vec<(String, BTreeMap<String, String>)>>()
        };
        let mut faces = BTreeMap::new();
        let mut degeneracies = BTreeMap::new();
        for n in 0..=self.level() {
            if n > 0 {
                faces.extend(write(&self.faces[n], n, n - 1));
            }
            if n < self.level() {
                degeneracies.extend(write(&self.degens[n], n, n + 1));
            }
        }
        SimplicialFile { levels: self.ids.clone(), faces, degeneracies }
    }

    /// Truncation level `L`.
    pub fn level(&self) -> usize {
        self.ids.len() - 1
    }

    pub fn size(&self, n: usize) -> usize {
        self.ids[n].len()
    }

    pub fn ids(&self, n: usize) -> &[String] {
        &self.ids[n]
    }

    pub fn id(&self, n: usize, x: usize) -> &str {
        &self.ids[n][x]
    }

    pub fn index_of(&self, n: usize, id: &str) -> Result<usize, SimplicialError> {
        self.index
            .get(n)
            .and_then(|m| m.get(id))
            .copied()
            .ok_or_else(|| SimplicialError::UnknownSimplex { level: n, id: id.to_string() })
    }

    /// `d_i x` for `x ∈ K_n`.
    pub fn d(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    /// `s_i x` for `x ∈ K_n`.
    pub fn s(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][i][x]
    }

    /// Whether `x ∈ K_n` is in the image of some degeneracy.
    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        n > 0 && (0..n).any(|i| self.s(n - 1, i, self.d(n, i, x)) == x)
    }

    /// `θ^* : K_b → K_a` for `θ : [a] → [b]`: faces deleting the indices
    /// missed by `θ` (largest first), then degeneracies `s_j` for each `j`
    /// with `θ(j) = θ(j+1)`, in increasing `j`.
    pub fn pullback(&self, theta: &SimplexMap, x: usize) -> usize {
        let mut level = theta.target;
        let mut y = x;
        for j in (0..=theta.target).rev() {
            if !theta.values.contains(&j) {
                y = self.d(level, j, y);
                level -= 1;
            }
        }
        for j in 0..theta.source {
            if theta.values[j] == theta.values[j + 1] {
                y = self.s(level, j, y);
                level += 1;
            }
        }
        debug_assert_eq!(level, theta.source);
        y
    }
}

/// Nerve of a finite poset: `K_n` is the set of chains `x_0 ≤ … ≤ x_n`,
/// identified by the JSON array of element names.
pub fn nerve(poset: &FinitePoset, level: usize) -> TruncatedSimplicialSet {
    let n_elems = poset.len();
    let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..n_elems).map(|x| vec![x]).collect()];
    for n in 1..=level {
        let next: Vec<Vec<usize>> = chains[n - 1]
            .iter()
            .flat_map(|c| {
                let last = *c.last().expect("nonempty chain");
                (0..n_elems).filter(move |&y| poset.leq(&last, &y)).map(move |y| {
                    let mut c = c.clone();
                    c.push(y);
                    c
                })
            })
            .collect();
        chains.push(next);
    }
    let lookup: Vec<HashMap<Vec<usize>, usize>> =
        chains.iter().map(|l| l.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let ids = chains
        .iter()
        .map(|l| {
            l.iter()
                .map(|c| serde_json::to_string(&c.iter().map(|&x| poset.name(x)).collect::<Vec<_>>()).expect("strings serialize"))
                .collect()
        })
        .collect();
    let faces = (1..=level)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    chains[n]
                        .iter()
                        .map(|c| {
                            let mut f = c.clone();
                            f.remove(i);
                            lookup[n - 1][&f]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degens = (0..level)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    chains[n]
                        .iter()
                        .map(|c| {
                            let mut s = c.clone();
                            s.insert(i, c[i]);
                            lookup[n + 1][&s]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    TruncatedSimplicialSet::new(ids, faces, degens).expect("nerves satisfy the simplicial identities")
}

/// `∂Δ^dim` truncated at `level`: weakly increasing sequences in `[dim]`
/// that miss at least one vertex, identified by their digit strings.
pub fn boundary_simplex(dim: usize, level: usize) -> TruncatedSimplicialSet {
    let mut seqs: Vec<Vec<Vec<usize>>> = Vec::new();
    for n in 0..=level {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        fn grow(cur: &mut Vec<usize>, len: usize, dim: usize, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                let mut seen = vec![false; dim + 1];
                cur.iter().for_each(|&v| seen[v] = true);
                if seen.iter().any(|s| !s) {
                    out.push(cur.clone());
                }
                return;
            }
            let start = cur.last().copied().unwrap_or(0);
            for v in start..=dim {
                cur.push(v);
                grow(cur, len, dim, out);
                cur.pop();
            }
        }
        grow(&mut cur, n + 1, dim, &mut out);
        seqs.push(out);
    }
    let lookup: Vec<HashMap<Vec<usize>, usize>> =
        seqs.iter().map(|l| l.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let ids = seqs
        .iter()
        .map(|l| l.iter().map(|c| c.iter().map(|v| v.to_string()).collect::<String>()).collect())
        .collect();
    let faces = (1..=level)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    seqs[n]
                        .iter()
                        .map(|c| {
                            let mut f = c.clone();
                            f.remove(i);
                            lookup[n - 1][&f]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degens = (0..level)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    seqs[n]
                        .iter()
                        .map(|c| {
                            let mut s = c.clone();
                            s.insert(i, c[i]);
                            lookup[n + 1][&s]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    TruncatedSimplicialSet::new(ids, faces, degens).expect("boundary of a simplex is a simplicial set")
}

/// One active-inert square: inert `f = [n] → [m]` at `offset`, active `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Square {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub offset: usize,
    pub active: Vec<usize>,
    pub pushout: usize,
}

impl Square {
    fn inert(&self) -> SimplexMap {
        SimplexMap::inert(self.n, self.m, self.offset)
    }

    fn active(&self) -> SimplexMap {
        SimplexMap { source: self.n, target: self.l, values: self.active.clone() }
    }

    /// `g' : [m] → [p]`: identity below the offset, `o + i ↦ o + g(i)` on the
    /// image of `f`, shifted by `l - n` above it.
    pub fn pushout_active(&self) -> SimplexMap {
        let (o, n, l) = (self.offset, self.n, self.l);
        let values = (0..=self.m)
            .map(|j| {
                if j <= o {
                    j
                } else if j <= o + n {
                    o + self.active[j - o]
                } else {
                    j + l - n
                }
            })
            .collect();
        SimplexMap { source: self.m, target: self.pushout, values }
    }

    /// `f' : [l] → [p]`, `k ↦ k + o`.
    pub fn pushout_inert(&self) -> SimplexMap {
        SimplexMap::inert(self.l, self.pushout, self.offset)
    }
}

/// Every active-inert square with all corners at level `≤ level`, ordered by
/// `(n, m, l, offset, g)` with `g` lexicographic.
pub fn squares(level: usize) -> Vec<Square> {
    let mut out = Vec::new();
    for n in 0..=level {
        for m in n..=level {
            for l in 0..=level {
                let Some(p) = (m + l).checked_sub(n).filter(|&p| p <= level) else { continue };
                for offset in 0..=m - n {
                    for g in active_maps(n, l) {
                        out.push(Square { n, m, l, offset, active: g.values, pushout: p });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Defect {
    /// A compatible pair with no simplex of `K_p` above it.
    Missing { left: String, right: String },
    /// Two simplices of `K_p` over the same pair.
    Duplicate { left: String, right: String, simplices: [String; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub square: Square,
    pub defect: Defect,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sq = &self.square;
        write!(f, "inert [{}]→[{}] at offset {}, active {:?} into [{}], pushout [{}]: ", sq.n, sq.m, sq.offset, sq.active, sq.l, sq.pushout)?;
        match &self.defect {
            Defect::Missing { left, right } => write!(f, "no simplex over ({left}, {right})"),
            Defect::Duplicate { left, right, simplices } => {
                write!(f, "{} and {} both lie over ({left}, {right})", simplices[0], simplices[1])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Every square up to `level` maps to a pullback.
    Pass { level: usize, squares: usize },
    Fail { level: usize, witness: Witness },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

fn check_square(k: &TruncatedSimplicialSet, sq: &Square) -> Option<Defect> {
    let (f, g) = (sq.inert(), sq.active());
    let (g2, f2) = (sq.pushout_active(), sq.pushout_inert());
    let mut above: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for s in 0..k.size(sq.pushout) {
        above.entry((k.pullback(&g2, s), k.pullback(&f2, s))).or_default().push(s);
    }
    let mut right_by_base: HashMap<usize, Vec<usize>> = HashMap::new();
    for b in 0..k.size(sq.l) {
        right_by_base.entry(k.pullback(&g, b)).or_default().push(b);
    }
    for a in 0..k.size(sq.m) {
        let Some(rights) = right_by_base.get(&k.pullback(&f, a)) else { continue };
        for &b in rights {
            let (left, right) = (k.id(sq.m, a).to_string(), k.id(sq.l, b).to_string());
            match above.get(&(a, b)).map(Vec::as_slice) {
                None | Some([]) => return Some(Defect::Missing { left, right }),
                Some([_]) => {}
                Some([s, t, ..]) => {
                    let simplices = [k.id(sq.pushout, *s).to_string(), k.id(sq.pushout, *t).to_string()];
                    return Some(Defect::Duplicate { left, right, simplices });
                }
            }
        }
    }
    None
}

/// Checks that `K_p → K_m ×_{K_n} K_l` is a bijection for every
/// active-inert pushout square with corners up to `level`. The verdict holds
/// up to that level only.
pub fn check_decomposition(k: &TruncatedSimplicialSet, level: usize) -> Result<Verdict, SimplicialError> {
    if level < 2 {
        return Err(SimplicialError::LevelTooShallow(level));
    }
    if level > k.level() {
        return Err(SimplicialError::LevelTooDeep { requested: level, available: k.level() });
    }
    let all = squares(level);
    let first = all
        .par_iter()
        .find_map_first(|sq| check_square(k, sq).map(|defect| Witness { square: sq.clone(), defect }));
    Ok(match first {
        Some(witness) => Verdict::Fail { level, witness },
        None => Verdict::Pass { level, squares: all.len() },
    })
}

/// A functional `K_1 → ℚ`, indexed like `K_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional(pub Vec<Rational>);

impl Functional {
    pub fn new(k: &TruncatedSimplicialSet, values: Vec<Rational>) -> Result<Self, SimplicialError> {
        if values.len() != k.size(1) {
            return Err(SimplicialError::FunctionalSize { expected: k.size(1), found: values.len() });
        }
        Ok(Self(values))
    }

    pub fn from_fn(k: &TruncatedSimplicialSet, f: impl FnMut(usize) -> Rational) -> Self {
        Self((0..k.size(1)).map(f).collect())
    }

    pub fn get(&self, edge: usize) -> &Rational {
        &self.0[edge]
    }

    /// `{edge id: "p/q"}`.
    pub fn to_map(&self, k: &TruncatedSimplicialSet) -> BTreeMap<String, String> {
        self.0.iter().enumerate().map(|(e, v)| (k.id(1, e).to_string(), exact::to_text(v))).collect()
    }
}

fn need_level_two(k: &TruncatedSimplicialSet) {
    assert!(k.level() >= 2, "convolution needs K_2");
}

/// `Γf = Σ_{d₁σ = f} d₂σ ⊗ d₀σ`, one pair per `σ ∈ K_2`.
pub fn comultiply(k: &TruncatedSimplicialSet, f: usize) -> Vec<(usize, usize)> {
    need_level_two(k);
    (0..k.size(2)).filter(|&s| k.d(2, 1, s) == f).map(|s| (k.d(2, 2, s), k.d(2, 0, s))).collect()
}

/// `(φ * ψ)(f) = Σ_{d₁σ = f} φ(d₂σ) ψ(d₀σ)`.
pub fn convolve_functionals(phi: &Functional, psi: &Functional, k: &TruncatedSimplicialSet) -> Functional {
    need_level_two(k);
    let mut out = vec![Rational::zero(); k.size(1)];
    for s in 0..k.size(2) {
        out[k.d(2, 1, s)] += phi.get(k.d(2, 2, s)) * psi.get(k.d(2, 0, s));
    }
    Functional(out)
}

fn degenerate_edges(k: &TruncatedSimplicialSet) -> Vec<bool> {
    let mut out = vec![false; k.size(1)];
    for x in 0..k.size(0) {
        out[k.s(0, 0, x)] = true;
    }
    out
}

/// `δ(f) = 1` iff `f = s₀x`.
pub fn counit(k: &TruncatedSimplicialSet) -> Functional {
    Functional(degenerate_edges(k).into_iter().map(|d| if d { Rational::one() } else { Rational::zero() }).collect())
}

pub fn zeta_functional(k: &TruncatedSimplicialSet) -> Functional {
    Functional(vec![Rational::one(); k.size(1)])
}

/// The two-sided inverse of `ζ`, found by solving `μ * ζ = δ` exactly and
/// then checking `ζ * μ = δ`.
pub fn mobius_functional(k: &TruncatedSimplicialSet) -> Result<Functional, SimplicialError> {
    need_level_two(k);
    let e = k.size(1);
    // (μ * ζ)(f) = Σ_{d₁σ = f} μ(d₂σ)
    let mut a = vec![vec![Rational::zero(); e]; e];
    for s in 0..k.size(2) {
        a[k.d(2, 1, s)][k.d(2, 2, s)] += Rational::one();
    }
    let delta = counit(k);
    let mu = match linalg::solve(&a, &delta.0) {
        Solution::Found { x, .. } => Functional(x),
        Solution::Inconsistent { row } => return Err(SimplicialError::NotInvertible { edge: k.id(1, row).to_string() }),
    };
    let right = convolve_functionals(&zeta_functional(k), &mu, k);
    if let Some(f) = (0..e).find(|&f| right.get(f) != delta.get(f)) {
        return Err(SimplicialError::NotInvertible { edge: k.id(1, f).to_string() });
    }
    Ok(mu)
}

/// A concrete failure of associativity or unitality of `*` on indicator
/// functionals `e_a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LawViolation {
    /// `((e_a * e_b) * e_c)(f) ≠ (e_a * (e_b * e_c))(f)`.
    Associativity { a: String, b: String, c: String, edge: String, left: String, right: String },
    /// `(δ * e_a)(f) ≠ e_a(f)`.
    LeftUnit { a: String, edge: String, value: String },
    /// `(e_a * δ)(f) ≠ e_a(f)`.
    RightUnit { a: String, edge: String, value: String },
}

/// Checks associativity and both unit laws on the basis of indicator
/// functionals, which covers all functionals by bilinearity. Returns the
/// first violation in index order.
pub fn check_algebra_laws(k: &TruncatedSimplicialSet) -> Option<LawViolation> {
    need_level_two(k);
    let e = k.size(1);
    // structure constants: e_a * e_b = Σ_f c[(a, b)][f] e_f
    let mut c: HashMap<(usize, usize), BTreeMap<usize, i64>> = HashMap::new();
    for s in 0..k.size(2) {
        *c.entry((k.d(2, 2, s), k.d(2, 0, s))).or_default().entry(k.d(2, 1, s)).or_default() += 1;
    }
    let degenerate = degenerate_edges(k);
    let id = |x: usize| k.id(1, x).to_string();
    for a in 0..e {
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for x in (0..e).filter(|&x| degenerate[x]) {
            for (&f, &n) in c.get(&(x, a)).into_iter().flatten() {
                *left.entry(f).or_insert(0) += n;
            }
            for (&f, &n) in c.get(&(a, x)).into_iter().flatten() {
                *right.entry(f).or_insert(0) += n;
            }
        }
        for f in 0..e {
            let expected = i64::from(f == a);
            let l = left.get(&f).copied().unwrap_or(0);
            if l != expected {
                return Some(LawViolation::LeftUnit { a: id(a), edge: id(f), value: format!("{l}/1") });
            }
            let r = right.get(&f).copied().unwrap_or(0);
            if r != expected {
                return Some(LawViolation::RightUnit { a: id(a), edge: id(f), value: format!("{r}/1") });
            }
        }
    }
    let empty = BTreeMap::new();
    let prod = |x: usize, y: usize| c.get(&(x, y)).unwrap_or(&empty);
    for a in 0..e {
        for b in 0..e {
            for cc in 0..e {
                let (ab, bc) = (prod(a, b), prod(b, cc));
                if ab.is_empty() && bc.is_empty() {
                    continue;
                }
                let mut lhs: BTreeMap<usize, i64> = BTreeMap::new();
                for (&g, &n) in ab {
                    for (&f, &m) in prod(g, cc) {
                        *lhs.entry(f).or_insert(0) += n * m;
                    }
                }
                let mut rhs: BTreeMap<usize, i64> = BTreeMap::new();
                for (&g, &n) in bc {
                    for (&f, &m) in prod(a, g) {
                        *rhs.entry(f).or_insert(0) += n * m;
                    }
                }
                lhs.retain(|_, v| *v != 0);
                rhs.retain(|_, v| *v != 0);
                if lhs != rhs {
                    let f = *lhs.keys().chain(rhs.keys()).find(|f| lhs.get(f) != rhs.get(f)).expect("maps differ");
                    let show = |m: &BTreeMap<usize, i64>| format!("{}/1", m.get(&f).copied().unwrap_or(0));
                    return Some(LawViolation::Associativity {
                        a: id(a),
                        b: id(b),
                        c: id(cc),
                        edge: id(f),
                        left: show(&lhs),
                        right: show(&rhs),
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exact::int;
    use crate::poset::{FinitePosetSpec, Incidence};

    fn edge(k: &TruncatedSimplicialSet, names: &[&str]) -> usize {
        k.index_of(1, &serde_json::to_string(names).unwrap()).unwrap()
    }

    /// Vertices `x, y`, an edge `f`, and a second 2-simplex `τ` with the same
    /// faces as `s₀f`.
    fn doubled_triangle() -> TruncatedSimplicialSet {
        let file: SimplicialFile = serde_json::from_value(serde_json::json!({
            "levels": [["x", "y"], ["xx", "yy", "f"], ["xxx", "yyy", "s0f", "s1f", "tau"]],
            "faces": {
                "1,0": {"xx": "x", "yy": "y", "f": "y"},
                "1,1": {"xx": "x", "yy": "y", "f": "x"},
                "2,0": {"xxx": "xx", "yyy": "yy", "s0f": "f", "s1f": "yy", "tau": "f"},
                "2,1": {"xxx": "xx", "yyy": "yy", "s0f": "f", "s1f": "f", "tau": "f"},
                "2,2": {"xxx": "xx", "yyy": "yy", "s0f": "xx", "s1f": "f", "tau": "xx"}
            },
            "degeneracies": {
                "0,0": {"x": "xx", "y": "yy"},
                "1,0": {"xx": "xxx", "yy": "yyy", "f": "s0f"},
                "1,1": {"xx": "xxx", "yy": "yyy", "f": "s1f"}
            }
        }))
        .unwrap();
        TruncatedSimplicialSet::from_file(&file).unwrap()
    }

    #[test]
    fn active_and_inert() {
        let id = SimplexMap::identity(3);
        assert!(id.is_active() && id.is_inert());
        let coface = SimplexMap::new(2, vec![1, 2]).unwrap();
        assert!(coface.is_inert() && !coface.is_active());
        let codegen = SimplexMap::new(1, vec![0, 0, 1]).unwrap();
        assert!(codegen.is_active() && !codegen.is_inert());
        assert!(SimplexMap::new(2, vec![2, 1]).is_err());
        assert_eq!(coface.compose(&SimplexMap::identity(1)), coface);
    }

    #[test]
    fn active_map_enumeration() {
        // monotone g: [n] → [l] with fixed endpoints: C(l + n - 1, n - 1)
        assert_eq!(active_maps(2, 3).len(), 4);
        assert_eq!(active_maps(3, 2).len(), 6);
        assert_eq!(active_maps(0, 0).len(), 1);
        assert!(active_maps(0, 1).is_empty());
        let tables: Vec<_> = active_maps(2, 2).into_iter().map(|g| g.values).collect();
        assert_eq!(tables, vec![vec![0, 0, 2], vec![0, 1, 2], vec![0, 2, 2]]);
    }

    #[test]
    fn nerve_sizes() {
        let k = nerve(&FinitePoset::chain(2), 3);
        assert_eq!((k.size(0), k.size(1), k.size(2)), (2, 3, 4));
        assert_eq!((0..k.size(1)).filter(|&e| !k.is_degenerate(1, e)).count(), 1);
        let point = nerve(&FinitePoset::chain(1), 4);
        assert!((0..=4).all(|n| point.size(n) == 1));
        let four = nerve(&FinitePoset::divisors_of(4), 3);
        assert_eq!((0..four.size(2)).filter(|&s| !four.is_degenerate(2, s)).count(), 1);
    }

    #[test]
    fn pullback_on_nerve_is_reindexing() {
        let p = FinitePoset::divisors_of(12);
        let k = nerve(&p, 4);
        for b in 0..=4 {
            for a in 0..=4 {
                let mut maps = Vec::new();
                let mut table = vec![0; a + 1];
                fn all(t: &mut Vec<usize>, i: usize, b: usize, out: &mut Vec<SimplexMap>) {
                    if i == t.len() {
                        out.push(SimplexMap::new(b, t.clone()).unwrap());
                        return;
                    }
                    let lo = if i == 0 { 0 } else { t[i - 1] };
                    for v in lo..=b {
                        t[i] = v;
                        all(t, i + 1, b, out);
                    }
                }
                all(&mut table, 0, b, &mut maps);
                for theta in &maps {
                    for x in 0..k.size(b) {
                        let chain: Vec<String> = serde_json::from_str(k.id(b, x)).unwrap();
                        let expected: Vec<&String> = theta.values().iter().map(|&i| &chain[i]).collect();
                        let got = k.pullback(theta, x);
                        assert_eq!(k.id(a, got), serde_json::to_string(&expected).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn nerves_are_decomposition_spaces() {
        for p in [FinitePoset::chain(3), FinitePoset::divisors_of(12), FinitePoset::divisors_of(60)] {
            let k = nerve(&p, 4);
            assert!(check_decomposition(&k, 4).unwrap().passed());
        }
    }

    #[test]
    fn boundary_fails_with_missing_filler() {
        let k = boundary_simplex(3, 3);
        let verdict = check_decomposition(&k, 3).unwrap();
        let Verdict::Fail { witness, .. } = verdict else { panic!("∂Δ³ passed") };
        assert!(matches!(witness.defect, Defect::Missing { .. }), "{witness}");
        assert!(check_decomposition(&boundary_simplex(3, 2), 2).unwrap().passed());
        assert_eq!(check_decomposition(&k, 1).unwrap_err(), SimplicialError::LevelTooShallow(1));
        assert!(matches!(check_decomposition(&k, 4), Err(SimplicialError::LevelTooDeep { .. })));
    }

    #[test]
    fn boundary_witness_is_two_triangles() {
        let Verdict::Fail { witness, .. } = check_decomposition(&boundary_simplex(3, 3), 3).unwrap() else { panic!() };
        let Defect::Missing { left, right } = &witness.defect else { panic!() };
        // two nondegenerate triangles glued along an edge, no 3-simplex over them
        assert_eq!((witness.square.m, witness.square.l, witness.square.pushout), (2, 2, 3));
        let distinct = |s: &str| s.chars().collect::<std::collections::BTreeSet<_>>().len();
        assert_eq!((distinct(left), distinct(right)), (3, 3));
    }

    #[test]
    fn boundary_algebra_matches_the_full_simplex() {
        // K_1 and K_2 of ∂Δ³ coincide with those of Δ³, so * is still lawful
        let k = boundary_simplex(3, 3);
        assert_eq!(check_algebra_laws(&k), None);
        let full = nerve(&FinitePoset::chain(4), 2);
        assert_eq!(k.size(1), full.size(1));
        assert_eq!(k.size(2), full.size(2));
    }

    #[test]
    fn doubled_triangle_breaks_unit_and_decomposition() {
        let k = doubled_triangle();
        let violation = check_algebra_laws(&k).unwrap();
        assert_eq!(violation, LawViolation::LeftUnit { a: "f".into(), edge: "f".into(), value: "2/1".into() });
        let phi = Functional::from_fn(&k, |e| int(e as i64 + 1));
        assert_ne!(convolve_functionals(&counit(&k), &phi, &k), phi);
        assert!(!check_decomposition(&k, 2).unwrap().passed());
    }

    #[test]
    fn identity_violations_are_rejected() {
        let mut file = doubled_triangle().to_file();
        file.faces.get_mut("2,2").unwrap().insert("tau".into(), "f".into());
        assert!(matches!(TruncatedSimplicialSet::from_file(&file), Err(SimplicialError::IdentityViolated { .. })));
        let mut file = doubled_triangle().to_file();
        file.degeneracies.remove("1,1");
        assert!(matches!(TruncatedSimplicialSet::from_file(&file), Err(SimplicialError::Invalid(_))));
    }

    #[test]
    fn file_round_trip() {
        let k = nerve(&FinitePoset::divisors_of(12), 3);
        let json = serde_json::to_string(&k.to_file()).unwrap();
        let back = TruncatedSimplicialSet::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn comultiplication_examples() {
        let k = nerve(&FinitePoset::chain(2), 2);
        let f = edge(&k, &["0", "1"]);
        let pairs: Vec<_> = comultiply(&k, f).into_iter().map(|(a, b)| (k.id(1, a).to_string(), k.id(1, b).to_string())).collect();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.contains(&(r#"["0","0"]"#.into(), r#"["0","1"]"#.into())));
        assert!(pairs.contains(&(r#"["0","1"]"#.into(), r#"["1","1"]"#.into())));

        let point = nerve(&FinitePoset::chain(1), 2);
        assert_eq!(comultiply(&point, 0), vec![(0, 0)]);

        let k = nerve(&FinitePoset::divisors_of(12), 2);
        let f = edge(&k, &["1", "12"]);
        let mut middles: Vec<u64> = comultiply(&k, f)
            .into_iter()
            .map(|(a, b)| {
                let left: Vec<String> = serde_json::from_str(k.id(1, a)).unwrap();
                let right: Vec<String> = serde_json::from_str(k.id(1, b)).unwrap();
                assert_eq!(left[1], right[0]);
                left[1].parse().unwrap()
            })
            .collect();
        middles.sort_unstable();
        assert_eq!(middles, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn functional_examples() {
        let k = nerve(&FinitePoset::divisors_of(12), 2);
        let z = zeta_functional(&k);
        assert_eq!(convolve_functionals(&z, &z, &k).get(edge(&k, &["1", "12"])), &int(6));
        let mu = mobius_functional(&k).unwrap();
        assert_eq!(mu.get(edge(&k, &["1", "12"])), &int(0));
        assert_eq!(mu.get(edge(&k, &["1", "6"])), &int(1));
        assert_eq!(mu.get(edge(&k, &["4", "4"])), &int(1));

        let chain = nerve(&FinitePoset::chain(2), 2);
        assert_eq!(mobius_functional(&chain).unwrap().get(edge(&chain, &["0", "1"])), &int(-1));

        let three = nerve(&FinitePoset::chain(3), 2);
        let phi = Functional::from_fn(&three, |e| exact::frac(e as i64 * 3 - 7, 5));
        assert_eq!(convolve_functionals(&counit(&three), &phi, &three), phi);
        assert_eq!(convolve_functionals(&phi, &counit(&three), &three), phi);
    }

    #[test]
    fn nerve_convolution_matches_poset_convolution() {
        let spec = FinitePosetSpec {
            elements: ["a", "b", "c", "d", "e"].map(String::from).to_vec(),
            covers: [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("b", "e")]
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .to_vec(),
        };
        let p = Arc::new(FinitePoset::from_spec(&spec).unwrap());
        let k = nerve(&p, 2);
        let pair = |e: usize| -> (usize, usize) {
            let names: Vec<String> = serde_json::from_str(k.id(1, e)).unwrap();
            (p.index_of(&names[0]).unwrap(), p.index_of(&names[1]).unwrap())
        };
        let phi = Functional::from_fn(&k, |e| exact::frac(e as i64 - 4, 3));
        let psi = Functional::from_fn(&k, |e| int((e * e) as i64 % 7 - 2));
        let fg = convolve_functionals(&phi, &psi, &k);
        let table = |f: &Functional| -> HashMap<(usize, usize), Rational> {
            (0..k.size(1)).map(|e| (pair(e), f.get(e).clone())).collect()
        };
        let (tp, tq) = (table(&phi), table(&psi));
        let ip = Incidence::from_fn(p.clone(), move |x, y| tp[&(*x, *y)].clone());
        let iq = Incidence::from_fn(p.clone(), move |x, y| tq[&(*x, *y)].clone());
        let prod = ip.convolve(&iq);
        for e in 0..k.size(1) {
            let (x, y) = pair(e);
            assert_eq!(&prod.value(&x, &y).unwrap(), fg.get(e));
        }
        assert_eq!(check_algebra_laws(&k), None);
    }
}
