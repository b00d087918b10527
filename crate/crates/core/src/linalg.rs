//! Dense exact linear algebra over ℚ, just enough for Padé systems and
//! incidence-matrix inversion.

use num_traits::{One, Zero};

use crate::Rational;

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// A solution with every free variable set to zero.
    Found { x: Vec<Rational>, free: Vec<usize> },
    /// The system is inconsistent; `row` is the first original equation that
    /// reduced to `0 = c` with `c ≠ 0`.
    Inconsistent { row: usize },
}

/// Gauss–Jordan elimination on an `rows × cols` system. Pivots are chosen as
/// the first nonzero entry in column order, so the result is deterministic.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    // original index of each working row, for reporting
    let mut origin: Vec<usize> = (0..rows).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        origin.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if let Some(i) = (r..rows)
        .filter(|&i| !m[i][cols].is_zero())
        .min_by_key(|&i| origin[i])
    {
        return Solution::Inconsistent { row: origin[i] };
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    let free = (0..cols).filter(|c| !pivots.contains(c)).collect();
    Solution::Found { x, free }
}

/// Inverse of a square matrix, or the first column without a pivot.
pub fn inverse(a: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, usize> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).ok_or(c)?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for v in m[c].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}
