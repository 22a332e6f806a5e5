//! Exact linear algebra over `Q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped) and
/// the pivot column of each.
pub fn rref(mut rows: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Rank over `Q`. Each row is scaled to integers and the rank is taken by
/// fraction-free elimination, which keeps entry sizes bounded by minors.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let d = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * Q::from_integer(d.clone())).to_integer()).collect()
        })
        .collect();
    rank_bareiss(ints)
}

/// Rank of an integer matrix by Bareiss elimination.
pub fn rank_bareiss(mut m: Vec<Vec<BigInt>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            for j in c + 1..ncols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Solves the square system `a x = b`; `None` if `a` is singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, piv) = rref(aug);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(red.into_iter().map(|r| r[n].clone()).collect())
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Determinant of a rational matrix by clearing denominators and running Bareiss.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut scale = Q::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= Q::from_integer(l.clone());
            row.iter()
                .map(|x| (x * Q::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    debug_assert_eq!(rows.len(), n);
    Q::from_integer(det_bareiss(&rows)) / scale
}

/// Incremental sparse Gaussian elimination keeping the basis fully reduced.
///
/// Columns are plain indices; a smaller index is preferred as pivot, so callers
/// control which columns get eliminated first by how they number them.
#[derive(Clone, Debug, Default)]
pub struct SparseEliminator {
    rows: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl SparseEliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Reduced row whose pivot is `col`, normalised to pivot coefficient 1.
    pub fn pivot_row(&self, col: usize) -> Option<&BTreeMap<usize, Q>> {
        self.rows.get(&col)
    }

    fn reduce(&self, mut row: BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let hits: Vec<usize> = row
            .keys()
            .copied()
            .filter(|c| self.rows.contains_key(c))
            .collect();
        for c in hits {
            let Some(f) = row.get(&c).cloned() else { continue };
            for (k, v) in &self.rows[&c] {
                let e = row.entry(*k).or_insert_with(Q::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(k);
                }
            }
        }
        row
    }

    /// Adds a row; returns `true` if it was independent of the current span.
    pub fn insert(&mut self, row: BTreeMap<usize, Q>) -> bool {
        let row: BTreeMap<usize, Q> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut row = self.reduce(row);
        let Some((&pc, pv)) = row.iter().next() else {
            return false;
        };
        let inv = pv.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        for other in self.rows.values_mut() {
            if let Some(f) = other.get(&pc).cloned() {
                for (k, v) in &row {
                    let e = other.entry(*k).or_insert_with(Q::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        other.remove(k);
                    }
                }
            }
        }
        self.rows.insert(pc, row);
        true
    }

    /// Whether `row` lies in the current span.
    pub fn contains(&self, row: BTreeMap<usize, Q>) -> bool {
        let row: BTreeMap<usize, Q> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        self.reduce(row).is_empty()
    }
}

/// `true` iff every entry is `<= 0`.
pub fn all_nonpositive(xs: &[Q]) -> bool {
    xs.iter().all(|x| !x.is_positive())
}
