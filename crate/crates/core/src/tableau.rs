//! Spin-standard tableaux of rectangular shape `2kλ`.
//!
//! A tableau is stored as its list of rows, each a `W^P` tuple of length
//! `4n+2`; degree `k` in the `2λ` grading means `2k` rows. A row is determined
//! by its small part (the entries `<= 4n+2`), which is the compressed notation
//! used on input.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::weyl::{enumerate_wp, CosetTuple, RankParam};
use crate::{Error, Guard, Result};

/// The small part of a `W^P` row: an increasing, even-length tuple in
/// `[1, 4n+2]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompressedRow {
    small: Vec<usize>,
}

impl CompressedRow {
    pub fn new(small: Vec<usize>) -> Result<Self> {
        if small.windows(2).any(|w| w[0] >= w[1]) || small.first() == Some(&0) {
            return Err(Error::InvalidCompressedRow(format!("{small:?} is not increasing")));
        }
        if small.len() % 2 != 0 {
            return Err(Error::InvalidCompressedRow(format!("{small:?} has odd length")));
        }
        Ok(CompressedRow { small })
    }

    pub fn small(&self) -> &[usize] {
        &self.small
    }

    /// The full row: `small` together with the mirrors of its complement.
    pub fn expand(&self, rank: RankParam) -> Result<CosetTuple> {
        let l = rank.rank();
        if let Some(&last) = self.small.last() {
            if last > l {
                return Err(Error::IndexOutOfRange { index: last, max: l });
            }
        }
        let mut e = self.small.clone();
        e.extend((1..=l).rev().filter(|j| self.small.binary_search(j).is_err()).map(|j| rank.mirror(j)));
        CosetTuple::new(e)
    }

    pub fn compress(row: &CosetTuple, rank: RankParam) -> Result<Self> {
        if !row.is_wp(rank) {
            return Err(Error::InvalidTuple(format!("{row} is not a W^P row")));
        }
        Self::new(row.entries().iter().copied().filter(|&a| a <= rank.rank()).collect())
    }
}

pub fn expand(c: &CompressedRow, rank: RankParam) -> Result<CosetTuple> {
    c.expand(rank)
}

/// A rectangular tableau given by its rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    rank: RankParam,
    rows: Vec<CosetTuple>,
}

impl Tableau {
    pub fn new(rank: RankParam, rows: Vec<CosetTuple>) -> Result<Self> {
        for r in &rows {
            if r.len() != rank.rank() {
                return Err(Error::SizeMismatch(r.len(), rank.rank()));
            }
            if let Some(&last) = r.entries().last() {
                if last > rank.ambient() {
                    return Err(Error::IndexOutOfRange { index: last, max: rank.ambient() });
                }
            }
        }
        Ok(Tableau { rank, rows })
    }

    pub fn empty(rank: RankParam) -> Self {
        Tableau { rank, rows: Vec::new() }
    }

    pub fn from_compressed(rank: RankParam, rows: &[CompressedRow]) -> Result<Self> {
        let rows = rows.iter().map(|c| c.expand(rank)).collect::<Result<Vec<_>>>()?;
        Self::new(rank, rows)
    }

    pub fn rank(&self) -> RankParam {
        self.rank
    }

    pub fn rows(&self) -> &[CosetTuple] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<CosetTuple> {
        self.rows
    }

    /// Degree in the `2λ` grading: half the number of rows.
    pub fn degree(&self) -> usize {
        self.rows.len() / 2
    }

    /// `e_{i,j}`: entry `j` of row `i`, both 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Option<usize> {
        self.rows.get(i.checked_sub(1)?)?.entries().get(j.checked_sub(1)?).copied()
    }

    /// Same rows, sorted lexicographically.
    pub fn sorted(mut self) -> Self {
        self.rows.sort();
        self
    }

    /// Concatenation of rows (product of the two sections), sorted.
    pub fn product(&self, other: &Tableau) -> Result<Tableau> {
        if self.rank != other.rank {
            return Err(Error::SizeMismatch(self.rank.rank(), other.rank.rank()));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        rows.sort();
        Ok(Tableau { rank: self.rank, rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows).expect("rows serialize")
    }

    /// Reads either full rows `[[1,3,5,6,9,11],...]` or compressed rows
    /// `{"compressed": [[1,3,5,6],[2,4]]}`; the rank is taken from `rank`.
    pub fn from_json(rank: RankParam, s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Input {
            Full(Vec<Vec<usize>>),
            Compressed { compressed: Vec<Vec<usize>> },
        }
        match serde_json::from_str::<Input>(s).map_err(|e| Error::Parse(e.to_string()))? {
            Input::Full(rows) => Self::new(rank, rows.into_iter().map(CosetTuple::new).collect::<Result<_>>()?),
            Input::Compressed { compressed } => Self::from_compressed(
                rank,
                &compressed.into_iter().map(CompressedRow::new).collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

impl Serialize for Tableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// Rows are `W^P` tuples and weakly increase down every column.
pub fn is_spin_standard(t: &Tableau) -> bool {
    t.rows.iter().all(|r| r.is_wp(t.rank)) && t.rows.windows(2).all(|w| w[0].leq(&w[1]))
}

/// `c(val)`: multiplicity of `val` in the tableau.
pub fn content(t: &Tableau, val: usize) -> usize {
    t.rows.iter().filter(|r| r.contains(val)).count()
}

/// Full content vector, indexed `1..=8n+4` (slot 0 unused).
pub fn content_vector(rank: RankParam, rows: &[CosetTuple]) -> Vec<usize> {
    let mut c = vec![0; rank.ambient() + 1];
    for r in rows {
        for &a in r.entries() {
            c[a] += 1;
        }
    }
    c
}

/// Zero weight: `c(t) = c(8n+5-t)` for all `t`.
pub fn is_t_invariant(t: &Tableau) -> bool {
    let c = content_vector(t.rank, &t.rows);
    let ok = (1..=t.rank.rank()).all(|j| c[j] == c[t.rank.mirror(j)]);
    if ok && t.rows.iter().all(|r| r.is_wp(t.rank)) {
        // each W^P row holds exactly one of t, 8n+5-t
        debug_assert!(c[1..].iter().all(|&x| 2 * x == t.rows.len()));
    }
    ok
}

/// Every row is `<= v`.
pub fn rows_bounded(t: &Tableau, v: &CosetTuple) -> bool {
    t.rows.iter().all(|r| r.leq(v))
}

/// All rows of `W^P` below `v`, in lexicographic order.
pub fn rows_below(rank: RankParam, v: &CosetTuple, guard: &Guard) -> Result<Vec<CosetTuple>> {
    Ok(enumerate_wp(rank, guard)?.into_iter().filter(|r| r.leq(v)).collect())
}

/// The standard monomial basis of `R_k(X(v))` in the `2λ` grading: all
/// spin-standard, T-invariant tableaux with `2k` rows bounded by `v`, in
/// lexicographic order of their concatenated rows.
pub fn enumerate(rank: RankParam, k: usize, v: &CosetTuple, guard: &Guard) -> Result<Vec<Tableau>> {
    guard.check_degree(k)?;
    let cands = rows_below(rank, v, guard)?;
    let mut out = Vec::new();
    let mut walker = ChainWalker::new(rank, k, v, &cands);
    walker.walk(0, &mut |rows| out.push(Tableau { rank, rows: rows.to_vec() }));
    Ok(out)
}

/// Number of basis tableaux, without materialising them.
pub fn count(rank: RankParam, k: usize, v: &CosetTuple, guard: &Guard) -> Result<usize> {
    guard.check_degree(k)?;
    let cands = rows_below(rank, v, guard)?;
    let mut n = 0usize;
    ChainWalker::new(rank, k, v, &cands).walk(0, &mut |_| n += 1);
    Ok(n)
}

/// Depth-first search over weakly increasing chains with content pruning.
struct ChainWalker<'a> {
    k: usize,
    cands: &'a [CosetTuple],
    /// `succ[i]`: candidates `j >= i` with `cands[i] <= cands[j]`.
    succ: Vec<Vec<usize>>,
    content: Vec<usize>,
    /// `upper[t]`: how many positions of the bound `v` hold a value `>= t`.
    upper: Vec<usize>,
    stack: Vec<CosetTuple>,
}

impl<'a> ChainWalker<'a> {
    fn new(rank: RankParam, k: usize, v: &CosetTuple, cands: &'a [CosetTuple]) -> Self {
        let succ = (0..cands.len())
            .map(|i| (i..cands.len()).filter(|&j| cands[i].leq(&cands[j])).collect())
            .collect();
        ChainWalker {
            k,
            cands,
            succ,
            content: vec![0; rank.ambient() + 1],
            upper: (0..=rank.ambient() + 1)
                .map(|t| v.entries().iter().filter(|&&a| a >= t).count())
                .collect(),
            stack: Vec::with_capacity(2 * k),
        }
    }

    fn walk(&mut self, from: usize, emit: &mut dyn FnMut(&[CosetTuple])) {
        if self.stack.len() == 2 * self.k {
            emit(&self.stack);
            return;
        }
        let top = self.stack.is_empty();
        let width = if top { self.cands.len() } else { self.succ[from].len() };
        for idx in 0..width {
            let j = if top { idx } else { self.succ[from][idx] };
            let row = &self.cands[j];
            if row.entries().iter().any(|&a| self.content[a] >= self.k) {
                continue;
            }
            for &a in row.entries() {
                self.content[a] += 1;
            }
            if self.feasible(row, 2 * self.k - self.stack.len() - 1) {
                self.stack.push(row.clone());
                self.walk(j, emit);
                self.stack.pop();
            }
            for &a in row.entries() {
                self.content[a] -= 1;
            }
        }
    }

    /// Can `left` more rows, each `>= row` and `<= v`, bring every content up
    /// to `k`? Rows `>= row` hold at most `#{p : row_p <= t}` values `<= t`;
    /// rows `<= v` hold at most `upper[t]` values `>= t`.
    fn feasible(&self, row: &CosetTuple, left: usize) -> bool {
        let big = self.content.len() - 1;
        let mut need = 0;
        let mut below = 0;
        let e = row.entries();
        for t in 1..=big {
            need += self.k - self.content[t];
            while below < e.len() && e[below] <= t {
                below += 1;
            }
            if need > left * below {
                return false;
            }
        }
        need = 0;
        for t in (1..=big).rev() {
            need += self.k - self.content[t];
            if need > left * self.upper[t] {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::v_tuple;

    fn r(n: usize) -> RankParam {
        RankParam::new(n).unwrap()
    }

    fn t(v: &[usize]) -> CosetTuple {
        CosetTuple::new(v.to_vec()).unwrap()
    }

    fn c(v: &[usize]) -> CompressedRow {
        CompressedRow::new(v.to_vec()).unwrap()
    }

    fn x1() -> Tableau {
        Tableau::new(r(1), vec![t(&[1, 3, 5, 6, 9, 11]), t(&[2, 4, 7, 8, 10, 12])]).unwrap()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(c(&[2, 4]).expand(r(1)).unwrap(), t(&[2, 4, 7, 8, 10, 12]));
        assert_eq!(c(&[1, 3, 5, 6]).expand(r(1)).unwrap(), t(&[1, 3, 5, 6, 9, 11]));
        assert_eq!(c(&[]).expand(r(1)).unwrap(), t(&[7, 8, 9, 10, 11, 12]));
    }

    #[test]
    fn compressed_row_validation() {
        assert!(CompressedRow::new(vec![1, 2, 3]).is_err());
        assert!(CompressedRow::new(vec![2, 1]).is_err());
        assert!(c(&[1, 7]).expand(r(1)).is_err());
        assert!(CompressedRow::compress(&t(&[1, 2, 3, 4, 5, 12]), r(1)).is_err());
    }

    #[test]
    fn x1_predicates() {
        let x = x1();
        assert!(is_spin_standard(&x));
        assert!(is_t_invariant(&x));
        assert_eq!(content(&x, 7), 1);
        assert_eq!(x.degree(), 1);
        assert_eq!(x.entry(2, 3), Some(7));
        let swapped = Tableau::new(r(1), x.rows().iter().rev().cloned().collect()).unwrap();
        assert!(!is_spin_standard(&swapped));
        assert!(rows_bounded(&x, &v_tuple(1, r(1)).unwrap()));
    }

    #[test]
    fn doubled_row_not_invariant() {
        let row = t(&[1, 3, 5, 6, 9, 11]);
        let d = Tableau::new(r(1), vec![row.clone(), row]).unwrap();
        assert!(is_spin_standard(&d));
        assert!(!is_t_invariant(&d));
        assert_eq!(content(&d, 1), 2);
        assert_eq!(content(&d, 12), 0);
    }

    #[test]
    fn empty_tableau() {
        let e = Tableau::empty(r(1));
        assert_eq!(content(&e, 3), 0);
        assert!(is_spin_standard(&e));
        assert!(is_t_invariant(&e));
    }

    #[test]
    fn json_inputs() {
        let full = Tableau::from_json(r(1), "[[1,3,5,6,9,11],[2,4,7,8,10,12]]").unwrap();
        let comp = Tableau::from_json(r(1), r#"{"compressed": [[1,3,5,6],[2,4]]}"#).unwrap();
        assert_eq!(full, comp);
        assert_eq!(full.to_json(), "[[1,3,5,6,9,11],[2,4,7,8,10,12]]");
        assert!(Tableau::from_json(r(1), "[[1,2]]").is_err());
        assert!(Tableau::from_json(r(1), "nope").is_err());
    }

    #[test]
    fn enumerate_small_cases() {
        let g = Guard::default();
        let v1 = v_tuple(1, r(1)).unwrap();
        assert_eq!(enumerate(r(1), 1, &v1, &g).unwrap(), vec![x1()]);
        let v2 = v_tuple(2, r(1)).unwrap();
        assert_eq!(enumerate(r(1), 2, &v2, &g).unwrap().len(), 3);
        assert_eq!(count(r(1), 0, &v2, &g).unwrap(), 1);
    }

    #[test]
    fn degree_guard() {
        let v1 = v_tuple(1, r(1)).unwrap();
        let g = Guard { max_n: 4, max_degree: 2 };
        assert!(matches!(enumerate(r(1), 3, &v1, &g), Err(Error::GuardExceeded(_))));
    }
}
