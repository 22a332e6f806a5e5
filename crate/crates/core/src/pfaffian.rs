//! Pfaffians, sub-Pfaffians and the coordinate functions `q_i`.
//!
//! A point of the opposite big cell is a skew-symmetric `(4n+2)×(4n+2)` matrix
//! `A`. For a `W^P` tuple `i` with small part `S`, the coordinate `q_i(A)` is the
//! principal sub-Pfaffian of `A` on `[1, 4n+2] \ S`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::rng::{random_skew, SeedTree};
use crate::weyl::{CosetTuple, RankParam};
use crate::{Error, Result, Status, Q};

/// Exact skew-symmetric matrix, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix {
    size: usize,
    entries: Vec<Q>,
}

impl SkewMatrix {
    pub fn zero(size: usize) -> Self {
        SkewMatrix {
            size,
            entries: vec![Q::zero(); size * size],
        }
    }

    /// Builds from the strict upper triangle listed row by row.
    pub fn from_upper(size: usize, upper: Vec<Q>) -> Result<Self> {
        let expected = size * size.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::SizeMismatch(upper.len(), expected));
        }
        let mut m = Self::zero(size);
        let mut it = upper.into_iter();
        for i in 1..=size {
            for j in i + 1..=size {
                m.set(i, j, it.next().expect("length checked"));
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let size = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::SizeMismatch(bad.len(), size));
        }
        for i in 0..size {
            if !rows[i][i].is_zero() {
                return Err(Error::NotSkew(format!("nonzero diagonal entry at {}", i + 1)));
            }
            for j in i + 1..size {
                if rows[i][j] != -rows[j][i].clone() {
                    return Err(Error::NotSkew(format!("entries ({}, {}) and ({}, {})", i + 1, j + 1, j + 1, i + 1)));
                }
            }
        }
        Ok(SkewMatrix {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// The matrix with `a_ij = 1` exactly when `j - i = 2n+1`.
    pub fn reference(rank: RankParam) -> Self {
        let size = rank.rank();
        let gap = 2 * rank.n() + 1;
        let mut m = Self::zero(size);
        for i in 1..=size - gap {
            m.set(i, i + gap, Q::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.entries[(i - 1) * self.size + (j - 1)]
    }

    /// Sets `a_ij = x` and `a_ji = -x`.
    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        let s = self.size;
        self.entries[(j - 1) * s + (i - 1)] = -x.clone();
        self.entries[(i - 1) * s + (j - 1)] = x;
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.entries.chunks(self.size.max(1)).map(<[Q]>::to_vec).collect()
    }

    /// Multiplies row `i` and column `i` by `c`.
    pub fn scale_index(&mut self, i: usize, c: &Q) {
        for j in 1..=self.size {
            if j != i {
                let x = self.entry(i, j) * c;
                self.set(i, j, x);
            }
        }
    }

    pub fn pfaffian(&self) -> Q {
        let all: Vec<usize> = (1..=self.size).collect();
        self.pfaffian_on(&all)
    }

    /// Pfaffian of the principal submatrix on `idx` (1-based, sorted).
    fn pfaffian_on(&self, idx: &[usize]) -> Q {
        if idx.len() % 2 == 1 {
            return Q::zero();
        }
        if idx.is_empty() {
            return Q::one();
        }
        // Clear denominators so the expansion runs over integers:
        // Pf(dA) = d^{m/2} Pf(A).
        let d = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .filter(|(i, j)| i < j)
            .fold(BigInt::one(), |acc, (i, j)| acc.lcm(self.entry(i, j).denom()));
        let ints: Vec<Vec<BigInt>> = idx
            .iter()
            .map(|&i| {
                idx.iter()
                    .map(|&j| (self.entry(i, j) * Q::from_integer(d.clone())).to_integer())
                    .collect()
            })
            .collect();
        let pf = pfaffian_expand(idx.len(), |i, j| ints[i][j].clone());
        Q::new(pf, num_traits::pow(d, idx.len() / 2))
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for SkewMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkewMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<Vec<String>> = Vec::deserialize(d)?;
        let rows = raw
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<Q>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        SkewMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(p, q))
}

/// Pfaffian of an `m×m` skew matrix given by `entry(i, j)` (0-based, `i < j`).
///
/// Expansion along the first remaining index; results for sub-index-sets are
/// memoised by bitmask once `m > 8`, so the cost is bounded by `2^m` states
/// rather than `(m-1)!!` matchings. Works over any commutative ring.
pub fn pfaffian_expand<T, F>(m: usize, entry: F) -> T
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
    F: Fn(usize, usize) -> T,
{
    assert!(m <= 64, "Pfaffian size {m} too large");
    if m % 2 == 1 {
        return T::zero();
    }
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut memo = (m > 8).then(HashMap::new);
    expand_mask(full, &entry, &mut memo)
}

fn expand_mask<T, F>(mask: u64, entry: &F, memo: &mut Option<HashMap<u64, T>>) -> T
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
    F: Fn(usize, usize) -> T,
{
    if mask == 0 {
        return T::one();
    }
    if let Some(hit) = memo.as_ref().and_then(|h| h.get(&mask)) {
        return hit.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let mut rest = mask & !(1u64 << i);
    let mut acc = T::zero();
    let mut plus = true;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= !(1u64 << j);
        let a = entry(i, j);
        if !a.is_zero() {
            let sub = expand_mask(mask & !(1u64 << i) & !(1u64 << j), entry, memo);
            let term = a * sub;
            acc = if plus { acc + term } else { acc - term };
        }
        plus = !plus;
    }
    if let Some(h) = memo.as_mut() {
        h.insert(mask, acc.clone());
    }
    acc
}

/// Pfaffian of a skew matrix; odd size gives 0.
pub fn pfaffian(a: &SkewMatrix) -> Q {
    a.pfaffian()
}

/// A sorted set of indices in `[1, size]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(v: Vec<usize>) -> Result<Self> {
        if v.windows(2).any(|w| w[0] >= w[1]) || v.first() == Some(&0) {
            return Err(Error::InvalidTuple(format!("{v:?} is not a sorted set of positive indices")));
        }
        Ok(IndexSet(v))
    }

    pub fn from_unsorted(mut v: Vec<usize>) -> Result<Self> {
        v.sort_unstable();
        Self::new(v)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// `I Δ {i}`.
    pub fn toggle(&self, i: usize) -> IndexSet {
        let mut v = self.0.clone();
        match v.binary_search(&i) {
            Ok(p) => {
                v.remove(p);
            }
            Err(p) => v.insert(p, i),
        }
        IndexSet(v)
    }

    pub fn symmetric_difference(&self, other: &IndexSet) -> IndexSet {
        let mut v: Vec<usize> = self
            .0
            .iter()
            .filter(|i| !other.contains(**i))
            .chain(other.0.iter().filter(|i| !self.contains(**i)))
            .copied()
            .collect();
        v.sort_unstable();
        IndexSet(v)
    }

    /// All subsets of `[1, size]`, by bitmask.
    pub fn all_subsets(size: usize) -> impl Iterator<Item = IndexSet> {
        (0u64..1 << size).map(move |mask| IndexSet((1..=size).filter(|t| mask >> (t - 1) & 1 == 1).collect()))
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Vec<usize> {
        s.0
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `P(I) = Pf(A(I))`, with `P(∅) = 1` and `P(I) = 0` for odd `|I|`.
pub fn sub_pfaffian(a: &SkewMatrix, i: &IndexSet) -> Result<Q> {
    if let Some(&last) = i.as_slice().last() {
        if last > a.size() {
            return Err(Error::IndexOutOfRange { index: last, max: a.size() });
        }
    }
    Ok(a.pfaffian_on(i.as_slice()))
}

/// The canonical dual pair `(i(A), i(B))` of a tuple.
///
/// `i(A)` lists the mirrors of the entries above `4n+2` (ascending), `i(B)` is
/// the complement of the small entries in `[1, 4n+2]`.
pub fn dual_pair(t: &CosetTuple, rank: RankParam) -> (IndexSet, IndexSet) {
    let l = rank.rank();
    let mut a: Vec<usize> = t.entries().iter().filter(|&&x| x > l).map(|&x| rank.mirror(x)).collect();
    a.sort_unstable();
    let b: Vec<usize> = (1..=l).filter(|&j| !t.contains(j)).collect();
    (IndexSet(a), IndexSet(b))
}

/// The Pfaffian coordinate `q_i(A) = P(i(B))`.
pub fn q(t: &CosetTuple, a: &SkewMatrix, rank: RankParam) -> Result<Q> {
    if a.size() != rank.rank() {
        return Err(Error::SizeMismatch(a.size(), rank.rank()));
    }
    let (da, db) = dual_pair(t, rank);
    if da != db {
        return Err(Error::DualPairMismatch(format!("{t}: {da} vs {db}")));
    }
    sub_pfaffian(a, &db)
}

/// The `W^P`-type tuple whose coordinate is `P(I)`: the complement of `I`
/// followed by the mirrors of `I` in decreasing order of `I`.
pub fn tuple_of_subset(i: &IndexSet, rank: RankParam) -> CosetTuple {
    let l = rank.rank();
    let mut e: Vec<usize> = (1..=l).filter(|&j| !i.contains(j)).collect();
    e.extend(i.as_slice().iter().rev().map(|&x| rank.mirror(x)));
    CosetTuple::new(e).expect("complement then mirrors is increasing")
}

/// `Σ_τ (-1)^τ P(I1 Δ {i_τ}) P(I2 Δ {i_τ})` over the sorted `I1 Δ I2`.
///
/// Vanishes identically whenever `|I1|` and `|I2|` are odd.
pub fn exchange_residual(a: &SkewMatrix, i1: &IndexSet, i2: &IndexSet) -> Result<Q> {
    if i1.len() % 2 == 0 || i2.len() % 2 == 0 {
        return Err(Error::EvenCardinality(i1.len(), i2.len()));
    }
    let mut acc = Q::zero();
    for (tau, &i) in i1.symmetric_difference(i2).as_slice().iter().enumerate() {
        let term = sub_pfaffian(a, &i1.toggle(i))? * sub_pfaffian(a, &i2.toggle(i))?;
        // τ is 1-based in the identity
        if tau % 2 == 0 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

/// `|x|` for the entry bound checks in tests and reports.
pub fn max_abs_entry(a: &SkewMatrix) -> Q {
    a.entries.iter().map(Signed::abs).max().unwrap_or_else(Q::zero)
}

/// One failing instance of the exchange identity.
#[derive(Clone, Debug, Serialize)]
pub struct ExchangeFailure {
    pub matrix: usize,
    pub i1: IndexSet,
    pub i2: IndexSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm23Report {
    pub n: usize,
    pub seed: u64,
    /// `exhaustive` sweeps every pair of odd subsets; `random` draws triples.
    pub mode: &'static str,
    pub matrices: usize,
    pub instances: usize,
    pub status: Status,
    pub failures: Vec<ExchangeFailure>,
}

/// Matrices used by the exhaustive sweep.
pub const EXHAUSTIVE_MATRICES: usize = 5;
/// Random `(I1, I2, A)` triples drawn for `n >= 2`.
pub const RANDOM_TRIPLES: usize = 500;

/// Checks the exchange identity. For `n = 1` every pair of odd subsets of
/// `[1, 6]` is tried on [`EXHAUSTIVE_MATRICES`] random matrices; otherwise
/// [`RANDOM_TRIPLES`] random triples are drawn.
pub fn verify_thm23(rank: RankParam, seed: u64) -> Result<Thm23Report> {
    let size = rank.rank();
    let tree = SeedTree::new(seed);
    let mut failures = Vec::new();
    let mut instances = 0;
    let (mode, matrices) = if rank.n() == 1 {
        let odd: Vec<IndexSet> = IndexSet::all_subsets(size).filter(|s| s.len() % 2 == 1).collect();
        for m in 0..EXHAUSTIVE_MATRICES {
            let a = random_skew(size, &mut tree.stream(m as u64));
            for i1 in &odd {
                for i2 in &odd {
                    instances += 1;
                    if !exchange_residual(&a, i1, i2)?.is_zero() {
                        failures.push(ExchangeFailure { matrix: m, i1: i1.clone(), i2: i2.clone() });
                    }
                }
            }
        }
        ("exhaustive", EXHAUSTIVE_MATRICES)
    } else {
        let mut pick = tree.child(1).stream(0);
        let odd_subset = |rng: &mut ChaCha8Rng| loop {
            let v: Vec<usize> = (1..=size).filter(|_| rng.gen_bool(0.5)).collect();
            if v.len() % 2 == 1 {
                return IndexSet(v);
            }
        };
        for m in 0..RANDOM_TRIPLES {
            let a = random_skew(size, &mut tree.stream(m as u64));
            let i1 = odd_subset(&mut pick);
            let i2 = odd_subset(&mut pick);
            instances += 1;
            if !exchange_residual(&a, &i1, &i2)?.is_zero() {
                failures.push(ExchangeFailure { matrix: m, i1, i2 });
            }
        }
        ("random", RANDOM_TRIPLES)
    };
    Ok(Thm23Report {
        n: rank.n(),
        seed,
        mode,
        matrices,
        instances,
        status: Status::from_bool(failures.is_empty()),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn q_int(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    fn r(n: usize) -> RankParam {
        RankParam::new(n).unwrap()
    }

    #[test]
    fn two_by_two() {
        let m = SkewMatrix::from_upper(2, vec![q_int(7)]).unwrap();
        assert_eq!(m.pfaffian(), q_int(7));
    }

    #[test]
    fn four_by_four_formula() {
        let m = random_skew(4, &mut SeedTree::new(3).stream(0));
        let a = |i, j| m.entry(i, j).clone();
        let expected = a(1, 2) * a(3, 4) - a(1, 3) * a(2, 4) + a(1, 4) * a(2, 3);
        assert_eq!(m.pfaffian(), expected);
    }

    #[test]
    fn square_is_determinant() {
        let mut rng = SeedTree::new(11).stream(0);
        for size in [2, 4, 6, 8, 10] {
            let m = random_skew(size, &mut rng);
            let p = m.pfaffian();
            assert_eq!(&p * &p, linalg::det(&m.rows()), "size {size}");
        }
    }

    #[test]
    fn rational_entries() {
        let m = SkewMatrix::from_upper(
            4,
            vec![
                Q::new(1.into(), 2.into()),
                q_int(1),
                Q::new(2.into(), 3.into()),
                q_int(3),
                q_int(0),
                Q::new((-1).into(), 5.into()),
            ],
        )
        .unwrap();
        let p = m.pfaffian();
        assert_eq!(&p * &p, linalg::det(&m.rows()));
        assert_eq!(p, Q::new(1.into(), 2.into()) * Q::new((-1).into(), 5.into()) - q_int(0) + Q::new(2.into(), 3.into()) * q_int(3));
    }

    #[test]
    fn odd_and_empty() {
        let m = random_skew(6, &mut SeedTree::new(0).stream(1));
        assert_eq!(sub_pfaffian(&m, &IndexSet::empty()).unwrap(), q_int(1));
        assert_eq!(sub_pfaffian(&m, &set(&[2])).unwrap(), q_int(0));
        assert_eq!(sub_pfaffian(&m, &set(&[2, 5])).unwrap(), m.entry(2, 5).clone());
        assert!(sub_pfaffian(&m, &set(&[7])).is_err());
    }

    #[test]
    fn non_skew_rejected() {
        let rows = vec![vec![q_int(0), q_int(1)], vec![q_int(1), q_int(0)]];
        assert!(matches!(SkewMatrix::from_rows(rows), Err(Error::NotSkew(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = random_skew(6, &mut SeedTree::new(5).stream(0));
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("/1"));
        let back: SkewMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(parse_rational(" -3/6 ").unwrap(), Q::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn dual_pair_of_v1() {
        let t = CosetTuple::new(vec![2, 4, 7, 8, 10, 12]).unwrap();
        let (a, b) = dual_pair(&t, r(1));
        assert_eq!(a, set(&[1, 3, 5, 6]));
        assert_eq!(b, a);
        assert_eq!(tuple_of_subset(&b, r(1)), t);
    }

    #[test]
    fn identity_tuple_has_unit_coordinate() {
        let t = CosetTuple::new((1..=6).collect()).unwrap();
        let m = random_skew(6, &mut SeedTree::new(1).stream(0));
        assert_eq!(q(&t, &m, r(1)).unwrap(), q_int(1));
        assert_eq!(tuple_of_subset(&IndexSet::empty(), r(1)), t);
    }

    #[test]
    fn mismatched_dual_pair_rejected() {
        // 1 and its mirror 12 both present
        let t = CosetTuple::new(vec![1, 3, 5, 7, 9, 12]).unwrap();
        let m = SkewMatrix::zero(6);
        assert!(matches!(q(&t, &m, r(1)), Err(Error::DualPairMismatch(_))));
    }

    #[test]
    fn exchange_needs_odd_sets() {
        let m = SkewMatrix::zero(6);
        assert!(matches!(
            exchange_residual(&m, &set(&[1, 2]), &set(&[3])),
            Err(Error::EvenCardinality(2, 1))
        ));
        assert_eq!(exchange_residual(&m, &set(&[1]), &set(&[1])).unwrap(), q_int(0));
    }

    #[test]
    fn generic_expansion_over_integers() {
        // (0 1 2 / . 0 3 / ...) 4x4 with entries a_ij = i + j
        let v = pfaffian_expand::<BigInt, _>(4, |i, j| BigInt::from(i + j + 2));
        // a12 a34 - a13 a24 + a14 a23 with 1-based sums
        assert_eq!(v, BigInt::from(3 * 7 - 4 * 6 + 5 * 5));
    }

    #[test]
    fn thm23_sweeps() {
        let rep = verify_thm23(r(1), 7).unwrap();
        assert!(rep.status.passed());
        assert_eq!(rep.instances, 5 * 32 * 32);
        let rep = verify_thm23(r(2), 0).unwrap();
        assert!(rep.status.passed());
        assert_eq!(rep.instances, 500);
    }
}
