//! Weyl group of type `D_{4n+2}` realised inside `S_{8n+4}`.
//!
//! An element is stored in one-line notation `(a_1, ..., a_{8n+4})` with the
//! mirror condition `a_i = 8n+5 - a_{8n+5-i}` and an even number of
//! `i <= 4n+2` with `a_i > 4n+2`. Composition is `(w1 w2)(i) = w1(w2(i))`, and
//! `w` acts on characters by `ε_j ↦ ε_{a_j}` where `ε_m` for `m > 4n+2` means
//! `-ε_{8n+5-m}`. Under this convention `v_1` is the unique Bruhat-minimal
//! element of `W^P` with `v_1(λ) <= 0`.
//!
//! Minimal representatives of `W/W_P` are identified with their sorted first
//! half, a [`CosetTuple`]; the Bruhat order on `W^P` is componentwise.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{Error, Guard, Result, Q};

/// The rank parameter `n >= 1` of `SO(8n+4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct RankParam {
    n: usize,
}

impl RankParam {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRank);
        }
        Ok(RankParam { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// Rank of the root system, `4n+2`.
    pub fn rank(self) -> usize {
        4 * self.n + 2
    }

    /// Size of the permutation domain, `8n+4`.
    pub fn ambient(self) -> usize {
        8 * self.n + 4
    }

    /// `t ↦ 8n+5-t`.
    pub fn mirror(self, t: usize) -> usize {
        self.ambient() + 1 - t
    }
}

impl TryFrom<usize> for RankParam {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        RankParam::new(n)
    }
}

impl From<RankParam> for usize {
    fn from(p: RankParam) -> usize {
        p.n
    }
}

/// Strictly increasing tuple of indices in `[1, 8n+4]`.
///
/// Rows of tableaux and Schubert-variety labels are both `CosetTuple`s. The
/// derived `Ord` is lexicographic, which is a linear extension of the
/// componentwise (Bruhat) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CosetTuple {
    entries: Vec<usize>,
}

impl CosetTuple {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTuple(format!("{entries:?} is not strictly increasing")));
        }
        if entries.first() == Some(&0) {
            return Err(Error::InvalidTuple("entries start at 1".into()));
        }
        Ok(CosetTuple { entries })
    }

    /// Sorts and deduplicates-checks arbitrary entries.
    pub fn from_unsorted(mut entries: Vec<usize>) -> Result<Self> {
        entries.sort_unstable();
        Self::new(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, t: usize) -> bool {
        self.entries.binary_search(&t).is_ok()
    }

    /// Number of entries greater than `4n+2`.
    pub fn large_count(&self, rank: RankParam) -> usize {
        self.entries.iter().filter(|&&a| a > rank.rank()).count()
    }

    /// Membership in `W^P`: length `4n+2`, entries in range, mirror-free, and an
    /// even number of entries above `4n+2`.
    pub fn is_wp(&self, rank: RankParam) -> bool {
        self.entries.len() == rank.rank()
            && self.entries.last().is_none_or(|&a| a <= rank.ambient())
            && self.entries.iter().all(|&a| !self.contains(rank.mirror(a)))
            && self.large_count(rank) % 2 == 0
    }

    /// Componentwise order.
    pub fn leq(&self, other: &CosetTuple) -> bool {
        bruhat_leq(self, other)
    }

    /// The minimal coset representative with this first half.
    pub fn to_element(&self, rank: RankParam) -> Result<WeylElement> {
        if !self.is_wp(rank) {
            return Err(Error::InvalidTuple(format!("{self} is not in W^P")));
        }
        let big = rank.ambient();
        let mut a = vec![0; big];
        for (i, &x) in self.entries.iter().enumerate() {
            a[i] = x;
            a[big - 1 - i] = rank.mirror(x);
        }
        WeylElement::from_one_line(rank, a)
    }
}

impl TryFrom<Vec<usize>> for CosetTuple {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        CosetTuple::new(v)
    }
}

impl From<CosetTuple> for Vec<usize> {
    fn from(t: CosetTuple) -> Vec<usize> {
        t.entries
    }
}

impl fmt::Display for CosetTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Componentwise comparison; tuples of different length are incomparable.
pub fn bruhat_leq(x: &CosetTuple, y: &CosetTuple) -> bool {
    x.len() == y.len() && x.entries.iter().zip(&y.entries).all(|(a, b)| a <= b)
}

/// A type-D Weyl group element in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    rank: RankParam,
    one_line: Vec<usize>,
}

impl WeylElement {
    pub fn identity(rank: RankParam) -> Self {
        WeylElement {
            rank,
            one_line: (1..=rank.ambient()).collect(),
        }
    }

    pub fn from_one_line(rank: RankParam, one_line: Vec<usize>) -> Result<Self> {
        let big = rank.ambient();
        if one_line.len() != big {
            return Err(Error::SizeMismatch(one_line.len(), big));
        }
        let mut seen = vec![false; big + 1];
        for &a in &one_line {
            if a == 0 || a > big || std::mem::replace(&mut seen[a], true) {
                return Err(Error::InvalidWeylElement(format!("{one_line:?} is not a permutation")));
            }
        }
        for i in 1..=big {
            if one_line[i - 1] != rank.mirror(one_line[rank.mirror(i) - 1]) {
                return Err(Error::InvalidWeylElement(format!("mirror condition fails at position {i}")));
            }
        }
        let w = WeylElement { rank, one_line };
        if w.mirror_count() % 2 != 0 {
            return Err(Error::InvalidWeylElement("odd number of sign changes".into()));
        }
        Ok(w)
    }

    /// `s_i` for the simple root `α_i`; `α_{4n+2} = ε_{4n+1} + ε_{4n+2}`.
    pub fn simple_reflection(i: usize, rank: RankParam) -> Result<Self> {
        let l = rank.rank();
        if i == 0 || i > l {
            return Err(Error::IndexOutOfRange { index: i, max: l });
        }
        let mut a: Vec<usize> = (1..=rank.ambient()).collect();
        let mut swap = |x: usize, y: usize| a.swap(x - 1, y - 1);
        if i < l {
            swap(i, i + 1);
            swap(rank.mirror(i), rank.mirror(i + 1));
        } else {
            swap(l - 1, l + 1);
            swap(l, l + 2);
        }
        Ok(WeylElement { rank, one_line: a })
    }

    /// Product of simple reflections, left to right.
    pub fn from_word(word: &[usize], rank: RankParam) -> Result<Self> {
        word.iter().try_fold(Self::identity(rank), |acc, &i| {
            acc.multiply(&Self::simple_reflection(i, rank)?)
        })
    }

    pub fn rank(&self) -> RankParam {
        self.rank
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    /// `m_w`: how many of the first `4n+2` entries exceed `4n+2`.
    pub fn mirror_count(&self) -> usize {
        let l = self.rank.rank();
        self.one_line[..l].iter().filter(|&&a| a > l).count()
    }

    pub fn multiply(&self, other: &WeylElement) -> Result<WeylElement> {
        if self.rank != other.rank {
            return Err(Error::SizeMismatch(self.one_line.len(), other.one_line.len()));
        }
        let one_line = other.one_line.iter().map(|&j| self.one_line[j - 1]).collect();
        let w = WeylElement { rank: self.rank, one_line };
        debug_assert!(w.mirror_count() % 2 == 0);
        Ok(w)
    }

    pub fn inverse(&self) -> WeylElement {
        let mut inv = vec![0; self.one_line.len()];
        for (i, &a) in self.one_line.iter().enumerate() {
            inv[a - 1] = i + 1;
        }
        WeylElement {
            rank: self.rank,
            one_line: inv,
        }
    }

    /// Minimal representative of `w W_P`: the sorted first half.
    pub fn coset_rep(&self) -> CosetTuple {
        let mut first: Vec<usize> = self.one_line[..self.rank.rank()].to_vec();
        first.sort_unstable();
        CosetTuple { entries: first }
    }

    pub fn act_on_weight(&self, mu: &Weight) -> Weight {
        let rank = self.rank;
        let l = rank.rank();
        let mut out = vec![Q::zero(); l];
        for (j, c) in mu.coords.iter().enumerate() {
            let m = self.one_line[j];
            if m <= l {
                out[m - 1] += c;
            } else {
                out[rank.mirror(m) - 1] -= c;
            }
        }
        Weight { coords: out }
    }
}

/// A character of the maximal torus in `ε`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<Q>,
}

impl Weight {
    pub fn zero(rank: RankParam) -> Self {
        Weight {
            coords: vec![Q::zero(); rank.rank()],
        }
    }

    pub fn epsilon(i: usize, rank: RankParam) -> Self {
        let mut w = Self::zero(rank);
        w.coords[i - 1] = Q::one();
        w
    }

    /// `λ = ϖ_{4n+2} = ½(ε_1 + ... + ε_{4n+2})`.
    pub fn spin_weight(rank: RankParam) -> Self {
        Weight {
            coords: vec![Q::new(1.into(), 2.into()); rank.rank()],
        }
    }

    pub fn simple_root(i: usize, rank: RankParam) -> Result<Self> {
        let l = rank.rank();
        if i == 0 || i > l {
            return Err(Error::IndexOutOfRange { index: i, max: l });
        }
        let mut w = Self::zero(rank);
        if i < l {
            w.coords[i - 1] = Q::one();
            w.coords[i] = -Q::one();
        } else {
            w.coords[l - 2] = Q::one();
            w.coords[l - 1] = Q::one();
        }
        Ok(w)
    }

    /// Coefficients `c` with `μ = Σ c_i α_i`.
    pub fn simple_root_coefficients(&self) -> Vec<Q> {
        let l = self.coords.len();
        let rank = RankParam::new((l - 2) / 4).expect("weight of a valid rank");
        let roots: Vec<Weight> = (1..=l)
            .map(|i| Weight::simple_root(i, rank).expect("index in range"))
            .collect();
        let a: Vec<Vec<Q>> = (0..l)
            .map(|row| roots.iter().map(|r| r.coords[row].clone()).collect())
            .collect();
        linalg::solve(&a, &self.coords).expect("simple roots form a basis")
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight {
            coords: self.coords.into_iter().zip(rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        self + (-rhs)
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight {
            coords: self.coords.into_iter().map(|a| -a).collect(),
        }
    }
}

/// `μ <= 0`: every simple-root coefficient is non-positive.
pub fn is_nonpositive_combination(mu: &Weight) -> bool {
    linalg::all_nonpositive(&mu.simple_root_coefficients())
}

/// All of `W^P`, sorted lexicographically. There are `2^{4n+1}` of them.
pub fn enumerate_wp(rank: RankParam, guard: &Guard) -> Result<Vec<CosetTuple>> {
    guard.check_n(rank.n())?;
    let l = rank.rank();
    let mut out = Vec::with_capacity(1 << (l - 1));
    for mask in 0u64..(1u64 << l) {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let mut e: Vec<usize> = (1..=l)
            .map(|t| if mask >> (t - 1) & 1 == 1 { rank.mirror(t) } else { t })
            .collect();
        e.sort_unstable();
        out.push(CosetTuple { entries: e });
    }
    out.sort();
    Ok(out)
}

/// `w(λ) <= 0` for the minimal representative `w` labelled by `t`.
pub fn is_semistable(t: &CosetTuple, rank: RankParam) -> Result<bool> {
    let w = t.to_element(rank)?;
    Ok(is_nonpositive_combination(&w.act_on_weight(&Weight::spin_weight(rank))))
}

/// The unique Bruhat-minimal `w ∈ W^P` with `w(λ) <= 0`.
pub fn minimal_semistable(rank: RankParam, guard: &Guard) -> Result<CosetTuple> {
    let mut candidates = Vec::new();
    for t in enumerate_wp(rank, guard)? {
        if is_semistable(&t, rank)? {
            candidates.push(t);
        }
    }
    let minimal: Vec<&CosetTuple> = candidates
        .iter()
        .filter(|t| !candidates.iter().any(|u| u != *t && u.leq(t)))
        .collect();
    match minimal.as_slice() {
        [only] => Ok((*only).clone()),
        _ => Err(Error::NonUniqueMinimum(minimal.len())),
    }
}

/// Reduced word for `v_i`, `1 <= i <= 6`.
///
/// `v_1 = s_{4n+2} τ_{4n-1} ... τ_3 τ_1` with
/// `τ_{2i-1} = s_{2i-1} ... s_{4n} s_{4n+1}` for even `i` and
/// `τ_{2i-1} = s_{2i-1} ... s_{4n} s_{4n+2}` for odd `i`; the others prepend
/// reflections along the sublattice `v_1 → v_2, v_3 → v_4, v_5 → v_6`.
pub fn v_word(which: usize, rank: RankParam) -> Result<Vec<usize>> {
    let n = rank.n();
    let mut v1 = vec![rank.rank()];
    for i in (1..=2 * n).rev() {
        v1.extend(2 * i - 1..=4 * n);
        v1.push(if i % 2 == 0 { 4 * n + 1 } else { 4 * n + 2 });
    }
    let prefix: Vec<usize> = match which {
        1 => vec![],
        2 => vec![4 * n - 2],
        3 => vec![4 * n],
        4 => vec![4 * n - 2, 4 * n],
        5 => vec![4 * n + 1, 4 * n],
        6 => vec![4 * n - 2, 4 * n + 1, 4 * n],
        _ => return Err(Error::IndexOutOfRange { index: which, max: 6 }),
    };
    Ok(prefix.into_iter().chain(v1).collect())
}

/// `v_i` as a `W^P` tuple.
pub fn v_tuple(which: usize, rank: RankParam) -> Result<CosetTuple> {
    Ok(WeylElement::from_word(&v_word(which, rank)?, rank)?.coset_rep())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: usize) -> RankParam {
        RankParam::new(n).unwrap()
    }

    fn t(v: &[usize]) -> CosetTuple {
        CosetTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rank_zero_rejected() {
        assert!(RankParam::new(0).is_err());
    }

    #[test]
    fn s1_one_line() {
        let s1 = WeylElement::simple_reflection(1, r(1)).unwrap();
        assert_eq!(s1.one_line(), &[2, 1, 3, 4, 5, 6, 7, 8, 9, 10, 12, 11]);
    }

    #[test]
    fn spin_node_reflection_swaps_with_sign() {
        let s6 = WeylElement::simple_reflection(6, r(1)).unwrap();
        // ε5 ↦ -ε6 and ε6 ↦ -ε5
        assert_eq!(s6.one_line(), &[1, 2, 3, 4, 7, 8, 5, 6, 9, 10, 11, 12]);
        assert_eq!(s6.mirror_count(), 2);
    }

    #[test]
    fn simple_reflections_are_involutions() {
        for n in 1..=2 {
            for i in 1..=r(n).rank() {
                let s = WeylElement::simple_reflection(i, r(n)).unwrap();
                assert_eq!(s.multiply(&s).unwrap(), WeylElement::identity(r(n)));
            }
        }
    }

    #[test]
    fn reflection_index_out_of_range() {
        assert!(matches!(
            WeylElement::simple_reflection(7, r(1)),
            Err(Error::IndexOutOfRange { index: 7, max: 6 })
        ));
        assert!(WeylElement::simple_reflection(0, r(1)).is_err());
        assert!(WeylElement::from_word(&[1, 9], r(1)).is_err());
    }

    #[test]
    fn multiply_rejects_rank_mismatch() {
        let a = WeylElement::identity(r(1));
        let b = WeylElement::identity(r(2));
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn invalid_one_line_rejected() {
        let mut a: Vec<usize> = (1..=12).collect();
        a.swap(0, 1);
        // mirror partner not swapped
        assert!(WeylElement::from_one_line(r(1), a).is_err());
        // odd sign change: swap 6 and 7
        let mut b: Vec<usize> = (1..=12).collect();
        b.swap(5, 6);
        assert!(WeylElement::from_one_line(r(1), b).is_err());
    }

    #[test]
    fn empty_word_is_identity() {
        assert_eq!(WeylElement::from_word(&[], r(2)).unwrap(), WeylElement::identity(r(2)));
        assert_eq!(WeylElement::identity(r(1)).coset_rep(), t(&[1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn v1_word_at_n1() {
        assert_eq!(v_word(1, r(1)).unwrap(), vec![6, 3, 4, 5, 1, 2, 3, 4, 6]);
        let v1 = WeylElement::from_word(&v_word(1, r(1)).unwrap(), r(1)).unwrap();
        assert_eq!(&v1.one_line()[..6], &[2, 4, 7, 8, 10, 12]);
    }

    #[test]
    fn coset_rep_of_v5() {
        assert_eq!(v_tuple(5, r(1)).unwrap(), t(&[2, 6, 8, 9, 10, 12]));
    }

    #[test]
    fn identity_fixes_spin_weight() {
        let lam = Weight::spin_weight(r(1));
        assert_eq!(WeylElement::identity(r(1)).act_on_weight(&lam), lam);
    }

    #[test]
    fn spin_reflection_on_lambda() {
        let lam = Weight::spin_weight(r(1));
        let s6 = WeylElement::simple_reflection(6, r(1)).unwrap();
        let half = Q::new(1.into(), 2.into());
        let mut expected = vec![half.clone(); 6];
        expected[4] = -half.clone();
        expected[5] = -half;
        assert_eq!(s6.act_on_weight(&lam).coords, expected);
        assert_eq!(lam - s6.act_on_weight(&Weight::spin_weight(r(1))), Weight::simple_root(6, r(1)).unwrap());
    }

    #[test]
    fn nonpositive_basics() {
        let rank = r(1);
        assert!(is_nonpositive_combination(&Weight::zero(rank)));
        let a1 = Weight::simple_root(1, rank).unwrap();
        assert!(is_nonpositive_combination(&-a1.clone()));
        assert!(!is_nonpositive_combination(&a1));
    }

    #[test]
    fn guard_refuses_large_n() {
        assert!(matches!(enumerate_wp(r(5), &Guard::default()), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn to_element_round_trip() {
        for x in enumerate_wp(r(1), &Guard::default()).unwrap() {
            assert_eq!(x.to_element(r(1)).unwrap().coset_rep(), x);
        }
        assert!(t(&[1, 2, 3, 4, 5, 7]).to_element(r(1)).is_err());
    }
}
