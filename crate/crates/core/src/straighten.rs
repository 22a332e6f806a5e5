//! Formal products of Pfaffian coordinates and their straightening.
//!
//! A product `q_{r_1} ... q_{r_m}` is stored as its sorted row list. It is
//! standard when the rows form a chain. An incomparable pair `q_x q_y` is
//! rewritten as a combination of standard pairs using the exchange identity
//! for sub-Pfaffians. Every exchange relation preserves the content (the
//! multiset of entries), so all relations among pairs of one content are
//! collected and solved at once, eliminating nonstandard pairs first. Since
//! standard monomials are linearly independent, the result is the unique
//! standard expansion; it is cached per content class.
//!
//! Rows are ordered lexicographically, which refines the Bruhat order.
//! Every expansion has its smaller row strictly below both inputs, so each
//! rewrite makes the sorted row list lexicographically smaller and
//! [`Straightener::normal_form`] terminates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::linalg::SparseEliminator;
use crate::pfaffian::{self, dual_pair, pfaffian_expand, tuple_of_subset, SkewMatrix};
use crate::poly::Poly;
use crate::rng::{random_skew, SeedTree};
use crate::tableau::{CompressedRow, Tableau};
use crate::weyl::{v_tuple, CosetTuple, RankParam};
use crate::{Error, Guard, Result, Status, Q};

/// A single product of coordinates with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QMonomial {
    pub rows: Vec<CosetTuple>,
    #[serde(serialize_with = "ser_q")]
    pub coefficient: Q,
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl QMonomial {
    pub fn new(mut rows: Vec<CosetTuple>, coefficient: Q) -> Self {
        rows.sort();
        QMonomial { rows, coefficient }
    }

    pub fn is_standard(&self) -> bool {
        is_standard_monomial(&self.rows)
    }
}

/// Formal linear combination of products of coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QPolynomial {
    terms: BTreeMap<Vec<CosetTuple>, Q>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), Q::one())
    }

    pub fn monomial(mut rows: Vec<CosetTuple>, c: Q) -> Self {
        rows.sort();
        let mut p = Self::zero();
        p.add_term(rows, c);
        p
    }

    pub fn from_tableau(t: &Tableau) -> Self {
        Self::monomial(t.rows().to_vec(), Q::one())
    }

    /// Adds `c` times the (already sorted) row list.
    pub fn add_term(&mut self, rows: Vec<CosetTuple>, c: Q) {
        debug_assert!(rows.windows(2).all(|w| w[0] <= w[1]));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(rows) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<CosetTuple>, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, rows: &[CosetTuple]) -> Q {
        let mut key = rows.to_vec();
        key.sort();
        self.terms.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn monomials(&self) -> Vec<QMonomial> {
        self.terms
            .iter()
            .map(|(r, c)| QMonomial {
                rows: r.clone(),
                coefficient: c.clone(),
            })
            .collect()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for (r, d) in &self.terms {
            out.add_term(r.clone(), d * c);
        }
        out
    }

    pub fn is_standard(&self) -> bool {
        self.terms.keys().all(|r| is_standard_monomial(r))
    }

    /// Value on a point of the big cell.
    pub fn eval(&self, rank: RankParam, a: &SkewMatrix) -> Result<Q> {
        let mut cache: HashMap<CosetTuple, Q> = HashMap::new();
        let mut total = Q::zero();
        for (rows, c) in &self.terms {
            let mut term = c.clone();
            for r in rows {
                if !cache.contains_key(r) {
                    cache.insert(r.clone(), pfaffian::q(r, a, rank)?);
                }
                term *= &cache[r];
            }
            total += term;
        }
        Ok(total)
    }

    /// Value on the generic skew matrix whose strict upper triangle is the
    /// list of variables `z_0, z_1, ...` (row by row).
    pub fn eval_symbolic(&self, rank: RankParam) -> Result<Poly> {
        let l = rank.rank();
        let var = |i: usize, j: usize| {
            // 0-based i < j
            i * l - i * (i + 1) / 2 + (j - i - 1)
        };
        let mut cache: HashMap<CosetTuple, Poly> = HashMap::new();
        let mut total = Poly::zero();
        for (rows, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for r in rows {
                let value = cache.entry(r.clone()).or_insert_with(|| {
                    let (_, b) = dual_pair(r, rank);
                    let idx: Vec<usize> = b.as_slice().iter().map(|&x| x - 1).collect();
                    pfaffian_expand(idx.len(), |p, q| Poly::var(var(idx[p], idx[q])))
                });
                term = &term * value;
            }
            total = total + term;
        }
        Ok(total)
    }
}

impl Add for QPolynomial {
    type Output = QPolynomial;
    fn add(mut self, rhs: QPolynomial) -> QPolynomial {
        for (r, c) in rhs.terms {
            self.add_term(r, c);
        }
        self
    }
}

impl Neg for QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        self.scale(&-Q::one())
    }
}

impl Sub for QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: QPolynomial) -> QPolynomial {
        self + (-rhs)
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = QPolynomial::zero();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &rhs.terms {
                let mut rows = r1.clone();
                rows.extend(r2.iter().cloned());
                rows.sort();
                out.add_term(rows, c1 * c2);
            }
        }
        out
    }
}

impl Mul for QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: QPolynomial) -> QPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (rows, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for r in rows {
                write!(f, "q{r}")?;
            }
        }
        Ok(())
    }
}

/// The rows form a chain under the componentwise order.
pub fn is_standard_monomial(rows: &[CosetTuple]) -> bool {
    let mut sorted = rows.to_vec();
    sorted.sort();
    sorted.windows(2).all(|w| w[0].leq(&w[1]))
}

/// The twelve generators of the invariant ring on `X(v_6)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    X1,
    X2,
    X3,
    X4,
    X5,
    X6,
    Y1,
    Y2,
    Y3,
    Y4,
    Z1,
    Z2,
}

impl Generator {
    pub const ALL: [Generator; 12] = [
        Generator::X1,
        Generator::X2,
        Generator::X3,
        Generator::X4,
        Generator::X5,
        Generator::X6,
        Generator::Y1,
        Generator::Y2,
        Generator::Y3,
        Generator::Y4,
        Generator::Z1,
        Generator::Z2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::X1 => "X1",
            Generator::X2 => "X2",
            Generator::X3 => "X3",
            Generator::X4 => "X4",
            Generator::X5 => "X5",
            Generator::X6 => "X6",
            Generator::Y1 => "Y1",
            Generator::Y2 => "Y2",
            Generator::Y3 => "Y3",
            Generator::Y4 => "Y4",
            Generator::Z1 => "Z1",
            Generator::Z2 => "Z2",
        }
    }

    /// Degree in the `2λ` grading (half the number of rows).
    pub fn degree(self) -> usize {
        match self {
            Generator::X1 | Generator::X2 | Generator::X3 | Generator::X4 | Generator::X5 | Generator::X6 => 1,
            Generator::Y1 | Generator::Y2 | Generator::Y3 | Generator::Y4 => 2,
            Generator::Z1 | Generator::Z2 => 3,
        }
    }

    /// Small parts of the rows. `odd = (1, 3, ..., 4n-3)` and
    /// `even = (2, 4, ..., 4n-4)` are shared prefixes; the tails below are
    /// offsets from `4n`.
    pub fn compressed(self, rank: RankParam) -> Vec<CompressedRow> {
        let m = 4 * rank.n();
        let odd: Vec<usize> = (1..=m - 3).step_by(2).collect();
        let even: Vec<usize> = (2..=m.saturating_sub(4)).step_by(2).collect();
        // tail offsets relative to 4n: -2 -> 4n-2, ..., 2 -> 4n+2
        let o = |tail: &[i64]| row(&odd, m, tail);
        let e = |tail: &[i64]| row(&even, m, tail);
        match self {
            Generator::X1 => vec![o(&[-1, 1, 2]), e(&[-2, 0])],
            Generator::X2 => vec![o(&[-2, 1, 2]), e(&[-1, 0])],
            Generator::X3 => vec![o(&[-1, 0, 2]), e(&[-2, 1])],
            Generator::X4 => vec![o(&[-2, 0, 2]), e(&[-1, 1])],
            Generator::X5 => vec![o(&[-1, 0, 1]), e(&[-2, 2])],
            Generator::X6 => vec![o(&[-2, 0, 1]), e(&[-1, 2])],
            Generator::Y1 => vec![o(&[-2, -1, 2]), o(&[0, 1, 2]), e(&[-2, 0]), e(&[-1, 1])],
            Generator::Y2 => vec![o(&[-2, -1, 1]), o(&[0, 1, 2]), e(&[-2, 0]), e(&[-1, 2])],
            Generator::Y3 => vec![o(&[-2, -1, 0, 1, 2]), o(&[0]), e(&[-2, 1]), e(&[-1, 2])],
            Generator::Y4 => vec![o(&[-2, -1, 0]), o(&[0, 1, 2]), e(&[-2, 1]), e(&[-1, 2])],
            Generator::Z1 => vec![
                o(&[-2, -1, 0]),
                o(&[-2, 1, 2]),
                o(&[0, 1, 2]),
                e(&[-2, 0]),
                e(&[-1, 1]),
                e(&[-1, 2]),
            ],
            Generator::Z2 => vec![
                o(&[-2, -1, 0, 1, 2]),
                o(&[-2, 1, 2]),
                o(&[0]),
                e(&[-2, 0]),
                e(&[-1, 1]),
                e(&[-1, 2]),
            ],
        }
    }

    /// The generator as a tableau, rows sorted into a chain.
    pub fn tableau(self, rank: RankParam) -> Tableau {
        Tableau::from_compressed(rank, &self.compressed(rank))
            .expect("generator rows are valid")
            .sorted()
    }

    pub fn poly(self, rank: RankParam) -> QPolynomial {
        QPolynomial::from_tableau(&self.tableau(rank))
    }
}

fn row(prefix: &[usize], m: usize, tail: &[i64]) -> CompressedRow {
    let mut v = prefix.to_vec();
    v.extend(tail.iter().map(|&d| (m as i64 + d) as usize));
    CompressedRow::new(v).expect("generator row is increasing and even")
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Generator tableau by name.
pub fn generator(name: &str, rank: RankParam) -> Result<Tableau> {
    Ok(name.parse::<Generator>()?.tableau(rank))
}

/// The single exchange relation obtained by moving `a ∈ B(x) Δ B(y)` across:
/// `Σ_τ (-1)^τ q(I1 Δ i_τ) q(I2 Δ i_τ) = 0` with `I1 = B(x) Δ {a}`,
/// `I2 = B(y) Δ {a}`. The term for `i_τ = a` is `± q_x q_y` itself.
pub fn exchange_relation(x: &CosetTuple, y: &CosetTuple, a: usize, rank: RankParam) -> Result<QPolynomial> {
    let (_, bx) = dual_pair(x, rank);
    let (_, by) = dual_pair(y, rank);
    if bx.contains(a) == by.contains(a) {
        return Err(Error::Straightening(format!("{a} is not in B({x}) Δ B({y})")));
    }
    let (i1, i2) = (bx.toggle(a), by.toggle(a));
    let mut rel = QPolynomial::zero();
    for (tau, &i) in i1.symmetric_difference(&i2).as_slice().iter().enumerate() {
        let r1 = tuple_of_subset(&i1.toggle(i), rank);
        let r2 = tuple_of_subset(&i2.toggle(i), rank);
        let sign = if tau % 2 == 0 { -Q::one() } else { Q::one() };
        let mut rows = vec![r1, r2];
        rows.sort();
        rel.add_term(rows, sign);
    }
    Ok(rel)
}

/// How [`Straightener::normal_form`] picks the pair to rewrite.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// First incomparable adjacent pair in the sorted row list.
    #[default]
    First,
    /// Last incomparable adjacent pair.
    Last,
}

#[derive(Clone, Debug)]
pub struct NormalFormOptions {
    pub strategy: Strategy,
    /// Drop monomials with a row not below this tuple as soon as they appear.
    pub bound: Option<CosetTuple>,
    /// Longest allowed chain of successive rewrites starting from one input
    /// monomial.
    pub step_cap: usize,
}

impl Default for NormalFormOptions {
    fn default() -> Self {
        NormalFormOptions {
            strategy: Strategy::First,
            bound: None,
            step_cap: 10_000,
        }
    }
}

/// Result of a bounded normal form: the kept part and what was dropped.
#[derive(Clone, Debug, Default)]
pub struct NormalForm {
    pub poly: QPolynomial,
    pub dropped: Vec<QMonomial>,
    /// Total number of pair rewrites performed.
    pub steps: usize,
    /// Distinct incomparable pairs that were straightened.
    pub laws: BTreeSet<Pair>,
}

/// An unordered pair of rows, stored smaller first.
pub type Pair = (CosetTuple, CosetTuple);

/// Straightening engine with a per-class cache of pair expansions.
#[derive(Clone, Debug)]
pub struct Straightener {
    rank: RankParam,
    cache: HashMap<Pair, Vec<(Pair, Q)>>,
}

impl Straightener {
    pub fn new(rank: RankParam) -> Self {
        Straightener {
            rank,
            cache: HashMap::new(),
        }
    }

    pub fn rank(&self) -> RankParam {
        self.rank
    }

    /// `q_x q_y` as a combination of standard pairs.
    pub fn straighten_pair(&mut self, x: &CosetTuple, y: &CosetTuple) -> Result<QPolynomial> {
        for r in [x, y] {
            if !r.is_wp(self.rank) {
                return Err(Error::InvalidTuple(format!("{r} is not a W^P row")));
            }
        }
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        if x.leq(y) {
            return Ok(QPolynomial::monomial(vec![x.clone(), y.clone()], Q::one()));
        }
        let key = (x.clone(), y.clone());
        if !self.cache.contains_key(&key) {
            self.solve_class(x, y)?;
        }
        let mut out = QPolynomial::zero();
        for ((a, b), c) in &self.cache[&key] {
            out.add_term(vec![a.clone(), b.clone()], c.clone());
        }
        Ok(out)
    }

    fn solve_class(&mut self, x: &CosetTuple, y: &CosetTuple) -> Result<()> {
        let rank = self.rank;
        let pairs = class_pairs(x, y, rank);
        let (nonstd, std): (Vec<&Pair>, Vec<&Pair>) = pairs.iter().partition(|(a, b)| !a.leq(b));
        let order: Vec<&Pair> = nonstd.iter().chain(std.iter()).copied().collect();
        let col: HashMap<&Pair, usize> = order.iter().enumerate().map(|(i, p)| (*p, i)).collect();

        let mut elim = SparseEliminator::new();
        for (a, b) in &pairs {
            let (_, ba) = dual_pair(a, rank);
            let (_, bb) = dual_pair(b, rank);
            for &t in ba.symmetric_difference(&bb).as_slice() {
                let rel = exchange_relation(a, b, t, rank)?;
                let mut row = BTreeMap::new();
                for (rows, c) in rel.terms() {
                    let key = (rows[0].clone(), rows[1].clone());
                    let j = *col
                        .get(&key)
                        .ok_or_else(|| Error::Straightening(format!("relation leaves the class of {x}, {y}")))?;
                    row.insert(j, c.clone());
                }
                elim.insert(row);
            }
        }

        for (i, p) in nonstd.iter().enumerate() {
            let row = elim
                .pivot_row(i)
                .ok_or_else(|| Error::Straightening(format!("no relation isolates q{}q{}", p.0, p.1)))?;
            let mut expansion = Vec::new();
            for (&j, c) in row {
                if j == i {
                    continue;
                }
                if j < nonstd.len() {
                    return Err(Error::Straightening(format!(
                        "q{}q{} is not determined modulo standard pairs",
                        p.0, p.1
                    )));
                }
                let (a, b) = order[j];
                // standard monomial theory: the smaller row lies strictly below both inputs
                if !(a < &p.0) {
                    return Err(Error::Straightening(format!(
                        "expansion of q{}q{} contains q{a}q{b}, which does not decrease",
                        p.0, p.1
                    )));
                }
                expansion.push(((a.clone(), b.clone()), -c.clone()));
            }
            self.cache.insert((*p).clone(), expansion);
        }
        Ok(())
    }

    /// Fully straightened form of `p`.
    pub fn normal_form(&mut self, p: &QPolynomial) -> Result<QPolynomial> {
        Ok(self.normal_form_with(p, &NormalFormOptions::default())?.poly)
    }

    pub fn normal_form_with(&mut self, p: &QPolynomial, opts: &NormalFormOptions) -> Result<NormalForm> {
        let mut out = NormalForm::default();
        // coefficient and derivation depth of each pending monomial
        let mut work: BTreeMap<Vec<CosetTuple>, (Q, usize)> = BTreeMap::new();
        let keep = |rows: &Vec<CosetTuple>| opts.bound.as_ref().is_none_or(|v| rows.iter().all(|r| r.leq(v)));
        for (rows, c) in p.terms() {
            if keep(rows) {
                work.insert(rows.clone(), (c.clone(), 0));
            } else {
                out.dropped.push(QMonomial::new(rows.clone(), c.clone()));
            }
        }
        while let Some((rows, (c, depth))) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            let mut bad = (0..rows.len().saturating_sub(1)).filter(|&i| !rows[i].leq(&rows[i + 1]));
            let pick = match opts.strategy {
                Strategy::First => bad.next(),
                Strategy::Last => bad.next_back(),
            };
            let Some(i) = pick else {
                out.poly.add_term(rows, c);
                continue;
            };
            out.steps += 1;
            if depth >= opts.step_cap {
                return Err(Error::Straightening(format!("rewrite depth cap {} exceeded", opts.step_cap)));
            }
            let exp = self.straighten_pair(&rows[i], &rows[i + 1])?;
            out.laws.insert((rows[i].clone(), rows[i + 1].clone()));
            for (pair, d) in exp.terms() {
                let mut next: Vec<CosetTuple> = rows[..i].iter().chain(&rows[i + 2..]).cloned().collect();
                next.extend(pair.iter().cloned());
                next.sort();
                debug_assert!(next < rows);
                let coeff = &c * d;
                if keep(&next) {
                    let e = work.entry(next).or_insert_with(|| (Q::zero(), 0));
                    e.0 += coeff;
                    e.1 = e.1.max(depth + 1);
                } else {
                    out.dropped.push(QMonomial::new(next, coeff));
                }
            }
        }
        Ok(out)
    }
}

/// All unordered pairs of `W^P` rows with the same content as `(x, y)`, each
/// as `(smaller, larger)` in lexicographic order.
fn class_pairs(x: &CosetTuple, y: &CosetTuple, rank: RankParam) -> Vec<Pair> {
    let l = rank.rank();
    let mut both = Vec::new();
    let mut free = Vec::new();
    for t in 1..=l {
        match (x.contains(t) as u8) + (y.contains(t) as u8) {
            2 => both.push(t),
            0 => both.push(rank.mirror(t)),
            _ => free.push(t),
        }
    }
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut r1 = both.clone();
        let mut r2 = both.clone();
        for (b, &t) in free.iter().enumerate() {
            if mask >> b & 1 == 1 {
                r1.push(t);
                r2.push(rank.mirror(t));
            } else {
                r1.push(rank.mirror(t));
                r2.push(t);
            }
        }
        let r1 = CosetTuple::from_unsorted(r1).expect("distinct entries");
        let r2 = CosetTuple::from_unsorted(r2).expect("distinct entries");
        if r1.is_wp(rank) && r2.is_wp(rank) {
            out.insert(if r1 <= r2 { (r1, r2) } else { (r2, r1) });
        }
    }
    out.into_iter().collect()
}

/// Drops every monomial containing a row not below `v`.
pub fn restrict_to_schubert(p: &QPolynomial, v: &CosetTuple) -> Result<QPolynomial> {
    Ok(restrict_with_dropped(p, v)?.0)
}

/// As [`restrict_to_schubert`], also returning the dropped monomials.
pub fn restrict_with_dropped(p: &QPolynomial, v: &CosetTuple) -> Result<(QPolynomial, Vec<QMonomial>)> {
    let mut kept = QPolynomial::zero();
    let mut dropped = Vec::new();
    for (rows, c) in p.terms() {
        if !is_standard_monomial(rows) {
            return Err(Error::NonStandard(format!("{:?}", rows.iter().map(ToString::to_string).collect::<Vec<_>>())));
        }
        if rows.iter().all(|r| r.leq(v)) {
            kept.add_term(rows.clone(), c.clone());
        } else {
            dropped.push(QMonomial::new(rows.clone(), c.clone()));
        }
    }
    Ok((kept, dropped))
}

/// Which relation among the generators to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `X2X3 - X1X4 + Y1 - Y3`.
    Quadratic1,
    /// `X4X5 - X3X6 + Y4 - Y3`.
    Quadratic2,
    /// `X2X5 - X1X6 + Y2 - Y3`.
    Quadratic3,
    /// `Z1 - X2Y4`.
    Cubic1,
    /// `Z2 - X2Y3`.
    Cubic2,
}

impl Relation {
    pub fn quadratic(case: usize) -> Result<Self> {
        match case {
            1 => Ok(Relation::Quadratic1),
            2 => Ok(Relation::Quadratic2),
            3 => Ok(Relation::Quadratic3),
            _ => Err(Error::IndexOutOfRange { index: case, max: 3 }),
        }
    }

    pub fn cubic(case: usize) -> Result<Self> {
        match case {
            1 => Ok(Relation::Cubic1),
            2 => Ok(Relation::Cubic2),
            _ => Err(Error::IndexOutOfRange { index: case, max: 2 }),
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            Relation::Quadratic1 => "X2X3 - X1X4 + Y1 - Y3",
            Relation::Quadratic2 => "X4X5 - X3X6 + Y4 - Y3",
            Relation::Quadratic3 => "X2X5 - X1X6 + Y2 - Y3",
            Relation::Cubic1 => "Z1 - X2Y4",
            Relation::Cubic2 => "Z2 - X2Y3",
        }
    }

    /// Signed list of generator products.
    pub fn terms(self) -> Vec<(i64, Vec<Generator>)> {
        use Generator::*;
        match self {
            Relation::Quadratic1 => vec![(1, vec![X2, X3]), (-1, vec![X1, X4]), (1, vec![Y1]), (-1, vec![Y3])],
            Relation::Quadratic2 => vec![(1, vec![X4, X5]), (-1, vec![X3, X6]), (1, vec![Y4]), (-1, vec![Y3])],
            Relation::Quadratic3 => vec![(1, vec![X2, X5]), (-1, vec![X1, X6]), (1, vec![Y2]), (-1, vec![Y3])],
            Relation::Cubic1 => vec![(1, vec![Z1]), (-1, vec![X2, Y4])],
            Relation::Cubic2 => vec![(1, vec![Z2]), (-1, vec![X2, Y3])],
        }
    }

    /// The raw (unstraightened) combination.
    pub fn polynomial(self, rank: RankParam) -> QPolynomial {
        let mut p = QPolynomial::zero();
        for (sign, gens) in self.terms() {
            let prod = gens.iter().fold(QPolynomial::one(), |acc, g| &acc * &g.poly(rank));
            p = p + prod.scale(&Q::from_integer(sign.into()));
        }
        p
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualChecks {
    pub seed: u64,
    pub samples: usize,
    /// Distinct pair laws evaluated at every sample point.
    pub laws_checked: usize,
    pub failures: usize,
}

/// Outcome of checking one generator relation on `X(v_6)`.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub case: usize,
    pub n: usize,
    pub status: Status,
    pub relation: String,
    /// Standard monomials surviving restriction (empty on success).
    pub remainder: Vec<QMonomial>,
    pub dropped_monomials: Vec<QMonomial>,
    /// Every dropped monomial has a row not below `v_6`.
    pub dropped_rows_exceed_bound: bool,
    /// Both rewriting strategies give the same restriction (and, when the full
    /// normal form is computed, so does restricting it afterwards).
    pub path_independent: bool,
    pub residual_checks: ResidualChecks,
    /// Exact identity on the generic skew matrix (only computed for `n = 1`).
    pub symbolic_certificate: Option<bool>,
    /// Intermediate pair laws of the hand derivation, compared exactly.
    pub worked_laws: Vec<WorkedLawCheck>,
}

/// Number of random points used for the functional residual by default.
pub const RESIDUAL_SAMPLES: usize = 25;

/// Evaluates each pair law `q_x q_y = Σ c q_a q_b` at `samples` seeded random
/// points of the big cell; returns the number of (law, point) mismatches.
pub fn check_pair_laws(st: &mut Straightener, laws: &BTreeSet<Pair>, seed: u64, samples: usize) -> Result<usize> {
    let rank = st.rank();
    let mut expansions = Vec::with_capacity(laws.len());
    for (x, y) in laws {
        let lhs = QPolynomial::monomial(vec![x.clone(), y.clone()], Q::one());
        expansions.push(lhs - st.straighten_pair(x, y)?);
    }
    let tree = SeedTree::new(seed);
    let mut failures = 0;
    for s in 0..samples {
        let a = random_skew(rank.rank(), &mut tree.stream(s as u64));
        let mut cache: HashMap<CosetTuple, Q> = HashMap::new();
        for diff in &expansions {
            let mut total = Q::zero();
            for (rows, c) in diff.terms() {
                let mut term = c.clone();
                for r in rows {
                    if !cache.contains_key(r) {
                        cache.insert(r.clone(), pfaffian::q(r, &a, rank)?);
                    }
                    term *= &cache[r];
                }
                total += term;
            }
            if !total.is_zero() {
                failures += 1;
            }
        }
    }
    Ok(failures)
}

/// A two-row straightening law used in the hand derivation of a relation.
#[derive(Clone, Debug)]
pub struct WorkedLaw {
    pub lhs: Pair,
    pub expansion: QPolynomial,
    /// The expansion only holds after restriction to `X(v_6)`.
    pub on_v6: bool,
}

/// Check outcome for one [`WorkedLaw`].
#[derive(Clone, Debug, Serialize)]
pub struct WorkedLawCheck {
    pub law: String,
    pub on_v6: bool,
    pub matches: bool,
}

impl Relation {
    /// The intermediate pair laws of the hand derivation, in its notation:
    /// rows share the prefix `odd = (1, 3, ..., 4n-3)` or
    /// `even = (2, 4, ..., 4n-4)` followed by tails given as offsets from `4n`.
    pub fn worked_laws(self, rank: RankParam) -> Vec<WorkedLaw> {
        let m = 4 * rank.n();
        let odd: Vec<usize> = (1..=m - 3).step_by(2).collect();
        let even: Vec<usize> = (2..=m.saturating_sub(4)).step_by(2).collect();
        let o = |tail: &[i64]| row(&odd, m, tail).expand(rank).expect("valid row");
        let e = |tail: &[i64]| row(&even, m, tail).expand(rank).expect("valid row");
        let law = |lhs: (CosetTuple, CosetTuple), terms: Vec<(i64, CosetTuple, CosetTuple)>, on_v6: bool| {
            let mut expansion = QPolynomial::zero();
            for (c, a, b) in terms {
                expansion.add_term(vec![a, b], Q::from_integer(c.into()));
            }
            let lhs = if lhs.0 <= lhs.1 { lhs } else { (lhs.1, lhs.0) };
            WorkedLaw { lhs, expansion, on_v6 }
        };
        let full = [-2, -1, 0, 1, 2];
        // E(-2,1) E(-1,0) = E(-2,0) E(-1,1) on X(v_6)
        let even_a = || law((e(&[-2, 1]), e(&[-1, 0])), vec![(1, e(&[-2, 0]), e(&[-1, 1]))], true);
        // E(-2,2) E(-1,1) = E(-2,1) E(-1,2) on X(v_6)
        let even_b = || law((e(&[-2, 2]), e(&[-1, 1])), vec![(1, e(&[-2, 1]), e(&[-1, 2]))], true);
        match self {
            Relation::Quadratic1 => vec![
                law(
                    (o(&[-2, 1, 2]), o(&[-1, 0, 2])),
                    vec![
                        (1, o(&[-2, 0, 2]), o(&[-1, 1, 2])),
                        (-1, o(&[-2, -1, 2]), o(&[0, 1, 2])),
                        (1, o(&full), o(&[2])),
                    ],
                    false,
                ),
                law(
                    (e(&[-2, 1]), e(&[-1, 0])),
                    vec![
                        (1, e(&[-2, 0]), e(&[-1, 1])),
                        (-1, e(&[-2, -1]), e(&[0, 1])),
                        (1, e(&[-2, -1, 0, 1]), e(&[])),
                    ],
                    false,
                ),
                even_a(),
                law((o(&[2]), e(&[-2, 0])), vec![(1, o(&[0]), e(&[-2, 2]))], true),
                law(
                    (e(&[-2, 2]), e(&[-1, 1])),
                    vec![
                        (1, e(&[-2, 1]), e(&[-1, 2])),
                        (-1, e(&[-2, -1]), e(&[1, 2])),
                        (1, e(&[-2, -1, 1, 2]), e(&[])),
                    ],
                    false,
                ),
                even_b(),
            ],
            Relation::Quadratic2 => vec![
                law(
                    (o(&[-2, 0, 2]), o(&[-1, 0, 1])),
                    vec![
                        (1, o(&[-2, 0, 1]), o(&[-1, 0, 2])),
                        (-1, o(&[-2, -1, 0]), o(&[0, 1, 2])),
                        (1, o(&full), o(&[0])),
                    ],
                    false,
                ),
                even_b(),
            ],
            Relation::Quadratic3 => vec![
                law(
                    (o(&[-2, 1, 2]), o(&[-1, 0, 1])),
                    vec![
                        (1, o(&[-2, 0, 1]), o(&[-1, 1, 2])),
                        (-1, o(&[-2, -1, 1]), o(&[0, 1, 2])),
                        (1, o(&full), o(&[1])),
                    ],
                    false,
                ),
                law(
                    (e(&[-2, 2]), e(&[-1, 0])),
                    vec![
                        (1, e(&[-2, 0]), e(&[-1, 2])),
                        (-1, e(&[-2, -1]), e(&[0, 2])),
                        (1, e(&[-2, -1, 0, 2]), e(&[])),
                    ],
                    false,
                ),
                law((e(&[-2, 2]), e(&[-1, 0])), vec![(1, e(&[-2, 0]), e(&[-1, 2]))], true),
                law((o(&[1]), e(&[-2, 0])), vec![(1, o(&[0]), e(&[-2, 1]))], true),
            ],
            Relation::Cubic1 | Relation::Cubic2 => vec![even_a()],
        }
    }
}

/// Straightens each worked law's left side and compares it term by term,
/// signs included, with the stated expansion.
pub fn check_worked_laws(st: &mut Straightener, rel: Relation) -> Result<Vec<WorkedLawCheck>> {
    let rank = st.rank();
    let v6 = v_tuple(6, rank)?;
    let mut out = Vec::new();
    for w in rel.worked_laws(rank) {
        let (x, y) = &w.lhs;
        let mut got = st.straighten_pair(x, y)?;
        if w.on_v6 {
            got = restrict_to_schubert(&got, &v6)?;
        }
        out.push(WorkedLawCheck {
            law: format!("{x}*{y} = {}", w.expansion),
            on_v6: w.on_v6,
            matches: got == w.expansion,
        });
    }
    Ok(out)
}

fn verify_relation(lemma: &str, case: usize, rel: Relation, rank: RankParam, seed: u64, guard: &Guard) -> Result<LemmaReport> {
    guard.check_n(rank.n())?;
    let v6 = v_tuple(6, rank)?;
    let raw = rel.polynomial(rank);
    let mut st = Straightener::new(rank);

    // Rows not below v_6 vanish on X(v_6), so pruning them early gives the
    // restriction of the full normal form.
    let bounded = |strategy| NormalFormOptions {
        strategy,
        bound: Some(v6.clone()),
        ..NormalFormOptions::default()
    };
    let first = st.normal_form_with(&raw, &bounded(Strategy::First))?;
    let last = st.normal_form_with(&raw, &bounded(Strategy::Last))?;
    let mut path_independent = first.poly == last.poly;
    let mut laws: BTreeSet<Pair> = first.laws.union(&last.laws).cloned().collect();
    let mut dropped = first.dropped.clone();
    let mut failures = 0;
    let mut symbolic_certificate = None;

    if rank.n() == 1 {
        let full = st.normal_form_with(&raw, &NormalFormOptions::default())?;
        let (restricted, full_dropped) = restrict_with_dropped(&full.poly, &v6)?;
        path_independent &= restricted == first.poly;
        laws.extend(full.laws.iter().cloned());
        dropped = full_dropped;
        let tree = SeedTree::new(seed);
        for s in 0..RESIDUAL_SAMPLES {
            let a = random_skew(rank.rank(), &mut tree.stream(s as u64));
            if raw.eval(rank, &a)? != full.poly.eval(rank, &a)? {
                failures += 1;
            }
        }
        symbolic_certificate = Some(raw.eval_symbolic(rank)? == full.poly.eval_symbolic(rank)?);
    }
    failures += check_pair_laws(&mut st, &laws, seed, RESIDUAL_SAMPLES)?;
    let worked_laws = check_worked_laws(&mut st, rel)?;
    let dropped_rows_exceed_bound = dropped.iter().all(|m| m.rows.iter().any(|r| !r.leq(&v6)));

    let ok = first.poly.is_zero()
        && dropped_rows_exceed_bound
        && path_independent
        && failures == 0
        && symbolic_certificate != Some(false)
        && worked_laws.iter().all(|w| w.matches);
    Ok(LemmaReport {
        lemma: lemma.to_string(),
        case,
        n: rank.n(),
        status: Status::from_bool(ok),
        relation: rel.text().to_string(),
        remainder: first.poly.monomials(),
        dropped_monomials: dropped,
        dropped_rows_exceed_bound,
        path_independent,
        residual_checks: ResidualChecks {
            seed,
            samples: RESIDUAL_SAMPLES,
            laws_checked: laws.len(),
            failures,
        },
        symbolic_certificate,
        worked_laws,
    })
}

/// The three quadratic relations `X2X3 - X1X4 + Y1 - Y3`, `X4X5 - X3X6 +
/// Y4 - Y3`, `X2X5 - X1X6 + Y2 - Y3` on `X(v_6)`.
pub fn verify_lemma52(case: usize, rank: RankParam, seed: u64, guard: &Guard) -> Result<LemmaReport> {
    verify_relation("lemma52", case, Relation::quadratic(case)?, rank, seed, guard)
}

/// `Z1 = X2Y4` and `Z2 = X2Y3` on `X(v_6)`.
pub fn verify_lemma53(case: usize, rank: RankParam, seed: u64, guard: &Guard) -> Result<LemmaReport> {
    verify_relation("lemma53", case, Relation::cubic(case)?, rank, seed, guard)
}
