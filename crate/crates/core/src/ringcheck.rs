//! The invariant ring `R = ⊕ R_k`, `R_k = H⁰(X(v), L^{⊗k}(2λ))^T`, through its
//! standard monomial basis.
//!
//! Dimensions are tableau counts, restriction to `X(v)` is the row bound, and
//! the `4λ` grading is the even part `R_{2k}`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;

use crate::linalg::{self, SparseEliminator};
use crate::pfaffian::{self, SkewMatrix};
use crate::rng::{random_skew, SeedTree};
use crate::straighten::{Generator, NormalFormOptions, QPolynomial, Straightener};
use crate::tableau::{self, Tableau};
use crate::weyl::{v_tuple, CosetTuple, RankParam};
use crate::{Error, Guard, Result, Status, Q};

/// `dim R_k(X(v))` in the `2λ` grading.
pub fn dim_rk(rank: RankParam, v: &CosetTuple, k: usize, guard: &Guard) -> Result<usize> {
    tableau::count(rank, k, v, guard)
}

/// Which line bundle grades the ring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Grading {
    /// Degree `k` is `H⁰(L^{⊗k}(2λ))^T`.
    #[serde(rename = "2lambda")]
    TwoLambda,
    /// Degree `k` is `H⁰(L^{⊗k}(4λ))^T = R_{2k}`.
    #[default]
    #[serde(rename = "4lambda")]
    FourLambda,
}

impl Grading {
    fn scale(self) -> usize {
        match self {
            Grading::TwoLambda => 1,
            Grading::FourLambda => 2,
        }
    }
}

impl FromStr for Grading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2lambda" | "2" => Ok(Grading::TwoLambda),
            "4lambda" | "4" => Ok(Grading::FourLambda),
            _ => Err(Error::Parse(format!("unknown grading {s:?}"))),
        }
    }
}

/// Hilbert function of `R` on `X(v)` for `k = 0..=kmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub n: usize,
    pub v: CosetTuple,
    pub grading: Grading,
    pub dims: Vec<(usize, usize)>,
}

impl GradedDims {
    pub fn compute(rank: RankParam, v: &CosetTuple, kmax: usize, grading: Grading, guard: &Guard) -> Result<Self> {
        let dims = (0..=kmax)
            .map(|k| Ok((k, dim_rk(rank, v, grading.scale() * k, guard)?)))
            .collect::<Result<_>>()?;
        Ok(GradedDims {
            n: rank.n(),
            v: v.clone(),
            grading,
            dims,
        })
    }

    pub fn values(&self) -> Vec<usize> {
        self.dims.iter().map(|&(_, d)| d).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,dim\n");
        for (k, d) in &self.dims {
            writeln!(s, "{k},{d}").expect("writing to a String");
        }
        s
    }
}

/// `C(n, k)` exactly.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The five quotients `X(v_1), ..., X(v_5)` and their predicted Hilbert
/// functions in the `4λ` grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientCase {
    I,
    Ii,
    Iii,
    Iv,
    V,
}

impl QuotientCase {
    pub const ALL: [QuotientCase; 5] = [QuotientCase::I, QuotientCase::Ii, QuotientCase::Iii, QuotientCase::Iv, QuotientCase::V];

    pub fn schubert_index(self) -> usize {
        match self {
            QuotientCase::I => 1,
            QuotientCase::Ii => 2,
            QuotientCase::Iii => 3,
            QuotientCase::Iv => 4,
            QuotientCase::V => 5,
        }
    }

    /// Projective dimension `d` of the target `(P^d, O(2))`; `0` for a point.
    pub fn projective_dim(self) -> usize {
        match self {
            QuotientCase::I => 0,
            QuotientCase::Ii | QuotientCase::Iii => 1,
            QuotientCase::Iv => 3,
            QuotientCase::V => 2,
        }
    }

    /// `1`, `2k+1`, `2k+1`, `C(2k+3, 3)`, `C(2k+2, 2)`.
    pub fn expected(self, k: usize) -> u128 {
        match self {
            QuotientCase::I => 1,
            QuotientCase::Ii | QuotientCase::Iii => 2 * k as u128 + 1,
            QuotientCase::Iv => binomial(2 * k + 3, 3),
            QuotientCase::V => binomial(2 * k + 2, 2),
        }
    }
}

impl FromStr for QuotientCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(QuotientCase::I),
            "ii" | "2" => Ok(QuotientCase::Ii),
            "iii" | "3" => Ok(QuotientCase::Iii),
            "iv" | "4" => Ok(QuotientCase::Iv),
            "v" | "5" => Ok(QuotientCase::V),
            _ => Err(Error::Parse(format!("unknown case {s:?} (expected i..v)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimComparison {
    pub k: usize,
    pub computed: usize,
    pub expected: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop11Report {
    pub case: QuotientCase,
    pub n: usize,
    pub kmax: usize,
    pub v: CosetTuple,
    pub status: Status,
    pub table: Vec<DimComparison>,
    pub first_failure: Option<usize>,
}

/// Compares `dim R_{2k}(X(v_case))` with the Veronese prediction for
/// `k = 0..=kmax`.
pub fn verify_prop11(case: QuotientCase, rank: RankParam, kmax: usize, guard: &Guard) -> Result<Prop11Report> {
    let v = v_tuple(case.schubert_index(), rank)?;
    let dims = GradedDims::compute(rank, &v, kmax, Grading::FourLambda, guard)?;
    let table: Vec<DimComparison> = dims
        .dims
        .iter()
        .map(|&(k, computed)| DimComparison {
            k,
            computed,
            expected: case.expected(k),
        })
        .collect();
    let first_failure = table.iter().find(|c| c.computed as u128 != c.expected).map(|c| c.k);
    Ok(Prop11Report {
        case,
        n: rank.n(),
        kmax,
        v,
        status: Status::from_bool(first_failure.is_none()),
        table,
        first_failure,
    })
}

/// A basis tableau together with a partition of its rows into generators.
#[derive(Clone, Debug, Serialize)]
pub struct FactorizationWitness {
    pub tableau: Tableau,
    pub blocks: Vec<Generator>,
}

impl FactorizationWitness {
    /// Blocks are generators and their rows add up to the tableau exactly.
    pub fn is_valid(&self) -> bool {
        let rank = self.tableau.rank();
        let mut rows: Vec<CosetTuple> = self.blocks.iter().flat_map(|g| g.tableau(rank).into_rows()).collect();
        rows.sort();
        let mut target = self.tableau.rows().to_vec();
        target.sort();
        rows == target
    }
}

/// Partitions a sorted row multiset into generator row multisets.
pub struct ExactCover {
    gens: Vec<(Generator, Vec<CosetTuple>)>,
    dead: HashSet<Vec<CosetTuple>>,
}

impl ExactCover {
    pub fn new(rank: RankParam) -> Self {
        ExactCover {
            gens: Generator::ALL.iter().map(|&g| (g, g.tableau(rank).into_rows())).collect(),
            dead: HashSet::new(),
        }
    }

    pub fn cover(&mut self, rows: &[CosetTuple]) -> Option<Vec<Generator>> {
        let mut sorted = rows.to_vec();
        sorted.sort();
        let mut out = Vec::new();
        self.search(sorted, &mut out).then_some(out)
    }

    fn search(&mut self, rest: Vec<CosetTuple>, out: &mut Vec<Generator>) -> bool {
        let Some(first) = rest.first() else {
            return true;
        };
        if self.dead.contains(&rest) {
            return false;
        }
        // the smallest remaining row must belong to some block
        for gi in 0..self.gens.len() {
            let (g, grows) = &self.gens[gi];
            if grows[0] != *first {
                continue;
            }
            let Some(next) = remove_submultiset(&rest, grows) else {
                continue;
            };
            out.push(*g);
            if self.search(next, out) {
                return true;
            }
            out.pop();
        }
        self.dead.insert(rest);
        false
    }
}

/// `rest - sub` for sorted multisets, if `sub` is contained in `rest`.
fn remove_submultiset(rest: &[CosetTuple], sub: &[CosetTuple]) -> Option<Vec<CosetTuple>> {
    let mut out = Vec::with_capacity(rest.len());
    let mut j = 0;
    for r in rest {
        if j < sub.len() && *r == sub[j] {
            j += 1;
        } else {
            out.push(r.clone());
        }
    }
    (j == sub.len()).then_some(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma51Report {
    pub n: usize,
    pub kmax: usize,
    pub status: Status,
    /// Tableaux examined per degree `k` (`2λ` grading).
    pub checked: Vec<(usize, usize)>,
    pub failures: Vec<Tableau>,
    pub witnesses: Vec<FactorizationWitness>,
}

/// Factors every basis tableau of `R_k(X(v_6))`, `1 <= k <= kmax`, into
/// generators by exact cover.
pub fn verify_lemma51(rank: RankParam, kmax: usize, guard: &Guard) -> Result<Lemma51Report> {
    let v6 = v_tuple(6, rank)?;
    let mut cover = ExactCover::new(rank);
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    let mut witnesses = Vec::new();
    for k in 1..=kmax {
        let basis = tableau::enumerate(rank, k, &v6, guard)?;
        checked.push((k, basis.len()));
        for t in basis {
            match cover.cover(t.rows()) {
                Some(blocks) => {
                    let w = FactorizationWitness { tableau: t, blocks };
                    debug_assert!(w.is_valid());
                    witnesses.push(w);
                }
                None => failures.push(t),
            }
        }
    }
    Ok(Lemma51Report {
        n: rank.n(),
        kmax,
        status: Status::from_bool(failures.is_empty()),
        checked,
        failures,
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeSpan {
    /// Degree in the `4λ` grading.
    pub k: usize,
    pub dim: usize,
    pub span_rank: usize,
    pub products_used: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm51Report {
    pub n: usize,
    pub kmax: usize,
    pub status: Status,
    pub degrees: Vec<DegreeSpan>,
}

/// The degree-one (in the `4λ` grading) elements `X_i X_j`, `i <= j`, and `Y3`.
pub fn degree_one_elements(rank: RankParam) -> Vec<(String, QPolynomial)> {
    let xs = &Generator::ALL[..6];
    let mut out = Vec::new();
    for (i, a) in xs.iter().enumerate() {
        for b in &xs[i..] {
            out.push((format!("{a}{b}"), &a.poly(rank) * &b.poly(rank)));
        }
    }
    out.push(("Y3".to_string(), Generator::Y3.poly(rank)));
    out
}

/// Checks that products of `k` degree-one elements span `R_{2k}(X(v_6))`
/// for `k = 1..=kmax`, by exact rank over the standard monomial basis.
pub fn verify_thm51(rank: RankParam, kmax: usize, guard: &Guard) -> Result<Thm51Report> {
    guard.check_degree(2 * kmax)?;
    let v6 = v_tuple(6, rank)?;
    let gens = degree_one_elements(rank);
    let mut st = Straightener::new(rank);
    let opts = NormalFormOptions {
        bound: Some(v6.clone()),
        ..NormalFormOptions::default()
    };
    let mut degrees = Vec::new();
    // products of the current degree, keyed by the last factor used (so
    // factor indices are non-decreasing and each multiset appears once)
    let mut layer: Vec<(usize, QPolynomial)> = vec![(0, QPolynomial::one())];
    let mut ok = true;
    for k in 1..=kmax {
        let basis = tableau::enumerate(rank, 2 * k, &v6, guard)?;
        let index: HashMap<Vec<CosetTuple>, usize> =
            basis.iter().enumerate().map(|(i, t)| (t.rows().to_vec(), i)).collect();
        let mut next = Vec::new();
        let mut elim = SparseEliminator::new();
        let mut used = 0;
        for (last, prefix) in &layer {
            for (j, (_, g)) in gens.iter().enumerate().skip(*last) {
                let prod = st.normal_form_with(&(prefix * g), &opts)?.poly;
                let mut row = BTreeMap::new();
                for (rows, c) in prod.terms() {
                    let &col = index.get(rows).ok_or_else(|| {
                        Error::NonStandard(format!("normal form term outside the basis of R_{}", 2 * k))
                    })?;
                    row.insert(col, c.clone());
                }
                if elim.rank() < basis.len() {
                    used += 1;
                    elim.insert(row);
                }
                if k < kmax {
                    next.push((j, prod));
                }
            }
        }
        ok &= elim.rank() == basis.len();
        degrees.push(DegreeSpan {
            k,
            dim: basis.len(),
            span_rank: elim.rank(),
            products_used: used,
        });
        layer = next;
    }
    Ok(Thm51Report {
        n: rank.n(),
        kmax,
        status: Status::from_bool(ok),
        degrees,
    })
}

/// `p_Γ(A)`: the product of `q_row(A)` over the rows.
pub fn evaluate_tableau(t: &Tableau, a: &SkewMatrix) -> Result<Q> {
    let rank = t.rank();
    if a.size() != rank.rank() {
        return Err(Error::SizeMismatch(a.size(), rank.rank()));
    }
    t.rows().iter().try_fold(Q::one(), |acc, r| Ok(acc * pfaffian::q(r, a, rank)?))
}

/// Rank of the evaluation matrix of the `R_k` basis on all of `G/P`, using
/// `dim` seeded random points. Full rank certifies linear independence.
pub fn basis_evaluation_rank(rank: RankParam, k: usize, seed: u64, guard: &Guard) -> Result<(usize, usize)> {
    let top = CosetTuple::new((rank.rank() + 1..=rank.ambient()).collect())?;
    let basis = tableau::enumerate(rank, k, &top, guard)?;
    let tree = SeedTree::new(seed);
    let mut rows = Vec::with_capacity(basis.len());
    for s in 0..basis.len() {
        let a = random_skew(rank.rank(), &mut tree.stream(s as u64));
        rows.push(basis.iter().map(|t| evaluate_tableau(t, &a)).collect::<Result<Vec<Q>>>()?);
    }
    Ok((linalg::rank(&rows), basis.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: usize) -> RankParam {
        RankParam::new(n).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn hilbert_table_csv() {
        let v2 = v_tuple(2, r(1)).unwrap();
        let d = GradedDims::compute(r(1), &v2, 4, Grading::FourLambda, &Guard::default()).unwrap();
        assert_eq!(d.values(), vec![1, 3, 5, 7, 9]);
        assert_eq!(d.to_csv(), "k,dim\n0,1\n1,3\n2,5\n3,7\n4,9\n");
        let two = GradedDims::compute(r(1), &v2, 2, Grading::TwoLambda, &Guard::default()).unwrap();
        assert_eq!(two.values(), vec![1, 2, 3]);
    }

    #[test]
    fn case_parsing() {
        assert_eq!("iv".parse::<QuotientCase>().unwrap(), QuotientCase::Iv);
        assert!("vi".parse::<QuotientCase>().is_err());
        assert_eq!("4lambda".parse::<Grading>().unwrap(), Grading::FourLambda);
    }

    #[test]
    fn generators_cover_themselves() {
        let mut cover = ExactCover::new(r(1));
        for g in Generator::ALL {
            assert_eq!(cover.cover(g.tableau(r(1)).rows()), Some(vec![g]));
        }
        let x1 = Generator::X1.tableau(r(1));
        assert_eq!(cover.cover(&x1.rows()[..1]), None);
    }

    #[test]
    fn empty_tableau_evaluates_to_one() {
        let a = random_skew(6, &mut SeedTree::new(0).stream(0));
        assert_eq!(evaluate_tableau(&Tableau::empty(r(1)), &a).unwrap(), Q::one());
        assert!(evaluate_tableau(&Tableau::empty(r(1)), &SkewMatrix::zero(4)).is_err());
    }

    #[test]
    fn x1_at_reference_point() {
        let a = SkewMatrix::reference(r(1));
        let x1 = Generator::X1.tableau(r(1));
        let expected: Q = x1.rows().iter().map(|row| pfaffian::q(row, &a, r(1)).unwrap()).product();
        assert_eq!(evaluate_tableau(&x1, &a).unwrap(), expected);
    }

    #[test]
    fn degree_one_set_has_22_elements() {
        assert_eq!(degree_one_elements(r(1)).len(), 22);
    }
}
