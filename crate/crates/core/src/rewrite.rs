//! Quadratic monomial rewriting systems.
//!
//! A rule `L -> R` replaces a monomial `M` divisible by `L` with `(M/L)R`.
//! Monomials are exponent vectors over an ordered variable list, compared
//! degree-lexicographically with the first variable largest; every rule must
//! strictly decrease in this order, which guarantees termination.
//!
//! For a terminating system, confluence is equivalent to every overlap
//! ambiguity resolving (the diamond lemma). The irreducible monomials then
//! form a basis of the quotient ring, so counting them gives its Hilbert
//! function.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ringcheck::binomial;
use crate::{Error, Result, Status};

/// Exponent vector over a system's variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn shares_variable(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| *a > 0 && *b > 0)
    }

    /// All monomials of degree `k` in `nvars` variables.
    pub fn all_of_degree(nvars: usize, k: u32) -> Vec<Monomial> {
        fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                go(i + 1, left - e, cur, out);
            }
        }
        if nvars == 0 {
            return if k == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
        }
        let mut out = Vec::new();
        go(0, k, &mut vec![0; nvars], &mut out);
        out
    }
}

/// Degree first, then lexicographic with the first variable largest.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: Monomial,
}

/// Which of the three quadratic Veronese targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SystemCase {
    P1,
    P2,
    P3,
}

impl SystemCase {
    pub const ALL: [SystemCase; 3] = [SystemCase::P1, SystemCase::P2, SystemCase::P3];

    pub fn projective_dim(self) -> usize {
        match self {
            SystemCase::P1 => 1,
            SystemCase::P2 => 2,
            SystemCase::P3 => 3,
        }
    }
}

impl FromStr for SystemCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P1" => Ok(SystemCase::P1),
            "P2" => Ok(SystemCase::P2),
            "P3" => Ok(SystemCase::P3),
            _ => Err(Error::Parse(format!("unknown system {s:?} (expected P1, P2 or P3)"))),
        }
    }
}

impl fmt::Display for SystemCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

const P1_TEXT: &str = "\
vars: z0 z1 z2
z0 z2 -> z1^2
";

const P2_TEXT: &str = "\
vars: z1 z2 z3 z4 z5 z6
z1 z2 -> z4^2
z1 z3 -> z5^2
z2 z3 -> z6^2
z1 z6 -> z4 z5
z2 z5 -> z4 z6
z3 z4 -> z5 z6
";

const P3_TEXT: &str = "\
vars: z1 z2 z3 z4 z5 z6 z7 z8 z9 z10
z1 z2 -> z5^2
z1 z3 -> z6^2
z1 z4 -> z7^2
z1 z8 -> z5 z6
z1 z9 -> z5 z7
z1 z10 -> z6 z7
z2 z3 -> z8^2
z2 z4 -> z9^2
z2 z6 -> z5 z8
z2 z7 -> z5 z9
z2 z10 -> z8 z9
z3 z4 -> z10^2
z3 z5 -> z6 z8
z3 z7 -> z6 z10
z3 z9 -> z8 z10
z4 z5 -> z7 z9
z4 z6 -> z7 z10
z4 z8 -> z9 z10
z5 z10 -> z6 z9
z6 z9 -> z7 z8
";

/// A terminating system of monomial rules.
#[derive(Clone, Debug)]
pub struct ReductionSystem {
    vars: Vec<String>,
    rules: Vec<Rule>,
}

/// Safety net for [`ReductionSystem::normal_form`].
pub const STEP_CAP: usize = 1_000_000;

impl ReductionSystem {
    /// Validates orientation and inter-reduces right-hand sides.
    pub fn new(vars: Vec<String>, rules: Vec<Rule>) -> Result<Self> {
        let nv = vars.len();
        let distinct: BTreeSet<&String> = vars.iter().collect();
        if distinct.len() != nv {
            return Err(Error::Rewrite("duplicate variable name".into()));
        }
        for r in &rules {
            if r.lhs.0.len() != nv || r.rhs.0.len() != nv {
                return Err(Error::Rewrite("rule over the wrong number of variables".into()));
            }
            if r.lhs.degree() == 0 {
                return Err(Error::Rewrite("constant left-hand side".into()));
            }
            if r.rhs >= r.lhs {
                return Err(Error::Rewrite(format!(
                    "rule {} -> {} does not decrease in the term order",
                    display_monomial(&vars, &r.lhs),
                    display_monomial(&vars, &r.rhs)
                )));
            }
        }
        for (i, a) in rules.iter().enumerate() {
            for b in &rules[i + 1..] {
                if a.lhs.divides(&b.lhs) || b.lhs.divides(&a.lhs) {
                    return Err(Error::Rewrite(format!(
                        "left-hand sides {} and {} are not inter-reduced",
                        display_monomial(&vars, &a.lhs),
                        display_monomial(&vars, &b.lhs)
                    )));
                }
            }
        }
        let mut sys = ReductionSystem { vars, rules };
        // replace each rhs by its normal form; terminates because rhs < lhs
        for i in 0..sys.rules.len() {
            let nf = sys.normal_form(&sys.rules[i].rhs)?;
            sys.rules[i].rhs = nf;
        }
        Ok(sys)
    }

    pub fn builtin(case: SystemCase) -> Self {
        let text = match case {
            SystemCase::P1 => P1_TEXT,
            SystemCase::P2 => P2_TEXT,
            SystemCase::P3 => P3_TEXT,
        };
        Self::parse(text).expect("builtin systems are well formed")
    }

    /// Parses the text format: an optional `vars:` line, then one rule per
    /// line as `LHS -> RHS` where each side is a product of variables
    /// separated by spaces or `*`, with optional `^e` exponents. `#` starts a
    /// comment. Without `vars:`, variables are ordered by name with numeric
    /// suffixes compared as numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vars: Option<Vec<String>> = None;
        let mut raw = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars:") {
                vars = Some(rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(String::from).collect());
                continue;
            }
            let (l, r) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("line {}: expected `LHS -> RHS`", ln + 1)))?;
            raw.push((parse_factors(l, ln + 1)?, parse_factors(r, ln + 1)?));
        }
        let vars = match vars {
            Some(v) => v,
            None => {
                let mut names: Vec<String> = raw
                    .iter()
                    .flat_map(|(l, r)| l.iter().chain(r).map(|(n, _)| n.clone()))
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                names.sort_by_key(|n| natural_key(n));
                names
            }
        };
        let index: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let to_mono = |factors: &[(String, u32)]| -> Result<Monomial> {
            let mut e = vec![0; vars.len()];
            for (name, p) in factors {
                let &i = index
                    .get(name.as_str())
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                e[i] += p;
            }
            Ok(Monomial(e))
        };
        let rules = raw
            .iter()
            .map(|(l, r)| Ok(Rule { lhs: to_mono(l)?, rhs: to_mono(r)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, rules)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn monomial(&self, names: &[&str]) -> Result<Monomial> {
        let mut e = vec![0; self.vars.len()];
        for n in names {
            let i = self
                .vars
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::Parse(format!("unknown variable {n:?}")))?;
            e[i] += 1;
        }
        Ok(Monomial(e))
    }

    /// Parses a product such as `z1 z2^2` or `z1*z2*z2`.
    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        let factors = parse_factors(s, 0)?;
        let mut e = vec![0; self.vars.len()];
        for (name, p) in factors {
            let i = self
                .vars
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            e[i] += p;
        }
        Ok(Monomial(e))
    }

    pub fn display(&self, m: &Monomial) -> String {
        display_monomial(&self.vars, m)
    }

    fn one_step(&self, m: &Monomial) -> Option<Monomial> {
        self.rules.iter().find(|r| r.lhs.divides(m)).map(|r| m.div(&r.lhs).mul(&r.rhs))
    }

    /// Applies the first applicable rule until none applies.
    pub fn normal_form(&self, m: &Monomial) -> Result<Monomial> {
        let mut cur = m.clone();
        for _ in 0..STEP_CAP {
            match self.one_step(&cur) {
                Some(next) => {
                    debug_assert!(next < cur);
                    cur = next;
                }
                None => return Ok(cur),
            }
        }
        Err(Error::Rewrite(format!("normal form of {} exceeded {STEP_CAP} steps", self.display(m))))
    }

    pub fn is_irreducible(&self, m: &Monomial) -> bool {
        !self.rules.iter().any(|r| r.lhs.divides(m))
    }

    /// Applies the rules with the given left-hand sides in order, checking
    /// each is applicable.
    pub fn apply_rule_path(&self, m: &Monomial, lhs_path: &[Monomial]) -> Result<Monomial> {
        let mut cur = m.clone();
        for lhs in lhs_path {
            let rule = self
                .rules
                .iter()
                .find(|r| r.lhs == *lhs)
                .ok_or_else(|| Error::Rewrite(format!("no rule with left-hand side {}", self.display(lhs))))?;
            if !rule.lhs.divides(&cur) {
                return Err(Error::Rewrite(format!("{} does not divide {}", self.display(lhs), self.display(&cur))));
            }
            cur = cur.div(&rule.lhs).mul(&rule.rhs);
        }
        Ok(cur)
    }

    /// Every irreducible monomial reachable from `m` by some sequence of
    /// rule applications.
    pub fn all_normal_forms(&self, m: &Monomial) -> BTreeSet<Monomial> {
        let mut memo = HashMap::new();
        self.reach(m, &mut memo)
    }

    fn reach(&self, m: &Monomial, memo: &mut HashMap<Monomial, BTreeSet<Monomial>>) -> BTreeSet<Monomial> {
        if let Some(hit) = memo.get(m) {
            return hit.clone();
        }
        let mut out = BTreeSet::new();
        let mut any = false;
        for r in &self.rules {
            if r.lhs.divides(m) {
                any = true;
                let next = m.div(&r.lhs).mul(&r.rhs);
                out.extend(self.reach(&next, memo));
            }
        }
        if !any {
            out.insert(m.clone());
        }
        memo.insert(m.clone(), out.clone());
        out
    }

    /// Minimal overlap ambiguities: `lcm` of two distinct left-hand sides that
    /// share a variable, and self-overlaps `L·x` for each variable `x | L`.
    /// Sorted increasingly in the term order.
    pub fn overlaps(&self) -> Vec<Monomial> {
        let mut out = BTreeSet::new();
        for (i, a) in self.rules.iter().enumerate() {
            for b in &self.rules[i + 1..] {
                if a.lhs.shares_variable(&b.lhs) {
                    out.insert(a.lhs.lcm(&b.lhs));
                }
            }
            for (x, &e) in a.lhs.0.iter().enumerate() {
                if e > 0 {
                    let mut m = a.lhs.clone();
                    m.0[x] += 1;
                    out.insert(m);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn check_diamond(&self) -> DiamondReport {
        let mut results = Vec::new();
        let mut divergent = None;
        for m in self.overlaps() {
            let forms = self.all_normal_forms(&m);
            if forms.len() != 1 && divergent.is_none() {
                let mut it = forms.iter();
                let a = it.next().expect("non-empty");
                let b = it.next().expect("two forms");
                divergent = Some([self.display(&m), self.display(a), self.display(b)]);
            }
            results.push(OverlapResult {
                monomial: self.display(&m),
                normal_forms: forms.iter().map(|f| self.display(f)).collect(),
            });
        }
        DiamondReport {
            status: Status::from_bool(divergent.is_none()),
            rules: self.rules.len(),
            overlaps: results,
            divergent,
        }
    }

    pub fn is_confluent(&self) -> bool {
        self.check_diamond().status.passed()
    }

    /// Number of irreducible monomials of degree `k`.
    pub fn hilbert_count(&self, k: u32) -> Result<u64> {
        if !self.is_confluent() {
            return Err(Error::NotConfluent);
        }
        Ok(self.count_irreducible(k))
    }

    fn count_irreducible(&self, k: u32) -> u64 {
        Monomial::all_of_degree(self.vars.len(), k)
            .iter()
            .filter(|m| self.is_irreducible(m))
            .count() as u64
    }

    /// Normal form of a polynomial (integer coefficients).
    pub fn reduce_poly(&self, p: &BTreeMap<Monomial, i64>) -> Result<BTreeMap<Monomial, i64>> {
        let mut out = BTreeMap::new();
        for (m, c) in p {
            *out.entry(self.normal_form(m)?).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }
}

impl fmt::Display for ReductionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.join(" "))?;
        for r in &self.rules {
            writeln!(f, "{} -> {}", self.display(&r.lhs), self.display(&r.rhs))?;
        }
        Ok(())
    }
}

fn parse_factors(s: &str, line: usize) -> Result<Vec<(String, u32)>> {
    let mut out = Vec::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let (name, pow) = match tok.split_once('^') {
            Some((n, p)) => (
                n,
                p.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("line {line}: bad exponent in {tok:?}")))?,
            ),
            None => (tok, 1),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("line {line}: bad variable {tok:?}")));
        }
        out.push((name.to_string(), pow));
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("line {line}: empty monomial")));
    }
    Ok(out)
}

fn natural_key(name: &str) -> (String, u64) {
    let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, digits) = name.split_at(split);
    (head.to_string(), digits.parse().unwrap_or(0))
}

fn display_monomial(vars: &[String], m: &Monomial) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { vars[i].clone() } else { format!("{}^{e}", vars[i]) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapResult {
    pub monomial: String,
    pub normal_forms: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiamondReport {
    pub status: Status,
    pub rules: usize,
    pub overlaps: Vec<OverlapResult>,
    /// `[overlap, form1, form2]` for the first ambiguity that fails to resolve.
    pub divergent: Option<[String; 3]>,
}

/// `C(d + 2k, d)`: degree-`2k` forms in `d + 1` variables.
pub fn veronese_dim(d: usize, k: usize) -> u128 {
    binomial(d + 2 * k, d)
}

/// The `2×2` minors of a symmetric matrix of variables.
#[derive(Clone, Debug)]
pub struct SymMinorIdeal {
    pub d: usize,
    /// Variable indices, `(d+1)×(d+1)`, symmetric.
    pub matrix: Vec<Vec<usize>>,
}

impl SymMinorIdeal {
    pub fn new(d: usize, matrix: Vec<Vec<usize>>) -> Result<Self> {
        if matrix.len() != d + 1 || matrix.iter().any(|r| r.len() != d + 1) {
            return Err(Error::Rewrite(format!("matrix must be {0}x{0}", d + 1)));
        }
        for i in 0..=d {
            for j in 0..=d {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Rewrite("matrix is not symmetric".into()));
                }
            }
        }
        Ok(SymMinorIdeal { d, matrix })
    }

    /// Layout for a builtin system, in that system's variable indices.
    pub fn builtin(case: SystemCase) -> Self {
        // entries are positions in the system's variable list
        let m = match case {
            // [[z0, z1], [z1, z2]]
            SystemCase::P1 => vec![vec![0, 1], vec![1, 2]],
            // [[z1, z4, z5], [z4, z2, z6], [z5, z6, z3]]
            SystemCase::P2 => vec![vec![0, 3, 4], vec![3, 1, 5], vec![4, 5, 2]],
            // [[z1, z5, z6, z7], [z5, z2, z8, z9], [z6, z8, z3, z10], [z7, z9, z10, z4]]
            SystemCase::P3 => vec![vec![0, 4, 5, 6], vec![4, 1, 7, 8], vec![5, 7, 2, 9], vec![6, 8, 9, 3]],
        };
        Self::new(case.projective_dim(), m).expect("builtin layout is symmetric")
    }

    /// All nonzero `2×2` minors as integer polynomials over `nvars` variables.
    pub fn minors(&self, nvars: usize) -> Vec<BTreeMap<Monomial, i64>> {
        let var = |i: usize| {
            let mut e = vec![0; nvars];
            e[i] = 1;
            Monomial(e)
        };
        let m = &self.matrix;
        let n = self.d + 1;
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for r1 in 0..n {
            for r2 in r1 + 1..n {
                for c1 in 0..n {
                    for c2 in c1 + 1..n {
                        let a = var(m[r1][c1]).mul(&var(m[r2][c2]));
                        let b = var(m[r1][c2]).mul(&var(m[r2][c1]));
                        if a == b {
                            continue;
                        }
                        let mut p = BTreeMap::new();
                        p.insert(a, 1);
                        p.insert(b, -1);
                        let key: Vec<(Monomial, i64)> = p.clone().into_iter().collect();
                        let neg: Vec<(Monomial, i64)> = p.iter().map(|(k, v)| (k.clone(), -v)).collect();
                        if seen.contains(&neg) || !seen.insert(key) {
                            continue;
                        }
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertComparison {
    pub k: usize,
    pub normal_forms: u64,
    pub veronese: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct VeroneseReport {
    pub status: Status,
    pub d: usize,
    pub rules: usize,
    pub minors: usize,
    /// (a) every `lhs - rhs` is `±` a minor.
    pub rules_are_minors: bool,
    /// (b) every minor reduces to zero.
    pub minors_reduce_to_zero: bool,
    pub confluent: bool,
    /// (c) irreducible monomial counts against `C(d+2k, d)`.
    pub hilbert: Vec<HilbertComparison>,
}

/// Two-sided containment of the rule ideal and the minor ideal, plus
/// agreement of Hilbert functions up to `kmax`.
pub fn verify_veronese_equality(s: &ReductionSystem, m: &SymMinorIdeal, kmax: usize) -> Result<VeroneseReport> {
    let nv = s.vars().len();
    if let Some(&bad) = m.matrix.iter().flatten().find(|&&i| i >= nv) {
        return Err(Error::IndexOutOfRange { index: bad, max: nv - 1 });
    }
    let minors = m.minors(nv);
    let rules_are_minors = s.rules().iter().all(|r| {
        minors.iter().any(|p| {
            let (lc, rc) = (p.get(&r.lhs), p.get(&r.rhs));
            p.len() == 2 && matches!((lc, rc), (Some(1), Some(-1)) | (Some(-1), Some(1)))
        })
    });
    let mut minors_reduce_to_zero = true;
    for p in &minors {
        minors_reduce_to_zero &= s.reduce_poly(p)?.is_empty();
    }
    let confluent = s.is_confluent();
    let hilbert: Vec<HilbertComparison> = (0..=kmax)
        .map(|k| HilbertComparison {
            k,
            normal_forms: s.count_irreducible(k as u32),
            veronese: veronese_dim(m.d, k),
        })
        .collect();
    let hilbert_ok = hilbert.iter().all(|h| h.normal_forms as u128 == h.veronese);
    Ok(VeroneseReport {
        status: Status::from_bool(rules_are_minors && minors_reduce_to_zero && confluent && hilbert_ok),
        d: m.d,
        rules: s.rules().len(),
        minors: minors.len(),
        rules_are_minors,
        minors_reduce_to_zero,
        confluent,
        hilbert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &ReductionSystem, names: &[&str]) -> Monomial {
        s.monomial(names).unwrap()
    }

    #[test]
    fn builtin_rule_counts() {
        assert_eq!(ReductionSystem::builtin(SystemCase::P1).rules().len(), 1);
        assert_eq!(ReductionSystem::builtin(SystemCase::P2).rules().len(), 6);
        assert_eq!(ReductionSystem::builtin(SystemCase::P3).rules().len(), 20);
    }

    #[test]
    fn chained_rule_is_inter_reduced() {
        let s = ReductionSystem::builtin(SystemCase::P3);
        let z5z10 = mono(&s, &["z5", "z10"]);
        let r = s.rules().iter().find(|r| r.lhs == z5z10).unwrap();
        assert_eq!(r.rhs, mono(&s, &["z7", "z8"]));
    }

    #[test]
    fn p1_examples() {
        let s = ReductionSystem::builtin(SystemCase::P1);
        assert_eq!(s.normal_form(&mono(&s, &["z0", "z1", "z2"])).unwrap(), mono(&s, &["z1", "z1", "z1"]));
        let irr = mono(&s, &["z0", "z1"]);
        assert_eq!(s.normal_form(&irr).unwrap(), irr);
    }

    #[test]
    fn term_order() {
        let s = ReductionSystem::builtin(SystemCase::P1);
        assert!(mono(&s, &["z0", "z2"]) > mono(&s, &["z1", "z1"]));
        assert!(mono(&s, &["z2", "z2", "z2"]) > mono(&s, &["z0", "z0"]));
    }

    #[test]
    fn rejects_increasing_rule() {
        assert!(ReductionSystem::parse("vars: a b\nb^2 -> a^2").is_err());
        assert!(ReductionSystem::parse("a b -> a b").is_err());
        assert!(ReductionSystem::parse("a b => c").is_err());
        assert!(ReductionSystem::parse("vars: a b\na b -> c").is_err());
        assert!(ReductionSystem::parse("a b -> a^x").is_err());
    }

    #[test]
    fn parse_without_vars_line() {
        let s = ReductionSystem::parse("# comment\nz0*z2 -> z1 z1  # trailing\n").unwrap();
        assert_eq!(s.vars(), &["z0", "z1", "z2"]);
        assert_eq!(s.to_string(), "vars: z0 z1 z2\nz0*z2 -> z1^2\n");
        let t = ReductionSystem::parse("z2 z10 -> z3^2").unwrap();
        assert_eq!(t.vars(), &["z2", "z3", "z10"]);
    }

    #[test]
    fn empty_system() {
        let s = ReductionSystem::parse("vars: x y").unwrap();
        assert!(s.overlaps().is_empty());
        assert!(s.check_diamond().status.passed());
        assert_eq!(s.hilbert_count(2).unwrap(), 3);
    }

    #[test]
    fn non_confluent_system_refuses_counts() {
        // a b -> c^2 and b c -> a^2 have an unresolvable overlap
        let s = ReductionSystem::parse("vars: a b c\na b -> c^2\na c -> b^2").unwrap();
        let rep = s.check_diamond();
        assert!(!rep.status.passed());
        assert!(rep.divergent.is_some());
        assert!(matches!(s.hilbert_count(3), Err(Error::NotConfluent)));
    }

    #[test]
    fn p1_overlaps() {
        let s = ReductionSystem::builtin(SystemCase::P1);
        let got: Vec<String> = s.overlaps().iter().map(|m| s.display(m)).collect();
        assert_eq!(got, vec!["z0*z2^2", "z0^2*z2"]);
    }

    #[test]
    fn veronese_dims() {
        assert_eq!(veronese_dim(1, 4), 9);
        assert_eq!(veronese_dim(3, 1), 10);
        assert_eq!(veronese_dim(2, 3), 28);
    }

    #[test]
    fn degree_enumeration() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(0, 0).len(), 1);
    }

    #[test]
    fn builtins_are_confluent() {
        for case in SystemCase::ALL {
            let s = ReductionSystem::builtin(case);
            assert!(s.check_diamond().status.passed(), "{case}");
        }
    }

    #[test]
    fn p2_ambiguities() {
        let s = ReductionSystem::builtin(SystemCase::P2);
        let cases = [
            ("z1 z2 z3", "z4 z5 z6"),
            ("z1 z2 z5", "z4^2 z5"),
            ("z1 z2 z6", "z4^2 z6"),
            ("z1 z3 z4", "z4 z5^2"),
            ("z1 z3 z6", "z5^2 z6"),
            ("z2 z3 z4", "z4 z6^2"),
            ("z2 z3 z5", "z5 z6^2"),
        ];
        for (m, nf) in cases {
            let forms = s.all_normal_forms(&s.parse_monomial(m).unwrap());
            assert_eq!(forms.len(), 1, "{m}");
            assert_eq!(forms.into_iter().next().unwrap(), s.parse_monomial(nf).unwrap(), "{m}");
        }
    }

    #[test]
    fn p3_three_paths() {
        let s = ReductionSystem::builtin(SystemCase::P3);
        let m = s.parse_monomial("z1 z2 z3").unwrap();
        let target = s.parse_monomial("z5 z6 z8").unwrap();
        for path in [["z1 z2", "z3 z5"], ["z2 z3", "z1 z8"], ["z1 z3", "z2 z6"]] {
            let lhs: Vec<Monomial> = path.iter().map(|p| s.parse_monomial(p).unwrap()).collect();
            assert_eq!(s.apply_rule_path(&m, &lhs).unwrap(), target);
        }
        assert!(s.apply_rule_path(&m, &[s.parse_monomial("z4 z5").unwrap()]).is_err());
    }

    #[test]
    fn veronese_equality_all_cases() {
        for case in SystemCase::ALL {
            let rep = verify_veronese_equality(&ReductionSystem::builtin(case), &SymMinorIdeal::builtin(case), 6).unwrap();
            assert!(rep.status.passed(), "{case}: {rep:?}");
        }
    }
}
