//! Exact verification toolkit for torus quotients of Schubert varieties in the
//! spin orthogonal Grassmannian `SO(8n+4)/P`.
//!
//! The crate is organised bottom-up:
//!
//! * [`weyl`]: type `D_{4n+2}` Weyl group in one-line notation, minimal coset
//!   representatives of `W/W_P` as index tuples, Bruhat order, and the
//!   semistability test on `w(λ)`.
//! * [`tableau`]: Spin-standard tableaux of rectangular shape, T-invariance
//!   and bounded enumeration of the standard monomial basis.
//! * [`pfaffian`]: exact Pfaffians, sub-Pfaffians and the Pfaffian
//!   coordinates `q_i` on the opposite big cell.
//! * [`straighten`]: formal products of Pfaffian coordinates and their
//!   straightening into standard monomials.
//! * [`ringcheck`]: Hilbert functions of the invariant ring and the
//!   generation checks built on top of them.
//! * [`rewrite`]: quadratic monomial reduction systems, confluence and
//!   comparison with quadratic Veronese ideals.
//!
//! All arithmetic is exact (`BigRational`); nothing in this crate uses floats.

pub mod error;
pub mod linalg;
pub mod pfaffian;
pub mod poly;
pub mod rewrite;
pub mod ringcheck;
pub mod rng;
pub mod straighten;
pub mod tableau;
pub mod weyl;

pub use error::{Error, Result};
pub use weyl::{CosetTuple, RankParam};

/// Resource limits for exhaustive enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Guard {
    /// Largest rank parameter `n` accepted by enumerations over `W^P`.
    pub max_n: usize,
    /// Largest tableau degree `k` (number of row pairs) accepted.
    pub max_degree: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_n: 4,
            max_degree: 12,
        }
    }
}

impl Guard {
    pub fn unbounded() -> Self {
        Guard {
            max_n: usize::MAX,
            max_degree: usize::MAX,
        }
    }

    pub fn check_n(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::GuardExceeded(format!(
                "n = {n} exceeds the enumeration limit {} (override the guard to proceed)",
                self.max_n
            )));
        }
        Ok(())
    }

    pub fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.max_degree {
            return Err(Error::GuardExceeded(format!(
                "degree {k} exceeds the limit {} (override the guard to proceed)",
                self.max_degree
            )));
        }
        Ok(())
    }
}

/// Exact rational scalar used throughout.
pub type Q = num_rational::BigRational;

/// Outcome of a verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Status::Pass
    }
}
