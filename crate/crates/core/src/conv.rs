//! Finite sequences under binomial convolution and their matrix realization.
//!
//! For `a = (a_0, ..., a_n)` the matrix `M(a)` has entries
//! `C(i, j) a_{i-j}`; it is exactly the commutant of the creation matrix `N`
//! (subdiagonal `1, 2, ..., n`), and `a -> M(a)` turns `⋆` into matrix
//! multiplication.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LowerTriMatrix;
use crate::scalar::{self, binomial_q, Scalar};

/// A finite sequence `(a_0, ..., a_n)` at level `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeqRepr", into = "SeqRepr")]
pub struct Seq {
    entries: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct SeqRepr {
    level: usize,
    #[serde(with = "scalar::serde_vec")]
    entries: Vec<Scalar>,
}

impl TryFrom<SeqRepr> for Seq {
    type Error = Error;
    fn try_from(r: SeqRepr) -> Result<Self> {
        if r.entries.len() != r.level + 1 {
            return Err(Error::Invalid(format!(
                "sequence of level {} needs {} entries, got {}",
                r.level,
                r.level + 1,
                r.entries.len()
            )));
        }
        Ok(Seq { entries: r.entries })
    }
}

impl From<Seq> for SeqRepr {
    fn from(s: Seq) -> Self {
        SeqRepr { level: s.level(), entries: s.entries }
    }
}

impl Seq {
    /// Panics on an empty list.
    pub fn new(entries: Vec<Scalar>) -> Self {
        assert!(!entries.is_empty(), "a sequence has at least one entry");
        Seq { entries }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Seq::new(v.iter().map(|&x| scalar::int(x)).collect())
    }

    /// Basis vector `e_k` at level `n`.
    pub fn unit(k: usize, level: usize) -> Self {
        let mut e = vec![Scalar::zero(); level + 1];
        e[k] = Scalar::one();
        Seq { entries: e }
    }

    /// `e(a) = (1, a, a^2, ..., a^n)`
    pub fn powers(a: &Scalar, level: usize) -> Self {
        let mut out = Vec::with_capacity(level + 1);
        let mut p = Scalar::one();
        for _ in 0..=level {
            out.push(p.clone());
            p *= a;
        }
        Seq { entries: out }
    }

    pub fn level(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> &Scalar {
        &self.entries[k]
    }

    pub fn is_invertible(&self) -> bool {
        !self.entries[0].is_zero()
    }

    pub fn truncate(&self, level: usize) -> Seq {
        Seq { entries: self.entries[..=level].to_vec() }
    }
}

/// `c_m = sum_k C(m, k) a_k b_{m-k}`
pub fn binom_convolve(a: &Seq, b: &Seq) -> Result<Seq> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch { left: a.level(), right: b.level() });
    }
    let entries = (0..=a.level())
        .map(|m| {
            (0..=m).fold(Scalar::zero(), |acc, k| {
                acc + binomial_q(m, k) * &a.entries[k] * &b.entries[m - k]
            })
        })
        .collect();
    Ok(Seq { entries })
}

/// `M(a)_{ij} = C(i, j) a_{i-j}`
pub fn conv_matrix(a: &Seq) -> LowerTriMatrix {
    LowerTriMatrix::from_fn(a.level() + 1, |i, j| binomial_q(i, j) * &a.entries[i - j])
}

/// The creation matrix: `N_{ij} = i` when `j = i - 1`, zero elsewhere.
pub fn creation_matrix(level: usize) -> LowerTriMatrix {
    LowerTriMatrix::from_fn(level + 1, |i, j| {
        if j + 1 == i {
            scalar::int(i as i64)
        } else {
            Scalar::zero()
        }
    })
}

/// Inverse for `⋆`, by forward substitution on `M(a) x = e_0`.
pub fn conv_invert(a: &Seq) -> Result<Seq> {
    if !a.is_invertible() {
        return Err(Error::NotInvertibleSeq);
    }
    let x = conv_matrix(a).solve(Seq::unit(0, a.level()).entries())?;
    Ok(Seq { entries: x })
}
