//! Vandermonde curves `θ = (P_0, ..., P_n)` with `deg P_k = k`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::conv::Seq;
use crate::error::{Error, Result};
use crate::matrix::LowerTriMatrix;
use crate::poly::Poly;
use crate::scalar::{self, Scalar};

/// A Vandermonde curve of level `n`, viewed as the map `t -> (P_0(t), ..., P_n(t))`.
///
/// Equivalently `θ = T e` where `e = (1, t, ..., t^n)` and `T` is lower
/// triangular with `T_{kj} = [t^j] P_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr", into = "CurveRepr")]
pub struct Curve {
    components: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    level: usize,
    components: Vec<Poly>,
}

impl TryFrom<CurveRepr> for Curve {
    type Error = Error;
    fn try_from(r: CurveRepr) -> Result<Self> {
        if r.components.len() != r.level + 1 {
            return Err(Error::Invalid(format!(
                "curve of level {} needs {} components, got {}",
                r.level,
                r.level + 1,
                r.components.len()
            )));
        }
        Curve::new(r.components)
    }
}

impl From<Curve> for CurveRepr {
    fn from(c: Curve) -> Self {
        CurveRepr { level: c.level(), components: c.components }
    }
}

impl Curve {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Invalid("a curve has at least one component".into()));
        }
        for (k, p) in components.iter().enumerate() {
            if p.degree() != Some(k) {
                return Err(Error::WrongDegree { expected: k, found: p.degree() });
            }
        }
        Ok(Curve { components })
    }

    /// `e = (1, t, ..., t^n)`
    pub fn standard(level: usize) -> Self {
        Curve { components: (0..=level).map(|k| Poly::monomial(k, scalar::int(1))).collect() }
    }

    pub fn falling_factorials(level: usize) -> Self {
        Curve { components: (0..=level).map(Poly::falling_factorial).collect() }
    }

    pub fn from_matrix(t: &LowerTriMatrix) -> Result<Self> {
        if t.size() == 0 {
            return Err(Error::Invalid("a curve has at least one component".into()));
        }
        if (0..t.size()).any(|k| t.entry(k, k).is_zero()) {
            return Err(Error::SingularMatrix);
        }
        Ok(Curve { components: t.rows().iter().map(|r| Poly::new(r.clone())).collect() })
    }

    pub fn level(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Poly {
        &self.components[k]
    }

    /// `T` with `θ = T e`.
    pub fn matrix(&self) -> LowerTriMatrix {
        LowerTriMatrix::from_fn(self.components.len(), |k, j| self.components[k].coeff(j))
    }

    /// The point `θ(x)` as a sequence.
    pub fn eval(&self, x: &Scalar) -> Seq {
        Seq::new(self.components.iter().map(|p| p.eval(x)).collect())
    }

    /// The first `level + 1` components.
    pub fn truncated(&self, level: usize) -> Curve {
        Curve { components: self.components[..=level].to_vec() }
    }

    /// Product of the leading coefficients, i.e. `det T`.
    pub fn volume(&self) -> Scalar {
        self.matrix().det()
    }
}
