//! Delta operators, binomial and Sheffer curves, and umbral structures.
//!
//! A delta operator `d` of level `n` determines a unique binomial curve
//! `η = (S_0, ..., S_n)`: `S_0 = 1`, `d S_k = k S_{k-1}` and `S_k(0) = 0`.
//! Conversely the top polynomial `S_n` determines `d` up to an `n`-th root of
//! unity; we fix the representative with `a_1 = 1`.

mod curve;
mod delta;

pub use curve::Curve;
pub use delta::{DeltaOp, NamedOp};

use num_traits::{One, Zero};

use crate::conv::{conv_matrix, creation_matrix, Seq};
use crate::error::{Error, Result};
use crate::matrix::LowerTriMatrix;
use crate::poly::Poly;
use crate::scalar::{self, binomial_q, factorial_q, falling_q, Scalar};

/// The binomial curve of `d`, solved coefficient by coefficient.
///
/// Writing `S_k = sum_j c_j t^j`, the coefficient of `t^m` in `d S_k` is
/// `sum_{j>m} c_j a_{j-m} (j)_{j-m}`; matching it against `k [t^m] S_{k-1}`
/// for `m = k-1, ..., 0` gives `c_k, ..., c_1` in turn, and `c_0 = 0`.
pub fn binomial_curve(d: &DeltaOp) -> Curve {
    let n = d.level();
    let a: Vec<Scalar> = (0..=n).map(|k| if k == 0 { Scalar::zero() } else { d.coeff(k) }).collect();
    let mut comps = vec![Poly::one()];
    for k in 1..=n {
        let prev = &comps[k - 1];
        let kq = scalar::int(k as i64);
        let mut c = vec![Scalar::zero(); k + 1];
        for m in (0..k).rev() {
            let rhs = (m + 2..=k).fold(&kq * prev.coeff(m), |acc, j| {
                acc - &c[j] * &a[j - m] * falling_q(j, j - m)
            });
            c[m + 1] = rhs / (&a[1] * scalar::int(m as i64 + 1));
        }
        comps.push(Poly::new(c));
    }
    Curve::new(comps).expect("binomial curves have exact degrees")
}

/// Checks `S_k(x + y) = sum_j C(k, j) S_j(x) S_{k-j}(y)` for every component
/// as a polynomial identity.
///
/// Both sides are polynomials in `(x, y)` of degree at most `k` in `y`, so
/// comparing them as polynomials in `x` at the `k + 1` points `y = 0..=k`
/// proves the identity.
pub fn check_binomial_identity(eta: &Curve) -> Result<()> {
    let s = eta.components();
    for k in 0..s.len() {
        for y in 0..=k {
            let y = scalar::int(y as i64);
            let lhs = s[k].shift(&y);
            let rhs: Poly = (0..=k)
                .map(|j| s[j].scale(&(binomial_q(k, j) * s[k - j].eval(&y))))
                .sum();
            if lhs != rhs {
                return Err(Error::IdentityViolation(format!(
                    "binomial identity fails for S_{k} at y = {}",
                    scalar::format(&y)
                )));
            }
        }
    }
    Ok(())
}

/// A delta operator up to `n`-th roots of unity, stored through the
/// representative with `a_1 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UmbralStructure {
    op: DeltaOp,
}

impl UmbralStructure {
    pub fn from_op(d: &DeltaOp) -> Self {
        UmbralStructure { op: d.normalized() }
    }

    pub fn level(&self) -> usize {
        self.op.level()
    }

    /// The normalized operator.
    pub fn op(&self) -> &DeltaOp {
        &self.op
    }

    /// `S_n`, monic.
    pub fn top(&self) -> Poly {
        binomial_curve(&self.op).component(self.level()).clone()
    }
}

/// Recovers the normalized operator from `S = S_n` (rescaled to monic).
///
/// With `d = ∂ + sum_{k>=2} λ_k ∂^k`, the conditions `(d^j S)(0) = 0` for
/// `j = n-1, ..., 1` each involve one new unknown: `λ_k` enters
/// `(d^{n-k+1} S)(0)` only through the term `(n-k+1) λ_k n!`.
pub fn delta_from_top(s: &Poly) -> Result<UmbralStructure> {
    let n = match s.degree() {
        Some(n) if n >= 1 => n,
        found => return Err(Error::WrongDegree { expected: 1, found }),
    };
    if !s.coeff(0).is_zero() {
        return Err(Error::ConstantTermNonzero);
    }
    let s = s.monic().expect("nonzero");
    let nfact = factorial_q(n);
    let mut lambda = vec![Scalar::zero(); n];
    lambda[0] = Scalar::one();
    for idx in 2..=n {
        let j = n - idx + 1;
        let d = DeltaOp::new(lambda.clone())?;
        let val = d.apply_pow(&s, j)?.eval(&Scalar::zero());
        lambda[idx - 1] = -val / (scalar::int(j as i64) * &nfact);
    }
    Ok(UmbralStructure { op: DeltaOp::new(lambda)? })
}

/// `v ⋆ θ`: component `m` is `sum_k C(m, k) v_{m-k} P_k`.
pub fn sheffer_curve(v: &Seq, theta: &Curve) -> Result<Curve> {
    if v.level() != theta.level() {
        return Err(Error::LevelMismatch { left: v.level(), right: theta.level() });
    }
    if !v.is_invertible() {
        return Err(Error::NotInvertibleSeq);
    }
    let p = theta.components();
    let comps = (0..p.len())
        .map(|m| (0..=m).map(|k| p[k].scale(&(binomial_q(m, k) * v.get(m - k)))).sum())
        .collect();
    Curve::new(comps)
}

/// Matrix of the lowering operator `Δ_θ` (the one with `Δ_θ P_k = k P_{k-1}`)
/// on monomials, row `i` holding the coefficients of `Δ_θ(t^i)`.
///
/// With `θ = T e` and `Δ_θ θ = N θ` this is `T^{-1} N T`.
pub fn curve_delta(theta: &Curve) -> LowerTriMatrix {
    let t = theta.matrix();
    let tinv = t.inverse().expect("curve matrices are invertible");
    tinv.mul(&creation_matrix(theta.level())).and_then(|m| m.mul(&t)).expect("same size")
}

/// Whether `Δ_θ` is a delta operator, i.e. its monomial matrix has the shape
/// `(i, i-k) -> a_k (i)_k`. Returns the operator when it is.
pub fn is_sheffer(theta: &Curve) -> Option<DeltaOp> {
    let n = theta.level();
    if n == 0 {
        return None;
    }
    let l = curve_delta(theta);
    let a: Vec<Scalar> = (1..=n).map(|k| l.get(k, 0) / factorial_q(k)).collect();
    for i in 1..=n {
        for k in 1..=i {
            if l.get(i, i - k) != &a[k - 1] * falling_q(i, k) {
                return None;
            }
        }
    }
    DeltaOp::new(a).ok()
}

/// `U_θ(a) = T M(e(a)) T^{-1}`, so that `θ(t + a) = U_θ(a) θ(t)`.
pub fn translation_matrix(theta: &Curve, a: &Scalar) -> LowerTriMatrix {
    let t = theta.matrix();
    let shift = conv_matrix(&Seq::powers(a, theta.level()));
    t.mul(&shift)
        .and_then(|m| m.mul(&t.inverse().expect("curve matrices are invertible")))
        .expect("same size")
}

/// `sum_k d^k P(t) S_k(a) / k!`, checked against `P(t + a)`.
pub fn umbral_taylor(p: &Poly, a: &Scalar, d: &DeltaOp) -> Result<Poly> {
    let deg = p.degree_or_zero();
    if deg > d.level() {
        return Err(Error::DegreeExceedsLevel { degree: deg, level: d.level() });
    }
    let eta = binomial_curve(d);
    let mut out = Poly::zero();
    let mut dk = p.clone();
    for k in 0..=deg {
        out = &out + &dk.scale(&(eta.component(k).eval(a) / factorial_q(k)));
        dk = d.apply(&dk)?;
    }
    if out != p.shift(a) {
        return Err(Error::IdentityViolation("umbral Taylor expansion differs from P(t + a)".into()));
    }
    Ok(out)
}
