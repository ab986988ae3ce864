//! Umbral Wronskians, dual curves and generalized Vandermonde determinants.
//!
//! For a curve `θ = T η`, where `η = (S_0, ..., S_n)` is the binomial curve
//! of `d`, the umbral Wronskian is the linear form
//! `W(t, v) = (1/n!) sum_k C(n, k) (T^{-1} v)_{n-k} S_k(t)`.
//! It is computed from this closed form; the determinant-ratio definition
//! is available separately as a cross-check.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::conv::{binom_convolve, conv_invert, Seq};
use crate::error::{Error, Result};
use crate::matrix::{det_dense, LowerTriMatrix};
use crate::pairing::{add_convolve, pairing};
use crate::poly::Poly;
use crate::scalar::{self, binomial_q, factorial_q, falling_q, Scalar};
use crate::umbral::{binomial_curve, sheffer_curve, Curve, DeltaOp, NamedOp};

/// `W(t, v) = sum_k columns[k](t) v_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WronskianRepr", into = "WronskianRepr")]
pub struct WronskianForm {
    columns: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
struct WronskianRepr {
    level: usize,
    columns: Vec<Poly>,
}

impl TryFrom<WronskianRepr> for WronskianForm {
    type Error = Error;
    fn try_from(r: WronskianRepr) -> Result<Self> {
        if r.columns.len() != r.level + 1 {
            return Err(Error::Invalid(format!(
                "Wronskian of level {} needs {} columns, got {}",
                r.level,
                r.level + 1,
                r.columns.len()
            )));
        }
        if let Some(p) = r.columns.iter().find(|p| p.degree_or_zero() > r.level) {
            return Err(Error::DegreeExceedsLevel { degree: p.degree_or_zero(), level: r.level });
        }
        Ok(WronskianForm { columns: r.columns })
    }
}

impl From<WronskianForm> for WronskianRepr {
    fn from(w: WronskianForm) -> Self {
        WronskianRepr { level: w.level(), columns: w.columns }
    }
}

impl WronskianForm {
    pub fn level(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn columns(&self) -> &[Poly] {
        &self.columns
    }

    /// `W(t, v)` as a polynomial in `t`.
    pub fn apply(&self, v: &Seq) -> Result<Poly> {
        if v.level() != self.level() {
            return Err(Error::LevelMismatch { left: self.level(), right: v.level() });
        }
        Ok(self.columns.iter().zip(v.entries()).map(|(c, x)| c.scale(x)).sum())
    }

    pub fn eval(&self, t: &Scalar, v: &Seq) -> Result<Scalar> {
        Ok(self.apply(v)?.eval(t))
    }
}

fn working_op(d: &DeltaOp, n: usize) -> Result<DeltaOp> {
    if n > d.level() {
        return Err(Error::DegreeExceedsLevel { degree: n, level: d.level() });
    }
    d.with_level(n.max(1))
}

/// The `T` with `θ = T η`.
fn coordinates(theta: &Curve, eta: &Curve) -> Result<LowerTriMatrix> {
    theta.matrix().mul(&eta.matrix().inverse()?)
}

/// `W_θ^d` from the closed form.
pub fn umbral_wronskian(theta: &Curve, d: &DeltaOp) -> Result<WronskianForm> {
    let n = theta.level();
    let d = working_op(d, n)?;
    let eta = binomial_curve(&d);
    let tinv = coordinates(theta, &eta)?.inverse()?;
    let nfact = factorial_q(n);
    let columns = (0..=n)
        .map(|q| {
            (0..=n)
                .map(|k| eta.component(k).scale(&(binomial_q(n, k) * tinv.get(n - k, q) / &nfact)))
                .sum()
        })
        .collect();
    Ok(WronskianForm { columns })
}

/// `W_θ^d(-t, e_q)` for every `q`, from the determinant ratio
/// `det(θ, dθ, ..., d^{n-1}θ, v) / det(θ, dθ, ..., d^n θ)` evaluated at `t`.
pub fn wronskian_by_determinants(theta: &Curve, d: &DeltaOp, t: &Scalar) -> Result<Vec<Scalar>> {
    let n = theta.level();
    let d = working_op(d, n)?;
    // columns d^j θ(t)
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(n + 1);
    let mut comps: Vec<Poly> = theta.components().to_vec();
    for _ in 0..=n {
        cols.push(comps.iter().map(|p| p.eval(t)).collect());
        comps = comps.iter().map(|p| d.apply(p)).collect::<Result<_>>()?;
    }
    let as_rows = |cols: &[Vec<Scalar>]| -> Vec<Vec<Scalar>> {
        (0..=n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    };
    let full = det_dense(&as_rows(&cols))?;
    if full.is_zero() {
        return Err(Error::SingularMatrix);
    }
    (0..=n)
        .map(|q| {
            let mut c = cols[..n].to_vec();
            c.push(Seq::unit(q, n).entries().to_vec());
            Ok(det_dense(&as_rows(&c))? / &full)
        })
        .collect()
}

/// `T -> D^{-1} J (T^{-1})^T J D`, the coordinates of the dual curve in the
/// basis `η`, where `D = diag(C(n, k))` and `J` reverses indices.
pub fn dual_matrix(t: &LowerTriMatrix) -> Result<LowerTriMatrix> {
    let n = t.size() - 1;
    let x = t.inverse()?.reverse_transpose();
    Ok(LowerTriMatrix::from_fn(n + 1, |l, k| binomial_q(n, k) * x.entry(l, k) / binomial_q(n, l)))
}

/// `θ* = (Q_k)` with `Q_k = k! (n-k)! W_θ^d(t, e_{n-k})`; the matrix form is
/// checked against the Wronskian definition.
pub fn dual_curve(theta: &Curve, d: &DeltaOp) -> Result<Curve> {
    let n = theta.level();
    let w = umbral_wronskian(theta, d)?;
    let comps: Vec<Poly> = (0..=n)
        .map(|k| w.columns()[n - k].scale(&(factorial_q(k) * factorial_q(n - k))))
        .collect();
    let dual = Curve::new(comps)?;

    let eta = binomial_curve(&working_op(d, n)?);
    let via_matrix = dual_matrix(&coordinates(theta, &eta)?)?.mul(&eta.matrix())?;
    if via_matrix != dual.matrix() {
        return Err(Error::IdentityViolation("dual curve: matrix form disagrees with the Wronskian".into()));
    }
    Ok(dual)
}

/// Checks `<P_a, Q_b^†>_n^d = a! b! δ_{a+b,n}` for all `a, b`.
pub fn duality_pairing_check(theta: &Curve, d: &DeltaOp) -> Result<bool> {
    let n = theta.level();
    let dual = dual_curve(theta, d)?;
    for a in 0..=n {
        for b in 0..=n {
            let v = pairing(theta.component(a), &dual.component(b).reflect(), d, n)?;
            let expected = if a + b == n { factorial_q(a) * factorial_q(b) } else { Scalar::zero() };
            if v != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dual of the Sheffer curve `v ⋆ η`: returns `v^{-1}` after checking that
/// `dual(v ⋆ η) = v^{-1} ⋆ η` and `n! W(t, η(s)) = θ*_n(t + s)`.
pub fn sheffer_dual(v: &Seq, d: &DeltaOp) -> Result<Seq> {
    let n = v.level();
    let d = working_op(d, n)?;
    let inv = conv_invert(v)?;
    let eta = binomial_curve(&d);
    let theta = sheffer_curve(v, &eta)?;
    let dual = dual_curve(&theta, &d)?;
    if dual != sheffer_curve(&inv, &eta)? {
        return Err(Error::IdentityViolation("Sheffer dual is not the convolution inverse".into()));
    }
    // both sides have degree <= n in s, so n + 1 sample points decide
    let w = umbral_wronskian(&theta, &d)?;
    for s in 0..=n {
        let s = scalar::int(s as i64);
        let lhs = w.apply(&eta.eval(&s))?.scale(&factorial_q(n));
        if lhs != dual.component(n).shift(&s) {
            return Err(Error::IdentityViolation("n! W(t, η(s)) != θ*_n(t + s)".into()));
        }
    }
    Ok(inv)
}

/// For `ϑ` the binomial curve of `s`, checks
/// `W_ϑ^d(t, v) = (1/n!) sum_p s^p S_n(t) v_p / p!` and that the dual
/// components are `s^{n-k} S_n / (n)_{n-k}`.
pub fn bistructure_wronskian_check(s: &DeltaOp, d: &DeltaOp, n: usize) -> Result<bool> {
    let s = working_op(s, n)?;
    let d = working_op(d, n)?;
    let vartheta = binomial_curve(&s).truncated(n);
    let s_n = binomial_curve(&d).component(n).clone();
    let w = umbral_wronskian(&vartheta, &d)?;
    let nfact = factorial_q(n);
    for p in 0..=n {
        let expected = s.apply_pow(&s_n, p)?.scale(&(factorial_q(p) * &nfact).recip());
        if w.columns()[p] != expected {
            return Ok(false);
        }
    }
    let dual = dual_curve(&vartheta, &d)?;
    for k in 0..=n {
        let expected = s.apply_pow(&s_n, n - k)?.scale(&falling_q(n, n - k).recip());
        if dual.component(k) != &expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `B_n` of the Appell family inverse to the one with `A_k(0) = a_k`, as
/// the bordered determinant over `a_0^{n+1}`: the first `n` columns are
/// those of `M(a)` and the last is `(1, t, ..., t^n)`.
///
/// Expanded along the last column, with each minor computed exactly.
pub fn appell_inverse_determinant(a: &Seq) -> Result<Poly> {
    if !a.is_invertible() {
        return Err(Error::NotInvertibleSeq);
    }
    let n = a.level();
    let entry = |i: usize, j: usize| {
        if j <= i {
            binomial_q(i, j) * a.get(i - j)
        } else {
            Scalar::zero()
        }
    };
    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let minor: Vec<Vec<Scalar>> =
            (0..=n).filter(|&r| r != i).map(|r| (0..n).map(|j| entry(r, j)).collect()).collect();
        coeffs.push(scalar::sign(i + n) * det_dense(&minor)?);
    }
    let a0n = (0..=n).fold(Scalar::one(), |acc, _| acc * a.get(0));
    Ok(Poly::new(coeffs).scale(&a0n.recip()))
}

/// Both sides of a Vandermonde-type determinant identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VandermondeReport {
    #[serde(with = "scalar::serde_str")]
    pub determinant: Scalar,
    #[serde(with = "scalar::serde_str")]
    pub predicted: Scalar,
    pub holds: bool,
}

fn vandermonde_product(xs: &[Scalar]) -> Scalar {
    let mut p = Scalar::one();
    for j in 0..xs.len() {
        for i in 0..j {
            p *= &xs[j] - &xs[i];
        }
    }
    p
}

fn det_of_columns(cols: &[Vec<Scalar>]) -> Result<Scalar> {
    let n = cols.len();
    let rows: Vec<Vec<Scalar>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    det_dense(&rows)
}

/// `det(θ(x_0), ..., θ(x_n))` against `vol(θ) prod_{i<j} (x_j - x_i)`.
pub fn vandermonde_general(theta: &Curve, xs: &[Scalar]) -> Result<VandermondeReport> {
    let n = theta.level();
    if xs.len() != n + 1 {
        return Err(Error::LevelMismatch { left: n + 1, right: xs.len() });
    }
    let cols: Vec<Vec<Scalar>> = xs.iter().map(|x| theta.eval(x).entries().to_vec()).collect();
    let determinant = det_of_columns(&cols)?;
    let predicted = theta.volume() * vandermonde_product(xs);
    Ok(VandermondeReport { holds: determinant == predicted, determinant, predicted })
}

/// `det(θ(t + a_1), ..., θ(t + a_n), v)` against
/// `vol(θ) prod_{i<j} (a_j - a_i) n! W_θ^d(-t, v)`, where the `a_i` are the
/// (simple) roots of `S_n`.
pub fn vandermonde_shifted(
    theta: &Curve,
    d: &DeltaOp,
    roots: &[Scalar],
    t: &Scalar,
    v: &Seq,
) -> Result<VandermondeReport> {
    let n = theta.level();
    if roots.len() != n {
        return Err(Error::RootCountMismatch { expected: n, found: roots.len() });
    }
    if v.level() != n {
        return Err(Error::LevelMismatch { left: n, right: v.level() });
    }
    let dd = working_op(d, n)?;
    let s_n = binomial_curve(&dd).component(n).clone();
    check_simple_roots(&s_n, roots)?;
    let mut cols: Vec<Vec<Scalar>> =
        roots.iter().map(|a| theta.eval(&(t + a)).entries().to_vec()).collect();
    cols.push(v.entries().to_vec());
    let determinant = det_of_columns(&cols)?;
    let w = umbral_wronskian(theta, &dd)?.eval(&-t.clone(), v)?;
    let predicted = theta.volume() * vandermonde_product(roots) * factorial_q(n) * w;
    Ok(VandermondeReport { holds: determinant == predicted, determinant, predicted })
}

fn check_simple_roots(s_n: &Poly, roots: &[Scalar]) -> Result<()> {
    for (i, a) in roots.iter().enumerate() {
        if roots[..i].contains(a) {
            return Err(Error::BadRoots(format!("repeated root {}", scalar::format(a))));
        }
        if !s_n.eval(a).is_zero() {
            return Err(Error::BadRoots(format!("{} is not a root of S_n", scalar::format(a))));
        }
    }
    Ok(())
}

/// Exact simple roots of `S_n` for the registry operators that have them:
/// `0, 1, ..., n-1` for `Δ`, `0, -1, ..., -(n-1)` for `Λ`, and the cases
/// `n <= 2` of the other families.
pub fn known_roots(d: &DeltaOp, n: usize) -> Option<Vec<Scalar>> {
    let candidates: Vec<Scalar> = match d.named_op()? {
        NamedOp::ForwardDifference => (0..n).map(|k| scalar::int(k as i64)).collect(),
        NamedOp::BackwardDifference => (0..n).map(|k| scalar::int(-(k as i64))).collect(),
        NamedOp::Abel(a) if n <= 2 => (0..n).map(|k| a * scalar::int(2 * k as i64)).collect(),
        NamedOp::Derivative if n <= 1 => vec![Scalar::zero(); n],
        NamedOp::Touchard if n <= 2 => (0..n).map(|k| scalar::int(-(k as i64))).collect(),
        _ => return None,
    };
    let s_n = binomial_curve(&d.with_level(n.max(1)).ok()?).component(n).clone();
    check_simple_roots(&s_n, &candidates).ok().map(|_| candidates)
}

/// Checks `W_θ^d(t, v) = S_n(t) ⊞_n W_θ(t, v)` column by column.
pub fn wronskian_bridge_check(theta: &Curve, d: &DeltaOp) -> Result<bool> {
    let n = theta.level();
    let dd = working_op(d, n)?;
    let s_n = binomial_curve(&dd).component(n).clone();
    let umbral = umbral_wronskian(theta, &dd)?;
    let classical = umbral_wronskian(theta, &DeltaOp::derivative(n))?;
    for (u, c) in umbral.columns().iter().zip(classical.columns()) {
        if u != &add_convolve(&s_n, c, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(u ⋆ η) ⊞_n^d (v ⋆ η) = (u ⋆ v) ⋆ η` at the top component.
pub fn sheffer_morphism_check(u: &Seq, v: &Seq, d: &DeltaOp) -> Result<bool> {
    let n = u.level();
    let dd = working_op(d, n)?;
    let eta = binomial_curve(&dd);
    let top = |w: &Seq| -> Result<Poly> { Ok(sheffer_curve(w, &eta)?.component(n).clone()) };
    let lhs = crate::pairing::umbral_add_convolve(&top(u)?, &top(v)?, &dd, n)?;
    Ok(lhs == top(&binom_convolve(u, v)?)?)
}
