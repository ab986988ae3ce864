//! Umbral polarity pairing, umbral additive convolution and deviation
//! polynomials.
//!
//! For a delta operator `d` and polynomials of degree at most `n`:
//!
//! * `<A, B>_n^d = sum_p (-1)^{n-p} d^p A * (d*)^{n-p} B`, a constant;
//! * `n! (P ⊞_n^d Q)(z) = sum_k (d^k P)(0) * (d^{n-k} Q)(z)`, with neutral
//!   element `S_n`;
//! * the deviation polynomial `R_n` is the inverse of `S_n` for the classical
//!   convolution `⊞_n = ⊞_n^∂`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{self, binomial_q, factorial_q, Scalar};
use crate::umbral::{binomial_curve, DeltaOp};

/// Result of evaluating a polarity pairing.
///
/// `residual` is the nonconstant part of the pairing polynomial; it is zero
/// whenever the computation is correct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    #[serde(with = "scalar::serde_str")]
    pub value: Scalar,
    #[serde(skip)]
    pub residual: Poly,
    pub constant: bool,
}

fn check_level(d: &DeltaOp, n: usize) -> Result<()> {
    if n > d.level() {
        return Err(Error::DegreeExceedsLevel { degree: n, level: d.level() });
    }
    Ok(())
}

fn check_degree(p: &Poly, n: usize) -> Result<()> {
    let deg = p.degree_or_zero();
    if deg > n {
        return Err(Error::DegreeExceedsLevel { degree: deg, level: n });
    }
    Ok(())
}

/// The operator used at level `n`: `d` itself, or `∂` when `n = 0` and no
/// operator is needed.
fn working_op(d: &DeltaOp, n: usize) -> Result<DeltaOp> {
    check_level(d, n)?;
    d.with_level(n.max(1))
}

/// `sum_p (-1)^{n-p} d^p A * (d*)^{n-p} B` as a polynomial.
pub fn pairing_poly(a: &Poly, b: &Poly, d: &DeltaOp, n: usize) -> Result<Poly> {
    check_degree(a, n)?;
    check_degree(b, n)?;
    let d = working_op(d, n)?;
    let ds = d.adjoint();
    let mut da = Vec::with_capacity(n + 1);
    let mut dsb = Vec::with_capacity(n + 1);
    let (mut x, mut y) = (a.clone(), b.clone());
    for _ in 0..=n {
        let (nx, ny) = (d.apply(&x)?, ds.apply(&y)?);
        da.push(std::mem::replace(&mut x, nx));
        dsb.push(std::mem::replace(&mut y, ny));
    }
    Ok((0..=n).map(|p| (&da[p] * &dsb[n - p]).scale(&scalar::sign(n - p))).sum())
}

/// `<A, B>_n^d`, with the constancy of the pairing polynomial asserted.
pub fn polarity_pairing(a: &Poly, b: &Poly, d: &DeltaOp, n: usize) -> Result<PairingReport> {
    let poly = pairing_poly(a, b, d, n)?;
    let residual = poly.nonconstant_part();
    if !residual.is_zero() {
        return Err(Error::NonConstantPairing);
    }
    Ok(PairingReport { value: poly.coeff(0), residual, constant: true })
}

/// Shorthand for the value of [`polarity_pairing`].
pub fn pairing(a: &Poly, b: &Poly, d: &DeltaOp, n: usize) -> Result<Scalar> {
    polarity_pairing(a, b, d, n).map(|r| r.value)
}

/// The classical pairing `<A, B>_n` (with `d = ∂`).
pub fn classical_pairing(a: &Poly, b: &Poly, n: usize) -> Result<Scalar> {
    pairing(a, b, &DeltaOp::derivative(n), n)
}

/// `P ⊞_n^d Q = (1/n!) sum_k (d^k P)(0) d^{n-k} Q`.
pub fn umbral_add_convolve(p: &Poly, q: &Poly, d: &DeltaOp, n: usize) -> Result<Poly> {
    check_degree(p, n)?;
    check_degree(q, n)?;
    let d = working_op(d, n)?;
    let zero = Scalar::zero();
    let mut at0 = Vec::with_capacity(n + 1);
    let mut x = p.clone();
    for _ in 0..=n {
        at0.push(x.eval(&zero));
        x = d.apply(&x)?;
    }
    let mut out = Poly::zero();
    let mut y = q.clone();
    for j in 0..=n {
        // y = d^j Q pairs with (d^{n-j} P)(0)
        let c = &at0[n - j];
        if !c.is_zero() {
            out = &out + &y.scale(c);
        }
        y = d.apply(&y)?;
    }
    Ok(out.scale(&factorial_q(n).recip()))
}

/// The classical `P ⊞_n Q`.
pub fn add_convolve(p: &Poly, q: &Poly, n: usize) -> Result<Poly> {
    umbral_add_convolve(p, q, &DeltaOp::derivative(n), n)
}

/// The `X` with `P ⊞_n^d X = S_n`.
///
/// `P ⊞_n^d t^j` has degree `j` with leading coefficient `(d^n P)(0) / n!`,
/// which is nonzero exactly when `deg P = n`; the system is therefore
/// triangular and is solved from the top degree down.
pub fn add_conv_inverse(p: &Poly, d: &DeltaOp, n: usize) -> Result<Poly> {
    if p.degree() != Some(n) {
        return Err(Error::NotInvertiblePoly { level: n, found: p.degree() });
    }
    let d = working_op(d, n)?;
    let target = binomial_curve(&d).component(n).clone();
    let images: Vec<Poly> = (0..=n)
        .map(|j| umbral_add_convolve(p, &Poly::monomial(j, Scalar::one()), &d, n))
        .collect::<Result<_>>()?;
    let mut x = vec![Scalar::zero(); n + 1];
    for j in (0..=n).rev() {
        let rest = (j + 1..=n).fold(target.coeff(j), |acc, m| acc - &x[m] * images[m].coeff(j));
        x[j] = rest / images[j].coeff(j);
    }
    Ok(Poly::new(x))
}

/// `R_n`, the classical-`⊞_n` inverse of the top binomial polynomial `S_n` of `d`.
pub fn deviation_poly(d: &DeltaOp, n: usize) -> Result<Poly> {
    let d = working_op(d, n)?;
    let s_n = binomial_curve(&d).component(n).clone();
    add_conv_inverse(&s_n, &DeltaOp::derivative(n), n)
}

/// `n! R_n(α)` computed as `<t^n, (α - t)^n>_n^d`.
pub fn deviation_via_pairing(d: &DeltaOp, n: usize, alpha: &Scalar) -> Result<Scalar> {
    let tn = Poly::monomial(n, Scalar::one());
    let reflected = Poly::new(vec![alpha.clone(), -Scalar::one()]).pow(n);
    pairing(&tn, &reflected, d, n)
}

/// Checks `R_n' = R_{n-1} ⊞_{n-1} d t^n`.
pub fn deviation_recurrence_check(d: &DeltaOp, n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::Invalid("the recurrence is stated for n >= 2".into()));
    }
    let dn = working_op(d, n)?;
    let lhs = deviation_poly(&dn, n)?.derivative();
    let prev = deviation_poly(&dn, n - 1)?;
    let dtn = dn.apply(&Poly::monomial(n, Scalar::one()))?;
    Ok(lhs == add_convolve(&prev, &dtn, n - 1)?)
}

/// The Appell family `A_0, ..., A_order` with exponential generating series
/// `exp(tz) / (z D_log phi(z))`, where `phi` is the series of `d`.
///
/// Needs `a_{order+1}`; see [`DeltaOp::coeff`] for how it is obtained past
/// the level.
pub fn appell_from_structure(d: &DeltaOp, order: usize) -> Result<Vec<Poly>> {
    let g = d.phi(order + 1).z_dlog()?.reciprocal()?;
    let at0 = g.egf_values();
    let family: Vec<Poly> = (0..=order)
        .map(|n| {
            let mut c = vec![Scalar::zero(); n + 1];
            for (k, a) in at0.iter().enumerate().take(n + 1) {
                c[n - k] = binomial_q(n, k) * a;
            }
            Poly::new(c)
        })
        .collect();
    for n in 1..family.len() {
        if family[n].derivative() != family[n - 1].scale(&scalar::int(n as i64)) {
            return Err(Error::IdentityViolation(format!("A_{n}' != {n} A_{}", n - 1)));
        }
    }
    Ok(family)
}

/// `P -> d(∫P)`, with the primitive vanishing at 0.
fn integrate_then_apply(d: &DeltaOp, p: &Poly) -> Result<Poly> {
    d.apply(&p.antiderivative())
}

/// `A_n, (d ∂^{-1}) A_n, ..., (d ∂^{-1})^n A_n = R_n`.
pub fn deviation_appell_chain(d: &DeltaOp, n: usize) -> Result<Vec<Poly>> {
    check_level(d, n)?;
    let ext = d.with_level(n + 1)?;
    let a_n = appell_from_structure(&ext, n)?.pop().expect("order + 1 entries");
    let mut chain = vec![a_n];
    for _ in 0..n {
        let next = integrate_then_apply(&ext, chain.last().expect("nonempty"))?;
        chain.push(next);
    }
    Ok(chain)
}

/// `R_n = (d ∂^{-1})^n A_n`.
pub fn deviation_via_appell(d: &DeltaOp, n: usize) -> Result<Poly> {
    Ok(deviation_appell_chain(d, n)?.pop().expect("nonempty"))
}

/// `R_n = n! Δ^n(Λ t^{2n+1}) / (2n+1)!` for the forward difference, with
/// `Δ` and `Λ` evaluated as shift differences.
pub fn deviation_closed_delta(n: usize) -> Poly {
    let one = Scalar::one();
    let top = Poly::monomial(2 * n + 1, one.clone());
    let mut p = &top - &top.shift(&-one.clone());
    for _ in 0..n {
        p = &p.shift(&one) - &p;
    }
    p.scale(&(factorial_q(n) / factorial_q(2 * n + 1)))
}

/// Checks both relations between the umbral and classical structures:
/// `<P, Q>^d = <R_n ⊞ P, Q> = (-1)^n <P, R_n^† ⊞ Q>` and
/// `P ⊞^d Q = R_n ⊞ P ⊞ Q`.
pub fn umbral_vs_classical_bridge(p: &Poly, q: &Poly, d: &DeltaOp, n: usize) -> Result<bool> {
    let r = deviation_poly(d, n)?;
    let umbral = pairing(p, q, d, n)?;
    let left = classical_pairing(&add_convolve(&r, p, n)?, q, n)?;
    let right = scalar::sign(n) * classical_pairing(p, &add_convolve(&r.reflect(), q, n)?, n)?;
    let conv = umbral_add_convolve(p, q, d, n)? == add_convolve(&add_convolve(&r, p, n)?, q, n)?;
    Ok(umbral == left && umbral == right && conv)
}
