//! Floating-point root finding and root-localization checks.
//!
//! Polynomials are built exactly and converted to floats once. Evaluation
//! during the iteration uses double-double arithmetic on coefficients that
//! carry their rounding residuals, so ill-conditioned but exactly known
//! polynomials such as the deviation polynomials still give accurate roots.

mod dd;
mod verify;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

use dd::{CDd, Dd};

pub use verify::{
    apolar_campaign, deviation_line_spread, grace_margin, sample_poly_in_strip, verify_deviation_line,
    verify_grace, verify_walsh, walsh_margin, VerificationReport,
};

pub const DEFAULT_MAX_ITER: usize = 1000;
/// Relative correction size at which an Aberth iterate counts as converged.
pub const ROOT_TOL: f64 = 1e-14;

/// A polynomial with complex double coefficients, ascending degree.
///
/// Coefficients obtained from exact rationals keep the rounding residual of
/// each coefficient as a second double.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
    tails: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct ComplexPolyRepr {
    coeffs: Vec<(f64, f64)>,
}

impl Serialize for ComplexPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexPolyRepr { coeffs: self.coeffs.iter().map(|z| (z.re, z.im)).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ComplexPolyRepr::deserialize(d)?;
        ComplexPoly::new(r.coeffs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl ComplexPoly {
    /// Drops trailing zero coefficients; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Invalid("the zero polynomial has no leading coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Invalid("non-finite coefficient".into()));
        }
        let tails = vec![Complex64::zero(); coeffs.len()];
        Ok(ComplexPoly { coeffs, tails })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Monic image of an exact polynomial.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        let monic = p.monic().ok_or_else(|| Error::Invalid("the zero polynomial has no roots".into()))?;
        let (coeffs, tails) = monic
            .coeffs()
            .iter()
            .map(|c| {
                let x = Dd::from_scalar(c);
                (Complex64::new(x.hi, 0.0), Complex64::new(x.lo, 0.0))
            })
            .unzip();
        Ok(ComplexPoly { coeffs, tails })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn monic(&self) -> ComplexPoly {
        let lead = self.leading();
        if lead == Complex64::new(1.0, 0.0) {
            return self.clone();
        }
        ComplexPoly {
            coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
            tails: self.tails.iter().map(|c| c / lead).collect(),
        }
    }

    fn dd_coeff(&self, k: usize) -> CDd {
        CDd::new(self.coeffs[k], self.tails[k])
    }

    /// `(P(z), P'(z))` by Horner's rule in double-double.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let z = CDd::from_c64(z);
        let n = self.degree();
        let mut p = self.dd_coeff(n);
        let mut dp = CDd::default();
        for k in (0..n).rev() {
            dp = dp * z + p;
            p = p * z + self.dd_coeff(k);
        }
        (p.to_c64(), dp.to_c64())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).0
    }

    /// Bound on the rounding error of [`Self::eval`] at `z`.
    fn eval_error_bound(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let sum = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
        16.0 * (self.coeffs.len() as f64) * 2f64.powi(-104) * sum
    }
}

/// All roots, by Aberth–Ehrlich simultaneous iteration.
///
/// Exact zero roots (vanishing low-order coefficients) are split off first.
/// A root is accepted once its correction is below `tol` relative to
/// `max(1, |z|)` or its residual is at the level of evaluation round-off.
pub fn poly_roots(p: &ComplexPoly, tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Err(Error::Invalid("a constant polynomial has no roots to find".into()));
    }
    let zeros = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut roots = vec![Complex64::zero(); zeros];
    let q = ComplexPoly { coeffs: p.coeffs[zeros..].to_vec(), tails: p.tails[zeros..].to_vec() }.monic();
    let n = q.degree();
    if n == 0 {
        return Ok(roots);
    }

    let radius = 1.0 + q.coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, 0.25 + golden * k as f64)).collect();
    let mut done = vec![false; n];

    for _ in 0..max_iter {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (pv, dpv) = q.eval_with_derivative(z[i]);
            if pv.norm() <= q.eval_error_bound(z[i]) {
                done[i] = true;
                continue;
            }
            let newton = pv / dpv;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !w.re.is_finite() || !w.im.is_finite() {
                // coincident iterates; nudge apart
                let nudge = tol.max(1e-10) * (1.0 + z[i].norm());
                z[i] += Complex64::new(nudge, nudge);
                continue;
            }
            z[i] -= w;
            if w.norm() <= tol * z[i].norm().max(1.0) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            roots.extend(z);
            return Ok(roots);
        }
    }
    let residual = z.iter().map(|&r| q.eval(r).norm()).fold(0.0, f64::max);
    Err(Error::NoConvergence { max_iter, residual })
}

/// The closed vertical strip `lo <= Re z <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub lo: f64,
    pub hi: f64,
}

impl Strip {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Invalid(format!("not a strip: [{lo}, {hi}]")));
        }
        Ok(Strip { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Strip { lo: x, hi: x }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn shift(&self, a: f64) -> Strip {
        Strip { lo: self.lo + a, hi: self.hi + a }
    }

    /// Minkowski sum.
    pub fn add(&self, o: &Strip) -> Strip {
        Strip { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }

    /// Signed distance of `x` to the boundary: nonnegative inside.
    pub fn margin(&self, x: f64) -> f64 {
        (x - self.lo).min(self.hi - x)
    }

    /// Length of the overlap with `o`; negative values measure the gap.
    pub fn overlap(&self, o: &Strip) -> f64 {
        self.hi.min(o.hi) - self.lo.max(o.lo)
    }
}

/// `V(P)`, the smallest strip containing all roots.
pub fn root_strip(p: &ComplexPoly, tol: f64) -> Result<Strip> {
    let roots = poly_roots(p, tol, DEFAULT_MAX_ITER)?;
    Ok(strip_of(&roots))
}

fn strip_of(roots: &[Complex64]) -> Strip {
    let lo = roots.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let hi = roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Strip { lo, hi }
}

/// Roots of an exact polynomial of positive degree.
pub fn exact_poly_roots(p: &Poly) -> Result<Vec<Complex64>> {
    poly_roots(&ComplexPoly::from_poly(p)?, ROOT_TOL, DEFAULT_MAX_ITER)
}

/// `V(P)` of an exact polynomial of positive degree.
pub fn exact_root_strip(p: &Poly) -> Result<Strip> {
    Ok(strip_of(&exact_poly_roots(p)?))
}
