//! Truncated formal power series over the rationals.
//!
//! A series of order `N` stores the coefficients of `z^0 .. z^N`; all
//! products are truncated to the smaller order of the operands.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, factorial_q, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct PowerSeries {
    coeffs: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    #[serde(with = "scalar::serde_vec")]
    coeffs: Vec<Scalar>,
}

impl TryFrom<SeriesRepr> for PowerSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.coeffs.len() != r.order + 1 {
            return Err(Error::Invalid(format!(
                "series of order {} needs {} coefficients, got {}",
                r.order,
                r.order + 1,
                r.coeffs.len()
            )));
        }
        Ok(PowerSeries { coeffs: r.coeffs })
    }
}

impl From<PowerSeries> for SeriesRepr {
    fn from(s: PowerSeries) -> Self {
        SeriesRepr { order: s.order(), coeffs: s.coeffs }
    }
}

impl PowerSeries {
    /// Builds a series of order `coeffs.len() - 1`. Panics on an empty list.
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        PowerSeries { coeffs }
    }

    /// Pads with zeros (or truncates) to the requested order.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        coeffs.resize(order + 1, Scalar::zero());
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries::from_coeffs(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::from_coeffs(vec![Scalar::one()], order)
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        PowerSeries::from_coeffs(vec![Scalar::zero(), Scalar::one()], order)
    }

    /// `exp(a z)`
    pub fn exp_scaled(a: &Scalar, order: usize) -> Self {
        let mut c = Vec::with_capacity(order + 1);
        let mut term = Scalar::one();
        for k in 0..=order {
            c.push(term.clone());
            term = term * a / scalar::int(k as i64 + 1);
        }
        PowerSeries { coeffs: c }
    }

    /// `log(1 + z)`
    pub fn log1p(order: usize) -> Self {
        let c = (0..=order)
            .map(|k| {
                if k == 0 {
                    Scalar::zero()
                } else {
                    scalar::sign(k + 1) / scalar::int(k as i64)
                }
            })
            .collect();
        PowerSeries { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        PowerSeries::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        PowerSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|m| {
                (0..=m).fold(Scalar::zero(), |acc, k| acc + &self.coeffs[k] * &other.coeffs[m - k])
            })
            .collect();
        PowerSeries { coeffs }
    }

    /// Multiplicative inverse, solved coefficient by coefficient.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonUnitSeries);
        }
        let inv0 = c0.recip();
        let mut out: Vec<Scalar> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for m in 1..=self.order() {
            let s = (1..=m).fold(Scalar::zero(), |acc, k| acc + &self.coeffs[k] * &out[m - k]);
            out.push(-s * &inv0);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `self(inner(z))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NotInvertibleSeries("inner series must vanish at 0"));
        }
        let n = self.order().min(inner.order());
        let mut acc = PowerSeries::zero(n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul(inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Returns `psi` with `self(psi(z)) = z` up to the order of `self`.
    ///
    /// Coefficients are fixed one order at a time: `[z^m] self(psi)` is affine
    /// in `psi_m` with slope `self_1`, so each step is a single division.
    pub fn compositional_inverse(&self) -> Result<Self> {
        let n = self.order();
        if n < 1 {
            return Err(Error::NotInvertibleSeries("order must be at least 1"));
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertibleSeries("constant term must be 0"));
        }
        let slope = &self.coeffs[1];
        if slope.is_zero() {
            return Err(Error::NotInvertibleSeries("linear coefficient must be nonzero"));
        }
        let mut psi = PowerSeries::zero(n);
        psi.coeffs[1] = slope.recip();
        for m in 2..=n {
            let partial = psi.truncate(m);
            let phi_m = self.truncate(m);
            let c = phi_m.compose(&partial)?.coeffs[m].clone();
            psi.coeffs[m] = -c / slope;
        }
        Ok(psi)
    }

    /// `z phi'(z) / phi(z)` for `phi(0) = 0`, `phi'(0) != 0`.
    ///
    /// Writing `phi = z u` this is `1 + z u'/u`; the result has order one less
    /// than `phi`.
    pub fn z_dlog(&self) -> Result<Self> {
        if self.order() < 1 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::NotInvertibleSeries(
                "z D_log needs phi(0) = 0 and phi'(0) != 0",
            ));
        }
        let u = PowerSeries { coeffs: self.coeffs[1..].to_vec() };
        let zdu = PowerSeries {
            coeffs: u
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * scalar::int(k as i64))
                .collect(),
        };
        let mut out = zdu.mul(&u.reciprocal()?);
        out.coeffs[0] += Scalar::one();
        Ok(out)
    }

    /// `k! [z^k]`, the exponential-generating-function reading of the coefficients.
    pub fn egf_values(&self) -> Vec<Scalar> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * factorial_q(k))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn s(c: Vec<Scalar>) -> PowerSeries {
        PowerSeries::new(c)
    }

    /// `e^z - 1` to the given order.
    fn expm1(order: usize) -> PowerSeries {
        let mut e = PowerSeries::exp_scaled(&int(1), order);
        e.coeffs[0] = int(0);
        e
    }

    #[test]
    fn reciprocal_examples() {
        let g = s(vec![int(1), int(1), int(0), int(0)]).reciprocal().unwrap();
        assert_eq!(g, s(vec![int(1), int(-1), int(1), int(-1)]));

        let f = s(vec![int(1), ratio(1, 2), ratio(-1, 6)]);
        assert_eq!(f.reciprocal().unwrap(), s(vec![int(1), ratio(-1, 2), ratio(5, 12)]));
        assert_eq!(f.mul(&f.reciprocal().unwrap()), PowerSeries::one(2));

        assert_eq!(s(vec![int(0), int(1)]).reciprocal(), Err(Error::NonUnitSeries));
    }

    /// Independent check of a compositional inverse: brute-force search over
    /// each unknown coefficient as the root of the linear `[z^m]` equation,
    /// computed with a from-scratch power expansion.
    fn brute_inverse(phi: &[Scalar], n: usize) -> Vec<Scalar> {
        fn coeff_of_composition(phi: &[Scalar], psi: &[Scalar], m: usize) -> Scalar {
            // sum_j phi_j [z^m] psi^j with naive powers
            let mut total = Scalar::zero();
            let mut pow = vec![Scalar::zero(); m + 1];
            pow[0] = int(1);
            for phi_j in phi.iter().take(m + 1) {
                total += phi_j * &pow[m];
                let mut next = vec![Scalar::zero(); m + 1];
                for a in 0..=m {
                    for b in 0..=(m - a) {
                        if b < psi.len() {
                            next[a + b] += &pow[a] * &psi[b];
                        }
                    }
                }
                pow = next;
            }
            total
        }
        let mut psi = vec![Scalar::zero(); n + 1];
        psi[1] = phi[1].recip();
        for m in 2..=n {
            psi[m] = int(0);
            let at0 = coeff_of_composition(phi, &psi, m);
            psi[m] = int(1);
            let at1 = coeff_of_composition(phi, &psi, m);
            psi[m] = -&at0 / (at1 - &at0);
        }
        psi
    }

    #[test]
    fn inverse_of_identity() {
        let z = PowerSeries::z(5);
        assert_eq!(z.compositional_inverse().unwrap(), z);
    }

    #[test]
    fn inverse_of_expm1_is_log1p() {
        let phi = expm1(4);
        let expected = vec![int(0), int(1), ratio(-1, 2), ratio(1, 3), ratio(-1, 4)];
        assert_eq!(brute_inverse(phi.coeffs(), 4), expected);
        assert_eq!(phi.compositional_inverse().unwrap().coeffs(), expected.as_slice());
        assert_eq!(phi.compositional_inverse().unwrap(), PowerSeries::log1p(4));
    }

    #[test]
    fn inverse_of_tree_series() {
        // z e^z
        let phi = PowerSeries::z(4).mul(&PowerSeries::exp_scaled(&int(1), 4));
        let expected = vec![int(0), int(1), int(-1), ratio(3, 2), ratio(-8, 3)];
        assert_eq!(brute_inverse(phi.coeffs(), 4), expected);
        assert_eq!(phi.compositional_inverse().unwrap().coeffs(), expected.as_slice());
    }

    #[test]
    fn inverse_preconditions() {
        assert!(matches!(
            s(vec![int(1), int(1)]).compositional_inverse(),
            Err(Error::NotInvertibleSeries(_))
        ));
        assert!(matches!(
            s(vec![int(0), int(0), int(1)]).compositional_inverse(),
            Err(Error::NotInvertibleSeries(_))
        ));
    }

    #[test]
    fn z_dlog_examples() {
        assert_eq!(PowerSeries::z(3).z_dlog().unwrap(), PowerSeries::one(2));

        // e^z - 1: reciprocal of z D_log is (1 - e^{-z})/z
        let g = expm1(6).z_dlog().unwrap().reciprocal().unwrap();
        let expected: Vec<Scalar> = (0..=5)
            .map(|k| scalar::sign(k) / factorial_q(k + 1))
            .collect();
        assert_eq!(g.coeffs(), expected.as_slice());

        // z e^{az}: z D_log = 1 + a z
        let a = ratio(3, 2);
        let phi = PowerSeries::z(6).mul(&PowerSeries::exp_scaled(&a, 6));
        assert_eq!(phi.z_dlog().unwrap(), PowerSeries::from_coeffs(vec![int(1), a], 5));
    }

    #[test]
    fn json_shape() {
        let f = s(vec![int(1), ratio(-1, 2)]);
        let txt = serde_json::to_string(&f).unwrap();
        assert_eq!(txt, r#"{"order":1,"coeffs":["1","-1/2"]}"#);
        assert!(serde_json::from_str::<PowerSeries>(r#"{"order":2,"coeffs":["1"]}"#).is_err());
    }

    fn arb_unit_series(order: usize) -> impl Strategy<Value = PowerSeries> {
        proptest::collection::vec((-9i64..=9, 1i64..=5), order).prop_map(move |v| {
            let mut c = vec![int(0), int(1)];
            c.extend(v.into_iter().skip(1).map(|(a, b)| ratio(a, b)));
            PowerSeries::from_coeffs(c, order)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn compositional_inverse_is_involution(phi in arb_unit_series(7)) {
            let psi = phi.compositional_inverse().unwrap();
            prop_assert_eq!(psi.compositional_inverse().unwrap(), phi.clone());
            prop_assert_eq!(phi.compose(&psi).unwrap(), PowerSeries::z(7));
        }

        #[test]
        fn reciprocal_product_is_one(v in proptest::collection::vec((-9i64..=9, 1i64..=5), 1..10)) {
            let mut c: Vec<Scalar> = v.into_iter().map(|(a, b)| ratio(a, b)).collect();
            if c[0].is_zero() { c[0] = int(1); }
            let f = PowerSeries::new(c);
            prop_assert_eq!(f.mul(&f.reciprocal().unwrap()), PowerSeries::one(f.order()));
        }
    }
}
