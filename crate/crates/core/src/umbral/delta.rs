//! Delta operators `d = a_1 ∂ + a_2 ∂^2 + ... + a_n ∂^n` on polynomials of
//! degree at most `n`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LowerTriMatrix;
use crate::poly::Poly;
use crate::scalar::{self, factorial_q, falling_q, Scalar};
use crate::series::PowerSeries;

/// The built-in operator families.
///
/// Each family is given by its series `phi(z) = sum_k a_k z^k`, so an
/// operator of any level can be cut from it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NamedOp {
    /// `∂`, `phi = z`
    Derivative,
    /// `Δ P = P(t+1) - P(t)`, `phi = e^z - 1`
    ForwardDifference,
    /// `Λ P = P(t) - P(t-1)`, `phi = 1 - e^{-z}`
    BackwardDifference,
    /// `∂ e^{a∂}`, `phi = z e^{az}`
    Abel(Scalar),
    /// `log(1 + ∂)`, `phi = log(1 + z)`
    Touchard,
}

impl NamedOp {
    /// Accepts `derivative`, `forward_difference`, `backward_difference`,
    /// `touchard`, and `abel:a=<rational>`.
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        match name {
            "derivative" => Ok(NamedOp::Derivative),
            "forward_difference" => Ok(NamedOp::ForwardDifference),
            "backward_difference" => Ok(NamedOp::BackwardDifference),
            "touchard" => Ok(NamedOp::Touchard),
            _ => {
                let a = name
                    .strip_prefix("abel:a=")
                    .ok_or_else(|| Error::UnknownOperator(name.to_string()))?;
                Ok(NamedOp::Abel(scalar::parse(a)?))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            NamedOp::Derivative => "derivative".into(),
            NamedOp::ForwardDifference => "forward_difference".into(),
            NamedOp::BackwardDifference => "backward_difference".into(),
            NamedOp::Abel(a) => format!("abel:a={}", scalar::format(a)),
            NamedOp::Touchard => "touchard".into(),
        }
    }

    /// Coefficient `a_k` for `k >= 1`.
    pub fn coeff(&self, k: usize) -> Scalar {
        assert!(k >= 1, "delta operator coefficients start at a_1");
        match self {
            NamedOp::Derivative => {
                if k == 1 {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
            NamedOp::ForwardDifference => factorial_q(k).recip(),
            NamedOp::BackwardDifference => scalar::sign(k + 1) / factorial_q(k),
            NamedOp::Abel(a) => pow(a, k - 1) / factorial_q(k - 1),
            NamedOp::Touchard => scalar::sign(k + 1) / scalar::int(k as i64),
        }
    }

    /// The registry entries used by the test suites: every family, with the
    /// Abel parameter at `1`, `2` and `-1/2`.
    pub fn registry() -> Vec<NamedOp> {
        vec![
            NamedOp::Derivative,
            NamedOp::ForwardDifference,
            NamedOp::BackwardDifference,
            NamedOp::Abel(scalar::int(1)),
            NamedOp::Abel(scalar::int(2)),
            NamedOp::Abel(scalar::ratio(-1, 2)),
            NamedOp::Touchard,
        ]
    }
}

impl fmt::Display for NamedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn pow(a: &Scalar, e: usize) -> Scalar {
    (0..e).fold(Scalar::one(), |acc, _| acc * a)
}

/// Where the coefficients beyond the level come from when the operator is
/// extended.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Family {
    base: NamedOp,
    /// The family of `d*`: coefficients `(-1)^{k+1} a_k` of `base`.
    adjoint: bool,
}

impl Family {
    fn coeff(&self, k: usize) -> Scalar {
        let c = self.base.coeff(k);
        if self.adjoint {
            scalar::sign(k + 1) * c
        } else {
            c
        }
    }
}

/// A delta operator of level `n`, stored as `(a_1, ..., a_n)` with `a_1 != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DeltaRepr", into = "DeltaRepr")]
pub struct DeltaOp {
    coeffs: Vec<Scalar>,
    family: Option<Family>,
}

#[derive(Serialize, Deserialize)]
struct DeltaRepr {
    level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    named: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<CoeffList>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct CoeffList(#[serde(with = "scalar::serde_vec")] Vec<Scalar>);

impl TryFrom<DeltaRepr> for DeltaOp {
    type Error = Error;
    fn try_from(r: DeltaRepr) -> Result<Self> {
        match (r.named, r.coeffs) {
            (Some(name), coeffs) => {
                let op = DeltaOp::named(NamedOp::parse(&name)?, r.level)?;
                if let Some(c) = coeffs {
                    if c.0 != op.coeffs {
                        return Err(Error::InvalidDelta(format!(
                            "coefficients do not match the named operator `{name}`"
                        )));
                    }
                }
                Ok(op)
            }
            (None, Some(c)) => {
                if c.0.len() != r.level {
                    return Err(Error::InvalidDelta(format!(
                        "level {} needs {} coefficients, got {}",
                        r.level,
                        r.level,
                        c.0.len()
                    )));
                }
                DeltaOp::new(c.0)
            }
            (None, None) => Err(Error::InvalidDelta("need `coeffs` or `named`".into())),
        }
    }
}

impl From<DeltaOp> for DeltaRepr {
    fn from(d: DeltaOp) -> Self {
        let named = d.named_op().map(|n| n.name());
        DeltaRepr { level: d.level(), named, coeffs: Some(CoeffList(d.coeffs)) }
    }
}

impl DeltaOp {
    /// `coeffs = (a_1, ..., a_n)`.
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::InvalidDelta("level must be at least 1".into())),
            Some(a1) if a1.is_zero() => Err(Error::InvalidDelta("a_1 must be nonzero".into())),
            Some(_) => Ok(DeltaOp { coeffs, family: None }),
        }
    }

    pub fn named(op: NamedOp, level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidDelta("level must be at least 1".into()));
        }
        let family = Family { base: op, adjoint: false };
        Ok(DeltaOp { coeffs: (1..=level).map(|k| family.coeff(k)).collect(), family: Some(family) })
    }

    /// Shorthand for `DeltaOp::named(NamedOp::parse(name)?, level)`.
    pub fn parse_named(name: &str, level: usize) -> Result<Self> {
        DeltaOp::named(NamedOp::parse(name)?, level)
    }

    pub fn derivative(level: usize) -> Self {
        DeltaOp::named(NamedOp::Derivative, level.max(1)).expect("level >= 1")
    }

    pub fn forward_difference(level: usize) -> Self {
        DeltaOp::named(NamedOp::ForwardDifference, level.max(1)).expect("level >= 1")
    }

    pub fn backward_difference(level: usize) -> Self {
        DeltaOp::named(NamedOp::BackwardDifference, level.max(1)).expect("level >= 1")
    }

    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    /// `(a_1, ..., a_n)`
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `a_k` for `k >= 1`. Past the level, named families continue with their
    /// defining formula and raw operators with zero.
    pub fn coeff(&self, k: usize) -> Scalar {
        assert!(k >= 1, "delta operator coefficients start at a_1");
        if k <= self.level() {
            self.coeffs[k - 1].clone()
        } else {
            self.family.as_ref().map_or_else(Scalar::zero, |f| f.coeff(k))
        }
    }

    /// The registry entry this operator was built from, if any.
    pub fn named_op(&self) -> Option<&NamedOp> {
        self.family.as_ref().filter(|f| !f.adjoint).map(|f| &f.base)
    }

    /// A short label: the registry name or `raw`.
    pub fn label(&self) -> String {
        match &self.family {
            Some(f) if f.adjoint => format!("adjoint({})", f.base),
            Some(f) => f.base.name(),
            None => "raw".into(),
        }
    }

    /// Same operator on a different level: truncated, or extended by
    /// [`DeltaOp::coeff`].
    pub fn with_level(&self, level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidDelta("level must be at least 1".into()));
        }
        Ok(DeltaOp {
            coeffs: (1..=level).map(|k| self.coeff(k)).collect(),
            family: self.family.clone(),
        })
    }

    /// Extends a raw operator by explicit coefficients `a_{n+1}, ...`.
    pub fn extended_by(&self, extra: &[Scalar]) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend_from_slice(extra);
        DeltaOp { coeffs, family: None }
    }

    /// `sum_k a_k P^{(k)}`.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let deg = p.degree_or_zero();
        if deg > self.level() {
            return Err(Error::DegreeExceedsLevel { degree: deg, level: self.level() });
        }
        Ok(self.apply_unchecked(p))
    }

    fn apply_unchecked(&self, p: &Poly) -> Poly {
        let deg = p.degree_or_zero();
        let mut out = vec![Scalar::zero(); deg];
        for (k, a) in self.coeffs.iter().enumerate().take(deg) {
            let k = k + 1;
            if a.is_zero() {
                continue;
            }
            for (j, c) in p.coeffs().iter().enumerate().skip(k) {
                out[j - k] += a * c * falling_q(j, k);
            }
        }
        Poly::new(out)
    }

    /// `d^k P`
    pub fn apply_pow(&self, p: &Poly, k: usize) -> Result<Poly> {
        let mut q = self.apply(p)?;
        for _ in 1..k {
            if q.is_zero() {
                break;
            }
            q = self.apply_unchecked(&q);
        }
        if k == 0 {
            return Ok(p.clone());
        }
        Ok(q)
    }

    /// `d*`, with coefficients `(-1)^{k+1} a_k`; `d*(P) = -(d(P^†))^†` where
    /// `P^†(t) = P(-t)`.
    pub fn adjoint(&self) -> Self {
        DeltaOp {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| scalar::sign(i) * a)
                .collect(),
            family: self.family.as_ref().map(|f| Family { base: f.base.clone(), adjoint: !f.adjoint }),
        }
    }

    /// `d / a_1`, the representative with `a_1 = 1`.
    pub fn normalized(&self) -> Self {
        let a1 = &self.coeffs[0];
        if a1.is_one() {
            return self.clone();
        }
        DeltaOp { coeffs: self.coeffs.iter().map(|a| a / a1).collect(), family: None }
    }

    /// `phi(z) = sum_{k=1}^{order} a_k z^k`, extending past the level per
    /// [`DeltaOp::coeff`].
    pub fn phi(&self, order: usize) -> PowerSeries {
        let mut c = vec![Scalar::zero()];
        c.extend((1..=order).map(|k| self.coeff(k)));
        PowerSeries::from_coeffs(c, order)
    }

    /// Matrix on the monomial basis in row convention: row `i` holds the
    /// coefficients of `d(t^i)`, so entry `(i, i-k)` is `a_k (i)_k`.
    pub fn matrix(&self) -> LowerTriMatrix {
        LowerTriMatrix::from_fn(self.level() + 1, |i, j| {
            if j < i {
                self.coeff(i - j) * falling_q(i, i - j)
            } else {
                Scalar::zero()
            }
        })
    }
}

impl fmt::Display for DeltaOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| format!("({})∂^{}", scalar::format(a), i + 1))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::poly::tests::{arb_poly, arb_scalar};
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn apply_examples() {
        let delta = DeltaOp::forward_difference(2);
        assert_eq!(delta.apply(&Poly::from_ints(&[0, 0, 1])).unwrap(), Poly::from_ints(&[1, 2]));
        assert_eq!(delta.apply(&Poly::one()).unwrap(), Poly::zero());
        let d = DeltaOp::derivative(3);
        assert_eq!(d.apply(&Poly::from_ints(&[0, 0, 0, 1])).unwrap(), Poly::from_ints(&[0, 0, 3]));
        assert_eq!(
            delta.apply(&Poly::from_ints(&[0, 0, 0, 1])),
            Err(Error::DegreeExceedsLevel { degree: 3, level: 2 })
        );
    }

    #[test]
    fn differences_match_shifts() {
        let p = Poly::from_ints(&[3, -1, 4, 1, -5, 9]);
        let fwd = DeltaOp::forward_difference(5).apply(&p).unwrap();
        assert_eq!(fwd, &p.shift(&int(1)) - &p);
        let bwd = DeltaOp::backward_difference(5).apply(&p).unwrap();
        assert_eq!(bwd, &p - &p.shift(&int(-1)));
        // Abel: ∂ e^{a∂} P = P'(t + a)
        let a = ratio(2, 3);
        let abel = DeltaOp::named(NamedOp::Abel(a.clone()), 5).unwrap().apply(&p).unwrap();
        assert_eq!(abel, p.derivative().shift(&a));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(DeltaOp::derivative(4).adjoint().coeffs(), DeltaOp::derivative(4).coeffs());
        let delta = DeltaOp::forward_difference(6);
        assert_eq!(delta.adjoint().coeffs(), DeltaOp::backward_difference(6).coeffs());
        assert_eq!(delta.adjoint().adjoint(), delta);
        assert_eq!(delta.adjoint().with_level(8).unwrap().coeffs(), DeltaOp::backward_difference(8).coeffs());
    }

    #[test]
    fn parse_registry() {
        assert_eq!(NamedOp::parse("abel:a=-1/2").unwrap(), NamedOp::Abel(ratio(-1, 2)));
        assert_eq!(NamedOp::parse("touchard").unwrap().name(), "touchard");
        assert!(matches!(NamedOp::parse("nope"), Err(Error::UnknownOperator(_))));
        for op in NamedOp::registry() {
            assert_eq!(NamedOp::parse(&op.name()).unwrap(), op);
        }
        assert!(DeltaOp::new(vec![int(0), int(1)]).is_err());
        assert!(DeltaOp::new(vec![]).is_err());
    }

    #[test]
    fn phi_of_named_families() {
        let order = 6;
        let cases = [
            (NamedOp::Derivative, PowerSeries::z(order)),
            (NamedOp::ForwardDifference, PowerSeries::exp_scaled(&int(1), order).add(&PowerSeries::one(order).scale(&int(-1)))),
            (
                NamedOp::BackwardDifference,
                PowerSeries::one(order).add(&PowerSeries::exp_scaled(&int(-1), order).scale(&int(-1))),
            ),
            (NamedOp::Abel(int(3)), PowerSeries::z(order).mul(&PowerSeries::exp_scaled(&int(3), order))),
            (NamedOp::Touchard, PowerSeries::log1p(order)),
        ];
        for (op, expected) in cases {
            assert_eq!(DeltaOp::named(op.clone(), 2).unwrap().phi(order), expected, "{op}");
        }
    }

    #[test]
    fn json_forms() {
        let d: DeltaOp = serde_json::from_str(r#"{"named":"forward_difference","level":3}"#).unwrap();
        assert_eq!(d, DeltaOp::forward_difference(3));
        let raw: DeltaOp = serde_json::from_str(r#"{"level":3,"coeffs":["1","1/2","1/6"]}"#).unwrap();
        assert_eq!(raw.coeffs(), d.coeffs());
        let back: DeltaOp = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<DeltaOp>(r#"{"level":2,"coeffs":["1"]}"#).is_err());
        assert!(serde_json::from_str::<DeltaOp>(r#"{"level":1,"coeffs":["0"]}"#).is_err());
    }

    #[test]
    fn matrix_rows_are_images_of_monomials() {
        for op in NamedOp::registry() {
            let d = DeltaOp::named(op, 5).unwrap();
            let m = d.matrix();
            for i in 0..=5 {
                let img = d.apply(&Poly::monomial(i, int(1))).unwrap();
                let row: Vec<Scalar> = (0..=5).map(|j| m.get(i, j)).collect();
                assert_eq!(Poly::new(row), img);
            }
        }
    }

    pub(crate) fn arb_delta(level: usize) -> impl Strategy<Value = DeltaOp> {
        proptest::collection::vec(arb_scalar(), level).prop_filter_map("a_1 != 0", |c| DeltaOp::new(c).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn lowers_degree_by_one(d in arb_delta(6), p in arb_poly(6)) {
            let img = d.apply(&p).unwrap();
            match p.degree() {
                Some(k) if k >= 1 => prop_assert_eq!(img.degree(), Some(k - 1)),
                _ => prop_assert!(img.is_zero()),
            }
        }

        #[test]
        fn adjoint_formula(d in arb_delta(6), p in arb_poly(6)) {
            let lhs = d.adjoint().apply(&p).unwrap();
            let rhs = -d.apply(&p.reflect()).unwrap().reflect();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(d.adjoint().adjoint(), d);
        }

        #[test]
        fn commutes_with_translation(d in arb_delta(6), p in arb_poly(6), a in arb_scalar()) {
            prop_assert_eq!(d.apply(&p.shift(&a)).unwrap(), d.apply(&p).unwrap().shift(&a));
        }
    }
}
