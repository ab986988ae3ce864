//! Exact rational scalars and the small combinatorial helpers everything
//! else is built on.
//!
//! Scalars are [`BigRational`]s, which are always kept in lowest terms with a
//! positive denominator; zero is `0/1`.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"`. Non-reduced input is accepted and reduced.
pub fn parse(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Scalar::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in `{s}`")));
            }
            Ok(Scalar::new(p, q))
        }
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational with denominator `denom` (ties away from zero).
pub fn rationalize(x: f64, denom: i64) -> Scalar {
    let scaled = (x * denom as f64).round() as i64;
    ratio(scaled, denom)
}

static PASCAL: RwLock<Vec<Vec<BigInt>>> = RwLock::new(Vec::new());

fn ensure_rows(n: usize) {
    if PASCAL.read().expect("pascal cache poisoned").len() > n {
        return;
    }
    let mut rows = PASCAL.write().expect("pascal cache poisoned");
    // another writer may have filled the rows in the meantime
    while rows.len() <= n {
        let next = match rows.last() {
            None => vec![BigInt::one()],
            Some(prev) => {
                let mut row = Vec::with_capacity(prev.len() + 1);
                row.push(BigInt::one());
                for w in prev.windows(2) {
                    row.push(&w[0] + &w[1]);
                }
                row.push(BigInt::one());
                row
            }
        };
        rows.push(next);
    }
}

/// Exact binomial coefficient from a shared Pascal-triangle cache; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ensure_rows(n);
    PASCAL.read().expect("pascal cache poisoned")[n][k].clone()
}

pub fn binomial_q(n: usize, k: usize) -> Scalar {
    Scalar::from_integer(binomial(n, k))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: usize) -> Scalar {
    Scalar::from_integer(factorial(n))
}

/// Falling factorial `(n)_k = n (n-1) ... (n-k+1)`.
pub fn falling(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (n - k + 1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

pub fn falling_q(n: usize, k: usize) -> Scalar {
    Scalar::from_integer(falling(n, k))
}

/// `(-1)^k`
pub fn sign(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Serde adapter for `Vec<Scalar>` as a list of fraction strings.
pub(crate) mod serde_vec {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::Scalar;

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(super::format))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
        let raw = Vec::<StringOrInt>::deserialize(d)?;
        raw.into_iter()
            .map(|x| match x {
                StringOrInt::Str(s) => super::parse(&s).map_err(D::Error::custom),
                StringOrInt::Int(i) => Ok(super::int(i)),
            })
            .collect()
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum StringOrInt {
        Str(String),
        Int(i64),
    }
}

pub(crate) mod serde_str {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::Scalar;

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        super::parse(&String::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(format(&ratio(-1, 2)), "-1/2");
        assert_eq!(format(&int(7)), "7");
        assert_eq!(format(&Scalar::zero()), "0");
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert_eq!(parse(" 3 ").unwrap(), int(3));
    }

    #[test]
    fn pascal_rows() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(40, 20), BigInt::from(137_846_528_820u64));
    }

    #[test]
    fn pascal_cache_concurrent_fill() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || binomial(30 + i, 7)))
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (i, b) in got.iter().enumerate() {
            let n = 30 + i;
            assert_eq!(*b, factorial(n) / (factorial(7) * factorial(n - 7)));
        }
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(5, 0), BigInt::from(1));
        assert_eq!(falling(3, 3), BigInt::from(6));
        assert_eq!(falling(3, 4), BigInt::from(0));
    }

    #[test]
    fn rationalize_rounds() {
        assert_eq!(rationalize(0.5, 1_000_000), ratio(1, 2));
        assert_eq!(rationalize(-1.2345674, 1_000_000), ratio(-1_234_567, 1_000_000));
    }
}
