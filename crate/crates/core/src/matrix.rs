//! Lower-triangular matrices over the rationals, plus a fraction-free
//! determinant for the few dense matrices we need.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Square lower-triangular matrix with row/column indices `0..size`.
///
/// Row `i` stores entries `0..=i`; everything above the diagonal is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct LowerTriMatrix {
    rows: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    size: usize,
    rows: Vec<ScalarRow>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct ScalarRow(#[serde(with = "scalar::serde_vec")] Vec<Scalar>);

impl TryFrom<MatrixRepr> for LowerTriMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.rows.len() != r.size {
            return Err(Error::Invalid(format!("expected {} rows, got {}", r.size, r.rows.len())));
        }
        for (i, row) in r.rows.iter().enumerate() {
            if row.0.len() != i + 1 {
                return Err(Error::Invalid(format!(
                    "row {i} of a lower-triangular matrix needs {} entries, got {}",
                    i + 1,
                    row.0.len()
                )));
            }
        }
        Ok(LowerTriMatrix { rows: r.rows.into_iter().map(|r| r.0).collect() })
    }
}

impl From<LowerTriMatrix> for MatrixRepr {
    fn from(m: LowerTriMatrix) -> Self {
        MatrixRepr { size: m.size(), rows: m.rows.into_iter().map(ScalarRow).collect() }
    }
}

impl LowerTriMatrix {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        LowerTriMatrix { rows: (0..size).map(|i| (0..=i).map(|j| f(i, j)).collect()).collect() }
    }

    /// Takes the lower triangle of the given rows; entries above the diagonal
    /// must be zero.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let size = rows.len();
        let mut out = Vec::with_capacity(size);
        for (i, mut row) in rows.into_iter().enumerate() {
            if row.len() > i + 1 && row[i + 1..].iter().any(|x| !x.is_zero()) {
                return Err(Error::Invalid(format!("row {i} has entries above the diagonal")));
            }
            row.resize(i + 1, Scalar::zero());
            out.push(row);
        }
        Ok(LowerTriMatrix { rows: out })
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn zero(size: usize) -> Self {
        Self::from_fn(size, |_, _| Scalar::zero())
    }

    pub fn diagonal(d: &[Scalar]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { Scalar::zero() })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        if j > i {
            Scalar::zero()
        } else {
            self.rows[i][j].clone()
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(Self::from_fn(self.size(), |i, j| {
            (j..=i).fold(Scalar::zero(), |acc, k| acc + &self.rows[i][k] * &other.rows[k][j])
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(Self::from_fn(self.size(), |i, j| &self.rows[i][j] + &other.rows[i][j]))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_fn(self.size(), |i, j| &self.rows[i][j] * c)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::identity(self.size());
        for _ in 0..e {
            acc = acc.mul(self).expect("same size");
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.size() {
            return Err(Error::LevelMismatch { left: self.size(), right: v.len() });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    /// Forward substitution for `self * x = y`.
    pub fn solve(&self, y: &[Scalar]) -> Result<Vec<Scalar>> {
        if y.len() != self.size() {
            return Err(Error::LevelMismatch { left: self.size(), right: y.len() });
        }
        let mut x: Vec<Scalar> = Vec::with_capacity(y.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row[i].is_zero() {
                return Err(Error::SingularMatrix);
            }
            let s = (0..i).fold(y[i].clone(), |acc, k| acc - &row[k] * &x[k]);
            x.push(s / &row[i]);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.size();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<Scalar> =
                (0..n).map(|i| if i == j { Scalar::one() } else { Scalar::zero() }).collect();
            cols.push(self.solve(&e)?);
        }
        Ok(Self::from_fn(n, |i, j| cols[j][i].clone()))
    }

    /// Product of the diagonal.
    pub fn det(&self) -> Scalar {
        self.rows.iter().enumerate().fold(Scalar::one(), |acc, (i, r)| acc * &r[i])
    }

    /// `J A^T J` where `J` reverses indices; maps lower-triangular to lower-triangular.
    pub fn reverse_transpose(&self) -> Self {
        let n = self.size();
        Self::from_fn(n, |l, k| self.rows[n - 1 - k][n - 1 - l].clone())
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::LevelMismatch { left: self.size(), right: other.size() });
        }
        Ok(())
    }
}

/// Exact determinant of a dense square matrix by fraction-free Bareiss
/// elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators, the
/// integer determinant is computed with exact Bareiss divisions, and the
/// scaling is divided back out.
pub fn det_dense(m: &[Vec<Scalar>]) -> Result<Scalar> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(Scalar::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(Scalar::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if negate {
        det = -det;
    }
    Ok(Scalar::new(det, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> LowerTriMatrix {
        LowerTriMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_solve_and_inverse() {
        let id = LowerTriMatrix::identity(4);
        assert_eq!(id.inverse().unwrap(), id);
        let y = vec![int(1), int(2), int(3), int(4)];
        assert_eq!(id.solve(&y).unwrap(), y);
    }

    #[test]
    fn singular_is_reported() {
        let a = m(&[&[1], &[2, 0]]);
        assert_eq!(a.inverse(), Err(Error::SingularMatrix));
        assert_eq!(a.det(), int(0));
    }

    #[test]
    fn inverse_times_self() {
        let a = m(&[&[2], &[3, -1], &[5, 7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), LowerTriMatrix::identity(3));
        assert_eq!(a.det(), int(-8));
    }

    #[test]
    fn json_shape() {
        let a = m(&[&[1], &[1, 1]]);
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"size":2,"rows":[["1"],["1","1"]]}"#);
        assert!(serde_json::from_str::<LowerTriMatrix>(r#"{"size":2,"rows":[["1"],["1"]]}"#).is_err());
    }

    /// Laplace expansion along the first row; exponential, fine for n <= 6.
    fn det_laplace(m: &[Vec<Scalar>]) -> Scalar {
        let n = m.len();
        if n == 0 {
            return int(1);
        }
        (0..n).fold(int(0), |acc, j| {
            let minor: Vec<Vec<Scalar>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            acc + scalar::sign(j) * &m[0][j] * det_laplace(&minor)
        })
    }

    #[test]
    fn bareiss_small_cases() {
        let a = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(det_dense(&a).unwrap(), int(-1));
        let b = vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 4), ratio(1, 5)]];
        assert_eq!(det_dense(&b).unwrap(), ratio(1, 10) - ratio(1, 12));
        let z = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(det_dense(&z).unwrap(), int(0));
        assert_eq!(det_dense(&[]).unwrap(), int(1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bareiss_matches_laplace(n in 1usize..=5, seed in proptest::collection::vec((-6i64..=6, 1i64..=4), 25)) {
            let rows: Vec<Vec<Scalar>> = (0..n)
                .map(|i| (0..n).map(|j| { let (a, b) = seed[i * 5 + j]; ratio(a, b) }).collect())
                .collect();
            prop_assert_eq!(det_dense(&rows).unwrap(), det_laplace(&rows));
        }
    }
}
