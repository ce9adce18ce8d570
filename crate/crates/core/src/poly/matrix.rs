//! Exact rational matrices and positive-definiteness checks.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::multi::MultiPoly;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalMatrix {
    #[serde(with = "rows_serde")]
    rows: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Matrix(format!("matrix with {n} rows is not square")));
        }
        Ok(RationalMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
            .collect();
        RationalMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    /// Leading principal minors D_1, …, D_n.
    pub fn leading_minors(&self) -> Vec<Rational> {
        let n = self.size();
        let mut a = self.rows.clone();
        let mut minors = Vec::with_capacity(n);
        let mut det = Rational::from_integer(1.into());
        for k in 0..n {
            // Without pivoting the k-th pivot equals D_{k+1}/D_k while every minor so far is nonzero.
            if a[k][k].is_zero() {
                minors.extend((k..n).map(|m| sub_determinant(&self.rows, m + 1)));
                return minors;
            }
            det *= &a[k][k];
            minors.push(det.clone());
            for r in k + 1..n {
                let f = &a[r][k] / &a[k][k];
                if f.is_zero() {
                    continue;
                }
                let (top, rest) = a.split_at_mut(r);
                for (x, p) in rest[0][k..n].iter_mut().zip(&top[k][k..n]) {
                    *x -= &f * p;
                }
            }
        }
        minors
    }

    /// Symmetric with every leading principal minor strictly positive.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().iter().all(|m| m.is_positive())
    }

    /// x̄ᵀ M x̄ for a vector of polynomials.
    pub fn quadratic_form(&self, x: &[MultiPoly]) -> Result<MultiPoly> {
        if x.len() != self.size() || x.is_empty() {
            return Err(Error::Matrix(format!("vector of length {} for a {}x{} matrix", x.len(), self.size(), self.size())));
        }
        let mut acc = MultiPoly::zero(&x[0].vars());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                if !m.is_zero() {
                    acc = &acc + &(&x[i] * &x[j]).scale(m);
                }
            }
        }
        Ok(acc)
    }
}

/// Determinant of the leading m×m block by Gaussian elimination with pivoting.
fn sub_determinant(rows: &[Vec<Rational>], m: usize) -> Rational {
    let mut a: Vec<Vec<Rational>> = rows[..m].iter().map(|r| r[..m].to_vec()).collect();
    let mut det = Rational::from_integer(1.into());
    for k in 0..m {
        let Some(p) = (k..m).find(|&r| !a[r][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for r in k + 1..m {
            let f = &a[r][k] / &a[k][k];
            let (top, rest) = a.split_at_mut(r);
            for (x, p) in rest[0][k..m].iter_mut().zip(&top[k][k..m]) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// Strict positive definiteness by Sylvester's criterion.
pub fn psd_check(m: &RationalMatrix) -> bool {
    m.is_positive_definite()
}

mod rows_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let text: Vec<Vec<String>> = Vec::deserialize(d)?;
        text.iter()
            .map(|r| r.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn sylvester_criterion() {
        assert!(psd_check(&RationalMatrix::identity(6)));
        let m = RationalMatrix::new(vec![vec![int(1), int(2)], vec![int(2), int(1)]]).unwrap();
        assert!(!psd_check(&m));
        assert_eq!(m.leading_minors(), vec![int(1), int(-3)]);
        let z = RationalMatrix::new(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(z.leading_minors(), vec![int(0), int(-1)]);
        assert!(RationalMatrix::new(vec![vec![int(1)], vec![int(1)]]).is_err());
        let asym = RationalMatrix::new(vec![vec![int(2), int(1)], vec![int(0), int(2)]]).unwrap();
        assert!(!psd_check(&asym));
    }
}
