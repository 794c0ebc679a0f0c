//! Small dense matrices over exact rationals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidParameters("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                let f = &a[(r, col)] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let t = &f * &a[(col, c)];
                    a[(r, c)] -= t;
                }
            }
        }
        det
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det_cofactor(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Rational::one();
        }
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut total = Rational::zero();
        for j in 0..n {
            let minor = self.minor(0, j);
            let term = &self[(0, j)] * minor.det_cofactor();
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    pub fn minor(&self, skip_r: usize, skip_c: usize) -> Matrix {
        let rows = (0..self.rows)
            .filter(|&i| i != skip_r)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != skip_c)
                    .map(|j| self[(i, j)].clone())
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).expect("minor is rectangular")
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut a = Matrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = self[(i, j)].clone();
            }
            a[(i, n)] = b[i].clone();
        }
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or_else(|| Error::InvalidParameters("singular matrix".into()))?;
            a.swap_rows(p, col);
            let pivot = a[(col, col)].recip();
            for c in col..=n {
                let v = &a[(col, c)] * &pivot;
                a[(col, c)] = v;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in col..=n {
                    let t = &f * &a[(col, c)];
                    a[(r, c)] -= t;
                }
            }
        }
        Ok((0..n).map(|i| a[(i, n)].clone()).collect())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn determinant_and_solve() {
        let a = m(&[&[2, 1, 1], &[1, 3, 2], &[1, 0, 0]]);
        assert_eq!(a.det(), Rational::from(-1));
        assert_eq!(a.det_cofactor(), Rational::from(-1));
        let b = vec![Rational::from(4), Rational::from(5), Rational::from(6)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(m(&[&[1, 2], &[2, 4]]).solve(&b[..2]).is_err());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), Rational::from(-1));
    }

    proptest! {
        #[test]
        fn elimination_matches_cofactor(v in proptest::collection::vec((-9i64..10, 1i64..5), 16)) {
            let rows: Vec<Vec<Rational>> = v.chunks(4)
                .map(|c| c.iter().map(|&(n, d)| ratio(n, d)).collect())
                .collect();
            let a = Matrix::from_rows(rows).unwrap();
            prop_assert_eq!(a.det(), a.det_cofactor());
        }
    }
}
