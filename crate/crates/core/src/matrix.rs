//! Dense exact-rational matrices, shared by block matrices and channels.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{one, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, one());
        }
        m
    }

    /// Row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "expected {rows}x{cols} = {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = &Rational> + '_ {
        (0..self.rows).map(move |r| self.get(r, c))
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product with row-major index pairing (`self` most significant).
    pub fn kron(&self, rhs: &RatMatrix) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        out.set(r1 * rhs.rows + r2, c1 * rhs.cols + c2, a * rhs.get(r2, c2));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Block-diagonal `[[self, 0], [0, rhs]]`.
    pub fn direct_sum(&self, rhs: &RatMatrix) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..rhs.rows {
            for c in 0..rhs.cols {
                out.set(self.rows + r, self.cols + c, rhs.get(r, c).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(rows: usize, cols: usize, v: &[i64]) -> RatMatrix {
        RatMatrix::from_vec(rows, cols, v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn product_and_kron() {
        let a = m(2, 2, &[1, 2, 3, 4]);
        let b = m(2, 1, &[1, 1]);
        assert_eq!(a.mul(&b).unwrap(), m(2, 1, &[3, 7]));
        assert!(b.mul(&b).is_err());
        let k = m(1, 2, &[1, 2]).kron(&m(1, 2, &[3, 4]));
        assert_eq!(k, m(1, 4, &[3, 4, 6, 8]));
    }

    #[test]
    fn direct_sum_is_block_diagonal() {
        let d = m(1, 1, &[2]).direct_sum(&m(1, 1, &[3]));
        assert_eq!(d, m(2, 2, &[2, 0, 0, 3]));
        let empty = RatMatrix::zeros(0, 0);
        assert_eq!(empty.direct_sum(&d), d);
    }
}
