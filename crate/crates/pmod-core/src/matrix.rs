//! Dense matrices over a prime field.
//!
//! Matrices here are tiny (persistence-module structure maps at desk scale),
//! so everything is a dense row-major `Vec<u64>` and rank is plain Gaussian
//! elimination. `0×n` and `n×0` matrices are legal and stand for the unique
//! maps to and from the zero space.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{self, FieldElement};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: u64,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        Matrix {
            rows,
            cols,
            p,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Matrix::zero(n, n, p);
        for i in 0..n {
            m.entries[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from explicit row-major entries, rejecting residues
    /// outside `[0, p)`.
    pub fn from_entries(rows: usize, cols: usize, p: u64, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= p) {
            return Err(Error::Validation(format!(
                "matrix entry {bad} outside [0, {p})"
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            p,
            entries,
        })
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Matrix::from_entries(r, c, p, rows.concat())
    }

    /// Builds a matrix whose columns are the given length-`rows` vectors.
    pub fn from_columns(p: u64, rows: usize, columns: &[Vec<u64>]) -> Result<Self> {
        let cols = columns.len();
        if columns.iter().any(|col| col.len() != rows) {
            return Err(Error::Dimension("ragged matrix columns".into()));
        }
        let mut m = Matrix::zero(rows, cols, p);
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                if v >= p {
                    return Err(Error::Validation(format!(
                        "matrix entry {v} outside [0, {p})"
                    )));
                }
                m.entries[i * cols + j] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        FieldElement::from_residue(self.at(i, j), self.p)
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.entries[i * self.cols + j] = value % self.p;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows, self.p)
    }

    /// `self · rhs`, checking shape and modulus compatibility.
    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.p != rhs.p {
            return Err(Error::Dimension(format!(
                "mixed field moduli {} and {}",
                self.p, rhs.p
            )));
        }
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, rhs.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.entries[i * rhs.cols + j];
                    out.entries[i * rhs.cols + j] = (cur + a * rhs.at(k, j)) % self.p;
                }
            }
        }
        Ok(out)
    }

    /// Rank by exact Gaussian elimination over 𝔽_p.
    pub fn rank(&self) -> usize {
        let mut m = self.entries.clone();
        let (rows, cols, p) = (self.rows, self.cols, self.p);
        let mut rank = 0;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&r| m[r * cols + col] != 0);
            let Some(pivot) = pivot else { continue };
            m.swap_ranges_rows(pivot, rank, cols);
            let inv = field::finv(m[rank * cols + col], p);
            for j in col..cols {
                m[rank * cols + j] = m[rank * cols + j] * inv % p;
            }
            for r in 0..rows {
                if r != rank && m[r * cols + col] != 0 {
                    let factor = m[r * cols + col];
                    for j in col..cols {
                        let sub = factor * m[rank * cols + j] % p;
                        m[r * cols + j] = (m[r * cols + j] + p - sub) % p;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

trait SwapRows {
    fn swap_ranges_rows(&mut self, a: usize, b: usize, cols: usize);
}

impl SwapRows for Vec<u64> {
    fn swap_ranges_rows(&mut self, a: usize, b: usize, cols: usize) {
        if a == b {
            return;
        }
        for j in 0..cols {
            self.swap(a * cols + j, b * cols + j);
        }
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;

    /// Shape-checked in `try_mul`; panics on mismatch, which internal callers
    /// rule out by construction.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_the_unit_of_multiplication() {
        let a = Matrix::from_rows(5, &[vec![1, 2, 3], vec![4, 0, 2]]).unwrap();
        let left = Matrix::identity(2, 5).try_mul(&a).unwrap();
        let right = a.try_mul(&Matrix::identity(3, 5)).unwrap();
        assert_eq!(left, a);
        assert_eq!(right, a);
    }

    #[test]
    fn rank_examples_over_f2() {
        let id = Matrix::from_rows(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(id.rank(), 2);
        // Row reduction by hand: second row equals the first, rank 1.
        let ones = Matrix::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(ones.rank(), 1);
    }

    #[test]
    fn empty_shapes_are_legal() {
        let a = Matrix::zero(0, 3, 2);
        let b = Matrix::zero(3, 0, 2);
        assert_eq!(a.try_mul(&b).unwrap(), Matrix::zero(0, 0, 2));
        let c = b.try_mul(&a).unwrap();
        assert_eq!(c, Matrix::zero(3, 3, 2));
        assert_eq!(a.rank(), 0);
        assert!(Matrix::identity(0, 2).is_identity());
    }

    #[test]
    fn shape_mismatch_is_a_dimension_error() {
        let a = Matrix::zero(2, 3, 2);
        let b = Matrix::zero(2, 3, 2);
        assert!(matches!(a.try_mul(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn entries_must_be_reduced() {
        assert!(Matrix::from_entries(1, 1, 3, vec![3]).is_err());
    }

    #[test]
    fn associativity_spot_check() {
        let a = Matrix::from_rows(3, &[vec![1, 2], vec![0, 1]]).unwrap();
        let b = Matrix::from_rows(3, &[vec![2, 0, 1], vec![1, 1, 0]]).unwrap();
        let c = Matrix::from_rows(3, &[vec![1], vec![2], vec![0]]).unwrap();
        let left = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let right = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn rank_of_product_rank_one() {
        // [[1],[0]] · [[0,1]] has rank 1 over F_2, and the reverse
        // composite [[0,1]]·[[1],[0]] is the 1x1 zero.
        let up = Matrix::from_rows(2, &[vec![1], vec![0]]).unwrap();
        let down = Matrix::from_rows(2, &[vec![0, 1]]).unwrap();
        assert_eq!(down.try_mul(&up).unwrap(), Matrix::zero(1, 1, 2));
        assert_eq!(up.try_mul(&down).unwrap().rank(), 1);
    }
}
