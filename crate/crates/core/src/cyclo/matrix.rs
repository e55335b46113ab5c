//! Dense matrices over cyclotomic fields.

use super::{CycloError, Cyclotomic};
use std::fmt;

/// A dense matrix with [`Cyclotomic`] entries, stored row-major.
///
/// Either dimension may be zero; such matrices carry no entries but keep
/// their shape, and all operations treat them by the usual conventions
/// (an empty sum is zero, a Kronecker factor of zero dimension collapses
/// the product, a direct summand of zero dimension contributes nothing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        CycloMatrix {
            rows,
            cols,
            entries: vec![Cyclotomic::zero(1); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CycloMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Cyclotomic::one());
        }
        m
    }

    /// Builds a matrix from equal-length rows. Cannot express matrices with
    /// zero rows but nonzero columns; use [`CycloMatrix::from_fn`] for those.
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "rows of unequal length"
        );
        CycloMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Cyclotomic,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        CycloMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// The `n x n` matrix sending basis vector `j` to basis vector
    /// `images[j]`; `images` must be a permutation of `0..n`.
    pub fn from_permutation(images: &[usize]) -> Self {
        let n = images.len();
        let mut m = CycloMatrix::zero(n, n);
        let mut seen = vec![false; n];
        for (j, &i) in images.iter().enumerate() {
            assert!(i < n && !seen[i], "images are not a permutation");
            seen[i] = true;
            m.set(i, j, Cyclotomic::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Cyclotomic::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same_shape(other, "add")?;
        Ok(CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same_shape(other, "sub")?;
        Ok(CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Cyclotomic::neg).collect(),
        }
    }

    pub fn scalar_mul(&self, s: &Cyclotomic) -> Self {
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| s.mul(a)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CycloError> {
        if self.cols != other.rows {
            return Err(CycloError::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(CycloMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Cyclotomic::zero(1);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc = acc.add(&a.mul(other.get(k, j)));
                }
            }
            acc
        }))
    }

    pub fn transpose(&self) -> Self {
        CycloMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product; the result is `(r1*r2) x (c1*c2)`, so a factor
    /// with a zero dimension collapses that dimension of the product.
    pub fn kronecker(&self, other: &Self) -> Self {
        CycloMatrix::from_fn(
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (i1, i2) = (i / other.rows, i % other.rows);
                let (j1, j2) = (j / other.cols, j % other.cols);
                self.get(i1, j1).mul(other.get(i2, j2))
            },
        )
    }

    /// Block-diagonal sum; dimensions add, so a zero-dimension summand
    /// contributes nothing (but still shifts the other's blocks).
    pub fn direct_sum(&self, other: &Self) -> Self {
        CycloMatrix::from_fn(
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| {
                if i < self.rows && j < self.cols {
                    self.get(i, j).clone()
                } else if i >= self.rows && j >= self.cols {
                    other.get(i - self.rows, j - self.cols).clone()
                } else {
                    Cyclotomic::zero(1)
                }
            },
        )
    }

    /// Direct sum of a sequence of matrices, starting from the empty `0x0`.
    pub fn direct_sum_all<'a>(mats: impl IntoIterator<Item = &'a CycloMatrix>) -> Self {
        mats.into_iter()
            .fold(CycloMatrix::zero(0, 0), |acc, m| acc.direct_sum(m))
    }

    /// Exact inverse by Gauss-Jordan elimination. The `0x0` matrix is its
    /// own inverse.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.rows != self.cols {
            return Err(CycloError::DimensionMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = CycloMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !work.get(r, col).is_zero())
                .ok_or(CycloError::SingularMatrix)?;
            if pivot != col {
                work.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = work.get(col, col).clone();
            let pinv = p.inv().expect("pivot is nonzero");
            work.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..n {
                if r != col && !work.get(r, col).is_zero() {
                    let factor = work.get(r, col).clone();
                    work.sub_scaled_row(r, col, &factor);
                    inv.sub_scaled_row(r, col, &factor);
                }
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.inverse().is_ok()
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<(), CycloError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CycloError::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Cyclotomic) {
        for j in 0..self.cols {
            let v = self.get(r, j).mul(s);
            self.set(r, j, v);
        }
    }

    fn sub_scaled_row(&mut self, target: usize, source: usize, s: &Cyclotomic) {
        for j in 0..self.cols {
            let v = self.get(target, j).sub(&self.get(source, j).mul(s));
            self.set(target, j, v);
        }
    }
}

impl fmt::Display for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}x{}]", self.rows, self.cols);
        }
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}
