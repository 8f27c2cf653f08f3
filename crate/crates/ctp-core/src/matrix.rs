//! Dense matrices of polynomials.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{factorial, MultiPoly, Registry};

/// Row-major `rows x cols` matrix of [`MultiPoly`] entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: alloc::vec![MultiPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { MultiPoly::one() } else { MultiPoly::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> MultiPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    /// Builds from rows; short rows are padded with zeros to the longest row.
    pub fn from_rows_padded(rows: Vec<Vec<MultiPoly>>) -> Self {
        let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let n = rows.len();
        let mut m = Self::zeros(n, cols);
        for (i, r) in rows.into_iter().enumerate() {
            for (j, p) in r.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    /// Builds from equal-length rows.
    pub fn from_rows(rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("rows of unequal length".into()));
        }
        Ok(Self::from_rows_padded(rows))
    }

    /// Builds from integer rows, padding short rows with zeros.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows_padded(
            rows.iter()
                .map(|r| r.iter().map(|&c| MultiPoly::int(c)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.entries[i * self.cols + j] = p;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut MultiPoly {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[MultiPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<MultiPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    /// Top-left `rows x cols` block.
    pub fn leading(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows > self.rows || cols > self.cols {
            return Err(Error::Truncation {
                required: rows.max(cols),
                available: self.rows.min(self.cols),
            });
        }
        Ok(Self::from_fn(rows, cols, |i, j| self.get(i, j).clone()))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.iter().any(|&i| i >= self.rows) || cols.iter().any(|&j| j >= self.cols) {
            return Err(Error::Shape("index set out of range".into()));
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        }))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    *out.get_mut(i, j) += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("cannot add matrices of different shapes".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("cannot subtract matrices of different shapes".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        }))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| ((i + 1)..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// Largest `j - i` over nonzero entries (0 for lower triangular).
    pub fn upper_bandwidth(&self) -> usize {
        let mut bw = 0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if !self.get(i, j).is_zero() {
                    bw = bw.max(j - i);
                }
            }
        }
        bw
    }

    /// Multiplies entry `(n, k)` by `k!`.
    pub fn scale_columns_by_factorial(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).scale(&factorial(j)))
    }

    /// Rows as text, entries separated by single spaces, each row cut at
    /// the diagonal when `triangular` is set.
    pub fn format_rows(&self, reg: &Registry, triangular: bool) -> Vec<String> {
        (0..self.rows)
            .map(|i| {
                let end = if triangular { (i + 1).min(self.cols) } else { self.cols };
                self.row(i)[..end]
                    .iter()
                    .map(|p| reg.format(p))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// Count of nonzero rational entries, mostly for diagnostics.
pub fn nonzero_count(m: &PolyMatrix) -> usize {
    m.entries.iter().filter(|p| !p.is_zero()).count()
}

/// Entry-wise integrality.
pub fn is_integral(m: &PolyMatrix) -> bool {
    m.entries.iter().all(|p| p.is_integral())
}

/// Matrix from a function returning rationals via integers.
pub fn int_matrix(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> PolyMatrix {
    PolyMatrix::from_fn(rows, cols, |i, j| {
        let v = f(i, j);
        if v.is_zero() {
            MultiPoly::zero()
        } else {
            MultiPoly::int(v)
        }
    })
}
