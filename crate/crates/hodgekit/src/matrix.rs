//! Dense matrices over the Gaussian rationals with exact elimination.
//!
//! Everything here is exact: the row reduction below is ordinary
//! Gauss-Jordan over a field, with no pivot thresholds, so rank, kernels and
//! inverses are certificates rather than estimates.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<GaussianRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for k in 0..n {
            m.set(k, k, GaussianRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from a closure, entry by entry.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GaussianRational,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|x| x.is_real())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn conjugate(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.conj()).collect(),
        }
    }

    pub fn conjugate_transpose(&self) -> Matrix {
        self.conjugate().transpose()
    }

    pub fn scale(&self, s: &GaussianRational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&(-GaussianRational::one()))
    }

    pub fn add_mat(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("matrix addition".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub_mat(&self, rhs: &Matrix) -> Result<Matrix> {
        self.add_mat(&rhs.neg())
    }

    pub fn mul_mat(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out.at(r, c) + &a.mul_ref(rhs.at(k, c));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector product".into()));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = GaussianRational::zero();
                for c in 0..self.cols {
                    if !v[c].is_zero() {
                        acc = acc + self.at(r, c).mul_ref(&v[c]);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                rhs.at(r, c - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.cols && self.rows != 0 && rhs.rows != 0 {
            return Err(Error::DimensionMismatch("vstack".into()));
        }
        let cols = if self.rows == 0 { rhs.cols } else { self.cols };
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix::new(self.rows + rhs.rows, cols, data)
    }

    pub fn kronecker(&self, rhs: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
            let (r1, r2) = (r / rhs.rows, r % rhs.rows);
            let (c1, c2) = (c / rhs.cols, c % rhs.cols);
            self.at(r1, c1).mul_ref(rhs.at(r2, c2))
        })
    }

    pub fn trace(&self) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for k in 0..self.rows.min(self.cols) {
            acc = acc + self.at(k, k).clone();
        }
        acc
    }

    pub fn commutator(&self, rhs: &Matrix) -> Result<Matrix> {
        self.mul_mat(rhs)?.sub_mat(&rhs.mul_mat(self)?)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..m.cols {
            if lead >= m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, lead);
            let inv = m.at(lead, col).inv().expect("pivot nonzero");
            for c in col..m.cols {
                let v = m.at(lead, c).mul_ref(&inv);
                m.set(lead, c, v);
            }
            for r in 0..m.rows {
                if r != lead && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c) - &f.mul_ref(m.at(lead, c));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{ v : self * v = 0 }`, returned as rows.
    pub fn right_kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[fc] = GaussianRational::one();
            for (prow, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.at(prow, fc).clone();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            Matrix::zero(0, self.cols)
        } else {
            Matrix::from_rows(rows).expect("kernel rows")
        }
    }

    /// One solution of `self * x = rhs`, if any.
    pub fn solve(&self, rhs: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        assert_eq!(rhs.len(), self.rows, "solve: rhs length");
        let aug = self
            .hstack(&Matrix::from_rows(rhs.iter().map(|x| vec![x.clone()]).collect()).ok()?)
            .ok()?;
        let (r, pivots) = aug.rref();
        // Inconsistent if a pivot lands in the augmented column.
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (prow, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n)).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &p)| k != p) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }

    pub fn det(&self) -> GaussianRational {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = GaussianRational::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return GaussianRational::zero();
            };
            if pr != col {
                m.swap_rows(pr, col);
                det = -det;
            }
            let pivot = m.at(col, col).clone();
            det = det * pivot.clone();
            let inv = pivot.inv().expect("pivot nonzero");
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col).mul_ref(&inv);
                for c in col..n {
                    let v = m.at(r, c) - &f.mul_ref(m.at(col, c));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn pow(&self, mut k: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_mat(&base).expect("square");
            }
            base = base.mul_mat(&base).expect("square");
            k >>= 1;
        }
        acc
    }

    /// `exp` of a nilpotent matrix as a finite exact sum.
    pub fn exp_nilpotent(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("exp of non-square matrix".into()));
        }
        let n = self.rows;
        let mut acc = Matrix::identity(n);
        let mut term = Matrix::identity(n);
        for k in 1..=n {
            // term holds self^k / k!: multiply by self and divide by k.
            term = term.mul_mat(self)?;
            term = term.scale(&GaussianRational::from_rational(Rational::new(
                num_bigint::BigInt::from(1),
                num_bigint::BigInt::from(k),
            )));
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc.add_mat(&term)?;
        }
        Err(Error::Structural("matrix is not nilpotent".into()))
    }

    /// Real and imaginary rational parts, as two matrices.
    pub fn re_im(&self) -> (Vec<Rational>, Vec<Rational>) {
        (
            self.data.iter().map(|x| x.re.clone()).collect(),
            self.data.iter().map(|x| x.im.clone()).collect(),
        )
    }
}

impl GaussianRational {
    /// By-reference multiplication helper used in matrix kernels.
    pub fn mul_ref(&self, rhs: &GaussianRational) -> GaussianRational {
        self * rhs
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.add_mat(rhs).expect("matrix addition dimensions")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.sub_mat(rhs).expect("matrix subtraction dimensions")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.mul_mat(rhs).expect("matrix product dimensions")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Parse a matrix from row-major string entries.
pub fn matrix_from_strings(rows: &[Vec<String>]) -> Result<Matrix> {
    let parsed: Result<Vec<Vec<GaussianRational>>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| crate::scalar::parse_gaussian(s))
                .collect()
        })
        .collect();
    Matrix::from_rows(parsed?)
}
