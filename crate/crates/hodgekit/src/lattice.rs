//! Integer lattices: Hermite normal form, saturated kernels, Smith invariants.
//!
//! Kernels are computed by unimodular column reduction (the Smith/Hermite
//! elimination style), so the result is automatically saturated: it equals
//! the rational kernel intersected with `Z^n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{GaussianRational, Rational};
use crate::subspace::Subspace;

/// Dense matrix over `Z`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch("integer matrix entries".into()));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for k in 0..n {
            m.set(k, k, BigInt::from(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged integer rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).clone());
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("integer hstack".into()));
        }
        let mut out = IntMatrix::zero(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c).clone());
            }
            for c in 0..rhs.cols {
                out.set(r, self.cols + c, rhs.at(r, c).clone());
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(
                "integer matrix-vector product".into(),
            ));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for c in 0..self.cols {
                    acc += self.at(r, c) * &v[c];
                }
                acc
            })
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn add_multiple_of_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(target, c) + factor * self.at(source, c);
            self.set(target, c, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// Row Hermite normal form: echelon with positive pivots and entries
    /// above each pivot reduced into `[0, pivot)`.  Zero rows are dropped.
    pub fn hermite_normal_form(&self) -> IntMatrix {
        let mut m = self.clone();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            // Euclidean elimination below the pivot row in this column.
            loop {
                let mut best: Option<(usize, BigInt)> = None;
                for r in pivot_row..m.rows {
                    let v = m.at(r, col);
                    if !v.is_zero() {
                        let a = v.abs();
                        if best.as_ref().map_or(true, |(_, b)| a < *b) {
                            best = Some((r, a));
                        }
                    }
                }
                let Some((br, _)) = best else { break };
                m.swap_rows(pivot_row, br);
                let mut done = true;
                for r in pivot_row + 1..m.rows {
                    if !m.at(r, col).is_zero() {
                        let q = m.at(r, col).div_floor(m.at(pivot_row, col));
                        m.add_multiple_of_row(r, pivot_row, &(-q));
                        if !m.at(r, col).is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if m.at(pivot_row, col).is_zero() {
                continue;
            }
            if m.at(pivot_row, col).is_negative() {
                m.negate_row(pivot_row);
            }
            // Reduce the entries above the pivot into [0, pivot).
            for r in 0..pivot_row {
                let q = m.at(r, col).div_floor(m.at(pivot_row, col));
                if !q.is_zero() {
                    m.add_multiple_of_row(r, pivot_row, &(-q));
                }
            }
            pivot_row += 1;
        }
        let rows: Vec<Vec<BigInt>> = (0..pivot_row).map(|r| m.row(r).to_vec()).collect();
        if rows.is_empty() {
            IntMatrix::zero(0, self.cols)
        } else {
            IntMatrix::from_rows(rows).expect("hnf rows")
        }
    }

    /// Smith invariant factors (nonzero diagonal of the Smith normal form).
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let mut m = self.clone();
        let mut out = Vec::new();
        let mut top = 0usize;
        let mut left = 0usize;
        while top < m.rows && left < m.cols {
            // Find the smallest nonzero entry in the remaining block.
            let mut best: Option<(usize, usize, BigInt)> = None;
            for r in top..m.rows {
                for c in left..m.cols {
                    let v = m.at(r, c);
                    if !v.is_zero() {
                        let a = v.abs();
                        if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                            best = Some((r, c, a));
                        }
                    }
                }
            }
            let Some((br, bc, _)) = best else { break };
            m.swap_rows(top, br);
            m.swap_cols(left, bc);
            // Clear the row and column of the pivot; restart if a remainder
            // appears (standard Smith reduction loop).
            let mut clean = true;
            for r in top + 1..m.rows {
                if !m.at(r, left).is_zero() {
                    let q = m.at(r, left).div_floor(m.at(top, left));
                    m.add_multiple_of_row(r, top, &(-q));
                    if !m.at(r, left).is_zero() {
                        clean = false;
                    }
                }
            }
            for c in left + 1..m.cols {
                if !m.at(top, c).is_zero() {
                    let q = m.at(top, c).div_floor(m.at(top, left));
                    m.add_multiple_of_col(c, left, &(-q));
                    if !m.at(top, c).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let mut d = m.at(top, left).abs();
            // Enforce divisibility towards later entries.
            'outer: for r in top + 1..m.rows {
                for c in left + 1..m.cols {
                    if !(m.at(r, c) % &d).is_zero() {
                        m.add_multiple_of_row(top, r, &BigInt::from(1));
                        d = m.at(top, left).abs();
                        break 'outer;
                    }
                }
            }
            if !clean_pivot(&m, top, left) {
                continue;
            }
            out.push(d);
            top += 1;
            left += 1;
        }
        out
    }

    fn add_multiple_of_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = self.at(r, target) + factor * self.at(r, source);
            self.set(r, target, v);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Promote to a Gaussian-rational matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            GaussianRational::from_rational(Rational::from(self.at(r, c).clone()))
        })
    }
}

fn clean_pivot(m: &IntMatrix, top: usize, left: usize) -> bool {
    (top + 1..m.rows()).all(|r| m.at(r, left).is_zero())
        && (left + 1..m.cols()).all(|c| m.at(top, c).is_zero())
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A saturated sublattice of `Z^n`, basis rows in Hermite normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerLattice {
    ambient: usize,
    basis: IntMatrix,
}

impl IntegerLattice {
    pub fn from_basis(ambient: usize, basis: IntMatrix) -> Result<Self> {
        if basis.rows() > 0 && basis.cols() != ambient {
            return Err(Error::DimensionMismatch("lattice basis columns".into()));
        }
        let hnf = basis.hermite_normal_form();
        Ok(IntegerLattice {
            ambient,
            basis: hnf,
        })
    }

    pub fn zero(ambient: usize) -> Self {
        IntegerLattice {
            ambient,
            basis: IntMatrix::zero(0, ambient),
        }
    }

    pub fn standard(ambient: usize) -> Self {
        IntegerLattice {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// The rational span as a subspace of `C^n`.
    pub fn rational_span(&self) -> Subspace {
        Subspace::from_matrix(self.ambient, &self.basis.to_matrix())
    }

    /// Every vector of the rational kernel with integer entries lies in the
    /// lattice; equivalently all Smith invariants of the basis are 1.
    pub fn is_saturated(&self) -> bool {
        self.basis
            .smith_invariants()
            .iter()
            .all(|d| d == &BigInt::from(1))
    }
}

/// Lattice of all integer vectors `v` with `m * v = 0`.
///
/// Runs row elimination on `[m^T | I]`; rows whose `m^T` part vanishes carry
/// unimodular coordinates for the kernel, so the output is saturated.
pub fn integer_kernel(m: &IntMatrix) -> IntegerLattice {
    let n = m.cols();
    let stacked = m
        .transpose()
        .hstack(&IntMatrix::identity(n))
        .expect("rows match");
    let reduced = eliminate_left_block(&stacked, m.rows());
    let mut kernel_rows = Vec::new();
    for r in 0..reduced.rows() {
        if (0..m.rows()).all(|c| reduced.at(r, c).is_zero()) {
            kernel_rows.push(reduced.row(r)[m.rows()..].to_vec());
        }
    }
    let basis = if kernel_rows.is_empty() {
        IntMatrix::zero(0, n)
    } else {
        IntMatrix::from_rows(kernel_rows).expect("kernel rows")
    };
    IntegerLattice::from_basis(n, basis).expect("kernel lattice")
}

/// Unimodular row reduction that only creates echelon structure in the
/// first `left_cols` columns, keeping the full transformation on the right.
fn eliminate_left_block(m: &IntMatrix, left_cols: usize) -> IntMatrix {
    let mut m = m.clone();
    let mut pivot_row = 0usize;
    for col in 0..left_cols {
        if pivot_row >= m.rows() {
            break;
        }
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for r in pivot_row..m.rows() {
                let v = m.at(r, col);
                if !v.is_zero() {
                    let a = v.abs();
                    if best.as_ref().map_or(true, |(_, b)| a < *b) {
                        best = Some((r, a));
                    }
                }
            }
            let Some((br, _)) = best else { break };
            m.swap_rows(pivot_row, br);
            let mut done = true;
            for r in pivot_row + 1..m.rows() {
                if !m.at(r, col).is_zero() {
                    let q = m.at(r, col).div_floor(m.at(pivot_row, col));
                    m.add_multiple_of_row(r, pivot_row, &(-q));
                    if !m.at(r, col).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !m.at(pivot_row, col).is_zero() {
            pivot_row += 1;
        }
    }
    m
}

/// Clear denominators: the integer matrix `lcm * m` for a rational matrix
/// whose entries must be real.
pub fn integer_scaled(m: &Matrix) -> Result<IntMatrix> {
    use num_integer::lcm;
    let mut l = BigInt::from(1);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = m.at(r, c);
            if !x.is_real() {
                return Err(Error::Structural("matrix has non-real entries".into()));
            }
            l = lcm(l, x.re.denom().clone());
        }
    }
    let mut out = IntMatrix::zero(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = &m.at(r, c).re;
            out.set(r, c, x.numer() * (&l / x.denom()));
        }
    }
    Ok(out)
}
