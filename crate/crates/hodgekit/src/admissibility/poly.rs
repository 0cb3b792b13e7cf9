//! Polynomials in one variable over the Gaussian rationals, and generic
//! (function-field) ranks of polynomial matrices.

use num_complex::Complex64;

use crate::scalar::GaussianRational;

/// Coefficients constant-first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn variable() -> Self {
        Poly::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![GaussianRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] = &out[k] + c;
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            out[k] = &out[k] + c;
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &a.mul_ref(b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &GaussianRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.mul_ref(s)).collect())
    }

    pub fn eval(&self, q: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(q) + c.clone();
        }
        acc
    }

    pub fn eval_f64(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * q + complex_of(c);
        }
        acc
    }
}

pub fn complex_of(c: &GaussianRational) -> Complex64 {
    Complex64::new(rational_f64(&c.re), rational_f64(&c.im))
}

pub fn rational_f64(r: &crate::scalar::Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rank of a matrix of polynomials over the rational function field,
/// computed by fraction-free cross-multiplication elimination.
pub fn generic_rank(rows: &[Vec<Poly>]) -> usize {
    let mut rows: Vec<Vec<Poly>> = rows.to_vec();
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0usize;
    let mut row_start = 0usize;
    for col in 0..cols {
        let Some(pivot) = (row_start..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row_start, pivot);
        let pivot_poly = rows[row_start][col].clone();
        for r in 0..rows.len() {
            if r == row_start || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in 0..cols {
                // row_r := pivot * row_r - factor * pivot_row (rank preserving).
                rows[r][c] = pivot_poly
                    .mul(&rows[r][c])
                    .sub(&factor.mul(&rows[row_start][c]));
            }
        }
        rank += 1;
        row_start += 1;
        if row_start == rows.len() {
            break;
        }
    }
    rank
}
