//! Subspaces of `C^n` in canonical form.
//!
//! A subspace is stored as its reduced-row-echelon basis, so structural
//! equality of the representation is equality of the underlying sets.  This
//! is what makes invariant testing throughout the crate possible: every
//! identity between filtrations, bigradings and splittings reduces to `==`
//! on canonical bases.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    /// Basis vectors as rows, in reduced row echelon form, no zero rows.
    basis: Matrix,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}; basis {:?})",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

impl Subspace {
    /// The span of the given row vectors.
    pub fn span(ambient: usize, rows: &[Vec<GaussianRational>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "span rows must have length {ambient}"
            )));
        }
        let m = Matrix::from_rows(rows.to_vec())?;
        Ok(Self::from_matrix(ambient, &m))
    }

    /// The row space of `m`, canonicalized.
    pub fn from_matrix(ambient: usize, m: &Matrix) -> Self {
        debug_assert!(m.rows() == 0 || m.cols() == ambient);
        let (r, pivots) = m.rref();
        let rows: Vec<Vec<GaussianRational>> =
            (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        let basis = if rows.is_empty() {
            Matrix::zero(0, ambient)
        } else {
            Matrix::from_rows(rows).expect("echelon rows")
        };
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zero(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces live in different ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn contains_vec(&self, v: &[GaussianRational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce v against the echelon basis; membership iff the residue is 0.
        let mut v = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for c in 0..self.ambient {
                    v[c] = &v[c] - &f.mul_ref(self.basis.at(row, c));
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && (0..other.dim()).all(|r| self.contains_vec(other.basis.row(r)))
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let stacked = self.basis.vstack(&other.basis)?;
        Ok(Subspace::from_matrix(self.ambient, &stacked))
    }

    /// Exact intersection.
    ///
    /// Computed from the left kernel of the stacked basis `[A; B]`: a
    /// relation `u*A + v*B = 0` exhibits `u*A = -v*B` as a common vector,
    /// and all common vectors arise this way.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let stacked = self.basis.vstack(&other.basis)?;
        let left_kernel = stacked.transpose().right_kernel();
        let a = self.dim();
        let mut rows = Vec::new();
        for k in 0..left_kernel.rows() {
            let rel = left_kernel.row(k);
            let mut v = vec![GaussianRational::zero(); self.ambient];
            for (i, coeff) in rel.iter().take(a).enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for c in 0..self.ambient {
                    v[c] = &v[c] + &coeff.mul_ref(self.basis.at(i, c));
                }
            }
            rows.push(v);
        }
        Subspace::span(self.ambient, &rows)
    }

    /// Entrywise conjugation of the basis, re-canonicalized.
    pub fn conjugate(&self) -> Subspace {
        Subspace::from_matrix(self.ambient, &self.basis.conjugate())
    }

    /// A subspace is real (conjugation stable) iff its canonical basis has
    /// rational entries; for an RREF basis the two conditions coincide.
    pub fn is_real(&self) -> bool {
        self.basis.is_real()
    }

    /// Image under a linear map given by a matrix acting on column vectors.
    pub fn map(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::DimensionMismatch(
                "map: matrix columns != ambient".into(),
            ));
        }
        let image = self.basis.mul_mat(&m.transpose())?;
        Ok(Subspace::from_matrix(m.rows(), &image))
    }

    /// Preimage `{ v : m*v in self }`.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace> {
        if m.rows() != self.ambient {
            return Err(Error::DimensionMismatch(
                "preimage: matrix rows != ambient".into(),
            ));
        }
        let q = quotient_map(self);
        let cond = q.mul_mat(m)?;
        Ok(Subspace::from_matrix(m.cols(), &cond.right_kernel()))
    }

    /// Image of `self` in `ambient / modulo`, in quotient coordinates.
    ///
    /// Quotient coordinates are the standard coordinates away from the pivot
    /// columns of `modulo`'s canonical basis; this fixed convention makes
    /// images in graded pieces canonically comparable.
    pub fn quotient_image(&self, modulo: &Subspace) -> Result<Subspace> {
        self.check_ambient(modulo)?;
        let q = quotient_map(modulo);
        self.map(&q)
    }
}

/// The matrix of the projection `C^n -> C^(n-d)` with kernel `modulo`.
///
/// Rows are indexed by the non-pivot coordinates of `modulo`: each input
/// vector is first reduced by the canonical basis of `modulo` (clearing the
/// pivot coordinates) and the surviving coordinates are read off.
pub fn quotient_map(modulo: &Subspace) -> Matrix {
    let n = modulo.ambient_dim();
    let pivots = modulo.pivots();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    Matrix::from_fn(free.len(), n, |r, c| {
        let fc = free[r];
        if c == fc {
            GaussianRational::one()
        } else if let Some(prow) = pivots.iter().position(|&p| p == c) {
            -modulo.basis().at(prow, fc).clone()
        } else {
            GaussianRational::zero()
        }
    })
}

/// Flatten a `to x from` matrix into the coordinates of `C^(from*to)`,
/// source index major: entry `M[b][a]` lands at index `a*to + b`.  This is
/// the identification `Hom(V, V') = V^dual ⊗ V'` used throughout.
pub fn flatten_map(m: &Matrix) -> Vec<GaussianRational> {
    let (to, from) = (m.rows(), m.cols());
    let mut v = vec![GaussianRational::zero(); from * to];
    for b in 0..to {
        for a in 0..from {
            v[a * to + b] = m.at(b, a).clone();
        }
    }
    v
}

/// Inverse of [`flatten_map`].
pub fn unflatten_map(from: usize, to: usize, v: &[GaussianRational]) -> Matrix {
    assert_eq!(v.len(), from * to);
    Matrix::from_fn(to, from, |b, a| v[a * to + b].clone())
}

/// The space of linear maps `C^from -> C^to` sending each `source` into the
/// paired `target`, as a subspace of the flattened coordinates.
pub fn map_constraint_space(
    from: usize,
    to: usize,
    constraints: &[(Subspace, Subspace)],
) -> Result<Subspace> {
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for (source, target) in constraints {
        if source.ambient_dim() != from || target.ambient_dim() != to {
            return Err(Error::DimensionMismatch("map constraint ambient".into()));
        }
        let q = quotient_map(target);
        for r in 0..source.dim() {
            let v = source.basis().row(r);
            // Condition rows of Q_target * M * v = 0 in flattened unknowns.
            for i in 0..q.rows() {
                let mut row = vec![GaussianRational::zero(); from * to];
                for a in 0..from {
                    if v[a].is_zero() {
                        continue;
                    }
                    for b in 0..to {
                        row[a * to + b] = q.at(i, b).mul_ref(&v[a]);
                    }
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(from * to));
    }
    let cond = Matrix::from_rows(rows)?;
    Ok(Subspace::from_matrix(from * to, &cond.right_kernel()))
}

/// Real form of [`map_constraint_space`]: the same constraints solved over
/// the rationals, i.e. the conjugation-fixed maps.  The returned subspace of
/// `C^(from*to)` has a real basis.
pub fn real_map_constraint_space(
    from: usize,
    to: usize,
    constraints: &[(Subspace, Subspace)],
) -> Result<Subspace> {
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for (source, target) in constraints {
        if source.ambient_dim() != from || target.ambient_dim() != to {
            return Err(Error::DimensionMismatch("map constraint ambient".into()));
        }
        let q = quotient_map(target);
        for r in 0..source.dim() {
            let v = source.basis().row(r);
            for i in 0..q.rows() {
                let mut re_row = vec![GaussianRational::zero(); from * to];
                let mut im_row = vec![GaussianRational::zero(); from * to];
                for a in 0..from {
                    if v[a].is_zero() {
                        continue;
                    }
                    for b in 0..to {
                        let coeff = q.at(i, b).mul_ref(&v[a]);
                        re_row[a * to + b] = GaussianRational::from_rational(coeff.re.clone());
                        im_row[a * to + b] = GaussianRational::from_rational(coeff.im);
                    }
                }
                rows.push(re_row);
                rows.push(im_row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(from * to));
    }
    let cond = Matrix::from_rows(rows)?;
    Ok(Subspace::from_matrix(from * to, &cond.right_kernel()))
}

/// The canonical section of [`quotient_map`]: quotient coordinates are
/// placed back at the non-pivot positions, pivot positions read zero.
pub fn quotient_section(modulo: &Subspace) -> Matrix {
    let n = modulo.ambient_dim();
    let pivots = modulo.pivots();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    Matrix::from_fn(n, free.len(), |r, c| {
        if free[c] == r {
            GaussianRational::one()
        } else {
            GaussianRational::zero()
        }
    })
}
