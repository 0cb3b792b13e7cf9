//! Splittings of the weight filtration and retractions onto the real-split
//! locus.
//!
//! A splitting of `W` is recorded as the semisimple operator `T` with
//! integer eigenvalues whose `l`-eigenspace sums give `W_l`; the set of all
//! splittings is an affine space under the unipotent group
//! `exp(W_{-1} End V)`, which acts simply transitively.  That affine chart,
//! anchored at a canonical base grading, is the coordinate system every
//! boundedness probe reports in.

mod delta;
mod l11;
mod retraction;

pub use delta::delta_splitting;
pub use l11::{l11_complex_basis, l11_contains, l11_real_basis};
pub use retraction::{
    assemble_real_split, delta_retract, delta_split_structure, sl2_retract, sl2_split_structure,
    sl2_zeta, RealSplitPoint, Retraction,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filtration::IncreasingFiltration;
use crate::matrix::Matrix;
use crate::mhs::Bigrading;
use crate::scalar::{rat, GaussianRational};
use crate::subspace::Subspace;

/// A semisimple endomorphism with integer eigenvalues splitting `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingOperator {
    matrix: Matrix,
    eigenspaces: BTreeMap<i64, Subspace>,
}

impl GradingOperator {
    /// Build from eigenspaces; they must decompose the full space.
    pub fn from_eigenspaces(n: usize, eigenspaces: BTreeMap<i64, Subspace>) -> Result<Self> {
        let eigenspaces: BTreeMap<i64, Subspace> = eigenspaces
            .into_iter()
            .filter(|(_, s)| !s.is_zero())
            .collect();
        let total: usize = eigenspaces.values().map(|s| s.dim()).sum();
        if total != n {
            return Err(Error::Structural(
                "eigenspaces do not sum to the full space".into(),
            ));
        }
        let mut cols: Vec<Vec<GaussianRational>> = Vec::new();
        let mut values = Vec::new();
        for (l, s) in &eigenspaces {
            for r in 0..s.dim() {
                cols.push(s.basis().row(r).to_vec());
                values.push(*l);
            }
        }
        let p = Matrix::from_rows(cols)?.transpose();
        let p_inv = p
            .inverse()
            .ok_or_else(|| Error::Structural("eigenspaces are not independent".into()))?;
        let mut diag = Matrix::zero(n, n);
        for (k, l) in values.iter().enumerate() {
            diag.set(k, k, GaussianRational::from_int(*l));
        }
        let matrix = p.mul_mat(&diag)?.mul_mat(&p_inv)?;
        Ok(GradingOperator {
            matrix,
            eigenspaces,
        })
    }

    /// The grading with `l`-eigenspace `⊕_{p+q=l} J^{p,q}`; preserves `F`.
    pub fn from_bigrading(b: &Bigrading) -> Result<Self> {
        let mut eigenspaces: BTreeMap<i64, Subspace> = BTreeMap::new();
        for (&(p, q), s) in b.pieces() {
            let e = eigenspaces
                .entry(p + q)
                .or_insert_with(|| Subspace::zero(b.ambient_dim()));
            *e = e.sum(s)?;
        }
        Self::from_eigenspaces(b.ambient_dim(), eigenspaces)
    }

    /// The canonical base grading of `W`: the `k`-eigenspace is spanned by
    /// the echelon basis rows of `W_k` whose pivots are new at level `k`.
    /// Rational, and the anchor of the affine chart on `S(W)(R)`.
    pub fn base_grading(w: &IncreasingFiltration) -> Result<Self> {
        let n = w.ambient_dim();
        let mut eigenspaces = BTreeMap::new();
        for (k, s) in w.jumps() {
            let below = w.at(k - 1);
            let rows: Vec<Vec<GaussianRational>> = (0..s.dim())
                .filter(|&r| !below.pivots().contains(&s.pivots()[r]))
                .map(|r| s.basis().row(r).to_vec())
                .collect();
            if !rows.is_empty() {
                eigenspaces.insert(*k, Subspace::span(n, &rows)?);
            }
        }
        Self::from_eigenspaces(n, eigenspaces)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigenspace(&self, l: i64) -> Subspace {
        self.eigenspaces
            .get(&l)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.ambient_dim()))
    }

    pub fn eigenvalues(&self) -> Vec<i64> {
        self.eigenspaces.keys().copied().collect()
    }

    pub fn is_real(&self) -> bool {
        self.matrix.is_real()
    }

    /// The weight filtration this operator splits: `W_l = ⊕_{k<=l} V_k`.
    pub fn weight_filtration(&self) -> Result<IncreasingFiltration> {
        let n = self.ambient_dim();
        let mut steps = Vec::new();
        let mut acc = Subspace::zero(n);
        for (l, s) in &self.eigenspaces {
            acc = acc.sum(s)?;
            steps.push((*l, acc.clone()));
        }
        IncreasingFiltration::new(n, steps)
    }

    /// Does the grading split the given filtration?
    pub fn splits(&self, w: &IncreasingFiltration) -> bool {
        self.weight_filtration()
            .map(|own| own == *w)
            .unwrap_or(false)
    }

    pub fn preserves(&self, s: &Subspace) -> bool {
        s.map(&self.matrix)
            .map(|img| s.contains(&img))
            .unwrap_or(false)
    }

    /// Projector onto the `l`-eigenspace along the others.
    pub fn projector(&self, l: i64) -> Result<Matrix> {
        let n = self.ambient_dim();
        let mut cols: Vec<Vec<GaussianRational>> = Vec::new();
        let mut keep = Vec::new();
        for (k, s) in &self.eigenspaces {
            for r in 0..s.dim() {
                cols.push(s.basis().row(r).to_vec());
                keep.push(*k == l);
            }
        }
        let p = Matrix::from_rows(cols)?.transpose();
        let p_inv = p
            .inverse()
            .ok_or_else(|| Error::Internal("bad grading".into()))?;
        let mut diag = Matrix::zero(n, n);
        for (k, keep) in keep.iter().enumerate() {
            if *keep {
                diag.set(k, k, GaussianRational::one());
            }
        }
        p.mul_mat(&diag)?.mul_mat(&p_inv)
    }

    /// The component of `x` lowering this grading by exactly `m`:
    /// `Σ_l π_{l-m} x π_l`.
    pub fn depth_component(&self, x: &Matrix, m: i64) -> Result<Matrix> {
        let n = self.ambient_dim();
        let mut acc = Matrix::zero(n, n);
        for l in self.eigenvalues() {
            let lower = l - m;
            if !self.eigenspaces.contains_key(&lower) {
                continue;
            }
            let term = self
                .projector(lower)?
                .mul_mat(x)?
                .mul_mat(&self.projector(l)?)?;
            acc = acc.add_mat(&term)?;
        }
        Ok(acc)
    }

    /// Largest possible lowering depth for this grading.
    pub fn depth_span(&self) -> i64 {
        let vals = self.eigenvalues();
        match (vals.first(), vals.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }
}

/// The unique unipotent `u = exp(x)` with `x ∈ W_{-1} End(V)` and
/// `Ad(u) T = T'`, solved depth by depth in the `ad T` eigendecomposition.
/// The gradings must split the same weight filtration.
pub fn unipotent_transport(t: &GradingOperator, t2: &GradingOperator) -> Result<Matrix> {
    Ok(unipotent_transport_log(t, t2)?.0)
}

/// Like [`unipotent_transport`], returning both `exp(x)` and `x` (the
/// coordinates of `T'` in the affine chart anchored at `T`).
pub fn unipotent_transport_log(
    t: &GradingOperator,
    t2: &GradingOperator,
) -> Result<(Matrix, Matrix)> {
    let wa = t.weight_filtration()?;
    let wb = t2.weight_filtration()?;
    if wa != wb {
        return Err(Error::DifferentWeightFiltrations);
    }
    let n = t.ambient_dim();
    let mut x = Matrix::zero(n, n);
    for m in 1..=t.depth_span() {
        let u = x.exp_nilpotent()?;
        let conj =
            u.mul_mat(t.matrix())?
                .mul_mat(&u.inverse().ok_or_else(|| {
                    Error::Internal("unipotent matrix must be invertible".into())
                })?)?;
        let residual = t2.matrix().sub_mat(&conj)?;
        let r_m = t.depth_component(&residual, m)?;
        // [x_m, T] = m x_m, so the depth-m discrepancy divides by m.
        let x_m = r_m.scale(&GaussianRational::from_rational(rat(1, m)));
        x = x.add_mat(&x_m)?;
    }
    let u = x.exp_nilpotent()?;
    let conj = u.mul_mat(t.matrix())?.mul_mat(
        &u.inverse()
            .ok_or_else(|| Error::Internal("unipotent inverse".into()))?,
    )?;
    if conj != *t2.matrix() {
        return Err(Error::Internal("transport recursion did not close".into()));
    }
    Ok((u, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mhs::deligne_bigrading;
    use crate::scalar::parse_gaussian;

    #[test]
    fn kummer_grading_eigenvalues() {
        let z = parse_gaussian("i").unwrap();
        let v = fixtures::kummer(&z);
        let b = deligne_bigrading(&v).unwrap();
        let t = GradingOperator::from_bigrading(&b).unwrap();
        assert_eq!(t.eigenvalues(), vec![-2, 0]);
        assert_eq!(t.eigenspace(0), b.piece(0, 0));
        assert!(t.splits(v.weight()));
        assert!(t.preserves(&v.hodge().at(0)));
    }

    #[test]
    fn pure_grading_is_scalar() {
        let v = fixtures::elliptic(&parse_gaussian("i").unwrap()).unwrap();
        let b = deligne_bigrading(&v).unwrap();
        let t = GradingOperator::from_bigrading(&b).unwrap();
        assert_eq!(t.matrix(), &Matrix::identity(2));
    }

    #[test]
    fn split_input_has_real_grading() {
        let z = parse_gaussian("2/3").unwrap();
        let v = fixtures::kummer(&z);
        let b = deligne_bigrading(&v).unwrap();
        let t = GradingOperator::from_bigrading(&b).unwrap();
        assert!(t.is_real());
    }

    #[test]
    fn base_grading_splits_w() {
        let z = parse_gaussian("1/2+2*i").unwrap();
        let v = fixtures::kummer(&z);
        let t0 = GradingOperator::base_grading(v.weight()).unwrap();
        assert!(t0.splits(v.weight()));
        assert!(t0.is_real());
    }

    #[test]
    fn transport_is_identity_on_equal_gradings() {
        let z = parse_gaussian("3+1*i").unwrap();
        let v = fixtures::kummer(&z);
        let t0 = GradingOperator::base_grading(v.weight()).unwrap();
        let u = unipotent_transport(&t0, &t0).unwrap();
        assert_eq!(u, Matrix::identity(2));
    }

    #[test]
    fn transport_moves_kummer_gradings_affinely() {
        // Gradings of K(0) and K(3): u = exp(3E) with E: e0 -> e1.
        let t_a = GradingOperator::from_bigrading(
            &deligne_bigrading(&fixtures::kummer(&GaussianRational::zero())).unwrap(),
        )
        .unwrap();
        let t_b = GradingOperator::from_bigrading(
            &deligne_bigrading(&fixtures::kummer(&GaussianRational::from_int(3))).unwrap(),
        )
        .unwrap();
        let (u, x) = unipotent_transport_log(&t_a, &t_b).unwrap();
        let mut expected_x = Matrix::zero(2, 2);
        expected_x.set(1, 0, GaussianRational::from_int(3));
        assert_eq!(x, expected_x);
        assert_eq!(u, x.exp_nilpotent().unwrap());
    }

    #[test]
    fn transport_composes() {
        let pts = ["0", "3", "-1/2"];
        let ts: Vec<GradingOperator> = pts
            .iter()
            .map(|s| {
                let v = fixtures::kummer(&parse_gaussian(s).unwrap());
                GradingOperator::from_bigrading(&deligne_bigrading(&v).unwrap()).unwrap()
            })
            .collect();
        let u01 = unipotent_transport(&ts[0], &ts[1]).unwrap();
        let u12 = unipotent_transport(&ts[1], &ts[2]).unwrap();
        let u02 = unipotent_transport(&ts[0], &ts[2]).unwrap();
        assert_eq!(u12.mul_mat(&u01).unwrap(), u02);
    }
}
