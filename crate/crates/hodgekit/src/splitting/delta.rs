//! The Deligne delta-splitting.
//!
//! For a mixed Hodge structure `(V, W, F)` there is a unique real
//! `delta ∈ (L^{-1,-1})_R` such that `(V, W, e^{-i delta} F)` splits over
//! `R`.  It is pinned down by the grading equation
//! `Ad(e^{-2i delta}) T = conj(T)` with `T` the Deligne grading, which is
//! triangular in the `ad T` eigendecomposition: the depth-`m` discrepancy
//! equals `-2i m delta_m` once all shallower components are known, and
//! depths are integers so ties cannot occur.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::mhs::{deligne_bigrading, MixedHodgeStructure};
use crate::scalar::{rat, GaussianRational};

use super::l11::l11_contains;
use super::GradingOperator;

fn conjugate_by_exp(arg: &Matrix, t: &Matrix) -> Result<Matrix> {
    let u = arg.exp_nilpotent()?;
    let u_inv = u
        .inverse()
        .ok_or_else(|| Error::Internal("unipotent matrix must invert".into()))?;
    u.mul_mat(t)?.mul_mat(&u_inv)
}

/// Compute `delta`; the returned matrix is real, lies in `(L^{-1,-1})_R`,
/// and `e^{-i delta} F` is split over `R` (all three checked exactly).
/// Zero exactly when the input is already split.
pub fn delta_splitting(v: &MixedHodgeStructure) -> Result<Matrix> {
    let b = deligne_bigrading(v)?;
    let t_op = GradingOperator::from_bigrading(&b)?;
    let t = t_op.matrix().clone();
    let t_bar = t.conjugate();
    let n = v.rank();

    let minus_2i = GaussianRational::new(rat(0, 1), rat(-2, 1));
    let mut delta = Matrix::zero(n, n);
    for m in 2..=t_op.depth_span() {
        let conj = conjugate_by_exp(&delta.scale(&minus_2i), &t)?;
        let residual = t_bar.sub_mat(&conj)?;
        let r_m = t_op.depth_component(&residual, m)?;
        // residual_m = -2i m delta_m, and 1/(-2im) = i/(2m).
        let delta_m = r_m.scale(&GaussianRational::new(rat(0, 1), rat(1, 2 * m)));
        delta = delta.add_mat(&delta_m)?;
    }

    // The proposition guarantees a solution; anything else is a bug.
    if conjugate_by_exp(&delta.scale(&minus_2i), &t)? != t_bar {
        return Err(Error::Internal("delta recursion did not close".into()));
    }
    if !delta.is_real() {
        return Err(Error::Internal("delta is not real".into()));
    }
    if !l11_contains(&b, &delta)? {
        return Err(Error::Internal("delta is not in L^{-1,-1}".into()));
    }
    let twist = delta.scale(&-GaussianRational::i()).exp_nilpotent()?;
    if !v.twist_hodge(&twist)?.is_split_over_r()? {
        return Err(Error::Internal("e^{-i delta} F is not split over R".into()));
    }
    Ok(delta)
}
