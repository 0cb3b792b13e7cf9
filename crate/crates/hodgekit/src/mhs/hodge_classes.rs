//! Integral weight-zero Hodge classes: `Hdg_0(V)_Z = (W_0)_Z ∩ F^0`.

use crate::error::Result;
use crate::lattice::{integer_kernel, integer_scaled, IntMatrix, IntegerLattice};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use crate::subspace::quotient_map;

use super::MixedHodgeStructure;

/// The saturated sublattice of `Z^rank` of integral vectors lying in `W_0`
/// and, after complexification, in `F^0`.
///
/// The membership conditions are stacked as one integer kernel problem: the
/// quotient projections mod `W_0` (rational) and mod `F^0` (Gaussian
/// rational, split into real and imaginary parts), with denominators cleared.
pub fn hodge_classes(v: &MixedHodgeStructure) -> Result<IntegerLattice> {
    let n = v.rank();
    let w0 = v.weight().at(0);
    let f0 = v.hodge().at(0);

    let qw = quotient_map(&w0);
    let qf = quotient_map(&f0);

    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for r in 0..qw.rows() {
        rows.push(qw.row(r).to_vec());
    }
    for r in 0..qf.rows() {
        let row = qf.row(r);
        rows.push(
            row.iter()
                .map(|x| GaussianRational::from_rational(x.re.clone()))
                .collect(),
        );
        rows.push(
            row.iter()
                .map(|x| GaussianRational::from_rational(x.im.clone()))
                .collect(),
        );
    }
    if rows.is_empty() {
        return Ok(IntegerLattice::standard(n));
    }
    let conditions = Matrix::from_rows(rows)?;
    let scaled: IntMatrix = integer_rows(&conditions)?;
    Ok(integer_kernel(&scaled))
}

/// Clear denominators row by row (kernels are unchanged by row scaling).
fn integer_rows(m: &Matrix) -> Result<IntMatrix> {
    let mut out = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let row = Matrix::from_rows(vec![m.row(r).to_vec()])?;
        let scaled = integer_scaled(&row)?;
        out.push(scaled.row(0).to_vec());
    }
    IntMatrix::from_rows(out)
}
