//! Retractions from the mixed period domain onto its real-split locus.
//!
//! A real-split structure is the same thing as a pair (pure polarized
//! structure on each weight graded piece, splitting of `W`): that product
//! decomposition is what a [`RealSplitPoint`] records.  Both retractions
//! act over the graded part (they do not move the induced pure structures).
//!
//! - `delta`: twist by `e^{-i delta}` with delta the Deligne splitting.
//! - `sl2`: twist further by `e^{zeta}`, where `zeta` is a real universal
//!   Lie expression in the Hodge components `delta^{p,q}` of delta taken in
//!   the split structure's bigrading, vanishing on the `(-1,-1)` component.
//!   On structures whose `L^{-1,-1}` is concentrated in bidegree `(-1,-1)`
//!   (in particular every depth-two weight filtration) the two retractions
//!   therefore agree; the correction only engages at depth three and more.
//!
//! Different retractions induce different definable structures downstream,
//! so everything behind this module selects one through [`Retraction`].

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::matrix::Matrix;
use crate::mhs::{deligne_bigrading, induced_hodge_in_basis, MixedHodgeStructure};
use crate::scalar::{rat, GaussianRational};
use crate::subspace::Subspace;

use super::{delta_splitting, GradingOperator};

/// Selector for the retraction in use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Retraction {
    Delta,
    Sl2,
}

impl FromStr for Retraction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(Retraction::Delta),
            "sl2" => Ok(Retraction::Sl2),
            other => Err(Error::Parse(format!("unknown retraction `{other}`"))),
        }
    }
}

impl Retraction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Retraction::Delta => "delta",
            Retraction::Sl2 => "sl2",
        }
    }

    pub fn retract(&self, v: &MixedHodgeStructure) -> Result<RealSplitPoint> {
        match self {
            Retraction::Delta => delta_retract(v),
            Retraction::Sl2 => sl2_retract(v),
        }
    }

    pub fn split_structure(&self, v: &MixedHodgeStructure) -> Result<MixedHodgeStructure> {
        match self {
            Retraction::Delta => Ok(delta_split_structure(v)?.0),
            Retraction::Sl2 => Ok(sl2_split_structure(v)?.0),
        }
    }
}

/// A point of the real-split locus in product coordinates: the pure
/// polarized structures on the graded pieces (in graded basis coordinates)
/// and the splitting of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSplitPoint {
    pub graded: Vec<(i64, DecreasingFiltration)>,
    pub grading: GradingOperator,
}

/// `(V, W, e^{-i delta} F)` together with `delta`.
pub fn delta_split_structure(v: &MixedHodgeStructure) -> Result<(MixedHodgeStructure, Matrix)> {
    let delta = delta_splitting(v)?;
    let twist = delta.scale(&-GaussianRational::i()).exp_nilpotent()?;
    Ok((v.twist_hodge(&twist)?, delta))
}

/// The sl2-style split structure `(V, W, e^{zeta} e^{-i delta} F)` with the
/// correction `zeta`; also returns `delta` and `zeta`.
pub fn sl2_split_structure(
    v: &MixedHodgeStructure,
) -> Result<(MixedHodgeStructure, Matrix, Matrix)> {
    let (split, delta) = delta_split_structure(v)?;
    let zeta = sl2_zeta(&split, &delta)?;
    let twist = zeta.exp_nilpotent()?;
    let corrected = split.twist_hodge(&twist)?;
    if !corrected.is_split_over_r()? {
        return Err(Error::Internal(
            "sl2 correction left the split locus".into(),
        ));
    }
    Ok((corrected, delta, zeta))
}

/// The correction operator: `zeta = Σ_{(p,q) != (-1,-1)} (i(q-p)/2) delta^{p,q}`
/// where `delta^{p,q}` are the Hodge components of `delta` in the bigrading
/// of the already-split structure.  Real by construction (the coefficients
/// are conjugate-symmetric), zero whenever `delta` is pure `(-1,-1)`.
pub fn sl2_zeta(split: &MixedHodgeStructure, delta: &Matrix) -> Result<Matrix> {
    let b = deligne_bigrading(split)?;
    let projectors = b.projectors()?;
    let n = split.rank();
    let mut zeta = Matrix::zero(n, n);
    let support = b.support();
    for &(r, s) in &support {
        for &(r2, s2) in &support {
            let (p, q) = (r2 - r, s2 - s);
            if p > -1 || q > -1 || (p, q) == (-1, -1) {
                continue;
            }
            // component of delta mapping I^{r,s} into I^{r+p, s+q}
            let comp = projectors[&(r2, s2)]
                .mul_mat(delta)?
                .mul_mat(&projectors[&(r, s)])?;
            if comp.is_zero() {
                continue;
            }
            let coeff = GaussianRational::new(rat(0, 1), rat(q - p, 2));
            zeta = zeta.add_mat(&comp.scale(&coeff))?;
        }
    }
    if !zeta.is_real() {
        return Err(Error::Internal("zeta must be real".into()));
    }
    Ok(zeta)
}

fn split_point(v: &MixedHodgeStructure, split: &MixedHodgeStructure) -> Result<RealSplitPoint> {
    // The graded part is untouched by weight-lowering twists, so read the
    // pure structures off the input itself.
    let mut graded = Vec::new();
    for k in v.weight_levels() {
        graded.push((k, induced_hodge_in_basis(v, k)?));
    }
    let b = deligne_bigrading(split)?;
    let grading = GradingOperator::from_bigrading(&b)?;
    if !grading.is_real() {
        return Err(Error::Internal(
            "split structure must have a real grading".into(),
        ));
    }
    Ok(RealSplitPoint { graded, grading })
}

/// Retract via the delta-splitting.  Restricts to the identity on the
/// real-split locus.
pub fn delta_retract(v: &MixedHodgeStructure) -> Result<RealSplitPoint> {
    let (split, _) = delta_split_structure(v)?;
    split_point(v, &split)
}

/// Retract via the sl2-splitting; same contract, different chart downstream.
pub fn sl2_retract(v: &MixedHodgeStructure) -> Result<RealSplitPoint> {
    let (split, _, _) = sl2_split_structure(v)?;
    split_point(v, &split)
}

/// Rebuild the mixed Hodge structure a [`RealSplitPoint`] denotes: pull
/// each graded filtration back through the grading's eigenspaces and sum.
pub fn assemble_real_split(
    point: &RealSplitPoint,
    weight: &IncreasingFiltration,
) -> Result<MixedHodgeStructure> {
    let n = weight.ambient_dim();
    if !point.grading.splits(weight) {
        return Err(Error::DifferentWeightFiltrations);
    }
    // For each level the eigenspace maps isomorphically onto Gr_k; the
    // comparison matrix sends eigenspace coordinates to graded-basis
    // coordinates: row i holds the graded coordinates of eigen basis row i,
    // with no canonicalization in between (the row correspondence is the
    // point).  A graded row g pulls back to (g iso^{-1}) eigen_basis.
    let lift_data = |k: i64| -> Result<(Subspace, Matrix)> {
        let eigen = point.grading.eigenspace(k);
        let below = weight.at(k - 1);
        let gr = weight.at(k).quotient_image(&below)?;
        if eigen.dim() != gr.dim() {
            return Err(Error::Internal("eigenspace does not match Gr".into()));
        }
        let q = crate::subspace::quotient_map(&below);
        let mut rows = Vec::with_capacity(eigen.dim());
        for i in 0..eigen.dim() {
            let image = q.mul_vec(eigen.basis().row(i))?;
            // Coordinates against the echelon basis of Gr sit at its pivots.
            let coords: Vec<GaussianRational> =
                gr.pivots().iter().map(|&col| image[col].clone()).collect();
            rows.push(coords);
        }
        let iso_inv = Matrix::from_rows(rows)?
            .inverse()
            .ok_or_else(|| Error::Internal("eigenspace does not surject onto Gr".into()))?;
        Ok((eigen, iso_inv))
    };

    // F^p = direct sum over k of the pullback of F^p Gr_k, assembled at
    // every index in the hull.
    let p_min = point
        .graded
        .iter()
        .flat_map(|(_, f)| f.jumps().iter().map(|(p, _)| *p))
        .min()
        .unwrap_or(0);
    let p_max = point
        .graded
        .iter()
        .flat_map(|(_, f)| f.jumps().iter().map(|(p, _)| *p))
        .max()
        .unwrap_or(0);
    let mut steps = Vec::new();
    for p in p_min - 1..=p_max {
        let mut acc = Subspace::zero(n);
        for (k, filt) in &point.graded {
            let at_p = filt.at(p);
            if at_p.is_zero() {
                continue;
            }
            let (eigen, iso_inv) = lift_data(*k)?;
            let in_v = at_p.basis().mul_mat(&iso_inv)?.mul_mat(eigen.basis())?;
            acc = acc.sum(&Subspace::from_matrix(n, &in_v))?;
        }
        steps.push((p, acc));
    }
    let hodge = DecreasingFiltration::new(n, steps)?;
    MixedHodgeStructure::new(n, weight.clone(), hodge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::parse_gaussian;

    #[test]
    fn retraction_of_kummer_has_re_z_eigenline() {
        let z = parse_gaussian("3/4+5*i").unwrap();
        let v = fixtures::kummer(&z);
        let point = delta_retract(&v).unwrap();
        let expected = Subspace::span(
            2,
            &[vec![
                GaussianRational::one(),
                parse_gaussian("3/4").unwrap(),
            ]],
        )
        .unwrap();
        assert_eq!(point.grading.eigenspace(0), expected);
        assert_eq!(point.grading.eigenspace(-2).dim(), 1);
    }

    #[test]
    fn retractions_fix_split_inputs() {
        let v = fixtures::kummer(&parse_gaussian("2/5").unwrap());
        for r in [Retraction::Delta, Retraction::Sl2] {
            let split = r.split_structure(&v).unwrap();
            assert_eq!(&split, &v, "{r:?} must fix split inputs");
        }
    }

    #[test]
    fn retractions_agree_on_depth_two() {
        for z in ["2+3*i", "-1/2+1/3*i"] {
            let v = fixtures::kummer(&parse_gaussian(z).unwrap());
            assert_eq!(delta_retract(&v).unwrap(), sl2_retract(&v).unwrap());
        }
    }

    #[test]
    fn assemble_round_trips_real_split_points() {
        for z in ["0", "2/7", "-3"] {
            let v = fixtures::kummer(&parse_gaussian(z).unwrap());
            let point = delta_retract(&v).unwrap();
            let back = assemble_real_split(&point, v.weight()).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn assemble_handles_multidimensional_graded_pieces() {
        // Rank 3: a two-dimensional weight-1 piece carrying a genuine flag
        // (the elliptic structure) over a weight-0 line, mixed by a real
        // unipotent twist so the grading is not the base one.  The graded
        // comparison must respect the row correspondence, which echelon
        // canonicalization would destroy.
        use crate::filtration::IncreasingFiltration;
        use crate::mhs::MixedHodgeStructure;
        let g = |n: i64| GaussianRational::from_int(n);
        let p = |s: &str| parse_gaussian(s).unwrap();
        let w0 = Subspace::span(3, &[vec![g(0), g(0), g(1)]]).unwrap();
        let weight =
            IncreasingFiltration::new(3, vec![(0, w0), (1, Subspace::full(3))]).unwrap();
        // F^1 = <e0 + i e1>, F^0 = F^1 + <e2>, twisted by exp(E) with
        // E: e0 -> e2 (real, weight-lowering).
        let mut e = Matrix::zero(3, 3);
        e.set(2, 0, g(1));
        let u = e.exp_nilpotent().unwrap();
        let f1 = Subspace::span(3, &[vec![p("1"), p("i"), p("0")]]).unwrap();
        let hodge =
            crate::filtration::DecreasingFiltration::new(3, vec![(1, f1)]).unwrap();
        let v = MixedHodgeStructure::new(3, weight.clone(), hodge)
            .unwrap()
            .twist_hodge(&u)
            .unwrap();
        assert!(v.is_split_over_r().unwrap());
        let point = delta_retract(&v).unwrap();
        // The weight-1 graded filtration is a genuine two-step flag.
        let top = point.graded.iter().find(|(k, _)| *k == 1).unwrap();
        assert_eq!(top.1.at(0).dim(), 2);
        assert_eq!(top.1.at(1).dim(), 1);
        let back = assemble_real_split(&point, v.weight()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn retraction_then_assemble_is_the_split_structure() {
        let z = parse_gaussian("1+4*i").unwrap();
        let v = fixtures::kummer(&z);
        let point = delta_retract(&v).unwrap();
        let back = assemble_real_split(&point, v.weight()).unwrap();
        let (split, _) = delta_split_structure(&v).unwrap();
        assert_eq!(back, split);
    }
}
