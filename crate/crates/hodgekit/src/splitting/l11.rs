//! The nilpotent algebra `L^{-1,-1}` of a mixed Hodge structure:
//! endomorphisms strictly lowering both indices of the Deligne bigrading,
//! `X(I^{p,q}) ⊆ ⊕_{r<p, s<q} I^{r,s}`.

use crate::error::Result;
use crate::matrix::Matrix;
use crate::mhs::{deligne_bigrading, Bigrading, MixedHodgeStructure};
use crate::subspace::{map_constraint_space, real_map_constraint_space, unflatten_map, Subspace};

fn constraints(b: &Bigrading) -> Result<Vec<(Subspace, Subspace)>> {
    let mut out = Vec::new();
    for (&(p, q), s) in b.pieces() {
        let lower = b.partial_sum(|r, t| r < p && t < q)?;
        out.push((s.clone(), lower));
    }
    Ok(out)
}

/// Basis of `L^{-1,-1}` over `Q(i)` as matrices.
pub fn l11_complex_basis(v: &MixedHodgeStructure) -> Result<Vec<Matrix>> {
    let b = deligne_bigrading(v)?;
    let n = v.rank();
    let space = map_constraint_space(n, n, &constraints(&b)?)?;
    Ok((0..space.dim())
        .map(|r| unflatten_map(n, n, space.basis().row(r)))
        .collect())
}

/// Basis of the real form `(L^{-1,-1})_R` (rational matrices).
pub fn l11_real_basis(v: &MixedHodgeStructure) -> Result<Vec<Matrix>> {
    let b = deligne_bigrading(v)?;
    let n = v.rank();
    let space = real_map_constraint_space(n, n, &constraints(&b)?)?;
    Ok((0..space.dim())
        .map(|r| unflatten_map(n, n, space.basis().row(r)))
        .collect())
}

/// Membership test: does `x` lower both bigrading indices strictly?
pub fn l11_contains(b: &Bigrading, x: &Matrix) -> Result<bool> {
    for (&(p, q), s) in b.pieces() {
        let lower = b.partial_sum(|r, t| r < p && t < q)?;
        if !lower.contains(&s.map(x)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{parse_gaussian, GaussianRational};

    #[test]
    fn kummer_l11_is_one_dimensional() {
        let z = parse_gaussian("2+3*i").unwrap();
        let v = fixtures::kummer(&z);
        let basis = l11_complex_basis(&v).unwrap();
        assert_eq!(basis.len(), 1);
        let real = l11_real_basis(&v).unwrap();
        assert_eq!(real.len(), 1);
        assert!(real[0].is_real());
        // The generator maps the I^{0,0} line into <e1>.
        let b = crate::mhs::deligne_bigrading(&v).unwrap();
        assert!(l11_contains(&b, &real[0]).unwrap());
        let image = b.piece(0, 0).map(&real[0]).unwrap();
        assert!(b.piece(-1, -1).contains(&image));
    }

    #[test]
    fn pure_l11_is_zero() {
        let v = fixtures::elliptic(&GaussianRational::i()).unwrap();
        assert!(l11_complex_basis(&v).unwrap().is_empty());
    }

    #[test]
    fn two_pures_give_a_hom_sized_space() {
        // Q(0) ⊕ Q(1): L^{-1,-1} = Hom(Gr_0, Gr_{-2}), one dimensional.
        use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
        use crate::subspace::Subspace;
        let g = |n: i64| GaussianRational::from_int(n);
        let w = IncreasingFiltration::new(
            2,
            vec![
                (-2, Subspace::span(2, &[vec![g(0), g(1)]]).unwrap()),
                (0, Subspace::full(2)),
            ],
        )
        .unwrap();
        let f = DecreasingFiltration::new(
            2,
            vec![
                (-1, Subspace::full(2)),
                (0, Subspace::span(2, &[vec![g(1), g(0)]]).unwrap()),
            ],
        )
        .unwrap();
        let v = crate::mhs::MixedHodgeStructure::new(2, w, f).unwrap();
        assert_eq!(l11_complex_basis(&v).unwrap().len(), 1);
    }

    #[test]
    fn l11_is_closed_under_bracket() {
        let corpus = fixtures::random_corpus(42, 10, 5);
        for (_, v) in &corpus {
            let b = crate::mhs::deligne_bigrading(v).unwrap();
            let basis = l11_complex_basis(v).unwrap();
            for x in &basis {
                for y in &basis {
                    let bracket = x.commutator(y).unwrap();
                    assert!(l11_contains(&b, &bracket).unwrap());
                }
            }
        }
    }
}
