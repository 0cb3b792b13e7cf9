//! Morphisms of mixed Hodge structures and strictness.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

use super::MixedHodgeStructure;

/// A rational linear map between the underlying spaces, acting on column
/// vectors: `matrix` is `rank(target) x rank(source)`.
#[derive(Clone, Debug)]
pub struct MhsMorphism {
    pub source: MixedHodgeStructure,
    pub target: MixedHodgeStructure,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub preserves_weight: bool,
    pub preserves_hodge: bool,
    /// Weight indices where `f(W_k) ⊄ W'_k`.
    pub weight_failures: Vec<i64>,
    /// Hodge indices where `f(F^p) ⊄ F'^p`.
    pub hodge_failures: Vec<i64>,
}

impl MorphismReport {
    pub fn is_morphism(&self) -> bool {
        self.preserves_weight && self.preserves_hodge
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictnessReport {
    pub weight_strict: bool,
    pub hodge_strict: bool,
}

impl StrictnessReport {
    pub fn is_strict(&self) -> bool {
        self.weight_strict && self.hodge_strict
    }
}

impl MhsMorphism {
    pub fn new(
        source: MixedHodgeStructure,
        target: MixedHodgeStructure,
        matrix: Matrix,
    ) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix must be {}x{}",
                target.rank(),
                source.rank()
            )));
        }
        if !matrix.is_real() {
            return Err(Error::Structural("morphism matrices are rational".into()));
        }
        Ok(MhsMorphism {
            source,
            target,
            matrix,
        })
    }

    /// Filtration preservation: `f(W_k) ⊆ W'_k` and `f(F^p) ⊆ F'^p`.
    pub fn check(&self) -> Result<MorphismReport> {
        let mut weight_failures = Vec::new();
        for (k, s) in self.source.weight().jumps() {
            let image = s.map(&self.matrix)?;
            if !self.target.weight().at(*k).contains(&image) {
                weight_failures.push(*k);
            }
        }
        let mut hodge_failures = Vec::new();
        for (p, _) in self.source.hodge().jumps() {
            // The largest space with a given value sits just below the jump.
            let p = p - 1;
            let image = self.source.hodge().at(p).map(&self.matrix)?;
            if !self.target.hodge().at(p).contains(&image) {
                hodge_failures.push(p);
            }
        }
        Ok(MorphismReport {
            preserves_weight: weight_failures.is_empty(),
            preserves_hodge: hodge_failures.is_empty(),
            weight_failures,
            hodge_failures,
        })
    }

    /// Strictness: `f(V) ∩ W'_k = f(W_k)` and `f(V_C) ∩ F'^p = f(F^p)`.
    pub fn strictness(&self) -> Result<StrictnessReport> {
        let full_image = Subspace::full(self.source.rank()).map(&self.matrix)?;
        let mut weight_strict = true;
        for (k, s) in self.source.weight().jumps() {
            let lhs = full_image.intersect(&self.target.weight().at(*k))?;
            let rhs = s.map(&self.matrix)?;
            if lhs != rhs {
                weight_strict = false;
            }
        }
        let mut hodge_strict = true;
        for (p, _) in self.target.hodge().jumps() {
            let lhs = full_image.intersect(&self.target.hodge().at(*p))?;
            let rhs = self.source.hodge().at(*p).map(&self.matrix)?;
            if lhs != rhs {
                hodge_strict = false;
            }
        }
        Ok(StrictnessReport {
            weight_strict,
            hodge_strict,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{parse_gaussian, GaussianRational};

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_strict_morphism() {
        let k = fixtures::kummer(&GaussianRational::i());
        let f = MhsMorphism::new(k.clone(), k, Matrix::identity(2)).unwrap();
        assert!(f.check().unwrap().is_morphism());
        assert!(f.strictness().unwrap().is_strict());
    }

    #[test]
    fn swap_is_not_a_morphism_on_kummer() {
        // e0 -> e1, e1 -> 0 preserves W but moves F^0 out of itself.
        let z = parse_gaussian("2+3*i").unwrap();
        let k = fixtures::kummer(&z);
        let f = MhsMorphism::new(k.clone(), k, mat(&[&[0, 0], &[1, 0]])).unwrap();
        let report = f.check().unwrap();
        assert!(report.preserves_weight);
        assert!(!report.preserves_hodge);
    }

    #[test]
    fn projection_to_tate_is_a_morphism() {
        // Quotient by W_{-2}: (a, b) -> a lands in Q(0).
        let z = parse_gaussian("1/2+1/3*i").unwrap();
        let k = fixtures::kummer(&z);
        let q0 = fixtures::tate(0);
        let f = MhsMorphism::new(k, q0, mat(&[&[1, 0]])).unwrap();
        assert!(f.check().unwrap().is_morphism());
        assert!(f.strictness().unwrap().is_strict());
    }
}
