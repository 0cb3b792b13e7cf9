//! Mixed Hodge structures: the data type, axiom validation, and the
//! constructions built directly on it.
//!
//! A mixed Hodge structure here is a triple: an integral lattice `Z^rank`
//! in the standard basis, an increasing weight filtration defined over `Q`
//! (conjugation-stable subspaces), and a decreasing Hodge filtration over
//! `Q(i)`.  Validation checks that the filtration induced on every weight
//! graded piece is a pure Hodge structure of that weight; the equivalent
//! triple-graded vanishing criterion is available behind the `thorough`
//! flag and the equivalence of the two is itself under test.

mod bigrading;
mod hodge_classes;
mod morphism;
mod polarization;
mod tensor;

pub use bigrading::{deligne_bigrading, Bigrading};
pub use hodge_classes::hodge_classes;
pub use morphism::{MhsMorphism, MorphismReport, StrictnessReport};
pub use polarization::{
    check_graded_polarization, induced_hodge_in_basis, weil_operator, GradedPolarization,
    PolarizationLevelReport, PolarizationReport,
};
pub use tensor::{dual, hom, hom_element_matrix, tensor};

use crate::error::{Error, Result};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

#[derive(Clone, PartialEq, Eq)]
pub struct MixedHodgeStructure {
    rank: usize,
    weight: IncreasingFiltration,
    hodge: DecreasingFiltration,
}

/// Outcome of the mixed Hodge axiom check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    /// `(weight level l, Hodge index p)` pairs where opposedness fails.
    pub failures: Vec<(i64, i64)>,
}

impl MixedHodgeStructure {
    /// Validates on construction; a stored value always satisfies the axioms.
    pub fn new(
        rank: usize,
        weight: IncreasingFiltration,
        hodge: DecreasingFiltration,
    ) -> Result<Self> {
        let report = validate_mhs(rank, &weight, &hodge, false)?;
        if !report.valid {
            return Err(Error::NotMixedHodge(format!(
                "graded opposedness fails at (weight, p) pairs {:?}",
                report.failures
            )));
        }
        Ok(MixedHodgeStructure {
            rank,
            weight,
            hodge,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weight(&self) -> &IncreasingFiltration {
        &self.weight
    }

    pub fn hodge(&self) -> &DecreasingFiltration {
        &self.hodge
    }

    /// Weight levels where the graded piece is nonzero.
    pub fn weight_levels(&self) -> Vec<i64> {
        self.weight
            .jumps()
            .iter()
            .map(|(k, _)| *k)
            .filter(|&k| self.graded_dim(k) > 0)
            .collect()
    }

    pub fn graded_dim(&self, k: i64) -> usize {
        self.weight.at(k).dim() - self.weight.at(k - 1).dim()
    }

    /// `Gr_k^W` as a subspace of the quotient coordinates mod `W_{k-1}`.
    pub fn graded_piece(&self, k: i64) -> Result<Subspace> {
        self.weight.at(k).quotient_image(&self.weight.at(k - 1))
    }

    /// Filtration induced by `F` on `Gr_k^W`, in the same quotient coordinates:
    /// `F^p Gr_k = image of (F^p ∩ W_k) mod W_{k-1}`.
    pub fn induced_hodge_on_graded(&self, k: i64) -> Result<DecreasingFiltration> {
        let wk = self.weight.at(k);
        let wk1 = self.weight.at(k - 1);
        let ambient = self.rank - wk1.dim();
        let mut steps = Vec::new();
        for (p, _) in self.hodge.jumps() {
            let fp = self.hodge.at(*p).intersect(&wk)?;
            steps.push((*p, fp.quotient_image(&wk1)?));
        }
        DecreasingFiltration::new(ambient, steps)
    }

    /// The mixed Hodge structure is a direct sum of pures: the Deligne
    /// bigrading is conjugation-symmetric on the nose.
    pub fn is_split_over_r(&self) -> Result<bool> {
        let b = deligne_bigrading(self)?;
        Ok(b.is_real_split())
    }

    /// Is the structure pure (a single nonzero weight)?  Returns the weight.
    pub fn pure_weight(&self) -> Option<i64> {
        let levels = self.weight_levels();
        if levels.len() == 1 {
            Some(levels[0])
        } else {
            None
        }
    }

    /// Twist the Hodge filtration by an invertible matrix, revalidating.
    pub fn twist_hodge(&self, g: &Matrix) -> Result<MixedHodgeStructure> {
        MixedHodgeStructure::new(self.rank, self.weight.clone(), self.hodge.map(g)?)
    }
}

impl std::fmt::Debug for MixedHodgeStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MixedHodgeStructure(rank {}, {:?}, {:?})",
            self.rank, self.weight, self.hodge
        )
    }
}

/// Check the mixed Hodge axioms for a candidate triple.
///
/// Malformed data (wrong ambient dimensions, a non-real weight filtration)
/// is a structural error; a well-formed triple that is not an MHS yields
/// `valid: false` with the offending `(l, p)` pairs.
///
/// The default check is graded pairwise opposedness: on every `Gr_l^W` and
/// for every `p`, `F^p Gr_l` and `conj(F^(l+1-p) Gr_l)` are complementary.
/// With `thorough` the triple-graded vanishing
/// `Gr_F^p Gr_Fbar^q Gr_l^W = 0` for `p + q != l` is checked instead.
pub fn validate_mhs(
    rank: usize,
    weight: &IncreasingFiltration,
    hodge: &DecreasingFiltration,
    thorough: bool,
) -> Result<ValidationReport> {
    if weight.ambient_dim() != rank {
        return Err(Error::Structural(format!(
            "weight filtration ambient {} does not match rank {rank}",
            weight.ambient_dim()
        )));
    }
    if hodge.ambient_dim() != rank {
        return Err(Error::Structural(format!(
            "hodge filtration ambient {} does not match rank {rank}",
            hodge.ambient_dim()
        )));
    }
    if !weight.is_real() {
        return Err(Error::Structural(
            "weight filtration subspaces must be conjugation stable (real bases)".into(),
        ));
    }
    let mut failures = Vec::new();
    for (l, _) in weight.jumps() {
        let l = *l;
        let wl = weight.at(l);
        let wl1 = weight.at(l - 1);
        let gr = wl.quotient_image(&wl1)?;
        if gr.is_zero() {
            continue;
        }
        let fgr = |p: i64| -> Result<Subspace> { hodge.at(p).intersect(&wl)?.quotient_image(&wl1) };
        if thorough {
            failures.extend(triple_graded_failures(&gr, &fgr, hodge, l)?);
        } else {
            // Range of p to inspect: all Hodge jump indices plus sentinels.
            let lo = hodge.min_jump() - 1;
            let hi = hodge.max_jump();
            for p in lo..=hi {
                let a = fgr(p)?;
                let b = fgr(l + 1 - p)?.conjugate();
                let meets = !a.intersect(&b)?.is_zero();
                let spans = a.sum(&b)?.dim() == gr.dim();
                if meets || !spans {
                    failures.push((l, p));
                }
            }
        }
    }
    Ok(ValidationReport {
        valid: failures.is_empty(),
        failures,
    })
}

/// Dimension of the triple graded piece
/// `(F^p ∩ Fbar^q) / (F^(p+1) ∩ Fbar^q + F^p ∩ Fbar^(q+1))` inside `Gr_l`,
/// recorded as a failure when nonzero off the diagonal `p + q = l`.
fn triple_graded_failures(
    _gr: &Subspace,
    fgr: &dyn Fn(i64) -> Result<Subspace>,
    hodge: &DecreasingFiltration,
    l: i64,
) -> Result<Vec<(i64, i64)>> {
    let lo = hodge.min_jump() - 1;
    let hi = hodge.max_jump();
    let mut failures = Vec::new();
    for p in lo..=hi {
        for q in lo..=hi {
            if p + q == l {
                continue;
            }
            let a = fgr(p)?;
            let bq = fgr(q)?.conjugate();
            let top = a.intersect(&bq)?;
            let a1 = fgr(p + 1)?.intersect(&bq)?;
            let b1 = a.intersect(&fgr(q + 1)?.conjugate())?;
            let bottom = a1.sum(&b1)?;
            if top.dim() > bottom.dim() {
                failures.push((l, p));
            }
        }
    }
    failures.dedup();
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{parse_gaussian, GaussianRational};

    #[test]
    fn kummer_is_valid_for_every_gaussian_rational() {
        for z in ["0", "1/2", "i", "2+3*i", "-7/3+1/5*i"] {
            let z = parse_gaussian(z).unwrap();
            let v = fixtures::kummer(&z);
            assert_eq!(v.rank(), 2);
            assert_eq!(v.weight_levels(), vec![-2, 0]);
        }
    }

    #[test]
    fn pure_elliptic_is_valid() {
        let tau = GaussianRational::i();
        let v = fixtures::elliptic(&tau).unwrap();
        assert_eq!(v.pure_weight(), Some(1));
    }

    #[test]
    fn real_line_is_not_a_weight_one_hodge_filtration() {
        // F^1 = <e0 + e1> equals its own conjugate, so F^1 and conj(F^1)
        // cannot be complementary in weight 1.
        let err = fixtures::elliptic(&GaussianRational::one());
        assert!(err.is_err());
        let report = fixtures::elliptic_report(&GaussianRational::one()).unwrap();
        assert!(!report.valid);
        assert!(report.failures.contains(&(1, 1)));
    }

    #[test]
    fn thorough_check_agrees_with_graded_check() {
        for z in ["0", "i", "1/2+1/3*i"] {
            let z = parse_gaussian(z).unwrap();
            let v = fixtures::kummer(&z);
            let quick = validate_mhs(v.rank(), v.weight(), v.hodge(), false).unwrap();
            let thorough = validate_mhs(v.rank(), v.weight(), v.hodge(), true).unwrap();
            assert_eq!(quick.valid, thorough.valid);
        }
        // And on an invalid candidate.
        let (rank, w, f) = fixtures::elliptic_raw(&GaussianRational::one());
        let quick = validate_mhs(rank, &w, &f, false).unwrap();
        let thorough = validate_mhs(rank, &w, &f, true).unwrap();
        assert!(!quick.valid);
        assert!(!thorough.valid);
    }

    #[test]
    fn non_real_weight_is_structural_not_invalid() {
        use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
        use crate::subspace::Subspace;
        let i_line =
            Subspace::span(2, &[vec![GaussianRational::one(), GaussianRational::i()]]).unwrap();
        let w = IncreasingFiltration::new(2, vec![(-2, i_line), (0, Subspace::full(2))]).unwrap();
        let f = DecreasingFiltration::new(2, vec![(0, Subspace::full(2))]).unwrap();
        let err = validate_mhs(2, &w, &f, false);
        assert!(matches!(err, Err(Error::Structural(_))));
    }
}
