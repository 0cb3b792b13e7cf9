//! One-variable local models over the punctured disk and admissibility.
//!
//! A [`LocalModel1D`] stores the untwisted period map `Psi` directly, with
//! polynomial entries, so the extension over the puncture exists by fiat
//! and the pre-admissibility conditions become finite checks:
//!
//! 1. the monodromy logarithm admits a weight filtration relative to `W`
//!    (checked through [`relative_weight_filtration`]; the connection
//!    residue differs from `N` by a nonzero scalar and the condition is
//!    scale invariant, so `N` itself is checked);
//! 2. the graded Hodge ranks, computed symbolically in `q`, do not drop at
//!    `q = 0`.
//!
//! Exactness boundary: exact evaluation takes `(q, winding, branch)` with a
//! caller-supplied branch value instead of computing logarithms; the
//! floating-point probe in [`probe`] owns all transcendental evaluation.

pub mod poly;
pub mod probe;

pub use probe::{strip_splitting_probe, StripProbeReport, VerticalStrip};

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::matrix::Matrix;
use crate::mhs::GradedPolarization;
use crate::monodromy::{relative_weight_filtration, NilpotentOperator};
use crate::scalar::GaussianRational;
use crate::subspace::Subspace;

use poly::{generic_rank, Poly};

/// Local data of a one-variable degeneration: weight filtration, graded
/// polarizations, monodromy logarithm with integral `e^N`, and the
/// untwisted period map `Psi` with polynomial entries (`p -> rows`).
#[derive(Clone, Debug)]
pub struct LocalModel1D {
    rank: usize,
    weight: IncreasingFiltration,
    polarizations: GradedPolarization,
    monodromy: NilpotentOperator,
    psi: BTreeMap<i64, Vec<Vec<Poly>>>,
}

impl LocalModel1D {
    pub fn new(
        rank: usize,
        weight: IncreasingFiltration,
        polarizations: GradedPolarization,
        monodromy: NilpotentOperator,
        psi: BTreeMap<i64, Vec<Vec<Poly>>>,
    ) -> Result<Self> {
        if weight.ambient_dim() != rank || monodromy.dim() != rank {
            return Err(Error::DimensionMismatch(
                "local model pieces disagree on rank".into(),
            ));
        }
        if !monodromy.preserves(&weight) {
            return Err(Error::Structural(
                "monodromy must preserve the weight filtration".into(),
            ));
        }
        for rows in psi.values() {
            for row in rows {
                if row.len() != rank {
                    return Err(Error::Structural(
                        "Psi rows must have `rank` entries".into(),
                    ));
                }
            }
        }
        let exp_n = monodromy.matrix().exp_nilpotent()?;
        if !is_integral(&exp_n) {
            return Err(Error::Structural("e^N must have integer entries".into()));
        }
        Ok(LocalModel1D {
            rank,
            weight,
            polarizations,
            monodromy,
            psi,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weight(&self) -> &IncreasingFiltration {
        &self.weight
    }

    pub fn polarizations(&self) -> &GradedPolarization {
        &self.polarizations
    }

    pub fn monodromy(&self) -> &NilpotentOperator {
        &self.monodromy
    }

    pub fn psi(&self) -> &BTreeMap<i64, Vec<Vec<Poly>>> {
        &self.psi
    }

    /// Hull of Hodge indices carried by `Psi`.
    fn psi_index_range(&self) -> (i64, i64) {
        let lo = self.psi.keys().next().copied().unwrap_or(0);
        let hi = self.psi.keys().next_back().copied().unwrap_or(0);
        (lo, hi)
    }

    /// The rows describing `F^p` (value at the largest stored index `<= p`;
    /// a full identity block below all stored indices, empty above).
    pub fn psi_rows_at(&self, p: i64) -> Vec<Vec<Poly>> {
        match self.psi.range(..=p).next_back() {
            Some((_, rows)) => rows.clone(),
            None => (0..self.rank)
                .map(|i| {
                    (0..self.rank)
                        .map(|j| {
                            if i == j {
                                Poly::constant(GaussianRational::one())
                            } else {
                                Poly::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    fn psi_rows_above(&self, p: i64) -> bool {
        self.psi.keys().next_back().map_or(true, |hi| p > *hi)
    }

    /// `Psi(q)` as an exact filtration.
    pub fn psi_at(&self, q: &GaussianRational) -> Result<DecreasingFiltration> {
        let (lo, hi) = self.psi_index_range();
        let mut steps = Vec::new();
        for p in lo..=hi {
            let rows: Vec<Vec<GaussianRational>> = self
                .psi_rows_at(p)
                .iter()
                .map(|row| row.iter().map(|e| e.eval(q)).collect())
                .collect();
            steps.push((p, Subspace::span(self.rank, &rows)?));
        }
        DecreasingFiltration::new(self.rank, steps)
    }

    /// Exact lifted period map: `exp((branch + winding) N) * Psi(q)`.
    ///
    /// The caller supplies the branch value (`log q / 2 pi i` on their
    /// chosen sheet); this routine never evaluates a transcendental.
    pub fn evaluate_exact(
        &self,
        q: &GaussianRational,
        branch: &GaussianRational,
        winding: i64,
    ) -> Result<DecreasingFiltration> {
        if q.is_zero() {
            return Err(Error::Structural(
                "period map is evaluated away from the puncture".into(),
            ));
        }
        let z = branch + &GaussianRational::from_int(winding);
        let twist = self.monodromy.matrix().scale(&z).exp_nilpotent()?;
        self.psi_at(q)?.map(&twist)
    }

    /// Spot check: `(W, exp(z N) Psi(q))` is a valid graded-polarized MHS at
    /// the given exact sample.  Degenerate weight shapes (the admissibility
    /// counterexamples) fail this by design, so it is a separate check, not
    /// a construction invariant.
    pub fn spot_check(&self, q: &GaussianRational, branch: &GaussianRational) -> Result<bool> {
        let f = self.evaluate_exact(q, branch, 0)?;
        let report = crate::mhs::validate_mhs(self.rank, &self.weight, &f, false)?;
        if !report.valid {
            return Ok(false);
        }
        let v = crate::mhs::MixedHodgeStructure::new(self.rank, self.weight.clone(), f)?;
        let pol = crate::mhs::check_graded_polarization(&v, &self.polarizations)?;
        Ok(pol.polarized)
    }
}

fn is_integral(m: &Matrix) -> bool {
    use num_traits::One;
    (0..m.rows()).all(|r| {
        (0..m.cols()).all(|c| {
            let x = m.at(r, c);
            x.is_real() && x.re.denom().is_one()
        })
    })
}

/// Verdict of the one-variable pre-admissibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreadmissibilityVerdict {
    /// The relative weight filtration `M(N, W)` exists.
    pub cond1: bool,
    /// Graded Hodge ranks are constant at the puncture.
    pub cond2: bool,
    /// `(p, k)` pairs where the rank of `F^p Gr_k` drops at `q = 0`.
    pub failures: Vec<(i64, i64)>,
}

impl PreadmissibilityVerdict {
    pub fn preadmissible(&self) -> bool {
        self.cond1 && self.cond2
    }
}

/// Check conditions (1) and (2) for the model.
pub fn check_preadmissible(model: &LocalModel1D) -> Result<PreadmissibilityVerdict> {
    let cond1 = relative_weight_filtration(model.monodromy(), model.weight())?.exists;

    let (lo, hi) = model.psi_index_range();
    let zero = GaussianRational::zero();
    let mut failures = Vec::new();
    for p in lo - 1..=hi {
        if model.psi_rows_above(p) {
            break;
        }
        let rows = model.psi_rows_at(p);
        for (k, _) in model.weight().jumps() {
            let generic = graded_rank_generic(model, &rows, *k)?;
            let special = graded_rank_at(model, &rows, *k, &zero)?;
            if generic != special {
                failures.push((p, *k));
            }
        }
    }
    failures.sort();
    failures.dedup();
    Ok(PreadmissibilityVerdict {
        cond1,
        cond2: failures.is_empty(),
        failures,
    })
}

/// `dim F^p Gr_k = dim(F^p ∩ W_k) - dim(F^p ∩ W_{k-1})` via the stacked
/// rank identity `dim(A ∩ B) = dim A + dim B - rank [A; B]`.
fn graded_rank_generic(model: &LocalModel1D, rows: &[Vec<Poly>], k: i64) -> Result<i64> {
    let dim_f = generic_rank(rows) as i64;
    let with = |w: &Subspace| -> i64 {
        let mut stacked: Vec<Vec<Poly>> = rows.to_vec();
        for r in 0..w.dim() {
            stacked.push(
                w.basis()
                    .row(r)
                    .iter()
                    .map(|c| Poly::constant(c.clone()))
                    .collect(),
            );
        }
        let rank = generic_rank(&stacked) as i64;
        dim_f + w.dim() as i64 - rank
    };
    let wk = model.weight().at(k);
    let wk1 = model.weight().at(k - 1);
    Ok(with(&wk) - with(&wk1))
}

fn graded_rank_at(
    model: &LocalModel1D,
    rows: &[Vec<Poly>],
    k: i64,
    q: &GaussianRational,
) -> Result<i64> {
    let eval: Vec<Vec<GaussianRational>> = rows
        .iter()
        .map(|row| row.iter().map(|e| e.eval(q)).collect())
        .collect();
    let f = Subspace::span(model.rank(), &eval)?;
    let wk = model.weight().at(k);
    let wk1 = model.weight().at(k - 1);
    Ok((f.intersect(&wk)?.dim() - f.intersect(&wk1)?.dim()) as i64)
}

/// Griffiths transversality in orbit form: `N F^p ⊆ F^{p-1}` for all `p`.
pub fn check_orbit_transversality(
    f0: &DecreasingFiltration,
    n: &NilpotentOperator,
) -> Result<bool> {
    let lo = f0.min_jump() - 1;
    let hi = f0.max_jump();
    for p in lo..=hi {
        let image = f0.at(p).map(n.matrix())?;
        if !f0.at(p - 1).contains(&image) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sup of |entries| of a rational matrix, used by tests and reports.
pub fn sup_norm_exact(m: &Matrix) -> crate::scalar::Rational {
    let mut best = crate::scalar::rat(0, 1);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            for part in [&m.at(r, c).re, &m.at(r, c).im] {
                let a = part.abs();
                if a > best {
                    best = a;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::parse_gaussian;

    #[test]
    fn kummer_model_period_map() {
        let m = fixtures::kummer_model();
        let q = parse_gaussian("1/2").unwrap();
        let z = parse_gaussian("3+2*i").unwrap();
        let f = m.evaluate_exact(&q, &z, 0).unwrap();
        // exp(zN) e0 = e0 + z e1.
        let expected = Subspace::span(2, &[vec![GaussianRational::one(), z.clone()]]).unwrap();
        assert_eq!(f.at(0), expected);
        // Winding by one more sheet multiplies by e^N.
        let f1 = m.evaluate_exact(&q, &z, 1).unwrap();
        let en = m.monodromy().matrix().exp_nilpotent().unwrap();
        assert_eq!(f.map(&en).unwrap(), f1);
    }

    #[test]
    fn zero_monodromy_is_single_valued() {
        let m = fixtures::exp_family_model();
        let q = parse_gaussian("2/3").unwrap();
        let z = parse_gaussian("i").unwrap();
        let f0 = m.evaluate_exact(&q, &z, 0).unwrap();
        let f5 = m.evaluate_exact(&q, &z, 5).unwrap();
        assert_eq!(f0, f5);
    }

    #[test]
    fn untwisting_identity() {
        let m = fixtures::kummer_model();
        let q = parse_gaussian("1/3").unwrap();
        let z = parse_gaussian("2+1*i").unwrap();
        for w in [0i64, 1, -2] {
            let f = m.evaluate_exact(&q, &z, w).unwrap();
            let back = f
                .map(
                    &m.monodromy()
                        .matrix()
                        .scale(&-(&z + &GaussianRational::from_int(w)))
                        .exp_nilpotent()
                        .unwrap(),
                )
                .unwrap();
            assert_eq!(back, m.psi_at(&q).unwrap());
        }
    }

    #[test]
    fn tate_orbit_is_preadmissible() {
        let m = fixtures::tate_orbit_model();
        let v = check_preadmissible(&m).unwrap();
        assert!(v.cond1 && v.cond2, "{v:?}");
    }

    #[test]
    fn exp_family_fails_rank_constancy() {
        let m = fixtures::exp_family_model();
        let v = check_preadmissible(&m).unwrap();
        assert!(v.cond1);
        assert!(!v.cond2);
        assert!(v.failures.contains(&(0, 0)), "{v:?}");
    }

    #[test]
    fn weight_counterexample_fails_cond1() {
        let m = fixtures::weight_counterexample_model();
        let v = check_preadmissible(&m).unwrap();
        assert!(!v.cond1);
    }

    #[test]
    fn transversality_checks() {
        let (_, _, _) = fixtures::kummer_raw(&GaussianRational::zero());
        let n = fixtures::kummer_model().monodromy().clone();
        // Kummer orbit: N F^0 = <e1> ⊆ F^{-1} = V.
        let f = fixtures::kummer_model()
            .psi_at(&GaussianRational::one())
            .unwrap();
        assert!(check_orbit_transversality(&f, &n).unwrap());
        // A rank-3 violation: F^1 = <e0>, F^0 = <e0, e1> but N e0 = e2.
        let bad_n = NilpotentOperator::new(
            Matrix::from_rows(vec![
                vec![
                    GaussianRational::zero(),
                    GaussianRational::zero(),
                    GaussianRational::zero(),
                ],
                vec![
                    GaussianRational::zero(),
                    GaussianRational::zero(),
                    GaussianRational::zero(),
                ],
                vec![
                    GaussianRational::one(),
                    GaussianRational::zero(),
                    GaussianRational::zero(),
                ],
            ])
            .unwrap(),
        )
        .unwrap();
        let g = |n: i64| GaussianRational::from_int(n);
        let f = DecreasingFiltration::new(
            3,
            vec![
                (1, Subspace::span(3, &[vec![g(1), g(0), g(0)]]).unwrap()),
                (
                    0,
                    Subspace::span(3, &[vec![g(1), g(0), g(0)], vec![g(0), g(1), g(0)]]).unwrap(),
                ),
            ],
        )
        .unwrap();
        assert!(!check_orbit_transversality(&f, &bad_n).unwrap());
    }

    #[test]
    fn spot_checks_match_model_quality() {
        let good = fixtures::kummer_model();
        let q = parse_gaussian("1/2").unwrap();
        let z = parse_gaussian("2*i").unwrap();
        assert!(good.spot_check(&q, &z).unwrap());
        let bad = fixtures::weight_counterexample_model();
        assert!(!bad.spot_check(&q, &z).unwrap());
    }

    #[test]
    fn elliptic_orbit_is_transverse() {
        // N F^1 = <e1> lands in F^0 = V for the Tate orbit shape.
        let m = fixtures::tate_orbit_model();
        let f = m.psi_at(&GaussianRational::one()).unwrap();
        assert!(check_orbit_transversality(&f, m.monodromy()).unwrap());
    }

    #[test]
    fn cond2_stable_under_unit_reparametrization() {
        // q -> u q for a unit u: verdicts agree on the exp family model.
        let m = fixtures::exp_family_model();
        let u = parse_gaussian("3").unwrap();
        let reparam = fixtures::exp_family_model_scaled(&u);
        let a = check_preadmissible(&m).unwrap();
        let b = check_preadmissible(&reparam).unwrap();
        assert_eq!((a.cond1, a.cond2), (b.cond1, b.cond2));
    }
}
