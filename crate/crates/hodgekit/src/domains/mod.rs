//! Mixed period domain membership and product coordinates on the
//! real-split locus.

mod fundamental;
mod reduce;

pub use fundamental::{
    identify_in_quotient, refine_for_finite_index, same_definable_structure,
    verify_fundamental_set, CoverageStatus, FundamentalSetDescriptor, FundamentalSetReport,
    GroupAction, GroupElement, StripData,
};
pub use reduce::{reduce_sl2, reduce_unipotent};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::mhs::{
    check_graded_polarization, validate_mhs, GradedPolarization, MixedHodgeStructure,
};
use crate::scalar::GaussianRational;
use crate::splitting::{assemble_real_split, delta_retract, GradingOperator, RealSplitPoint};
use crate::subspace::Subspace;

/// Prescribed Hodge numbers `h^{p,q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeNumbers {
    counts: BTreeMap<(i64, i64), usize>,
}

impl HodgeNumbers {
    pub fn new(counts: BTreeMap<(i64, i64), usize>) -> Result<Self> {
        let counts: BTreeMap<(i64, i64), usize> =
            counts.into_iter().filter(|(_, h)| *h > 0).collect();
        for (&(p, q), h) in &counts {
            if counts.get(&(q, p)) != Some(h) {
                return Err(Error::Structural(format!(
                    "Hodge numbers must be symmetric; h^({p},{q}) breaks it"
                )));
            }
        }
        Ok(HodgeNumbers { counts })
    }

    pub fn get(&self, p: i64, q: i64) -> usize {
        self.counts.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (&(i64, i64), &usize)> {
        self.counts.iter()
    }

    /// `dim F^p Gr_k = Σ_{r >= p} h^{r, k-r}`.
    pub fn graded_hodge_dim(&self, k: i64, p: i64) -> usize {
        self.counts
            .iter()
            .filter(|(&(r, s), _)| r + s == k && r >= p)
            .map(|(_, h)| *h)
            .sum()
    }

    pub fn graded_dim(&self, k: i64) -> usize {
        self.counts
            .iter()
            .filter(|(&(r, s), _)| r + s == k)
            .map(|(_, h)| *h)
            .sum()
    }
}

/// The data cutting out a graded-polarized mixed period domain.
#[derive(Clone, Debug)]
pub struct PeriodDomainSpec {
    rank: usize,
    weight: IncreasingFiltration,
    hodge_numbers: HodgeNumbers,
    polarizations: GradedPolarization,
}

impl PeriodDomainSpec {
    pub fn new(
        rank: usize,
        weight: IncreasingFiltration,
        hodge_numbers: HodgeNumbers,
        polarizations: GradedPolarization,
    ) -> Result<Self> {
        if weight.ambient_dim() != rank {
            return Err(Error::DimensionMismatch(
                "domain spec rank vs weight".into(),
            ));
        }
        if hodge_numbers.total() != rank {
            return Err(Error::Structural(
                "Hodge numbers must sum to the rank".into(),
            ));
        }
        for (k, s) in weight.jumps() {
            let d = s.dim() - weight.at(k - 1).dim();
            if hodge_numbers.graded_dim(*k) != d {
                return Err(Error::Structural(format!(
                    "Hodge numbers give dim {} on Gr_{k}, the filtration gives {d}",
                    hodge_numbers.graded_dim(*k)
                )));
            }
        }
        Ok(PeriodDomainSpec {
            rank,
            weight,
            hodge_numbers,
            polarizations,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weight(&self) -> &IncreasingFiltration {
        &self.weight
    }

    pub fn hodge_numbers(&self) -> &HodgeNumbers {
        &self.hodge_numbers
    }

    pub fn polarizations(&self) -> &GradedPolarization {
        &self.polarizations
    }
}

/// Membership verdicts for a candidate Hodge filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    /// Graded dimension pattern and isotropy: the compact dual.
    pub in_compact_dual: bool,
    /// Additionally a graded-polarized MHS with the prescribed `h^{p,q}`.
    pub in_m: bool,
    /// Additionally split over `R`.
    pub in_m_r: bool,
}

/// Decide membership of `f` in the compact dual, the mixed period domain,
/// and its real-split locus.
pub fn membership(spec: &PeriodDomainSpec, f: &DecreasingFiltration) -> Result<MembershipReport> {
    if f.ambient_dim() != spec.rank {
        return Err(Error::DimensionMismatch(
            "filtration rank vs domain spec".into(),
        ));
    }
    let in_compact_dual = check_compact_dual(spec, f)?;
    let mut in_m = false;
    let mut in_m_r = false;
    if in_compact_dual {
        let report = validate_mhs(spec.rank, &spec.weight, f, false)?;
        if report.valid {
            let v = MixedHodgeStructure::new(spec.rank, spec.weight.clone(), f.clone())?;
            let polarized = check_graded_polarization(&v, &spec.polarizations)?.polarized;
            let numbers_match = check_hodge_numbers(spec, &v)?;
            in_m = polarized && numbers_match;
            in_m_r = in_m && v.is_split_over_r()?;
        }
    }
    Ok(MembershipReport {
        in_compact_dual,
        in_m,
        in_m_r,
    })
}

fn check_compact_dual(spec: &PeriodDomainSpec, f: &DecreasingFiltration) -> Result<bool> {
    for (k, _) in spec.weight.jumps() {
        let k = *k;
        let wk = spec.weight.at(k);
        let wk1 = spec.weight.at(k - 1);
        let gr = wk.quotient_image(&wk1)?;
        let fgr = |p: i64| -> Result<Subspace> { f.at(p).intersect(&wk)?.quotient_image(&wk1) };
        let lo = f.min_jump() - 1;
        let hi = f.max_jump();
        for p in lo..=hi {
            // Dimension pattern of the induced filtration.
            if fgr(p)?.dim() != spec.hodge_numbers.graded_hodge_dim(k, p) {
                return Ok(false);
            }
        }
        // q_k-isotropy: q_k(F^p Gr_k, F^(k+1-p) Gr_k) = 0.
        let form_dim = gr.dim();
        if form_dim > 0 {
            for p in lo..=hi {
                let a = crate::filtration::express_in_basis(&fgr(p)?.intersect(&gr)?, &gr)?;
                let b = crate::filtration::express_in_basis(&fgr(k + 1 - p)?.intersect(&gr)?, &gr)?;
                for i in 0..a.dim() {
                    for j in 0..b.dim() {
                        let val = spec
                            .polarizations
                            .eval(k, a.basis().row(i), b.basis().row(j))?;
                        if !val.is_zero() {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

fn check_hodge_numbers(spec: &PeriodDomainSpec, v: &MixedHodgeStructure) -> Result<bool> {
    for (&(p, q), &h) in spec.hodge_numbers.support() {
        let k = p + q;
        let wk = v.weight().at(k);
        let wk1 = v.weight().at(k - 1);
        let a = v.hodge().at(p).intersect(&wk)?.quotient_image(&wk1)?;
        let b = v
            .hodge()
            .at(q)
            .conjugate()
            .intersect(&wk)?
            .quotient_image(&wk1)?;
        if a.intersect(&b)?.dim() != h {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Product coordinates of a real-split filtration: the pure structures on
/// the graded pieces and the splitting of `W`.  Assembly is exact: see
/// [`assemble_real_split`].
pub fn real_split_coordinates(
    spec: &PeriodDomainSpec,
    f: &DecreasingFiltration,
) -> Result<RealSplitPoint> {
    let report = membership(spec, f)?;
    if !report.in_m_r {
        return Err(Error::Structural(
            "filtration is not in the real-split locus".into(),
        ));
    }
    let v = MixedHodgeStructure::new(spec.rank, spec.weight.clone(), f.clone())?;
    delta_retract(&v)
}

/// Unit tests exercise the round trip; re-exported for callers.
pub fn assemble(
    point: &RealSplitPoint,
    weight: &IncreasingFiltration,
) -> Result<MixedHodgeStructure> {
    assemble_real_split(point, weight)
}

/// The canonical base grading of the domain's weight filtration (the chart
/// anchor used in reports).
pub fn chart_base(spec: &PeriodDomainSpec) -> Result<GradingOperator> {
    GradingOperator::base_grading(&spec.weight)
}

/// Kummer-shaped domain spec, used by tests and fixtures.
pub fn kummer_domain_spec() -> PeriodDomainSpec {
    let (_, weight, _) = crate::fixtures::kummer_raw(&GaussianRational::zero());
    let numbers = HodgeNumbers::new(BTreeMap::from([((0, 0), 1), ((-1, -1), 1)])).unwrap();
    PeriodDomainSpec::new(2, weight, numbers, crate::fixtures::kummer_polarization()).unwrap()
}

/// Elliptic-curve-shaped domain spec.
pub fn elliptic_domain_spec() -> PeriodDomainSpec {
    let (_, weight, _) = crate::fixtures::elliptic_raw(&GaussianRational::i());
    let numbers = HodgeNumbers::new(BTreeMap::from([((1, 0), 1), ((0, 1), 1)])).unwrap();
    PeriodDomainSpec::new(2, weight, numbers, crate::fixtures::elliptic_polarization()).unwrap()
}
