//! Fundamental set descriptors, verification, quotient identification, and
//! definable-structure comparison.
//!
//! A fundamental set is an open set whose group translates cover the space
//! while meeting only finitely many of its own translates.  For the
//! supported descriptor kinds both properties are decided exactly:
//! translation actions by interval arithmetic, the modular-group domain by
//! the reduction algorithm (covering) plus candidate bounds with rational
//! witnesses (overlaps).  Anything sampled is reported as sampled.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat, GaussianRational, Rational};

use super::reduce::{reduce_sl2, reduce_unipotent, sl2_apply, Sl2Element};

/// One sheared strip `{ a < x - slope*y < a + width (, y > floor) }`.
#[derive(Clone, Debug, PartialEq)]
pub struct StripData {
    pub slope: Rational,
    pub anchor: Rational,
    pub width: Rational,
    pub floor: Option<Rational>,
}

impl StripData {
    /// Strip coordinate `x - slope * y`.
    fn coordinate(&self, z: &GaussianRational) -> Rational {
        &z.re - &(&self.slope * &z.im)
    }

    pub fn contains(&self, z: &GaussianRational, closure: bool) -> bool {
        if let Some(floor) = &self.floor {
            let above = if closure {
                &z.im >= floor
            } else {
                &z.im > floor
            };
            if !above {
                return false;
            }
        }
        let t = self.coordinate(z);
        let hi = &self.anchor + &self.width;
        if closure {
            t >= self.anchor && t <= hi
        } else {
            t > self.anchor && t < hi
        }
    }
}

/// Descriptions of the supported open semialgebraic regions.
#[derive(Clone, Debug, PartialEq)]
pub enum FundamentalSetDescriptor {
    /// A sheared strip in `C` (or `H` when `floor` is set).
    Strip(StripData),
    /// A finite union of parallel strips (finite-index refinements).
    StripUnion(Vec<StripData>),
    /// Bounded half-open box in the splitting chart (product kind: the
    /// graded factor is carried by the ambient domain spec).
    Product {
        box_min: Vec<Rational>,
        box_max: Vec<Rational>,
    },
    /// The classical modular domain thickened by `epsilon`:
    /// `{ |Re| < 1/2 + eps, |z| > 1 - eps }`.
    HalfPlaneDomain { epsilon: Rational },
}

impl FundamentalSetDescriptor {
    pub fn strip(slope: Rational, anchor: Rational, width: Rational) -> Self {
        FundamentalSetDescriptor::Strip(StripData {
            slope,
            anchor,
            width,
            floor: None,
        })
    }

    fn strips(&self) -> Option<Vec<StripData>> {
        match self {
            FundamentalSetDescriptor::Strip(s) => Some(vec![s.clone()]),
            FundamentalSetDescriptor::StripUnion(v) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn contains_point(&self, z: &GaussianRational, closure: bool) -> Result<bool> {
        match self {
            FundamentalSetDescriptor::Strip(s) => Ok(s.contains(z, closure)),
            FundamentalSetDescriptor::StripUnion(v) => Ok(v.iter().any(|s| s.contains(z, closure))),
            FundamentalSetDescriptor::HalfPlaneDomain { epsilon } => {
                let half = rat(1, 2);
                let bound = &half + epsilon;
                let radius = Rational::one() - epsilon;
                let norm = z.norm_sqr();
                let rsq = &radius * &radius;
                Ok(if closure {
                    z.im.is_positive() && z.re.abs() <= bound && norm >= rsq
                } else {
                    z.im.is_positive() && z.re.abs() < bound && norm > rsq
                })
            }
            FundamentalSetDescriptor::Product { .. } => Err(Error::Unsupported(
                "product descriptors take chart coordinates, not complex points".into(),
            )),
        }
    }

    pub fn contains_chart_point(&self, coord: &[Rational], closure: bool) -> Result<bool> {
        match self {
            FundamentalSetDescriptor::Product { box_min, box_max } => {
                if coord.len() != box_min.len() {
                    return Err(Error::DimensionMismatch("chart point vs box".into()));
                }
                Ok(coord
                    .iter()
                    .zip(box_min.iter().zip(box_max.iter()))
                    .all(|(x, (lo, hi))| {
                        if closure {
                            x >= lo && x <= hi
                        } else {
                            x >= lo && x < hi
                        }
                    }))
            }
            _ => Err(Error::Unsupported(
                "descriptor does not live in a chart".into(),
            )),
        }
    }
}

/// The group actions supported by the verifier.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupAction {
    /// `z -> z + n*step` on `C` (or on `H` for strips with a floor).
    IntegerTranslation { step: Rational },
    /// Translations by a full-rank lattice in the splitting chart.
    TranslationLattice { basis: Vec<Vec<Rational>> },
    /// `SL_2(Z)` acting on the upper half-plane.
    ModularGroup,
}

/// A group element witnessing an overlap or an identification.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupElement {
    Translation(BigInt),
    LatticeTranslation(Vec<BigInt>),
    Modular(Sl2Element),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverageStatus {
    ExactlyCovers,
    ExactlyFails,
    SampledCovers,
    SampledFails,
}

impl CoverageStatus {
    pub fn covers(&self) -> bool {
        matches!(
            self,
            CoverageStatus::ExactlyCovers | CoverageStatus::SampledCovers
        )
    }

    pub fn exact(&self) -> bool {
        matches!(
            self,
            CoverageStatus::ExactlyCovers | CoverageStatus::ExactlyFails
        )
    }
}

#[derive(Clone, Debug)]
pub struct FundamentalSetReport {
    pub covering: CoverageStatus,
    pub overlaps: Vec<GroupElement>,
    pub overlaps_exact: bool,
}

impl FundamentalSetReport {
    pub fn valid(&self) -> bool {
        self.covering.covers()
    }
}

/// Verify the two fundamental set properties for the descriptor under the
/// action, exactly where the kind allows it.
pub fn verify_fundamental_set(
    descriptor: &FundamentalSetDescriptor,
    action: &GroupAction,
    sample_budget: usize,
) -> Result<FundamentalSetReport> {
    match (descriptor, action) {
        (
            FundamentalSetDescriptor::Strip(_) | FundamentalSetDescriptor::StripUnion(_),
            GroupAction::IntegerTranslation { step },
        ) => {
            let strips = descriptor.strips().expect("strip kinds");
            verify_strips(&strips, step)
        }
        (
            FundamentalSetDescriptor::Product { box_min, box_max },
            GroupAction::TranslationLattice { basis },
        ) => verify_product_box(box_min, box_max, basis, sample_budget),
        (FundamentalSetDescriptor::HalfPlaneDomain { epsilon }, GroupAction::ModularGroup) => {
            verify_modular_domain(epsilon, sample_budget)
        }
        _ => Err(Error::Unsupported(
            "descriptor and action kinds do not match a supported verifier".into(),
        )),
    }
}

/// Translation case, exact: the strip coordinates are intervals mod `step`.
fn verify_strips(strips: &[StripData], step: &Rational) -> Result<FundamentalSetReport> {
    if strips.is_empty() || !step.is_positive() {
        return Err(Error::Unsupported("empty strip family or bad step".into()));
    }
    let slope = &strips[0].slope;
    if strips.iter().any(|s| &s.slope != slope) {
        return Err(Error::Unsupported(
            "strip unions must share one slope".into(),
        ));
    }
    if strips.iter().any(|s| s.floor != strips[0].floor) {
        return Err(Error::Unsupported(
            "strip unions must share one floor".into(),
        ));
    }
    // Intervals (anchor, anchor + width) must cover R modulo step.  A
    // finite union of open intervals covers the circle exactly when every
    // interval endpoint is strictly inside some (possibly wrapped) interval:
    // a nonempty complement is closed and meets the endpoint set.
    let marks: Vec<(Rational, Rational)> = strips
        .iter()
        .map(|s| {
            let lo = wrap_mod(&s.anchor, step);
            (lo.clone(), &lo + &s.width)
        })
        .collect();
    let covering = if marks
        .iter()
        .any(|(lo, hi)| &(hi.clone() - lo.clone()) > step)
    {
        true
    } else {
        let mut endpoints: Vec<Rational> = Vec::new();
        for (lo, hi) in &marks {
            endpoints.push(lo.clone());
            endpoints.push(wrap_mod(hi, step));
        }
        endpoints.iter().all(|p| {
            marks.iter().any(|(lo, hi)| {
                // p, p + step, p - step against the raw interval.
                [p.clone(), p + step, p - step]
                    .iter()
                    .any(|cand| cand > lo && cand < hi)
            })
        })
    };
    // Overlaps: n*step with some pair of intervals meeting after shifting.
    let span = strips.iter().map(|s| &s.anchor + &s.width).max().unwrap()
        - strips.iter().map(|s| s.anchor.clone()).min().unwrap();
    let max_n = (span / step.clone()).ceil().to_integer() + BigInt::one();
    let mut overlaps = Vec::new();
    let mut n = -max_n.clone();
    while n <= max_n {
        let shift = Rational::from(n.clone()) * step;
        let meets = strips.iter().any(|s1| {
            strips.iter().any(|s2| {
                let lo1 = s1.anchor.clone();
                let hi1 = &s1.anchor + &s1.width;
                let lo2 = &s2.anchor + &shift;
                let hi2 = &s2.anchor + &s2.width + &shift;
                lo1 < hi2 && lo2 < hi1
            })
        });
        if meets {
            overlaps.push(GroupElement::Translation(n.clone()));
        }
        n += BigInt::one();
    }
    Ok(FundamentalSetReport {
        covering: if covering {
            CoverageStatus::ExactlyCovers
        } else {
            CoverageStatus::ExactlyFails
        },
        overlaps,
        overlaps_exact: true,
    })
}

fn wrap_mod(x: &Rational, step: &Rational) -> Rational {
    let q = (x / step).floor();
    x - &(q * step)
}

/// Product/box case: overlaps exactly, covering sampled within budget.
fn verify_product_box(
    box_min: &[Rational],
    box_max: &[Rational],
    basis: &[Vec<Rational>],
    sample_budget: usize,
) -> Result<FundamentalSetReport> {
    let r = box_min.len();
    if box_max.len() != r || basis.len() != r || basis.iter().any(|b| b.len() != r) {
        return Err(Error::DimensionMismatch("box vs lattice rank".into()));
    }
    if box_min.iter().zip(box_max.iter()).any(|(lo, hi)| lo >= hi) {
        return Err(Error::Structural(
            "box must have positive side lengths".into(),
        ));
    }

    // Overlaps: lattice vectors v with box ∩ (box + v) nonempty, i.e.
    // |v_i| < side_i on every axis.  Enumerate a sufficient integer range.
    let sides: Vec<Rational> = box_min
        .iter()
        .zip(box_max.iter())
        .map(|(lo, hi)| hi - lo)
        .collect();
    let mut bound = 1i64;
    for b in basis {
        let norm: Rational = b.iter().map(|x| x.abs()).fold(rat(0, 1), |a, x| a + x);
        let side_max = sides.iter().max().unwrap().clone();
        if norm.is_positive() {
            let est = (side_max / norm).ceil().to_integer();
            let est: i64 = i64::try_from(est).unwrap_or(8).max(1);
            bound = bound.max(est + 1);
        }
    }
    let bound = bound.min(6);
    let mut overlaps = Vec::new();
    let mut counter = vec![-bound; r];
    'enumerate: loop {
        let v: Vec<Rational> = (0..r)
            .map(|i| {
                let mut acc = rat(0, 1);
                for (g, b) in counter.iter().zip(basis.iter()) {
                    acc += Rational::from(BigInt::from(*g)) * &b[i];
                }
                acc
            })
            .collect();
        if v.iter()
            .zip(sides.iter())
            .all(|(vi, side)| &vi.abs() < side)
        {
            overlaps.push(GroupElement::LatticeTranslation(
                counter.iter().map(|&g| BigInt::from(g)).collect(),
            ));
        }
        for i in 0..r {
            counter[i] += 1;
            if counter[i] <= bound {
                continue 'enumerate;
            }
            counter[i] = -bound;
        }
        break;
    }

    // Covering, sampled: reduce deterministic sample points into the lattice
    // cell and look for a translate landing in the box.
    let mut rng = crate::fixtures::DetRng::new(17);
    let mut covers = true;
    'samples: for _ in 0..sample_budget.max(8) {
        let point: Vec<Rational> = (0..r).map(|_| rng.rational(20, 7)).collect();
        let (_, reduced) = reduce_unipotent(&point, basis)?;
        for overlap in &overlaps {
            let GroupElement::LatticeTranslation(g) = overlap else {
                continue;
            };
            let shifted: Vec<Rational> = (0..r)
                .map(|i| {
                    let mut acc = reduced[i].clone();
                    for (gi, b) in g.iter().zip(basis.iter()) {
                        acc += Rational::from(gi.clone()) * &b[i];
                    }
                    acc
                })
                .collect();
            if shifted
                .iter()
                .zip(box_min.iter().zip(box_max.iter()))
                .all(|(x, (lo, hi))| x >= lo && x < hi)
            {
                continue 'samples;
            }
        }
        covers = false;
        break;
    }
    Ok(FundamentalSetReport {
        covering: if covers {
            CoverageStatus::SampledCovers
        } else {
            CoverageStatus::SampledFails
        },
        overlaps,
        overlaps_exact: true,
    })
}

/// Modular domain: covering is exact (the reduction algorithm terminates in
/// the closed domain, which the thickened open set contains); the overlap
/// set is computed from exact candidate bounds plus rational witnesses.
fn verify_modular_domain(epsilon: &Rational, sample_budget: usize) -> Result<FundamentalSetReport> {
    if !epsilon.is_positive() || epsilon >= &rat(1, 5) {
        return Err(Error::Unsupported(
            "thickening must satisfy 0 < eps < 1/5".into(),
        ));
    }
    let desc = FundamentalSetDescriptor::HalfPlaneDomain {
        epsilon: epsilon.clone(),
    };
    // Spot certification of covering on sample points (the algorithm is the
    // proof; these are exact certificates at the budgeted points).
    let mut rng = crate::fixtures::DetRng::new(5);
    for _ in 0..sample_budget.min(64) {
        let re = rng.rational(30, 11);
        let mut im = rng.rational(30, 11).abs();
        if im.is_zero() {
            im = rat(1, 3);
        }
        let tau = GaussianRational::new(re, im);
        let (_, reduced) = reduce_sl2(&tau)?;
        if !desc.contains_point(&reduced, true)? {
            return Err(Error::Internal(
                "reduction left the thickened domain".into(),
            ));
        }
    }

    // y_min^2 on the region: the lowest points sit over |x| = 1/2 + eps on
    // the circle of radius 1 - eps.  Every point of the region has
    // Im z > y_lb, a rational lower bound for sqrt(y_min_sq).
    let bound_x = rat(1, 2) + epsilon;
    let radius = Rational::one() - epsilon;
    let y_min_sq = &radius * &radius - &bound_x * &bound_x;
    if !y_min_sq.is_positive() {
        return Err(Error::Unsupported(
            "thickening too large for the bounds".into(),
        ));
    }
    let y_lb = rational_sqrt_lower(&y_min_sq);
    // Im(g z) <= 1/(c^2 Im z) must exceed y_lb: c^2 < 1/y_lb^2.
    let mut c_max = BigInt::zero();
    loop {
        let next = &c_max + BigInt::one();
        let next_sq = Rational::from(next.clone()) * Rational::from(next.clone());
        if next_sq * &y_lb * &y_lb >= Rational::one() {
            break;
        }
        c_max = next;
    }

    let mut overlaps: Vec<GroupElement> = Vec::new();
    let mut undecided = false;
    let witnesses = witness_grid(epsilon);
    let mut c = BigInt::zero();
    while c <= c_max {
        if c.is_zero() {
            // Translations T^b: meets iff |b| < 2 (1/2 + eps) = 1 + 2 eps.
            let b_bound = Rational::one() + rat(2, 1) * epsilon;
            let mut b = BigInt::from(-3);
            while b <= BigInt::from(3) {
                if Rational::from(b.clone()).abs() < b_bound {
                    let g: Sl2Element =
                        [[BigInt::one(), b.clone()], [BigInt::zero(), BigInt::one()]];
                    overlaps.push(GroupElement::Modular(g));
                }
                b += BigInt::one();
            }
        } else {
            // Enumeration bounds: |Re gz - a/c| <= 1/(2 c^2 y_lb) forces
            // |a| <= c bound_x + 1/(2 c y_lb); the symmetric bound through
            // gamma^{-1} forces the same for |d|.
            let c_rat = Rational::from(c.clone());
            let reach = &c_rat * &bound_x + Rational::one() / (rat(2, 1) * &c_rat * &y_lb);
            let ad_max = i64::try_from(reach.ceil().to_integer()).unwrap_or(3) + 1;
            for a in -ad_max..=ad_max {
                for d in -ad_max..=ad_max {
                    let a_big = BigInt::from(a);
                    let d_big = BigInt::from(d);
                    // b is forced by the determinant: a d - b c = 1.
                    let num = &a_big * &d_big - BigInt::one();
                    if (&num % &c) != BigInt::zero() {
                        continue;
                    }
                    let b_big = num / &c;
                    let g: Sl2Element = [[a_big, b_big], [c.clone(), d_big]];
                    match decide_overlap(&g, epsilon, &y_lb, &witnesses)? {
                        Some(true) => overlaps.push(GroupElement::Modular(g)),
                        Some(false) => {}
                        None => undecided = true,
                    }
                }
            }
        }
        c += BigInt::one();
    }
    overlaps.sort();
    overlaps.dedup();
    Ok(FundamentalSetReport {
        covering: CoverageStatus::ExactlyCovers,
        overlaps,
        overlaps_exact: !undecided,
    })
}

/// Largest rational of the form `s/2^20` with square at most `x`.
fn rational_sqrt_lower(x: &Rational) -> Rational {
    let scale = BigInt::from(1u64 << 20);
    // floor(sqrt(x * scale^2)) / scale.
    let scaled = x * Rational::from(&scale * &scale);
    let floor = scaled.floor().to_integer();
    Rational::new(floor.sqrt(), scale)
}

/// Decide whether `g F ∩ F` is nonempty: rational witness (certain yes),
/// exact interval bounds (certain no), or undecided.
///
/// The bounds, all exact over the rationals: for `z` in the region,
/// `Im z > y_lb`, and writing `gz = a/c - 1/(c (c z + d))`,
/// `|Re(1/(c(cz+d)))| <= 1/(2 c^2 y_lb)` with its sign pinned whenever
/// `|d| > c (1/2 + eps)`; and `Im gz <= 1/(2 |c x + d|_min |c|)` when the
/// line `cx + d` stays away from zero.
fn decide_overlap(
    g: &Sl2Element,
    epsilon: &Rational,
    y_lb: &Rational,
    witnesses: &[GaussianRational],
) -> Result<Option<bool>> {
    let desc = FundamentalSetDescriptor::HalfPlaneDomain {
        epsilon: epsilon.clone(),
    };
    for z in witnesses {
        if desc.contains_point(z, false)? && desc.contains_point(&sl2_apply(g, z)?, false)? {
            return Ok(Some(true));
        }
    }
    let c = &g[1][0];
    if c.is_zero() {
        return Ok(None);
    }
    let bound_x = rat(1, 2) + epsilon;
    let c_rat = Rational::from(c.abs());
    let a_over_c = Rational::new(g[0][0].clone(), c.clone());
    let d_over_c = Rational::new(g[1][1].clone(), c.clone());
    let wiggle = Rational::one() / (rat(2, 1) * &c_rat * &c_rat * y_lb);

    // Signed real-part interval for gz.
    let (re_lo, re_hi) = if d_over_c > bound_x {
        ((&a_over_c - &wiggle), a_over_c.clone())
    } else if -&d_over_c > bound_x {
        (a_over_c.clone(), &a_over_c + &wiggle)
    } else {
        ((&a_over_c - &wiggle), &a_over_c + &wiggle)
    };
    if re_lo >= bound_x || re_hi <= -&bound_x {
        return Ok(Some(false));
    }

    // Height bound: |c z + d| >= |c x + d| >= |c| (|d/c| - bound_x).
    let margin = (d_over_c.abs() - &bound_x) * &c_rat;
    if margin.is_positive() {
        // Im gz = y / |cz+d|^2 <= y/(margin^2 + c^2 y^2) <= 1/(2 margin |c|).
        let peak = Rational::one() / (rat(2, 1) * &margin * &c_rat);
        if &peak <= y_lb {
            return Ok(Some(false));
        }
    }
    Ok(None)
}

/// A deterministic grid of exact points inside the thickened domain,
/// concentrated near the corners and the unit arc where overlaps happen.
fn witness_grid(epsilon: &Rational) -> Vec<GaussianRational> {
    let mut out = Vec::new();
    let steps = 28i64;
    let bound = rat(1, 2) + epsilon;
    for i in 0..=steps {
        let x = -&bound + (rat(2, 1) * &bound) * rat(i, 1) / rat(steps, 1);
        for j in 0..18 {
            // Heights from just under 1 up to 2.5.
            let y = rat(17, 20) + rat(j, 1) * rat(1, 10);
            let z = GaussianRational::new(x.clone(), y);
            out.push(z);
        }
    }
    out
}

/// `R_F` realized: do `p1` and `p2` (in the closure of the descriptor) map
/// to the same quotient point?  Decided exactly against the overlap set.
pub fn identify_in_quotient(
    p1: &GaussianRational,
    p2: &GaussianRational,
    descriptor: &FundamentalSetDescriptor,
    action: &GroupAction,
    overlaps: &[GroupElement],
) -> Result<Option<GroupElement>> {
    if !descriptor.contains_point(p1, true)? || !descriptor.contains_point(p2, true)? {
        return Err(Error::Structural(
            "points must lie in the descriptor's closure".into(),
        ));
    }
    for gamma in overlaps {
        let image = match (gamma, action) {
            (GroupElement::Translation(n), GroupAction::IntegerTranslation { step }) => {
                let mut z = p1.clone();
                z.re += Rational::from(n.clone()) * step;
                z
            }
            (GroupElement::Modular(g), GroupAction::ModularGroup) => sl2_apply(g, p1)?,
            _ => {
                return Err(Error::Unsupported(
                    "element does not act on this space".into(),
                ));
            }
        };
        if &image == p2 {
            return Ok(Some(gamma.clone()));
        }
    }
    Ok(None)
}

/// `F` and `F'` induce the same definable structure iff each is contained
/// in finitely many translates of the other; for parallel-strip
/// descriptors this is exactly equality of slopes (equal slopes are
/// covered by finitely many translates, unequal slopes never are).
pub fn same_definable_structure(
    f1: &FundamentalSetDescriptor,
    f2: &FundamentalSetDescriptor,
) -> Result<bool> {
    let (Some(s1), Some(s2)) = (f1.strips(), f2.strips()) else {
        return Err(Error::Unsupported(
            "definable-structure comparison handles strip descriptors".into(),
        ));
    };
    let slope1 = &s1[0].slope;
    let slope2 = &s2[0].slope;
    if s1.iter().any(|s| &s.slope != slope1) || s2.iter().any(|s| &s.slope != slope2) {
        return Err(Error::Unsupported(
            "strip unions must share one slope to compare".into(),
        ));
    }
    Ok(slope1 == slope2)
}

/// Finite-index refinement: the union of coset translates of a fundamental
/// set is a fundamental set for the subgroup.
pub fn refine_for_finite_index(
    descriptor: &FundamentalSetDescriptor,
    coset_shifts: &[Rational],
) -> Result<FundamentalSetDescriptor> {
    let Some(strips) = descriptor.strips() else {
        return Err(Error::Unsupported(
            "refinement handles strip descriptors".into(),
        ));
    };
    let mut out = Vec::new();
    for shift in coset_shifts {
        for s in &strips {
            let mut s = s.clone();
            s.anchor = &s.anchor + shift;
            out.push(s);
        }
    }
    Ok(FundamentalSetDescriptor::StripUnion(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_action() -> GroupAction {
        GroupAction::IntegerTranslation { step: rat(1, 1) }
    }

    #[test]
    fn width_six_fifths_strip_is_fundamental() {
        let f = FundamentalSetDescriptor::strip(rat(0, 1), rat(0, 1), rat(6, 5));
        let report = verify_fundamental_set(&f, &unit_action(), 0).unwrap();
        assert_eq!(report.covering, CoverageStatus::ExactlyCovers);
        assert!(report.overlaps_exact);
        let expected: Vec<GroupElement> = [-1i64, 0, 1]
            .iter()
            .map(|&n| GroupElement::Translation(BigInt::from(n)))
            .collect();
        assert_eq!(report.overlaps, expected);
    }

    #[test]
    fn narrow_strip_fails_covering() {
        let f = FundamentalSetDescriptor::strip(rat(0, 1), rat(0, 1), rat(1, 2));
        let report = verify_fundamental_set(&f, &unit_action(), 0).unwrap();
        assert_eq!(report.covering, CoverageStatus::ExactlyFails);
    }

    #[test]
    fn width_exactly_one_fails_open_covering() {
        // Open strips of width 1 miss the orbit of the boundary.
        let f = FundamentalSetDescriptor::strip(rat(0, 1), rat(0, 1), rat(1, 1));
        let report = verify_fundamental_set(&f, &unit_action(), 0).unwrap();
        assert_eq!(report.covering, CoverageStatus::ExactlyFails);
    }

    #[test]
    fn modular_domain_verifies_with_classical_overlaps() {
        let f = FundamentalSetDescriptor::HalfPlaneDomain {
            epsilon: rat(1, 10),
        };
        let report = verify_fundamental_set(&f, &GroupAction::ModularGroup, 32).unwrap();
        assert!(report.covering.covers() && report.covering.exact());
        assert!(report.overlaps_exact);
        // The identity, both unit translations and the inversion all appear.
        let t = |b: i64| {
            GroupElement::Modular([
                [BigInt::one(), BigInt::from(b)],
                [BigInt::zero(), BigInt::one()],
            ])
        };
        let s = GroupElement::Modular([
            [BigInt::zero(), BigInt::from(-1)],
            [BigInt::one(), BigInt::zero()],
        ]);
        for g in [t(0), t(1), t(-1), s] {
            assert!(report.overlaps.contains(&g), "missing {g:?}");
        }
        // Finite and small: the classical list has a dozen-odd entries.
        assert!(report.overlaps.len() >= 9 && report.overlaps.len() <= 40);
    }

    #[test]
    fn identify_points_in_strip_quotient() {
        let f = FundamentalSetDescriptor::strip(rat(0, 1), rat(0, 1), rat(6, 5));
        let report = verify_fundamental_set(&f, &unit_action(), 0).unwrap();
        let p = |s: &str| crate::scalar::parse_gaussian(s).unwrap();
        let related = identify_in_quotient(
            &p("1/10"),
            &p("11/10"),
            &f,
            &unit_action(),
            &report.overlaps,
        )
        .unwrap();
        assert_eq!(related, Some(GroupElement::Translation(BigInt::one())));
        let unrelated =
            identify_in_quotient(&p("1/10"), &p("3/5"), &f, &unit_action(), &report.overlaps)
                .unwrap();
        assert_eq!(unrelated, None);
    }

    #[test]
    fn sl2_boundary_identification() {
        let f = FundamentalSetDescriptor::HalfPlaneDomain {
            epsilon: rat(1, 10),
        };
        let report = verify_fundamental_set(&f, &GroupAction::ModularGroup, 16).unwrap();
        let p = |s: &str| crate::scalar::parse_gaussian(s).unwrap();
        let related = identify_in_quotient(
            &p("-1/2+2*i"),
            &p("1/2+2*i"),
            &f,
            &GroupAction::ModularGroup,
            &report.overlaps,
        )
        .unwrap();
        assert!(matches!(related, Some(GroupElement::Modular(_))));
    }

    #[test]
    fn slopes_decide_definable_structures() {
        let v = FundamentalSetDescriptor::strip(rat(0, 1), rat(0, 1), rat(6, 5));
        let wider = FundamentalSetDescriptor::strip(rat(0, 1), rat(-3, 1), rat(5, 2));
        let sheared = FundamentalSetDescriptor::strip(rat(1, 1), rat(0, 1), rat(6, 5));
        assert!(same_definable_structure(&v, &wider).unwrap());
        assert!(!same_definable_structure(&v, &sheared).unwrap());
        assert!(same_definable_structure(&v, &v).unwrap());
    }

    #[test]
    fn finite_index_refinement_verifies() {
        let f = FundamentalSetDescriptor::strip(rat(0, 1), rat(0, 1), rat(6, 5));
        let refined = refine_for_finite_index(&f, &[rat(0, 1), rat(1, 1)]).unwrap();
        let sub_action = GroupAction::IntegerTranslation { step: rat(2, 1) };
        let report = verify_fundamental_set(&refined, &sub_action, 0).unwrap();
        assert_eq!(report.covering, CoverageStatus::ExactlyCovers);
        let ns: Vec<BigInt> = report
            .overlaps
            .iter()
            .map(|g| match g {
                GroupElement::Translation(n) => n.clone(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(ns, vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn product_box_verifies_against_lattice() {
        let f = FundamentalSetDescriptor::Product {
            box_min: vec![rat(0, 1), rat(0, 1)],
            box_max: vec![rat(1, 1), rat(2, 1)],
        };
        let action = GroupAction::TranslationLattice {
            basis: vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(2, 1)]],
        };
        let report = verify_fundamental_set(&f, &action, 16).unwrap();
        assert!(report.covering.covers());
        assert!(!report.covering.exact(), "box covering is sampled");
        assert!(report
            .overlaps
            .contains(&GroupElement::LatticeTranslation(vec![
                BigInt::zero(),
                BigInt::zero()
            ])));
    }
}
