//! Weight filtrations of nilpotent operators, relative weight filtrations,
//! and limit mixed Hodge structure assembly.
//!
//! The pure (absolute) filtration centered at `c` comes from the classical
//! kernel/image formula
//! `M_{c+l} = Σ_{j >= max(0,-l)} ker N^{l+j+1} ∩ im N^j` and always exists.
//!
//! The relative filtration `M(N, W)` need not exist.  The constructor forces
//! the graded data (on each `Gr^W_k` the filtration must induce the pure
//! filtration of the induced operator centered at `k`), peels the top
//! weight level, recurses, and lifts step by step solving exact linear
//! containment constraints.  Uniqueness is classical, so a candidate that
//! passes the mandatory post-hoc verification is the answer; when the
//! greedy lift gets stuck the bounded lattice search below is consulted
//! before `exists = false` is declared.

use crate::error::{Error, Result};
use crate::filtration::DecreasingFiltration;
use crate::filtration::{express_in_basis, IncreasingFiltration};
use crate::matrix::Matrix;
use crate::mhs::{validate_mhs, MixedHodgeStructure, ValidationReport};
use crate::scalar::GaussianRational;
use crate::subspace::{quotient_map, quotient_section, Subspace};

/// A rational nilpotent operator together with its nilpotency index
/// (`N^index = 0`, `N^(index-1) != 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentOperator {
    matrix: Matrix,
    index: usize,
}

impl NilpotentOperator {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(
                "nilpotent operator must be square".into(),
            ));
        }
        if !matrix.is_real() {
            return Err(Error::Structural(
                "monodromy logarithms are rational".into(),
            ));
        }
        let n = matrix.rows();
        let mut power = Matrix::identity(n);
        for k in 0..=n {
            if power.is_zero() {
                return Ok(NilpotentOperator {
                    matrix,
                    index: k.max(1),
                });
            }
            power = power.mul_mat(&matrix)?;
        }
        if power.is_zero() {
            return Ok(NilpotentOperator {
                matrix,
                index: n.max(1),
            });
        }
        Err(Error::Structural("operator is not nilpotent".into()))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn nilpotency_index(&self) -> usize {
        self.index
    }

    pub fn preserves(&self, w: &IncreasingFiltration) -> bool {
        w.jumps().iter().all(|(_, s)| {
            s.map(&self.matrix)
                .map(|img| s.contains(&img))
                .unwrap_or(false)
        })
    }

    pub fn power_kernel(&self, a: usize) -> Subspace {
        Subspace::zero(self.dim())
            .preimage(&self.matrix.pow(a as u32))
            .expect("square")
    }

    pub fn power_image(&self, a: usize) -> Subspace {
        Subspace::full(self.dim())
            .map(&self.matrix.pow(a as u32))
            .expect("square")
    }
}

/// The unique filtration centered at `center` with `N M_k ⊆ M_{k-2}` and
/// `N^l : Gr_{center+l} ≅ Gr_{center-l}`; always exists.
pub fn weight_filtration_pure(n: &NilpotentOperator, center: i64) -> IncreasingFiltration {
    let dim = n.dim();
    let idx = n.nilpotency_index() as i64;
    let mut steps = Vec::new();
    for l in -idx..=idx {
        let mut acc = Subspace::zero(dim);
        let j_lo = 0.max(-l);
        for j in j_lo..=idx {
            let ker = n.power_kernel((l + j + 1).max(0) as usize);
            let im = n.power_image(j as usize);
            acc = acc
                .sum(&ker.intersect(&im).expect("same ambient"))
                .expect("same ambient");
        }
        steps.push((center + l, acc));
    }
    IncreasingFiltration::new(dim, steps).expect("pure weight filtration is a filtration")
}

/// Outcome of the relative weight filtration computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeWeightFiltration {
    pub exists: bool,
    pub filtration: Option<IncreasingFiltration>,
}

/// Restrict a filtration-preserving operator to a subspace, in the
/// subspace's own (echelon-basis) coordinates.
fn restrict_operator(m: &Matrix, s: &Subspace) -> Result<Matrix> {
    let d = s.dim();
    let mut out = Matrix::zero(d, d);
    for j in 0..d {
        let image = m.mul_vec(s.basis().row(j))?;
        if !s.contains_vec(&image) {
            return Err(Error::Structural(
                "operator does not preserve the subspace".into(),
            ));
        }
        for (i, &p) in s.pivots().iter().enumerate() {
            out.set(i, j, image[p].clone());
        }
    }
    Ok(out)
}

/// The operator induced on quotient coordinates mod `s` (requires `m(s) ⊆ s`).
fn quotient_operator(m: &Matrix, s: &Subspace) -> Result<Matrix> {
    quotient_map(s).mul_mat(m)?.mul_mat(&quotient_section(s))
}

/// Greedy construction: peel the top weight level, recurse, lift.
fn construct_relative(
    n: &NilpotentOperator,
    w: &IncreasingFiltration,
) -> Result<Option<IncreasingFiltration>> {
    let dim = n.dim();
    let jumps = w.jumps();
    if jumps.len() <= 1 {
        let center = jumps.last().map(|(k, _)| *k).unwrap_or(0);
        return Ok(Some(weight_filtration_pure(n, center)));
    }
    let top_k = jumps.last().unwrap().0;
    let sub = jumps[jumps.len() - 2].1.clone();

    // Recurse on W_{k_{r-1}} in its own coordinates.
    let n_sub = NilpotentOperator::new(restrict_operator(n.matrix(), &sub)?)?;
    let w_sub = w.restrict(&sub)?;
    let Some(m_sub) = construct_relative(&n_sub, &w_sub)? else {
        return Ok(None);
    };

    // Pure filtration on the top graded quotient.
    let n_quot = NilpotentOperator::new(quotient_operator(n.matrix(), &sub)?)?;
    let m_quot = weight_filtration_pure(&n_quot, top_k);

    let embed = sub.basis().transpose();
    let section = quotient_section(&sub);

    let lo = m_sub
        .jumps()
        .first()
        .map(|(k, _)| *k)
        .unwrap_or(top_k)
        .min(m_quot.min_jump());
    let hi = m_sub.max_jump().max(m_quot.max_jump());

    let mut steps: Vec<(i64, Subspace)> = Vec::new();
    let value_at = |steps: &[(i64, Subspace)], j: i64| -> Subspace {
        steps
            .iter()
            .rev()
            .find(|(k, _)| *k <= j)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(dim))
    };
    for j in lo..=hi {
        let sub_piece = m_sub.at(j).map(&embed)?;
        let mut acc = value_at(&steps, j - 1).sum(&sub_piece)?;
        let target_dim = m_sub.at(j).dim() + m_quot.at(j).dim();
        let m_two_below = value_at(&steps, j - 2);
        let quot_target = m_quot.at(j);
        for r in 0..quot_target.dim() {
            let wbar = quot_target.basis().row(r);
            if acc.quotient_image(&sub)?.contains_vec(wbar) {
                continue;
            }
            let w0 = section.mul_vec(wbar)?;
            // Correct w0 by v' in the sub so that N(w0 + v') ∈ M_{j-2}.
            let qm = quotient_map(&m_two_below);
            let lhs = qm.mul_mat(n.matrix())?.mul_mat(&embed)?;
            let nw0 = n.matrix().mul_vec(&w0)?;
            let rhs: Vec<GaussianRational> = qm.mul_vec(&nw0)?.into_iter().map(|x| -x).collect();
            let Some(c) = lhs.solve(&rhs) else {
                return Ok(None);
            };
            let correction = embed.mul_vec(&c)?;
            let lifted: Vec<GaussianRational> = w0
                .iter()
                .zip(correction.iter())
                .map(|(a, b)| a + b)
                .collect();
            acc = acc.sum(&Subspace::span(dim, &[lifted])?)?;
        }
        if acc.dim() != target_dim {
            return Ok(None);
        }
        steps.push((j, acc));
    }
    match IncreasingFiltration::new(dim, steps) {
        Ok(f) => Ok(Some(f)),
        Err(_) => Ok(None),
    }
}

/// Full axiom verification: `N M_j ⊆ M_{j-2}` everywhere and the induced
/// filtration on every `Gr^W_k` is the pure filtration centered at `k`.
pub fn verify_relative(
    n: &NilpotentOperator,
    w: &IncreasingFiltration,
    m: &IncreasingFiltration,
) -> Result<bool> {
    let lo = m.jumps().first().map(|(k, _)| *k).unwrap_or(0);
    let hi = m.max_jump();
    for j in lo..=hi + 2 {
        let image = m.at(j).map(n.matrix())?;
        if !m.at(j - 2).contains(&image) {
            return Ok(false);
        }
    }
    for (k, _) in w.jumps() {
        let wk = w.at(*k);
        let wk1 = w.at(k - 1);
        let gr = wk.quotient_image(&wk1)?;
        if gr.is_zero() {
            continue;
        }
        let n_gr = NilpotentOperator::new(restrict_operator(
            &quotient_operator(n.matrix(), &wk1)?,
            &gr,
        )?)?;
        let pure = weight_filtration_pure(&n_gr, *k);
        for j in lo - 1..=hi + 1 {
            let induced = m.at(j).intersect(&wk)?.quotient_image(&wk1)?;
            let induced = express_in_basis(&induced.intersect(&gr)?, &gr)?;
            if induced != pure.at(j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The relative weight filtration `M(N, W)`.
///
/// Scale invariant (`M(cN, W) = M(N, W)` for nonzero rational `c`), which is
/// why checking the monodromy logarithm in place of the connection residue
/// is legitimate: the two differ by a nonzero scalar.
pub fn relative_weight_filtration(
    n: &NilpotentOperator,
    w: &IncreasingFiltration,
) -> Result<RelativeWeightFiltration> {
    if n.dim() != w.ambient_dim() {
        return Err(Error::DimensionMismatch(
            "operator vs filtration ambient".into(),
        ));
    }
    if !n.preserves(w) {
        return Err(Error::Structural(
            "operator does not preserve the weight filtration".into(),
        ));
    }
    if let Some(m) = construct_relative(n, w)? {
        if verify_relative(n, w, &m)? {
            return Ok(RelativeWeightFiltration {
                exists: true,
                filtration: Some(m),
            });
        }
    }
    // Greedy lifting got stuck; consult the bounded search before giving up.
    if let Some(m) = search_relative_weight_filtration(n, w, 256)? {
        return Ok(RelativeWeightFiltration {
            exists: true,
            filtration: Some(m),
        });
    }
    Ok(RelativeWeightFiltration {
        exists: false,
        filtration: None,
    })
}

/// Exhaustive bounded search, usable as an independent oracle: enumerate
/// candidate steps from the finite subspace lattice generated by the `W_k`,
/// `ker N^a`, `im N^a` and `N^{±a} W_k` under sum and intersection, pinned
/// at each level by the forced graded dimensions, and verify the axioms.
///
/// Returns `Ok(None)` when no verified chain exists within the family cap.
pub fn search_relative_weight_filtration(
    n: &NilpotentOperator,
    w: &IncreasingFiltration,
    family_cap: usize,
) -> Result<Option<IncreasingFiltration>> {
    let dim = n.dim();
    // Seed family.
    let mut family: Vec<Subspace> = vec![Subspace::zero(dim), Subspace::full(dim)];
    let idx = n.nilpotency_index();
    for a in 1..=idx {
        family.push(n.power_kernel(a));
        family.push(n.power_image(a));
    }
    for (_, s) in w.jumps() {
        family.push(s.clone());
        for a in 1..=idx {
            family.push(s.map(&n.matrix().pow(a as u32))?);
            family.push(s.preimage(&n.matrix().pow(a as u32))?);
        }
    }
    dedup_spaces(&mut family);
    // Close under sum and intersection (capped).
    loop {
        let before = family.len();
        let snapshot = family.clone();
        'outer: for i in 0..snapshot.len() {
            for j in i + 1..snapshot.len() {
                let s = snapshot[i].sum(&snapshot[j])?;
                push_if_new(&mut family, s);
                let t = snapshot[i].intersect(&snapshot[j])?;
                push_if_new(&mut family, t);
                if family.len() > family_cap {
                    break 'outer;
                }
            }
        }
        if family.len() == before || family.len() > family_cap {
            break;
        }
    }

    // Forced graded dimensions per level.
    let k_min = w.min_jump();
    let k_max = w.max_jump();
    let span = idx as i64;
    let lo = k_min - span;
    let hi = k_max + span;
    let mut target_dims = Vec::new();
    for j in lo..=hi {
        let mut d = 0usize;
        for (k, _) in w.jumps() {
            let wk = w.at(*k);
            let wk1 = w.at(k - 1);
            let gr = wk.quotient_image(&wk1)?;
            if gr.is_zero() {
                continue;
            }
            let n_gr = NilpotentOperator::new(restrict_operator(
                &quotient_operator(n.matrix(), &wk1)?,
                &gr,
            )?)?;
            d += weight_filtration_pure(&n_gr, *k).at(j).dim();
        }
        target_dims.push((j, d));
    }

    let mut chain: Vec<(i64, Subspace)> = Vec::new();
    if dfs_chain(n, w, &family, &target_dims, 0, &mut chain)? {
        let filt = IncreasingFiltration::new(dim, chain)?;
        if verify_relative(n, w, &filt)? {
            return Ok(Some(filt));
        }
    }
    Ok(None)
}

fn dfs_chain(
    n: &NilpotentOperator,
    w: &IncreasingFiltration,
    family: &[Subspace],
    target_dims: &[(i64, usize)],
    pos: usize,
    chain: &mut Vec<(i64, Subspace)>,
) -> Result<bool> {
    if pos == target_dims.len() {
        return Ok(chain.last().map(|(_, s)| s.is_full()).unwrap_or(false));
    }
    let (j, d) = target_dims[pos];
    let prev = chain
        .last()
        .map(|(_, s)| s.clone())
        .unwrap_or_else(|| Subspace::zero(n.dim()));
    let two_below = if chain.len() >= 2 {
        chain[chain.len() - 2].1.clone()
    } else {
        Subspace::zero(n.dim())
    };
    for cand in family {
        if cand.dim() != d || !cand.contains(&prev) {
            continue;
        }
        if !two_below.contains(&cand.map(n.matrix())?) {
            continue;
        }
        // Graded images must match the forced pure filtrations.
        let mut ok = true;
        for (k, _) in w.jumps() {
            let wk = w.at(*k);
            let wk1 = w.at(k - 1);
            let gr = wk.quotient_image(&wk1)?;
            if gr.is_zero() {
                continue;
            }
            let n_gr = NilpotentOperator::new(restrict_operator(
                &quotient_operator(n.matrix(), &wk1)?,
                &gr,
            )?)?;
            let pure = weight_filtration_pure(&n_gr, *k);
            let induced = cand.intersect(&wk)?.quotient_image(&wk1)?;
            let induced = express_in_basis(&induced.intersect(&gr)?, &gr)?;
            if induced != pure.at(j) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        chain.push((j, cand.clone()));
        if dfs_chain(n, w, family, target_dims, pos + 1, chain)? {
            return Ok(true);
        }
        chain.pop();
    }
    Ok(false)
}

fn dedup_spaces(family: &mut Vec<Subspace>) {
    let mut out: Vec<Subspace> = Vec::new();
    for s in family.drain(..) {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    *family = out;
}

fn push_if_new(family: &mut Vec<Subspace>, s: Subspace) {
    if !family.contains(&s) {
        family.push(s);
    }
}

/// Outcome of limit mixed Hodge structure assembly.
#[derive(Clone, Debug)]
pub enum LimitOutcome {
    Limit(MixedHodgeStructure),
    NoRelativeWeightFiltration,
    NotMixedHodge(ValidationReport),
}

impl LimitOutcome {
    pub fn as_limit(&self) -> Option<&MixedHodgeStructure> {
        match self {
            LimitOutcome::Limit(v) => Some(v),
            _ => None,
        }
    }
}

/// Assemble `(V, M(N, W), F0)` and validate.
pub fn limit_mhs(
    f0: &DecreasingFiltration,
    n: &NilpotentOperator,
    w: &IncreasingFiltration,
) -> Result<LimitOutcome> {
    let rel = relative_weight_filtration(n, w)?;
    let Some(m) = rel.filtration else {
        return Ok(LimitOutcome::NoRelativeWeightFiltration);
    };
    let report = validate_mhs(n.dim(), &m, f0, false)?;
    if !report.valid {
        return Ok(LimitOutcome::NotMixedHodge(report));
    }
    Ok(LimitOutcome::Limit(MixedHodgeStructure::new(
        n.dim(),
        m,
        f0.clone(),
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{rat, GaussianRational};

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn sp(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::span(
            ambient,
            &rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| GaussianRational::from_int(x))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn jordan_block_two_centered_one() {
        let n = NilpotentOperator::new(mat(&[&[0, 0], &[1, 0]])).unwrap();
        let m = weight_filtration_pure(&n, 1);
        assert!(m.at(2).is_full());
        assert_eq!(m.at(1), sp(2, &[&[0, 1]]));
        assert_eq!(m.at(0), sp(2, &[&[0, 1]]));
        assert!(m.at(-1).is_zero());
    }

    #[test]
    fn zero_operator_is_concentrated() {
        let n = NilpotentOperator::new(Matrix::zero(3, 3)).unwrap();
        let m = weight_filtration_pure(&n, 4);
        assert!(m.at(4).is_full());
        assert!(m.at(3).is_zero());
    }

    #[test]
    fn jordan_block_three_centered_zero() {
        let n = NilpotentOperator::new(mat(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]])).unwrap();
        let m = weight_filtration_pure(&n, 0);
        assert!(m.at(2).is_full());
        assert_eq!(m.at(1), sp(3, &[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(m.at(0), sp(3, &[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(m.at(-1), sp(3, &[&[0, 0, 1]]));
        assert_eq!(m.at(-2), sp(3, &[&[0, 0, 1]]));
        assert!(m.at(-3).is_zero());
    }

    #[test]
    fn kummer_relative_filtration() {
        let n = NilpotentOperator::new(mat(&[&[0, 0], &[1, 0]])).unwrap();
        let (_, w, _) = fixtures::kummer_raw(&GaussianRational::zero());
        let rel = relative_weight_filtration(&n, &w).unwrap();
        assert!(rel.exists);
        let m = rel.filtration.unwrap();
        assert!(m.at(0).is_full());
        assert_eq!(m.at(-1), sp(2, &[&[0, 1]]));
        assert_eq!(m.at(-2), sp(2, &[&[0, 1]]));
        assert!(m.at(-3).is_zero());
    }

    #[test]
    fn weight_counterexample_does_not_exist() {
        // W jumps at -1 and 0 with N(e0) = e1: graded forcing gives
        // M_{-2} = 0 but N M_0 = <e1> != 0.
        let n = NilpotentOperator::new(mat(&[&[0, 0], &[1, 0]])).unwrap();
        let w = IncreasingFiltration::new(2, vec![(-1, sp(2, &[&[0, 1]])), (0, Subspace::full(2))])
            .unwrap();
        let rel = relative_weight_filtration(&n, &w).unwrap();
        assert!(!rel.exists);
    }

    #[test]
    fn trivial_w_reduces_to_pure() {
        let n = NilpotentOperator::new(mat(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]])).unwrap();
        let w = IncreasingFiltration::new(3, vec![(5, Subspace::full(3))]).unwrap();
        let rel = relative_weight_filtration(&n, &w).unwrap();
        assert!(rel.exists);
        assert_eq!(rel.filtration.unwrap(), weight_filtration_pure(&n, 5));
    }

    #[test]
    fn scale_invariance() {
        let n = NilpotentOperator::new(mat(&[&[0, 0], &[1, 0]])).unwrap();
        let scaled = NilpotentOperator::new(
            n.matrix()
                .scale(&GaussianRational::from_rational(rat(-7, 3))),
        )
        .unwrap();
        let (_, w, _) = fixtures::kummer_raw(&GaussianRational::zero());
        let a = relative_weight_filtration(&n, &w).unwrap();
        let b = relative_weight_filtration(&scaled, &w).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn search_agrees_on_small_cases() {
        let n = NilpotentOperator::new(mat(&[&[0, 0], &[1, 0]])).unwrap();
        let (_, w, _) = fixtures::kummer_raw(&GaussianRational::zero());
        let found = search_relative_weight_filtration(&n, &w, 256).unwrap();
        let direct = relative_weight_filtration(&n, &w).unwrap();
        assert_eq!(found, direct.filtration);
    }

    #[test]
    fn tate_orbit_limit() {
        // Elliptic Tate orbit: F = <e0> at level 1, N(e0) = e1, pure weight 1.
        let n = NilpotentOperator::new(mat(&[&[0, 0], &[1, 0]])).unwrap();
        let w = IncreasingFiltration::new(2, vec![(1, Subspace::full(2))]).unwrap();
        let f0 = DecreasingFiltration::new(2, vec![(1, sp(2, &[&[1, 0]]))]).unwrap();
        let out = limit_mhs(&f0, &n, &w).unwrap();
        let v = out.as_limit().expect("valid limit");
        let b = crate::mhs::deligne_bigrading(v).unwrap();
        assert_eq!(b.support(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn bad_orbit_filtration_fails_validation() {
        let n = NilpotentOperator::new(mat(&[&[0, 0], &[1, 0]])).unwrap();
        let w = IncreasingFiltration::new(2, vec![(1, Subspace::full(2))]).unwrap();
        let f0 = DecreasingFiltration::new(2, vec![(1, sp(2, &[&[0, 1]]))]).unwrap();
        let out = limit_mhs(&f0, &n, &w).unwrap();
        assert!(matches!(out, LimitOutcome::NotMixedHodge(_)));
    }

    #[test]
    fn kummer_orbit_limit() {
        let n = NilpotentOperator::new(mat(&[&[0, 0], &[1, 0]])).unwrap();
        let (_, w, _) = fixtures::kummer_raw(&GaussianRational::zero());
        let f0 = DecreasingFiltration::new(2, vec![(0, sp(2, &[&[1, 0]]))]).unwrap();
        let out = limit_mhs(&f0, &n, &w).unwrap();
        let v = out.as_limit().expect("valid limit");
        let b = crate::mhs::deligne_bigrading(v).unwrap();
        assert_eq!(b.support(), vec![(-1, -1), (0, 0)]);
    }
}
