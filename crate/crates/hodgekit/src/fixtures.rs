//! Worked examples used by tests, the guide and the shipped fixture files,
//! plus a deterministic generator of randomized valid structures.
//!
//! The named fixtures are the standard desk-scale degenerations:
//!
//! - [`kummer`]: the rank-2 extension of `Z(0)` by `Z(1)` with extension
//!   parameter `z` (weights 0 and -2, `F^0 = <e0 + z e1>`),
//! - [`elliptic`]: the pure weight-1 structure `F^1 = <e0 + tau e1>`,
//! - [`tate`]: the Tate structures `Q(n)` of weight `-2n` and type `(-n,-n)`.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::matrix::Matrix;
use crate::mhs::{validate_mhs, GradedPolarization, MixedHodgeStructure, ValidationReport};
use crate::scalar::{rat, GaussianRational, Rational};
use crate::subspace::{map_constraint_space, unflatten_map, Subspace};

fn g(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

/// Raw Kummer data `K(z)`: weights -2 and 0, `F^0 = <e0 + z e1>`.
pub fn kummer_raw(z: &GaussianRational) -> (usize, IncreasingFiltration, DecreasingFiltration) {
    let w_minus2 = Subspace::span(2, &[vec![g(0), g(1)]]).unwrap();
    let weight =
        IncreasingFiltration::new(2, vec![(-2, w_minus2), (0, Subspace::full(2))]).unwrap();
    let f0 = Subspace::span(2, &[vec![g(1), z.clone()]]).unwrap();
    let hodge = DecreasingFiltration::new(2, vec![(0, f0)]).unwrap();
    (2, weight, hodge)
}

/// The Kummer structure `K(z)`, valid for every Gaussian rational `z`.
pub fn kummer(z: &GaussianRational) -> MixedHodgeStructure {
    let (rank, weight, hodge) = kummer_raw(z);
    MixedHodgeStructure::new(rank, weight, hodge).expect("K(z) is a mixed Hodge structure")
}

/// Graded polarization of `K(z)`: `q_0 = (1)` on `Gr_0`, `q_{-2} = (1)` on `Gr_{-2}`.
pub fn kummer_polarization() -> GradedPolarization {
    let one = Matrix::identity(1);
    GradedPolarization::new(BTreeMap::from([(0, one.clone()), (-2, one)])).unwrap()
}

/// Raw pure weight-1 data with `F^1 = <e0 + tau e1>`.
pub fn elliptic_raw(tau: &GaussianRational) -> (usize, IncreasingFiltration, DecreasingFiltration) {
    let weight = IncreasingFiltration::new(2, vec![(1, Subspace::full(2))]).unwrap();
    let f1 = Subspace::span(2, &[vec![g(1), tau.clone()]]).unwrap();
    let hodge = DecreasingFiltration::new(2, vec![(1, f1)]).unwrap();
    (2, weight, hodge)
}

/// The elliptic-curve-shaped pure structure; errors when `tau` is real.
pub fn elliptic(tau: &GaussianRational) -> Result<MixedHodgeStructure> {
    let (rank, weight, hodge) = elliptic_raw(tau);
    MixedHodgeStructure::new(rank, weight, hodge)
}

pub fn elliptic_report(tau: &GaussianRational) -> Result<ValidationReport> {
    let (rank, weight, hodge) = elliptic_raw(tau);
    validate_mhs(rank, &weight, &hodge, false)
}

/// `q = [[0, 1], [-1, 0]]` on `Gr_1`, the standard symplectic polarization.
pub fn elliptic_polarization() -> GradedPolarization {
    let q = Matrix::from_rows(vec![vec![g(0), g(1)], vec![g(-1), g(0)]]).unwrap();
    GradedPolarization::new(BTreeMap::from([(1, q)])).unwrap()
}

/// The Tate structure `Q(n)`: rank 1, weight `-2n`, type `(-n, -n)`.
pub fn tate(n: i64) -> MixedHodgeStructure {
    let weight = IncreasingFiltration::new(1, vec![(-2 * n, Subspace::full(1))]).unwrap();
    let hodge = DecreasingFiltration::new(1, vec![(-n, Subspace::full(1))]).unwrap();
    MixedHodgeStructure::new(1, weight, hodge).expect("Q(n)")
}

/// `Q(n)^k` on the standard basis.
pub fn tate_power(n: i64, k: usize) -> MixedHodgeStructure {
    let weight = IncreasingFiltration::new(k, vec![(-2 * n, Subspace::full(k))]).unwrap();
    let hodge = DecreasingFiltration::new(k, vec![(-n, Subspace::full(k))]).unwrap();
    MixedHodgeStructure::new(k, weight, hodge).expect("Q(n)^k")
}

/// `q(x, x) = x^2` on the generator, per the fixed sign convention.
pub fn tate_polarization() -> GradedPolarization {
    let mut forms = BTreeMap::new();
    for k in -6..=6 {
        forms.insert(k, Matrix::identity(1));
    }
    GradedPolarization::new(forms).unwrap()
}

// ---------------------------------------------------------------------------
// One-variable local models
// ---------------------------------------------------------------------------

use crate::admissibility::poly::Poly;
use crate::admissibility::LocalModel1D;
use crate::monodromy::NilpotentOperator;

fn poly_rows(rows: &[&[&[i64]]]) -> Vec<Vec<Poly>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|coeffs| Poly::new(coeffs.iter().map(|&c| g(c)).collect()))
                .collect()
        })
        .collect()
}

fn kummer_monodromy() -> NilpotentOperator {
    let mut e = Matrix::zero(2, 2);
    e.set(1, 0, g(1));
    NilpotentOperator::new(e).unwrap()
}

/// The admissible Kummer model: `Psi(q) = <e0>`, `N: e0 -> e1`, Kummer `W`.
/// Its period map at `z` is `K(z)`.
pub fn kummer_model() -> LocalModel1D {
    let (_, weight, _) = kummer_raw(&GaussianRational::zero());
    LocalModel1D::new(
        2,
        weight,
        kummer_polarization(),
        kummer_monodromy(),
        BTreeMap::from([(0, poly_rows(&[&[&[1], &[]]]))]),
    )
    .unwrap()
}

/// The non-admissible exp-family-at-infinity model: `Psi(q) = <q e0 + e1>`,
/// trivial monodromy, Kummer `W`.  Condition (2) fails at the puncture.
pub fn exp_family_model() -> LocalModel1D {
    let (_, weight, _) = kummer_raw(&GaussianRational::zero());
    LocalModel1D::new(
        2,
        weight,
        kummer_polarization(),
        NilpotentOperator::new(Matrix::zero(2, 2)).unwrap(),
        BTreeMap::from([(0, poly_rows(&[&[&[0, 1], &[1]]]))]),
    )
    .unwrap()
}

/// The exp-family model reparametrized by `q -> u q` for a unit `u`.
pub fn exp_family_model_scaled(u: &GaussianRational) -> LocalModel1D {
    let (_, weight, _) = kummer_raw(&GaussianRational::zero());
    let row = vec![
        Poly::new(vec![GaussianRational::zero(), u.clone()]),
        Poly::constant(GaussianRational::one()),
    ];
    LocalModel1D::new(
        2,
        weight,
        kummer_polarization(),
        NilpotentOperator::new(Matrix::zero(2, 2)).unwrap(),
        BTreeMap::from([(0, vec![row])]),
    )
    .unwrap()
}

/// The elliptic Tate orbit model: pure weight 1, `Psi(q) = <e0>` at level 1,
/// `N: e0 -> e1`.  Pre-admissible.
pub fn tate_orbit_model() -> LocalModel1D {
    let weight = IncreasingFiltration::new(2, vec![(1, Subspace::full(2))]).unwrap();
    LocalModel1D::new(
        2,
        weight,
        elliptic_polarization(),
        kummer_monodromy(),
        BTreeMap::from([(1, poly_rows(&[&[&[1], &[]]]))]),
    )
    .unwrap()
}

/// The weight counterexample: `W` jumps at -1 and 0, `N: e0 -> e1`, constant
/// `Psi`.  The relative weight filtration does not exist (condition (1)).
pub fn weight_counterexample_model() -> LocalModel1D {
    let w_minus1 = Subspace::span(2, &[vec![g(0), g(1)]]).unwrap();
    let weight =
        IncreasingFiltration::new(2, vec![(-1, w_minus1), (0, Subspace::full(2))]).unwrap();
    let mut forms = BTreeMap::new();
    forms.insert(0, Matrix::identity(1));
    forms.insert(-1, Matrix::zero(1, 1));
    LocalModel1D::new(
        2,
        weight,
        GradedPolarization::new(forms).unwrap(),
        kummer_monodromy(),
        BTreeMap::from([(0, poly_rows(&[&[&[1], &[]]]))]),
    )
    .unwrap()
}

/// Trivial model: `N = 0` and constant `Psi`; the probe reports constant
/// coordinates at the base grading.
pub fn constant_model() -> LocalModel1D {
    let (_, weight, _) = kummer_raw(&GaussianRational::zero());
    LocalModel1D::new(
        2,
        weight,
        kummer_polarization(),
        NilpotentOperator::new(Matrix::zero(2, 2)).unwrap(),
        BTreeMap::from([(0, poly_rows(&[&[&[1], &[]]]))]),
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// Deterministic randomized corpus
// ---------------------------------------------------------------------------

/// SplitMix64: tiny deterministic generator so the corpus is reproducible
/// without pulling a dependency into the library.
pub struct DetRng {
    state: u64,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng {
            state: seed.wrapping_add(0x9e3779b97f4a7c15),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// A small rational with numerator in `[-max, max]` and denominator in `[1, den]`.
    pub fn rational(&mut self, max: i64, den: i64) -> Rational {
        rat(self.int_in(-max, max), self.int_in(1, den))
    }

    pub fn gaussian(&mut self, max: i64, den: i64) -> GaussianRational {
        GaussianRational::new(self.rational(max, den), self.rational(max, den))
    }
}

/// A split graded-polarized model: bigrading pieces sit on standard basis
/// vectors, conjugate pairs as `<e_a ± i e_b>`, and the polarization is the
/// standard block form making every piece positive.
pub struct SplitModel {
    pub mhs: MixedHodgeStructure,
    pub polarization: GradedPolarization,
}

/// Generate a random split polarized model of rank at most `max_rank`.
pub fn random_split_model(rng: &mut DetRng, max_rank: usize) -> SplitModel {
    // Choose weight levels and piece shapes until the rank budget is filled.
    let base = rng.int_in(-2, 2);
    let n_levels = rng.int_in(1, 3);
    let spacing = rng.int_in(1, 2);
    let levels: Vec<i64> = (0..n_levels).map(|t| base - spacing * t).collect();
    let mut shapes: Vec<(i64, Vec<(i64, i64)>)> = Vec::new();
    let mut rank = 0usize;
    for &k in &levels {
        let mut types = Vec::new();
        let slots = rng.int_in(1, 2);
        for _ in 0..slots {
            if k % 2 == 0 && rng.below(2) == 0 {
                if rank + 1 <= max_rank {
                    types.push((k / 2, k / 2));
                    rank += 1;
                }
            } else {
                let d = rng.int_in(1, 2);
                let p = if k.rem_euclid(2) == 0 {
                    k / 2 + d
                } else {
                    (k + 1).div_euclid(2) + d - 1
                };
                let q = k - p;
                if p > q && rank + 2 <= max_rank {
                    types.push((p, q));
                    rank += 2;
                }
            }
        }
        if !types.is_empty() {
            shapes.push((k, types));
        }
    }
    if shapes.is_empty() {
        shapes.push((0, vec![(0, 0)]));
        rank = 1;
    }
    build_split_model(rank, &shapes)
}

/// Build the split model with the given `(weight, [(p, q) types])` shape;
/// conjugate pairs `(p, q)` with `p > q` consume two basis vectors.
pub fn build_split_model(rank: usize, shapes: &[(i64, Vec<(i64, i64)>)]) -> SplitModel {
    let mut level_of_vec: Vec<(i64, usize)> = Vec::new(); // (level, index) in order
    let mut hodge_pieces: Vec<(i64, i64, Vec<usize>)> = Vec::new();
    let mut idx = 0usize;
    let mut shapes_sorted = shapes.to_vec();
    shapes_sorted.sort_by_key(|(k, _)| *k);
    for (k, types) in &shapes_sorted {
        for &(p, q) in types {
            assert_eq!(p + q, *k, "piece type must match its weight");
            if p == q {
                hodge_pieces.push((p, q, vec![idx]));
                level_of_vec.push((*k, idx));
                idx += 1;
            } else {
                assert!(p > q);
                hodge_pieces.push((p, q, vec![idx, idx + 1]));
                level_of_vec.push((*k, idx));
                level_of_vec.push((*k, idx + 1));
                idx += 2;
            }
        }
    }
    assert_eq!(idx, rank, "shape ranks must sum to the rank");

    // Weight filtration: standard vectors of level <= k.
    let levels: Vec<i64> = {
        let mut l: Vec<i64> = shapes_sorted.iter().map(|(k, _)| *k).collect();
        l.dedup();
        l
    };
    let mut weight_steps = Vec::new();
    for &k in &levels {
        let rows: Vec<Vec<GaussianRational>> = level_of_vec
            .iter()
            .filter(|(l, _)| *l <= k)
            .map(|(_, i)| unit_row(rank, *i))
            .collect();
        weight_steps.push((k, Subspace::span(rank, &rows).unwrap()));
    }
    let weight = IncreasingFiltration::new(rank, weight_steps).unwrap();

    // Hodge filtration: F^p = sum of pieces with first index >= p, computed
    // at every integer in the hull so the jump indices come out right.
    let p_min = hodge_pieces
        .iter()
        .flat_map(|(p, q, _)| [*p, *q])
        .min()
        .unwrap();
    let p_max = hodge_pieces
        .iter()
        .flat_map(|(p, q, _)| [*p, *q])
        .max()
        .unwrap();
    let mut hodge_steps = Vec::new();
    for p in p_min..=p_max {
        let mut rows = Vec::new();
        for (r, s, vecs) in &hodge_pieces {
            if *r >= p {
                rows.push(piece_generator(rank, vecs, false));
            }
            if *s >= p && *r != *s {
                rows.push(piece_generator(rank, vecs, true));
            }
        }
        hodge_steps.push((p, Subspace::span(rank, &rows).unwrap()));
    }
    let hodge = DecreasingFiltration::new(rank, hodge_steps).unwrap();
    let mhs = MixedHodgeStructure::new(rank, weight, hodge).expect("split model is an MHS");

    // Standard positive polarization blocks per level.
    let mut forms = BTreeMap::new();
    for &k in &levels {
        let members: Vec<usize> = level_of_vec
            .iter()
            .filter(|(l, _)| *l == k)
            .map(|(_, i)| *i)
            .collect();
        let d = members.len();
        let mut form = Matrix::zero(d, d);
        let pos = |i: usize| members.iter().position(|&m| m == i).unwrap();
        for (p, q, vecs) in &hodge_pieces {
            if p + q != k {
                continue;
            }
            if p == q {
                // i^0 = 1: the form is +1 on the diagonal.
                form.set(pos(vecs[0]), pos(vecs[0]), g(1));
            } else if k % 2 == 0 {
                // h = i^(p-q) * 2s > 0 picks s = (-1)^((p-q)/2).
                let s = if ((p - q) / 2) % 2 == 0 { g(1) } else { g(-1) };
                form.set(pos(vecs[0]), pos(vecs[0]), s.clone());
                form.set(pos(vecs[1]), pos(vecs[1]), s);
            } else {
                // h = i^(p-q) * (-2it) > 0 picks t by (p-q) mod 4.
                let t = if (p - q).rem_euclid(4) == 1 {
                    g(1)
                } else {
                    g(-1)
                };
                form.set(pos(vecs[0]), pos(vecs[1]), t.clone());
                form.set(pos(vecs[1]), pos(vecs[0]), -t);
            }
        }
        forms.insert(k, form);
    }
    let polarization = GradedPolarization::new(forms).unwrap();
    SplitModel { mhs, polarization }
}

fn unit_row(n: usize, i: usize) -> Vec<GaussianRational> {
    let mut v = vec![g(0); n];
    v[i] = g(1);
    v
}

fn piece_generator(n: usize, vecs: &[usize], conj: bool) -> Vec<GaussianRational> {
    let mut v = vec![g(0); n];
    if vecs.len() == 1 {
        v[vecs[0]] = g(1);
    } else {
        v[vecs[0]] = g(1);
        v[vecs[1]] = if conj {
            -GaussianRational::i()
        } else {
            GaussianRational::i()
        };
    }
    v
}

/// A basis of `W_{-1} End(V)` (weight-lowering endomorphisms).
pub fn weight_lowering_basis(w: &IncreasingFiltration) -> Result<Vec<Matrix>> {
    let n = w.ambient_dim();
    let constraints: Vec<(Subspace, Subspace)> = w
        .jumps()
        .iter()
        .map(|(k, s)| (s.clone(), w.at(k - 1)))
        .collect();
    let space = map_constraint_space(n, n, &constraints)?;
    Ok((0..space.dim())
        .map(|r| unflatten_map(n, n, space.basis().row(r)))
        .collect())
}

/// A random unipotent twist of a split model: `F' = exp(X) F` with `X` a
/// random Gaussian-rational combination of weight-lowering maps.
pub fn random_twist(rng: &mut DetRng, model: &SplitModel) -> MixedHodgeStructure {
    let basis = weight_lowering_basis(model.mhs.weight()).expect("lowering basis");
    let n = model.mhs.rank();
    let mut x = Matrix::zero(n, n);
    for b in &basis {
        if rng.below(3) == 0 {
            continue;
        }
        let c = rng.gaussian(2, 3);
        x = x.add_mat(&b.scale(&c)).unwrap();
    }
    let u = x
        .exp_nilpotent()
        .expect("weight-lowering maps are nilpotent");
    model
        .mhs
        .twist_hodge(&u)
        .expect("unipotent twist of an MHS is an MHS")
}

/// The acceptance corpus: `count` randomized valid structures of rank at
/// most `max_rank`, each a random unipotent twist of a random split model.
pub fn random_corpus(
    seed: u64,
    count: usize,
    max_rank: usize,
) -> Vec<(SplitModel, MixedHodgeStructure)> {
    let mut rng = DetRng::new(seed);
    (0..count)
        .map(|_| {
            let model = random_split_model(&mut rng, max_rank);
            let twisted = random_twist(&mut rng, &model);
            (model, twisted)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_members_are_valid_and_varied() {
        let corpus = random_corpus(7, 25, 6);
        assert_eq!(corpus.len(), 25);
        let mut ranks = std::collections::BTreeSet::new();
        for (model, twisted) in &corpus {
            assert_eq!(model.mhs.rank(), twisted.rank());
            ranks.insert(twisted.rank());
            assert!(twisted.rank() <= 6);
        }
        assert!(ranks.len() > 1, "corpus should vary in rank: {ranks:?}");
    }

    #[test]
    fn split_models_are_split() {
        let mut rng = DetRng::new(3);
        for _ in 0..10 {
            let model = random_split_model(&mut rng, 6);
            assert!(model.mhs.is_split_over_r().unwrap());
        }
    }

    #[test]
    fn split_models_are_polarized() {
        let mut rng = DetRng::new(11);
        for _ in 0..10 {
            let model = random_split_model(&mut rng, 6);
            let report =
                crate::mhs::check_graded_polarization(&model.mhs, &model.polarization).unwrap();
            assert!(report.polarized, "{report:?}");
        }
    }
}
