//! Weil operators and graded polarizations.
//!
//! Sign conventions, fixed once and used everywhere: the hermitian form of a
//! weight-`n` pure structure polarized by `q` is `h(u, v) = q(C u, conj v)`
//! with `C` the Weil operator, and `q(x, x) = x^2` on the generator of the
//! Tate structure `Q(1)`, i.e. `C` is the identity on type `(-1,-1)`.
//! Positive definiteness is decided exactly by leading principal minors
//! (`h` is hermitian, so the minors are rational).

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::filtration::{express_in_basis, DecreasingFiltration};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use crate::subspace::Subspace;

use super::MixedHodgeStructure;

/// One rational bilinear form per weight, written on the canonical
/// (echelon) basis of the corresponding graded piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolarization {
    forms: BTreeMap<i64, Matrix>,
}

impl GradedPolarization {
    pub fn new(forms: BTreeMap<i64, Matrix>) -> Result<Self> {
        for (k, m) in &forms {
            if !m.is_square() {
                return Err(Error::Structural(format!(
                    "polarization at weight {k} not square"
                )));
            }
            if !m.is_real() {
                return Err(Error::Structural(format!(
                    "polarization at weight {k} must have rational entries"
                )));
            }
        }
        Ok(GradedPolarization { forms })
    }

    pub fn form(&self, k: i64) -> Option<&Matrix> {
        self.forms.get(&k)
    }

    pub fn levels(&self) -> impl Iterator<Item = i64> + '_ {
        self.forms.keys().copied()
    }

    /// Evaluate `q_k` on two vectors given in graded-piece basis coordinates.
    pub fn eval(
        &self,
        k: i64,
        x: &[GaussianRational],
        y: &[GaussianRational],
    ) -> Result<GaussianRational> {
        let q = self
            .form(k)
            .ok_or_else(|| Error::Structural(format!("no polarization at weight {k}")))?;
        let qy = q.mul_vec(y)?;
        let mut acc = GaussianRational::zero();
        for (a, b) in x.iter().zip(qy.iter()) {
            acc = acc + a.mul_ref(b);
        }
        Ok(acc)
    }
}

/// The Weil operator of a pure structure of weight `n`: the real matrix
/// acting as `i^(p-q)` on each `V^{p,q}`.  Satisfies `C^2 = (-1)^n`.
pub fn weil_operator(v: &MixedHodgeStructure) -> Result<Matrix> {
    let Some(n) = v.pure_weight() else {
        return Err(Error::NotPure(
            "weil operator needs a single weight level".into(),
        ));
    };
    let f = v.hodge();
    let hodge_pieces = pure_pieces(f, n)?;
    weil_from_pieces(&hodge_pieces, v.rank())
}

/// `V^{p,q} = F^p ∩ conj(F^q)` for `p + q = n`, with the dimension check.
fn pure_pieces(f: &DecreasingFiltration, n: i64) -> Result<Vec<(i64, i64, Subspace)>> {
    let lo = (n - f.max_jump()).min(f.min_jump() - 1);
    let hi = f.max_jump();
    let mut pieces = Vec::new();
    let mut total = 0usize;
    for p in lo..=hi {
        let q = n - p;
        let piece = f.at(p).intersect(&f.at(q).conjugate())?;
        if !piece.is_zero() {
            total += piece.dim();
            pieces.push((p, q, piece));
        }
    }
    if total != f.ambient_dim() {
        return Err(Error::NotPure("Hodge decomposition does not span".into()));
    }
    Ok(pieces)
}

fn weil_from_pieces(pieces: &[(i64, i64, Subspace)], n: usize) -> Result<Matrix> {
    let mut cols = Vec::new();
    let mut factors = Vec::new();
    for (p, q, s) in pieces {
        for r in 0..s.dim() {
            cols.push(s.basis().row(r).to_vec());
            factors.push(i_power(p - q));
        }
    }
    if cols.len() != n {
        return Err(Error::NotPure("pieces do not form a basis".into()));
    }
    let basis = Matrix::from_rows(cols)?.transpose();
    let inv = basis
        .inverse()
        .ok_or_else(|| Error::Internal("Hodge basis is singular".into()))?;
    let mut diag = Matrix::zero(n, n);
    for (k, f) in factors.iter().enumerate() {
        diag.set(k, k, f.clone());
    }
    let c = basis.mul_mat(&diag)?.mul_mat(&inv)?;
    if !c.is_real() {
        return Err(Error::Internal("Weil operator is not real".into()));
    }
    Ok(c)
}

/// `i^k` as an exact Gaussian rational.
pub fn i_power(k: i64) -> GaussianRational {
    match k.rem_euclid(4) {
        0 => GaussianRational::one(),
        1 => GaussianRational::i(),
        2 => -GaussianRational::one(),
        _ => -GaussianRational::i(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationLevelReport {
    pub level: i64,
    pub symmetry_ok: bool,
    pub nondegenerate: bool,
    pub positive_definite: bool,
    pub hodge_orthogonal: bool,
}

impl PolarizationLevelReport {
    pub fn ok(&self) -> bool {
        self.symmetry_ok && self.nondegenerate && self.positive_definite && self.hodge_orthogonal
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationReport {
    pub polarized: bool,
    pub levels: Vec<PolarizationLevelReport>,
}

/// Check that `q` graded-polarizes `v`: each `q_k` is `(-1)^k`-symmetric and
/// nondegenerate, the hermitian form `h(u, v) = q_k(C u, conj v)` is positive
/// definite on `Gr_k`, and the Hodge decomposition of `Gr_k` is h-orthogonal.
pub fn check_graded_polarization(
    v: &MixedHodgeStructure,
    q: &GradedPolarization,
) -> Result<PolarizationReport> {
    let mut levels = Vec::new();
    for k in v.weight_levels() {
        let gr = v.graded_piece(k)?;
        let d = gr.dim();
        let form = q
            .form(k)
            .ok_or_else(|| Error::Structural(format!("missing polarization at weight {k}")))?;
        if form.rows() != d {
            return Err(Error::Structural(format!(
                "polarization at weight {k} is {}x{}, graded piece has dimension {d}",
                form.rows(),
                form.cols()
            )));
        }
        let sign = if k.rem_euclid(2) == 0 {
            GaussianRational::one()
        } else {
            -GaussianRational::one()
        };
        let symmetry_ok = form.transpose() == form.scale(&sign);
        let nondegenerate = !form.det().is_zero();

        // Induced pure structure of weight k in the graded piece's own basis
        // coordinates (the basis is real, so conjugation commutes).
        let f_on_gr = induced_hodge_in_basis(v, k)?;
        let pieces = pure_pieces(&f_on_gr, k)?;
        let c = weil_from_pieces(&pieces, d)?;
        // H[i][j] = h(b_i, b_j) = (C b_i)^T Q conj(b_j) = (C^T Q)[i][j].
        let h = c.transpose().mul_mat(form)?;
        let positive_definite =
            nondegenerate && h == h.conjugate_transpose() && leading_minors_positive(&h);

        let mut hodge_orthogonal = true;
        'outer: for (a, (_, _, sa)) in pieces.iter().enumerate() {
            for (b, (_, _, sb)) in pieces.iter().enumerate() {
                if a == b {
                    continue;
                }
                for ra in 0..sa.dim() {
                    for rb in 0..sb.dim() {
                        let hv = pair_h(&h, sa.basis().row(ra), sb.basis().row(rb))?;
                        if !hv.is_zero() {
                            hodge_orthogonal = false;
                            break 'outer;
                        }
                    }
                }
            }
        }

        levels.push(PolarizationLevelReport {
            level: k,
            symmetry_ok,
            nondegenerate,
            positive_definite,
            hodge_orthogonal,
        });
    }
    Ok(PolarizationReport {
        polarized: levels.iter().all(|l| l.ok()),
        levels,
    })
}

/// Hodge filtration on `Gr_k` rewritten in the graded piece's basis.
pub fn induced_hodge_in_basis(v: &MixedHodgeStructure, k: i64) -> Result<DecreasingFiltration> {
    let gr = v.graded_piece(k)?;
    let on_quotient = v.induced_hodge_on_graded(k)?;
    let steps = on_quotient
        .jumps()
        .iter()
        .map(|(p, s)| Ok((*p, express_in_basis(s, &gr)?)))
        .collect::<Result<Vec<_>>>()?;
    DecreasingFiltration::new(gr.dim(), steps)
}

/// `h(u, v) = u^T H conj(v)` for coordinate vectors.
fn pair_h(h: &Matrix, u: &[GaussianRational], v: &[GaussianRational]) -> Result<GaussianRational> {
    let hv = h.mul_vec(&v.iter().map(|x| x.conj()).collect::<Vec<_>>())?;
    let mut acc = GaussianRational::zero();
    for (a, b) in u.iter().zip(hv.iter()) {
        acc = acc + a.mul_ref(b);
    }
    Ok(acc)
}

/// Sylvester's criterion for a hermitian matrix, exact: all leading
/// principal minors are (real) positive rationals.
fn leading_minors_positive(h: &Matrix) -> bool {
    let n = h.rows();
    for k in 1..=n {
        let sub = Matrix::from_fn(k, k, |r, c| h.at(r, c).clone());
        let d = sub.det();
        if !d.is_real() || !d.re.is_positive() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::parse_gaussian;

    #[test]
    fn weil_operator_elliptic() {
        let v = fixtures::elliptic(&GaussianRational::i()).unwrap();
        let c = weil_operator(&v).unwrap();
        // i on e0 + i e1 and -i on e0 - i e1 sends e0 to -e1 and e1 to e0.
        let expected = Matrix::from_rows(vec![
            vec![GaussianRational::zero(), GaussianRational::one()],
            vec![-GaussianRational::one(), GaussianRational::zero()],
        ])
        .unwrap();
        assert_eq!(c, expected);
        // C^2 = (-1)^1.
        assert_eq!(
            c.mul_mat(&c).unwrap(),
            Matrix::identity(2).scale(&-GaussianRational::one())
        );
    }

    #[test]
    fn weil_operator_tate_types() {
        // Weight 0 Hodge-Tate type (0,0) and weight -2 type (-1,-1): identity.
        for v in [fixtures::tate(0), fixtures::tate(1)] {
            let c = weil_operator(&v).unwrap();
            assert_eq!(c, Matrix::identity(1));
        }
    }

    #[test]
    fn elliptic_polarization() {
        let v = fixtures::elliptic(&GaussianRational::i()).unwrap();
        let q = fixtures::elliptic_polarization();
        let report = check_graded_polarization(&v, &q).unwrap();
        assert!(report.polarized, "{report:?}");

        // Same q with F^1 = <e0 - i e1> flips the sign of h.
        let bad = fixtures::elliptic(&-GaussianRational::i());
        // Im tau < 0 still builds a valid MHS; positivity is what fails.
        let bad = bad.unwrap();
        let report = check_graded_polarization(&bad, &q).unwrap();
        assert!(!report.polarized);
        assert!(!report.levels[0].positive_definite);
    }

    #[test]
    fn tate_zero_is_polarized_by_one() {
        let v = fixtures::tate(0);
        let q = fixtures::tate_polarization();
        let report = check_graded_polarization(&v, &q).unwrap();
        assert!(report.polarized);
    }

    #[test]
    fn weil_fails_on_mixed_input() {
        let v = fixtures::kummer(&parse_gaussian("i").unwrap());
        assert!(weil_operator(&v).is_err());
    }

    #[test]
    fn kummer_graded_polarization() {
        let v = fixtures::kummer(&parse_gaussian("2+3*i").unwrap());
        let q = fixtures::kummer_polarization();
        let report = check_graded_polarization(&v, &q).unwrap();
        assert!(report.polarized, "{report:?}");
    }
}
