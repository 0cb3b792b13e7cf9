//! The Deligne bigrading.
//!
//! Computed by the closed formula
//!
//! ```text
//! I^{p,q} = (F^p ∩ W_{p+q}) ∩ (Fbar^q ∩ W_{p+q} + Σ_{j>=0} Fbar^{q-1-j} ∩ W_{p+q-2-j})
//! ```
//!
//! and verified on the spot: the pieces must sum directly to the whole
//! space, recover both filtrations, and satisfy the conjugation congruence
//! `I^{p,q} = conj(I^{q,p}) mod ⊕_{r<p, s<q} I^{r,s}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use crate::subspace::Subspace;

use super::MixedHodgeStructure;

/// A decomposition `V_C = ⊕ J^{p,q}` refining both filtrations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bigrading {
    ambient: usize,
    pieces: BTreeMap<(i64, i64), Subspace>,
}

impl Bigrading {
    pub fn new(ambient: usize, pieces: BTreeMap<(i64, i64), Subspace>) -> Self {
        let pieces = pieces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        Bigrading { ambient, pieces }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// `J^{p,q}`; zero when absent.
    pub fn piece(&self, p: i64, q: i64) -> Subspace {
        self.pieces
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    /// The nonzero pieces in lexicographic `(p, q)` order.
    pub fn pieces(&self) -> impl Iterator<Item = (&(i64, i64), &Subspace)> {
        self.pieces.iter()
    }

    pub fn support(&self) -> Vec<(i64, i64)> {
        self.pieces.keys().copied().collect()
    }

    /// Hodge numbers `h^{p,q} = dim J^{p,q}`.
    pub fn hodge_numbers(&self) -> BTreeMap<(i64, i64), usize> {
        self.pieces.iter().map(|(&k, s)| (k, s.dim())).collect()
    }

    /// `⊕_{p+q=l} J^{p,q}`.
    pub fn weight_space(&self, l: i64) -> Result<Subspace> {
        let mut acc = Subspace::zero(self.ambient);
        for (&(p, q), s) in &self.pieces {
            if p + q == l {
                acc = acc.sum(s)?;
            }
        }
        Ok(acc)
    }

    /// Direct sum of the pieces selected by `keep`.
    pub fn partial_sum(&self, mut keep: impl FnMut(i64, i64) -> bool) -> Result<Subspace> {
        let mut acc = Subspace::zero(self.ambient);
        for (&(p, q), s) in &self.pieces {
            if keep(p, q) {
                acc = acc.sum(s)?;
            }
        }
        Ok(acc)
    }

    /// Conjugation-symmetric on the nose: `conj(J^{p,q}) = J^{q,p}`.
    pub fn is_real_split(&self) -> bool {
        self.pieces
            .iter()
            .all(|(&(p, q), s)| s.conjugate() == self.piece(q, p))
    }

    /// A basis of `V_C` listing each piece's basis in order, as matrix rows.
    pub fn adapted_basis(&self) -> Matrix {
        let mut rows: Vec<Vec<GaussianRational>> = Vec::with_capacity(self.ambient);
        for s in self.pieces.values() {
            rows.extend(s.basis().row_vecs());
        }
        Matrix::from_rows(rows).expect("adapted basis")
    }

    /// Projection matrices onto each piece along the others.
    pub fn projectors(&self) -> Result<BTreeMap<(i64, i64), Matrix>> {
        let basis = self.adapted_basis();
        if basis.rows() != self.ambient {
            return Err(Error::Internal("bigrading does not span".into()));
        }
        // Columns of P are the adapted basis vectors.
        let p_cols = basis.transpose();
        let p_inv = p_cols
            .inverse()
            .ok_or_else(|| Error::Internal("bigrading basis is singular".into()))?;
        let mut out = BTreeMap::new();
        let mut offset = 0usize;
        for (&key, s) in &self.pieces {
            let d = s.dim();
            let mut diag = Matrix::zero(self.ambient, self.ambient);
            for k in offset..offset + d {
                diag.set(k, k, GaussianRational::one());
            }
            let proj = p_cols.mul_mat(&diag)?.mul_mat(&p_inv)?;
            out.insert(key, proj);
            offset += d;
        }
        Ok(out)
    }

    /// Check the bigrading axioms and the Deligne congruence against the
    /// filtrations of `v`.
    pub fn verify(&self, v: &MixedHodgeStructure) -> Result<()> {
        let n = self.ambient;
        let total: usize = self.pieces.values().map(|s| s.dim()).sum();
        let span = self.partial_sum(|_, _| true)?;
        if total != n || span.dim() != n {
            return Err(Error::Internal(
                "bigrading pieces do not sum directly".into(),
            ));
        }
        for (p, _) in v.hodge().jumps() {
            let direct = self.partial_sum(|r, _| r >= *p)?;
            if direct != v.hodge().at(*p) {
                return Err(Error::Internal(format!(
                    "F^{p} is not the span of J^(r>={p},s)"
                )));
            }
        }
        for (k, _) in v.weight().jumps() {
            let direct = self.partial_sum(|r, s| r + s <= *k)?;
            if direct != v.weight().at(*k) {
                return Err(Error::Internal(format!(
                    "W_{k} is not the span of J^(r+s<={k})"
                )));
            }
        }
        for (&(p, q), s) in &self.pieces {
            if s.dim() != self.piece(q, p).dim() {
                return Err(Error::Internal(
                    "bigrading is not conjugation balanced".into(),
                ));
            }
            let lower = self.partial_sum(|r, t| r < p && t < q)?;
            let allowed = s.sum(&lower)?;
            if !allowed.contains(&self.piece(q, p).conjugate()) {
                return Err(Error::Internal(format!("congruence fails at I^({p},{q})")));
            }
        }
        Ok(())
    }
}

/// Compute the Deligne bigrading of a validated mixed Hodge structure.
pub fn deligne_bigrading(v: &MixedHodgeStructure) -> Result<Bigrading> {
    let n = v.rank();
    let w = v.weight();
    let f = v.hodge();
    let fbar = f.conjugate();
    let k_min = w.min_jump();
    let k_max = w.max_jump();
    let p_hi = f.max_jump();
    let p_lo = (k_min - p_hi).min(f.min_jump() - 1);

    let mut pieces = BTreeMap::new();
    for l in k_min..=k_max {
        let wl = w.at(l);
        for p in p_lo..=p_hi {
            let q = l - p;
            let first = f.at(p).intersect(&wl)?;
            if first.is_zero() {
                continue;
            }
            let mut second = fbar.at(q).intersect(&wl)?;
            let mut j = 0i64;
            loop {
                let wj = w.at(l - 2 - j);
                if wj.is_zero() {
                    break;
                }
                second = second.sum(&fbar.at(q - 1 - j).intersect(&wj)?)?;
                j += 1;
            }
            let piece = first.intersect(&second)?;
            if !piece.is_zero() {
                pieces.insert((p, q), piece);
            }
        }
    }
    let b = Bigrading::new(n, pieces);
    b.verify(v)?;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::parse_gaussian;

    fn line(entries: &[&str]) -> Subspace {
        Subspace::span(
            entries.len(),
            &[entries.iter().map(|s| parse_gaussian(s).unwrap()).collect()],
        )
        .unwrap()
    }

    #[test]
    fn kummer_bigrading() {
        let z = parse_gaussian("i").unwrap();
        let v = fixtures::kummer(&z);
        let b = deligne_bigrading(&v).unwrap();
        assert_eq!(b.support(), vec![(-1, -1), (0, 0)]);
        assert_eq!(b.piece(0, 0), line(&["1", "i"]));
        assert_eq!(b.piece(-1, -1), line(&["0", "1"]));
    }

    #[test]
    fn pure_weight_pieces_are_classical() {
        let tau = parse_gaussian("i").unwrap();
        let v = fixtures::elliptic(&tau).unwrap();
        let b = deligne_bigrading(&v).unwrap();
        // I^{p,q} = F^p ∩ conj(F^q) for a pure structure.
        for (&(p, q), s) in b.pieces() {
            let classical = v
                .hodge()
                .at(p)
                .intersect(&v.hodge().at(q).conjugate())
                .unwrap();
            assert_eq!(*s, classical);
        }
        assert_eq!(b.hodge_numbers().get(&(1, 0)), Some(&1));
        assert_eq!(b.hodge_numbers().get(&(0, 1)), Some(&1));
    }

    #[test]
    fn split_structures_use_the_real_formula() {
        // Split over R: I^{p,q} = F^p ∩ conj(F^q) ∩ W_{p+q}.
        let z = parse_gaussian("3/7").unwrap();
        let v = fixtures::kummer(&z);
        let b = deligne_bigrading(&v).unwrap();
        assert!(b.is_real_split());
        for (&(p, q), s) in b.pieces() {
            let direct = v
                .hodge()
                .at(p)
                .intersect(&v.hodge().at(q).conjugate())
                .unwrap()
                .intersect(&v.weight().at(p + q))
                .unwrap();
            assert_eq!(*s, direct);
        }
    }

    #[test]
    fn projectors_resolve_identity() {
        let z = parse_gaussian("2+3*i").unwrap();
        let v = fixtures::kummer(&z);
        let b = deligne_bigrading(&v).unwrap();
        let projs = b.projectors().unwrap();
        let mut acc = Matrix::zero(2, 2);
        for proj in projs.values() {
            acc = acc.add_mat(proj).unwrap();
        }
        assert_eq!(acc, Matrix::identity(2));
    }
}
