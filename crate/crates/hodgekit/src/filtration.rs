//! Finite increasing and decreasing filtrations.
//!
//! Only jump indices are stored; queries between jumps return the nearest
//! stored step.  Increasing filtrations are zero below their first jump and
//! must exhaust the ambient space at their last; decreasing filtrations are
//! full below their first jump and are materialized down to an explicit
//! zero step, so equal filtrations always have equal representations.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

/// `W_k`, increasing in `k`: zero for `k` below all jumps, full at the top.
#[derive(Clone, PartialEq, Eq)]
pub struct IncreasingFiltration {
    ambient: usize,
    steps: Vec<(i64, Subspace)>,
}

impl IncreasingFiltration {
    /// Build from `(index, value)` pairs.  Values between listed indices
    /// follow the nearest lower step; below the lowest index the filtration
    /// is zero.  The highest value must be the full ambient space.
    pub fn new(ambient: usize, mut steps: Vec<(i64, Subspace)>) -> Result<Self> {
        steps.sort_by_key(|(k, _)| *k);
        let mut jumps: Vec<(i64, Subspace)> = Vec::new();
        let mut prev = Subspace::zero(ambient);
        for (k, space) in steps {
            if space.ambient_dim() != ambient {
                return Err(Error::Structural(format!(
                    "filtration step {k} has ambient {} instead of {ambient}",
                    space.ambient_dim()
                )));
            }
            if let Some((last, _)) = jumps.last() {
                if *last == k {
                    return Err(Error::Structural(format!("duplicate filtration index {k}")));
                }
            }
            if space == prev {
                continue;
            }
            if !space.contains(&prev) {
                return Err(Error::Structural(format!(
                    "increasing filtration is not nested at index {k}"
                )));
            }
            jumps.push((k, space.clone()));
            prev = space;
        }
        if !prev.is_full() {
            return Err(Error::Structural(
                "increasing filtration does not exhaust the ambient space".into(),
            ));
        }
        Ok(IncreasingFiltration {
            ambient,
            steps: jumps,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// `W_k`.
    pub fn at(&self, k: i64) -> Subspace {
        match self.steps.iter().rev().find(|(j, _)| *j <= k) {
            Some((_, s)) => s.clone(),
            None => Subspace::zero(self.ambient),
        }
    }

    pub fn jumps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    pub fn min_jump(&self) -> i64 {
        self.steps.first().map(|(k, _)| *k).unwrap_or(0)
    }

    pub fn max_jump(&self) -> i64 {
        self.steps.last().map(|(k, _)| *k).unwrap_or(0)
    }

    /// All stored subspaces are conjugation stable.
    pub fn is_real(&self) -> bool {
        self.steps.iter().all(|(_, s)| s.is_real())
    }

    /// Image filtration under an invertible map.
    pub fn map(&self, g: &Matrix) -> Result<IncreasingFiltration> {
        let steps = self
            .steps
            .iter()
            .map(|(k, s)| Ok((*k, s.map(g)?)))
            .collect::<Result<Vec<_>>>()?;
        IncreasingFiltration::new(g.rows(), steps)
    }

    /// Restrict along a subspace inclusion: `W_k ∩ S`, rewritten in the
    /// coordinates of `S` provided by `coords` (a dim(S) x n basis matrix).
    pub fn restrict(&self, s: &Subspace) -> Result<IncreasingFiltration> {
        let steps = self
            .steps
            .iter()
            .map(|(k, w)| {
                let int = w.intersect(s)?;
                Ok((*k, express_in_basis(&int, s)?))
            })
            .collect::<Result<Vec<_>>>()?;
        IncreasingFiltration::new(s.dim(), steps)
    }

    /// Quotient filtration `(W_k + S)/S` in quotient coordinates.
    pub fn quotient(&self, s: &Subspace) -> Result<IncreasingFiltration> {
        let steps = self
            .steps
            .iter()
            .map(|(k, w)| Ok((*k, w.quotient_image(s)?)))
            .collect::<Result<Vec<_>>>()?;
        IncreasingFiltration::new(self.ambient - s.dim(), steps)
    }
}

/// `F^p`, decreasing in `p`: full for `p` below all jumps, zero above.
#[derive(Clone, PartialEq, Eq)]
pub struct DecreasingFiltration {
    ambient: usize,
    steps: Vec<(i64, Subspace)>,
}

impl DecreasingFiltration {
    /// Build from `(index, value)` pairs.  For `p` above the highest listed
    /// index the filtration is zero; a trailing zero jump is materialized if
    /// the caller did not provide one.
    pub fn new(ambient: usize, mut steps: Vec<(i64, Subspace)>) -> Result<Self> {
        steps.sort_by_key(|(p, _)| *p);
        let mut jumps: Vec<(i64, Subspace)> = Vec::new();
        let mut prev = Subspace::full(ambient);
        let mut last_index = None;
        for (p, space) in steps {
            if space.ambient_dim() != ambient {
                return Err(Error::Structural(format!(
                    "filtration step {p} has ambient {} instead of {ambient}",
                    space.ambient_dim()
                )));
            }
            if last_index == Some(p) {
                return Err(Error::Structural(format!("duplicate filtration index {p}")));
            }
            last_index = Some(p);
            if space == prev {
                continue;
            }
            if !prev.contains(&space) {
                return Err(Error::Structural(format!(
                    "decreasing filtration is not nested at index {p}"
                )));
            }
            jumps.push((p, space.clone()));
            prev = space;
        }
        if !prev.is_zero() {
            // "Above the highest provided index the filtration is zero":
            // the zero jump sits just past the last index the caller listed.
            let next = last_index.map(|p| p + 1).unwrap_or(1);
            jumps.push((next, Subspace::zero(ambient)));
        }
        Ok(DecreasingFiltration {
            ambient,
            steps: jumps,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// `F^p`.
    pub fn at(&self, p: i64) -> Subspace {
        match self.steps.iter().rev().find(|(j, _)| *j <= p) {
            Some((_, s)) => s.clone(),
            None => Subspace::full(self.ambient),
        }
    }

    pub fn jumps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    /// Smallest index with `F^p != V` (by convention the first jump).
    pub fn min_jump(&self) -> i64 {
        self.steps.first().map(|(p, _)| *p).unwrap_or(0)
    }

    /// Smallest index with `F^p = 0`.
    pub fn max_jump(&self) -> i64 {
        self.steps.last().map(|(p, _)| *p).unwrap_or(0)
    }

    /// Conjugate filtration `p -> conj(F^p)`.
    pub fn conjugate(&self) -> DecreasingFiltration {
        DecreasingFiltration {
            ambient: self.ambient,
            steps: self
                .steps
                .iter()
                .map(|(p, s)| (*p, s.conjugate()))
                .collect(),
        }
    }

    pub fn map(&self, g: &Matrix) -> Result<DecreasingFiltration> {
        let steps = self
            .steps
            .iter()
            .map(|(p, s)| Ok((*p, s.map(g)?)))
            .collect::<Result<Vec<_>>>()?;
        DecreasingFiltration::new(g.rows(), steps)
    }

    pub fn restrict(&self, s: &Subspace) -> Result<DecreasingFiltration> {
        let steps = self
            .steps
            .iter()
            .map(|(p, f)| {
                let int = f.intersect(s)?;
                Ok((*p, express_in_basis(&int, s)?))
            })
            .collect::<Result<Vec<_>>>()?;
        DecreasingFiltration::new(s.dim(), steps)
    }

    pub fn quotient(&self, s: &Subspace) -> Result<DecreasingFiltration> {
        let steps = self
            .steps
            .iter()
            .map(|(p, f)| Ok((*p, f.quotient_image(s)?)))
            .collect::<Result<Vec<_>>>()?;
        DecreasingFiltration::new(self.ambient - s.dim(), steps)
    }
}

/// Rewrite `inner` (a subspace of the span of `outer`) in the coordinates
/// given by `outer`'s canonical basis.
pub fn express_in_basis(inner: &Subspace, outer: &Subspace) -> Result<Subspace> {
    if !outer.contains(inner) {
        return Err(Error::Structural("express_in_basis: not a subspace".into()));
    }
    let d = outer.dim();
    let mut rows = Vec::with_capacity(inner.dim());
    for r in 0..inner.dim() {
        let v = inner.basis().row(r);
        // Coordinates against an RREF basis are read off at the pivots.
        let coords: Vec<_> = outer.pivots().iter().map(|&p| v[p].clone()).collect();
        rows.push(coords);
    }
    Subspace::span(d, &rows)
}

impl std::fmt::Debug for IncreasingFiltration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dims: Vec<String> = self
            .steps
            .iter()
            .map(|(k, s)| format!("W_{k}:dim {}", s.dim()))
            .collect();
        write!(f, "IncreasingFiltration[{}]", dims.join(", "))
    }
}

impl std::fmt::Debug for DecreasingFiltration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dims: Vec<String> = self
            .steps
            .iter()
            .map(|(p, s)| format!("F^{p}:dim {}", s.dim()))
            .collect();
        write!(f, "DecreasingFiltration[{}]", dims.join(", "))
    }
}
