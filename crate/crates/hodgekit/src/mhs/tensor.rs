//! Tensor products, duals and internal homs of mixed Hodge structures.
//!
//! Filtration conventions are the standard ones:
//! `W_k(V ⊗ V') = Σ W_i ⊗ W'_{k-i}` and `F^p(V ⊗ V') = Σ F^a ⊗ F'^{p-a}`;
//! `W_k(V^dual) = ann(W_{-k-1})`, `F^p(V^dual) = ann(F^{1-p})`.
//! The hom is computed functionally, `W_k Hom = { f : f(W_i) ⊆ W'_{i+k} }`,
//! which makes the identity `hom(V, V') = dual(V) ⊗ V'` a genuine test
//! rather than a definition.

use crate::error::Result;
use crate::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::matrix::Matrix;
use crate::subspace::{map_constraint_space, Subspace};

use super::MixedHodgeStructure;

fn tensor_subspace(a: &Subspace, b: &Subspace) -> Subspace {
    let m = a.basis().kronecker(b.basis());
    Subspace::from_matrix(a.ambient_dim() * b.ambient_dim(), &m)
}

/// `V ⊗ V'` with basis `e_i ⊗ e'_j` at index `i * rank(V') + j`.
pub fn tensor(v: &MixedHodgeStructure, w: &MixedHodgeStructure) -> Result<MixedHodgeStructure> {
    let n = v.rank() * w.rank();
    let (vw, ww) = (v.weight(), w.weight());
    let mut weight_steps = Vec::new();
    for k in vw.min_jump() + ww.min_jump()..=vw.max_jump() + ww.max_jump() {
        let i_lo = vw.min_jump().min(k - ww.max_jump());
        let i_hi = vw.max_jump().max(k - ww.min_jump() + 1);
        let mut acc = Subspace::zero(n);
        for i in i_lo..=i_hi {
            let term = tensor_subspace(&vw.at(i), &ww.at(k - i));
            acc = acc.sum(&term)?;
        }
        weight_steps.push((k, acc));
    }
    let weight = IncreasingFiltration::new(n, weight_steps)?;

    let (vf, wf) = (v.hodge(), w.hodge());
    let mut hodge_steps = Vec::new();
    for p in vf.min_jump() + wf.min_jump() - 1..=vf.max_jump() + wf.max_jump() {
        let a_lo = (vf.min_jump() - 1).min(p - wf.max_jump());
        let a_hi = vf.max_jump().max(p - wf.min_jump() + 1);
        let mut acc = Subspace::zero(n);
        for a in a_lo..=a_hi {
            let term = tensor_subspace(&vf.at(a), &wf.at(p - a));
            acc = acc.sum(&term)?;
        }
        hodge_steps.push((p, acc));
    }
    let hodge = DecreasingFiltration::new(n, hodge_steps)?;
    MixedHodgeStructure::new(n, weight, hodge)
}

/// Annihilator of a subspace, in dual coordinates.
fn annihilator(s: &Subspace) -> Subspace {
    if s.is_zero() {
        return Subspace::full(s.ambient_dim());
    }
    Subspace::from_matrix(s.ambient_dim(), &s.basis().right_kernel())
}

pub fn dual(v: &MixedHodgeStructure) -> Result<MixedHodgeStructure> {
    let n = v.rank();
    let w = v.weight();
    let mut weight_steps = Vec::new();
    for k in -w.max_jump() - 1..=-w.min_jump() + 1 {
        weight_steps.push((k, annihilator(&w.at(-k - 1))));
    }
    let weight = IncreasingFiltration::new(n, weight_steps)?;

    let f = v.hodge();
    let mut hodge_steps = Vec::new();
    for p in -f.max_jump()..=-f.min_jump() + 2 {
        hodge_steps.push((p, annihilator(&f.at(1 - p))));
    }
    let hodge = DecreasingFiltration::new(n, hodge_steps)?;
    MixedHodgeStructure::new(n, weight, hodge)
}

/// Internal hom, in the flattened coordinates of [`crate::subspace::flatten_map`].
pub fn hom(v: &MixedHodgeStructure, w: &MixedHodgeStructure) -> Result<MixedHodgeStructure> {
    let (from, to) = (v.rank(), w.rank());
    let n = from * to;

    let (vw, ww) = (v.weight(), w.weight());
    let mut weight_steps = Vec::new();
    for k in ww.min_jump() - vw.max_jump()..=ww.max_jump() - vw.min_jump() + 1 {
        let constraints: Vec<(Subspace, Subspace)> = vw
            .jumps()
            .iter()
            .map(|(i, s)| (s.clone(), ww.at(i + k)))
            .collect();
        weight_steps.push((k, map_constraint_space(from, to, &constraints)?));
    }
    let weight = IncreasingFiltration::new(n, weight_steps)?;

    let (vf, wf) = (v.hodge(), w.hodge());
    let mut hodge_steps = Vec::new();
    for p in wf.min_jump() - vf.max_jump()..=wf.max_jump() - vf.min_jump() + 1 {
        // Between jumps of F the binding constraint sits just below each
        // jump, where the source is largest and the target smallest.
        let constraints: Vec<(Subspace, Subspace)> = vf
            .jumps()
            .iter()
            .map(|(j, _)| (vf.at(j - 1), wf.at(j - 1 + p)))
            .collect();
        hodge_steps.push((p, map_constraint_space(from, to, &constraints)?));
    }
    let hodge = DecreasingFiltration::new(n, hodge_steps)?;
    MixedHodgeStructure::new(n, weight, hodge)
}

/// Apply an element of `hom(V, V')`, i.e. unflatten to a `to x from` matrix.
pub fn hom_element_matrix(
    v: &MixedHodgeStructure,
    w: &MixedHodgeStructure,
    flat: &[crate::scalar::GaussianRational],
) -> Matrix {
    crate::subspace::unflatten_map(v.rank(), w.rank(), flat)
}
