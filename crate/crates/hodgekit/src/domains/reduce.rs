//! Reduction to fundamental domains: unipotent translation lattices in the
//! splitting chart, and the classical modular group domain in the upper
//! half-plane.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{rat, GaussianRational, Rational};

/// Reduce `coord` modulo the full-rank translation lattice spanned by the
/// given basis vectors: `coord = reduced + Σ gamma_i b_i` with the lattice
/// coordinates of `reduced` in the half-open box `[0, 1)^r` (lower faces
/// included, upper excluded).
pub fn reduce_unipotent(
    coord: &[Rational],
    basis: &[Vec<Rational>],
) -> Result<(Vec<BigInt>, Vec<Rational>)> {
    let r = basis.len();
    if r == 0 || basis.iter().any(|b| b.len() != coord.len()) || coord.len() != r {
        return Err(Error::DegenerateLattice(
            "translation lattice must be full rank in the chart".into(),
        ));
    }
    // Solve coord = B^T t for the lattice coordinates t.
    let bt = Matrix::from_rows(
        basis
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| GaussianRational::from_rational(x.clone()))
                    .collect()
            })
            .collect(),
    )?
    .transpose();
    let rhs: Vec<GaussianRational> = coord
        .iter()
        .map(|x| GaussianRational::from_rational(x.clone()))
        .collect();
    if bt.rank() != r {
        return Err(Error::DegenerateLattice("lattice basis is singular".into()));
    }
    let t = bt
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateLattice("unsolvable".into()))?;
    let gamma: Vec<BigInt> = t.iter().map(|x| x.re.floor().to_integer()).collect();
    let mut reduced = coord.to_vec();
    for (g, b) in gamma.iter().zip(basis.iter()) {
        for (red, coeff) in reduced.iter_mut().zip(b.iter()) {
            *red -= Rational::from(g.clone()) * coeff;
        }
    }
    Ok((gamma, reduced))
}

/// An element of `SL_2(Z)` as an integer matrix `[[a, b], [c, d]]`.
pub type Sl2Element = [[BigInt; 2]; 2];

pub fn sl2_identity() -> Sl2Element {
    [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ]
}

pub fn sl2_mul(a: &Sl2Element, b: &Sl2Element) -> Sl2Element {
    let e = |r: usize, c: usize| -> BigInt { &a[r][0] * &b[0][c] + &a[r][1] * &b[1][c] };
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Apply the fractional-linear action to a point of the upper half-plane.
pub fn sl2_apply(g: &Sl2Element, tau: &GaussianRational) -> Result<GaussianRational> {
    let lift = |x: &BigInt| GaussianRational::from_rational(Rational::from(x.clone()));
    let num = &lift(&g[0][0]).mul_ref(tau) + &lift(&g[0][1]);
    let den = &lift(&g[1][0]).mul_ref(tau) + &lift(&g[1][1]);
    let inv = den.inv()?;
    Ok(num.mul_ref(&inv))
}

/// Exact reduction of `tau` (with `Im tau > 0`) to the classical modular
/// fundamental domain: alternate integer translation toward `|Re| <= 1/2`
/// and inversion while `|tau| < 1` (the imaginary part strictly increases
/// under inversion, so the loop terminates).
///
/// Ties are broken toward `Re = -1/2` (half-up integer rounding) and the
/// left unit arc (`|tau| = 1` with `Re > 0` is inverted once more).
pub fn reduce_sl2(tau: &GaussianRational) -> Result<(Sl2Element, GaussianRational)> {
    if !tau.im.is_positive() {
        return Err(Error::Structural("reduce_sl2 needs Im tau > 0".into()));
    }
    let mut t = tau.clone();
    let mut gamma = sl2_identity();
    let one = Rational::one();
    let half = rat(1, 2);
    for _ in 0..100_000 {
        // Translate Re into [-1/2, 1/2).
        let n = (&t.re + &half).floor().to_integer();
        if !n.is_zero() {
            let shift = [[BigInt::one(), -n.clone()], [BigInt::zero(), BigInt::one()]];
            t.re -= Rational::from(n);
            gamma = sl2_mul(&shift, &gamma);
        }
        let norm = t.norm_sqr();
        if norm < one {
            let s = [
                [BigInt::zero(), -BigInt::one()],
                [BigInt::one(), BigInt::zero()],
            ];
            t = -t.inv()?;
            gamma = sl2_mul(&s, &gamma);
        } else {
            // Reduced; push boundary points to the left arc.
            if norm == one && t.re.is_positive() {
                let s = [
                    [BigInt::zero(), -BigInt::one()],
                    [BigInt::one(), BigInt::zero()],
                ];
                t = -t.inv()?;
                gamma = sl2_mul(&s, &gamma);
            }
            let check = sl2_apply(&gamma, tau)?;
            if check != t {
                return Err(Error::Internal("sl2 reduction bookkeeping drifted".into()));
            }
            return Ok((gamma, t));
        }
    }
    Err(Error::Internal("sl2 reduction did not terminate".into()))
}
