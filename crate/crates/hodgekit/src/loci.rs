//! Bounded-norm integral Hodge classes.
//!
//! `Hdg_0^d(V)` is the set of nonzero `v` in the Hodge class lattice
//! `(W_0)_Z ∩ F^0` whose weight-zero graded image has `q_0`-norm at most
//! `d`.  The lattice comes from [`hodge_classes`]; it injects into `Gr_0^W`
//! by strictness, so pushing the Gram matrix there gives a positive
//! definite form (verified exactly before any enumeration) and the set is
//! finite.  Enumeration is exact Fincke-Pohst branch and bound; an
//! independent box-search oracle is provided for cross-checking.
//!
//! Convention: `0` is excluded from enumeration output (locus nonemptiness
//! concerns nonzero classes).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::domains::{membership, PeriodDomainSpec};
use crate::error::{Error, Result};
use crate::filtration::{express_in_basis, DecreasingFiltration};
use crate::matrix::Matrix;
use crate::mhs::{hodge_classes, MixedHodgeStructure};
use crate::scalar::{GaussianRational, Rational};
use crate::subspace::Subspace;

/// A bounded Hodge-class enumeration problem.
#[derive(Clone, Debug)]
pub struct HodgeClassQuery {
    mhs: MixedHodgeStructure,
    /// Rational symmetric form on the canonical basis of `Gr_0^W`.
    q0: Matrix,
    bound: Rational,
}

impl HodgeClassQuery {
    pub fn new(mhs: MixedHodgeStructure, q0: Matrix, bound: Rational) -> Result<Self> {
        if bound.is_negative() {
            return Err(Error::Structural(
                "the norm bound must be nonnegative".into(),
            ));
        }
        if !q0.is_square() || !q0.is_real() || q0.transpose() != q0 {
            return Err(Error::Structural(
                "q0 must be a rational symmetric matrix".into(),
            ));
        }
        let gr0_dim = mhs.weight().at(0).dim() - mhs.weight().at(-1).dim();
        if q0.rows() != gr0_dim {
            return Err(Error::DimensionMismatch(format!(
                "q0 is {}x{}, Gr_0 has dimension {gr0_dim}",
                q0.rows(),
                q0.cols()
            )));
        }
        Ok(HodgeClassQuery { mhs, q0, bound })
    }

    pub fn mhs(&self) -> &MixedHodgeStructure {
        &self.mhs
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }
}

/// A class together with its `q_0`-norm.
pub type ClassWithNorm = (Vec<BigInt>, Rational);

/// The nonzero classes of norm at most `d`, sorted lexicographically;
/// symmetric under `v -> -v`.
pub fn enumerate_hdg0_d(query: &HodgeClassQuery) -> Result<Vec<ClassWithNorm>> {
    let data = gram_data(query)?;
    let Some((basis, gram)) = data else {
        return Ok(Vec::new());
    };
    let r = basis.len();
    let ldl = ldl_decompose(&gram)?;
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); r];
    enumerate_recursive(&ldl, &query.bound, r, &mut x, &mut |x| {
        if x.iter().all(|c| c.is_zero()) {
            return;
        }
        let v = combine(&basis, x);
        let norm = quad_form(&gram, x);
        out.push((v, norm));
    });
    out.sort();
    Ok(out)
}

/// Independent oracle: exhaustive search over the coordinate box
/// `|x_i| <= sqrt(d * (G^{-1})_{ii})` (exact radii from the inverse Gram
/// matrix), testing the form exactly.
pub fn enumerate_box_oracle(query: &HodgeClassQuery) -> Result<Vec<ClassWithNorm>> {
    let data = gram_data(query)?;
    let Some((basis, gram)) = data else {
        return Ok(Vec::new());
    };
    let r = basis.len();
    let gram_g = to_gaussian(&gram);
    let inv = gram_g
        .inverse()
        .ok_or_else(|| Error::Internal("positive definite Gram must invert".into()))?;
    let mut radii = Vec::with_capacity(r);
    for i in 0..r {
        let gii = inv.at(i, i).re.clone();
        radii.push(floor_sqrt_rational(&(&query.bound * &gii)));
    }
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); r];
    box_recurse(&gram, &query.bound, &radii, 0, &mut x, &mut out, &basis);
    out.sort();
    Ok(out)
}

/// Nonempty-locus indicator with a witness vector.
pub fn hdg_locus_indicator(
    spec: &PeriodDomainSpec,
    f: &DecreasingFiltration,
    d: &Rational,
) -> Result<Option<ClassWithNorm>> {
    let report = membership(spec, f)?;
    if !report.in_m {
        return Err(Error::Structural(
            "filtration is not a point of the mixed period domain".into(),
        ));
    }
    let v = MixedHodgeStructure::new(spec.rank(), spec.weight().clone(), f.clone())?;
    let gr0_dim = v.weight().at(0).dim() - v.weight().at(-1).dim();
    let q0 = if gr0_dim == 0 {
        Matrix::zero(0, 0)
    } else {
        spec.polarizations()
            .form(0)
            .ok_or_else(|| Error::Structural("the domain spec carries no weight-zero polarization".into()))?
            .clone()
    };
    let query = HodgeClassQuery::new(v, q0, d.clone())?;
    let classes = enumerate_hdg0_d(&query)?;
    Ok(classes.into_iter().next())
}

// ---------------------------------------------------------------------------

/// Lattice basis (integer vectors in `Z^rank`) and the Gram matrix of their
/// `Gr_0`-images; `None` when the class lattice is trivial.
fn gram_data(query: &HodgeClassQuery) -> Result<Option<(Vec<Vec<BigInt>>, Matrix)>> {
    let lattice = hodge_classes(&query.mhs)?;
    let r = lattice.rank();
    if r == 0 {
        return Ok(None);
    }
    let w0 = query.mhs.weight().at(0);
    let w_minus = query.mhs.weight().at(-1);
    let gr = w0.quotient_image(&w_minus)?;

    let mut images: Vec<Vec<GaussianRational>> = Vec::with_capacity(r);
    let mut basis = Vec::with_capacity(r);
    for i in 0..r {
        let v: Vec<BigInt> = lattice.basis().row(i).to_vec();
        let vg: Vec<GaussianRational> = v
            .iter()
            .map(|x| GaussianRational::from_rational(Rational::from(x.clone())))
            .collect();
        let image = Subspace::span(query.mhs.rank(), &[vg])?.quotient_image(&w_minus)?;
        let in_gr = express_in_basis(&image.intersect(&gr)?, &gr)?;
        if in_gr.dim() != 1 {
            return Err(Error::Internal(
                "Hodge class lattice must inject into Gr_0 (strictness)".into(),
            ));
        }
        // Rescale the echelon generator back to the actual image of v.
        let coords = gr_coordinates(&v, &w_minus, &gr)?;
        images.push(coords);
        basis.push(v);
    }
    // The images must stay independent (injectivity).
    let image_matrix = Matrix::from_rows(images.clone())?;
    if image_matrix.rank() != r {
        return Err(Error::Internal(
            "Gr_0 images of the class lattice are dependent".into(),
        ));
    }
    let d0 = gr.dim();
    let mut gram = Matrix::zero(r, r);
    let q0 = &query.q0;
    for i in 0..r {
        for j in 0..r {
            let mut acc = GaussianRational::zero();
            for a in 0..d0 {
                for b in 0..d0 {
                    acc = acc + images[i][a].mul_ref(q0.at(a, b)).mul_ref(&images[j][b]);
                }
            }
            gram.set(i, j, acc);
        }
    }
    if !gram.is_real() {
        return Err(Error::Internal("Gram matrix must be rational".into()));
    }
    // Positive definiteness on the span, exactly; otherwise the class set
    // would be infinite and enumeration is refused.
    if !leading_minors_positive_sym(&gram) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(Some((basis, gram)))
}

fn gr_coordinates(
    v: &[BigInt],
    w_minus: &Subspace,
    gr: &Subspace,
) -> Result<Vec<GaussianRational>> {
    let q = crate::subspace::quotient_map(w_minus);
    let vg: Vec<GaussianRational> = v
        .iter()
        .map(|x| GaussianRational::from_rational(Rational::from(x.clone())))
        .collect();
    let image = q.mul_vec(&vg)?;
    // Coordinates against the echelon basis of Gr are read at its pivots.
    Ok(gr.pivots().iter().map(|&p| image[p].clone()).collect())
}

fn to_gaussian(m: &Matrix) -> Matrix {
    m.clone()
}

fn leading_minors_positive_sym(g: &Matrix) -> bool {
    let n = g.rows();
    for k in 1..=n {
        let sub = Matrix::from_fn(k, k, |r, c| g.at(r, c).clone());
        let d = sub.det();
        if !d.is_real() || !d.re.is_positive() {
            return false;
        }
    }
    true
}

/// `G = R^T D R` with `R` unit upper triangular: `x^T G x` becomes
/// `Σ d_i (x_i + Σ_{j>i} r_{ij} x_j)^2`.
struct Ldl {
    d: Vec<Rational>,
    r: Vec<Vec<Rational>>, // r[i][j] for j > i
}

fn ldl_decompose(g: &Matrix) -> Result<Ldl> {
    let n = g.rows();
    let mut d = vec![Rational::zero(); n];
    let mut r = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        let mut di = g.at(i, i).re.clone();
        for k in 0..i {
            di -= &d[k] * &r[k][i] * &r[k][i];
        }
        if !di.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        d[i] = di;
        for j in i + 1..n {
            let mut v = g.at(i, j).re.clone();
            for k in 0..i {
                v -= &d[k] * &r[k][i] * &r[k][j];
            }
            r[i][j] = v / &d[i];
        }
    }
    Ok(Ldl { d, r })
}

/// Classic Fincke-Pohst: fix coordinates from the last to the first, the
/// remaining budget bounding each coordinate by an exact interval.
fn enumerate_recursive(
    ldl: &Ldl,
    budget: &Rational,
    level: usize,
    x: &mut Vec<BigInt>,
    emit: &mut impl FnMut(&[BigInt]),
) {
    if level == 0 {
        emit(x);
        return;
    }
    let i = level - 1;
    // center c_i = Σ_{j>i} r_{ij} x_j.
    let mut center = Rational::zero();
    for j in i + 1..x.len() {
        center += &ldl.r[i][j] * Rational::from(x[j].clone());
    }
    // d_i (x_i + c)^2 <= budget; the integer square root truncates, so the
    // window is widened by one each way and the exact predicate filters.
    let cap = budget / &ldl.d[i];
    let root = floor_sqrt_rational(&cap);
    let lo = ceil_rational(&(-Rational::from(root.clone()) - &center)) - BigInt::from(1);
    let hi = floor_rational(&(Rational::from(root) - &center)) + BigInt::from(1);
    let mut xi = lo;
    while xi <= hi {
        let term = &Rational::from(xi.clone()) + &center;
        let used = &ldl.d[i] * &term * &term;
        if &used <= budget {
            x[i] = xi.clone();
            let rest = budget - &used;
            enumerate_recursive(ldl, &rest, i, x, emit);
        }
        xi += BigInt::from(1);
    }
    x[i] = BigInt::zero();
}

fn box_recurse(
    gram: &Matrix,
    bound: &Rational,
    radii: &[BigInt],
    i: usize,
    x: &mut Vec<BigInt>,
    out: &mut Vec<ClassWithNorm>,
    basis: &[Vec<BigInt>],
) {
    if i == x.len() {
        if x.iter().all(|c| c.is_zero()) {
            return;
        }
        let norm = quad_form(gram, x);
        if &norm <= bound {
            out.push((combine(basis, x), norm));
        }
        return;
    }
    let mut xi = -radii[i].clone();
    while xi <= radii[i] {
        x[i] = xi.clone();
        box_recurse(gram, bound, radii, i + 1, x, out, basis);
        xi += BigInt::from(1);
    }
    x[i] = BigInt::zero();
}

fn quad_form(g: &Matrix, x: &[BigInt]) -> Rational {
    let n = x.len();
    let mut acc = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            acc += &g.at(i, j).re * Rational::from(x[i].clone()) * Rational::from(x[j].clone());
        }
    }
    acc
}

fn combine(basis: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    let n = basis[0].len();
    let mut v = vec![BigInt::zero(); n];
    for (c, b) in x.iter().zip(basis.iter()) {
        for k in 0..n {
            v[k] += c * &b[k];
        }
    }
    v
}

/// `floor(sqrt(x))` for a nonnegative rational, exactly: integer square
/// root of `p*q` over `q` as a first guess, corrected by the predicate.
fn floor_sqrt_rational(x: &Rational) -> BigInt {
    assert!(!x.is_negative());
    let p = x.numer();
    let q = x.denom();
    let mut g = ((p * q).sqrt() / q).max(BigInt::zero());
    loop {
        let next = &g + 1u8;
        if Rational::from(next.clone()) * Rational::from(next) <= *x {
            g += 1u8;
        } else {
            break;
        }
    }
    while g.is_positive() && Rational::from(g.clone()) * Rational::from(g.clone()) > *x {
        g -= 1u8;
    }
    g
}

fn floor_rational(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

fn ceil_rational(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}
