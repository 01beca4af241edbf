//! Linear functionals on a finite quantum group or hypergroup and the
//! convolution algebra they form.
//!
//! Everything here works for any [`ConvolutionStructure`]: an algebra with a
//! comultiplication `Δ`, counit, antipode-like map and Haar state. The product
//! of functionals is `φ₁ ⋆ φ₂ = (φ₁ ⊗ φ₂)Δ` and the adjoint is
//! `φ*(x) = conj(φ(S(x)*))`. Norms and positivity are read off the coefficient
//! blocks `[φ(E^k_{ij})]` in matrix-unit coordinates.

use crate::algebra::{AlgebraPresentation, BlockStructure};
use crate::error::{Error, Result};
use crate::linalg::{self, conj_vec, max_abs, max_abs_vec, r, CMatrix, CVector, C64};
use std::ops::{Add, Mul, Neg, Sub};

/// Data needed to convolve functionals.
///
/// `antipode` is `S` for quantum groups and `κ` for hypergroups.
pub trait ConvolutionStructure {
    fn algebra(&self) -> &AlgebraPresentation;
    fn blocks(&self) -> &BlockStructure;
    /// `d² × d` matrix whose column `i` is `Δ(e_i)` in the basis `e_j ⊗ e_k` (index `j*d + k`).
    fn comul(&self) -> &CMatrix;
    fn counit(&self) -> &CVector;
    fn antipode(&self) -> &CMatrix;
    fn haar(&self) -> &CVector;

    fn dim(&self) -> usize {
        self.algebra().dim()
    }
}

/// A linear functional, stored as its covector `φ(e_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub covec: CVector,
}

impl Functional {
    pub fn new(covec: CVector) -> Self {
        Self { covec }
    }

    pub fn zeros(d: usize) -> Self {
        Self { covec: CVector::zeros(d) }
    }

    pub fn dim(&self) -> usize {
        self.covec.len()
    }

    pub fn eval(&self, x: &CVector) -> C64 {
        self.covec.dot(x)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { covec: &self.covec * s }
    }

    /// Largest coordinate difference.
    pub fn distance_max(&self, other: &Functional) -> f64 {
        max_abs_vec(&(&self.covec - &other.covec))
    }
}

impl Add for &Functional {
    type Output = Functional;
    fn add(self, o: &Functional) -> Functional {
        Functional { covec: &self.covec + &o.covec }
    }
}

impl Sub for &Functional {
    type Output = Functional;
    fn sub(self, o: &Functional) -> Functional {
        Functional { covec: &self.covec - &o.covec }
    }
}

impl Neg for &Functional {
    type Output = Functional;
    fn neg(self) -> Functional {
        Functional { covec: -&self.covec }
    }
}

impl Mul<f64> for &Functional {
    type Output = Functional;
    fn mul(self, s: f64) -> Functional {
        Functional { covec: &self.covec * r(s) }
    }
}

impl Add for Functional {
    type Output = Functional;
    fn add(self, o: Functional) -> Functional {
        &self + &o
    }
}

impl Sub for Functional {
    type Output = Functional;
    fn sub(self, o: Functional) -> Functional {
        &self - &o
    }
}

impl Mul<f64> for Functional {
    type Output = Functional;
    fn mul(self, s: f64) -> Functional {
        &self * s
    }
}

fn check_dim<S: ConvolutionStructure + ?Sized>(s: &S, f: &Functional) -> Result<()> {
    if f.dim() != s.dim() {
        return Err(Error::Dimension(format!("functional has length {}, algebra has dimension {}", f.dim(), s.dim())));
    }
    Ok(())
}

pub fn counit_functional<S: ConvolutionStructure + ?Sized>(s: &S) -> Functional {
    Functional::new(s.counit().clone())
}

pub fn haar_functional<S: ConvolutionStructure + ?Sized>(s: &S) -> Functional {
    Functional::new(s.haar().clone())
}

/// `(φ₁ ⊗ φ₂)Δ`.
pub fn convolve<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional, b: &Functional) -> Result<Functional> {
    check_dim(s, a)?;
    check_dim(s, b)?;
    Ok(convolve_unchecked(s, a, b))
}

pub(crate) fn convolve_unchecked<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional, b: &Functional) -> Functional {
    let ab = a.covec.kronecker(&b.covec);
    Functional::new(s.comul().transpose() * ab)
}

/// Matrix whose column `i` holds the coordinates of `S(e_i)*`.
fn antipode_star_matrix<S: ConvolutionStructure + ?Sized>(s: &S) -> CMatrix {
    s.algebra().invol() * s.antipode().map(|z| z.conj())
}

/// `φ*(x) = conj(φ(S(x)*))`.
pub fn star<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional) -> Result<Functional> {
    check_dim(s, a)?;
    let m = antipode_star_matrix(s);
    Ok(Functional::new(conj_vec(&(m.transpose() * &a.covec))))
}

/// `φ^{⋆n}` with `φ^0 = ε`.
pub fn power<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional, mut n: u64) -> Result<Functional> {
    check_dim(s, a)?;
    let mut result = counit_functional(s);
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = convolve_unchecked(s, &result, &base);
        }
        n >>= 1;
        if n > 0 {
            base = convolve_unchecked(s, &base, &base);
        }
    }
    Ok(result)
}

pub fn coefficient_blocks<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional) -> Vec<CMatrix> {
    s.blocks().functional_blocks(&a.covec)
}

/// Dual norm: sum of the trace norms of the coefficient blocks.
pub fn functional_norm<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional) -> f64 {
    coefficient_blocks(s, a).iter().map(linalg::trace_norm).sum()
}

pub fn is_hermitian_functional<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional, tol: f64) -> bool {
    coefficient_blocks(s, a).iter().all(|b| max_abs(&(b - b.adjoint())) <= tol)
}

pub fn is_positive_functional<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional, tol: f64) -> bool {
    coefficient_blocks(s, a)
        .iter()
        .all(|b| max_abs(&(b - b.adjoint())) <= tol && linalg::min_eigenvalue(b) >= -tol)
}

/// Smallest eigenvalue over all coefficient blocks (Hermitian parts).
pub fn min_block_eigenvalue<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional) -> f64 {
    coefficient_blocks(s, a).iter().map(linalg::min_eigenvalue).fold(f64::INFINITY, f64::min)
}

/// `max(non-Hermitian part, negative part)` over the coefficient blocks; zero
/// exactly for positive functionals.
pub fn positivity_defect<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional) -> f64 {
    coefficient_blocks(s, a)
        .iter()
        .map(|b| max_abs(&(b - b.adjoint())).max(-linalg::min_eigenvalue(b)))
        .fold(0.0, f64::max)
}

pub fn is_state<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional, tol: f64) -> bool {
    is_positive_functional(s, a, tol) && (a.eval(s.algebra().unit()) - r(1.0)).norm() <= tol
}

/// Splits a Hermitian functional whose coefficient blocks are each PSD or NSD
/// into `(φ₊, φ₋)` with `φ = φ₊ - φ₋`.
pub fn jordan_split<S: ConvolutionStructure + ?Sized>(s: &S, a: &Functional, tol: f64) -> Result<(Functional, Functional)> {
    check_dim(s, a)?;
    let blocks = coefficient_blocks(s, a);
    let mut pos = Vec::with_capacity(blocks.len());
    let mut neg = Vec::with_capacity(blocks.len());
    for (k, b) in blocks.iter().enumerate() {
        if max_abs(&(b - b.adjoint())) > tol {
            return Err(Error::Domain("functional is not Hermitian".into()));
        }
        let (vals, _) = linalg::hermitian_eigen(b);
        let lo = vals.first().copied().unwrap_or(0.0);
        let hi = vals.last().copied().unwrap_or(0.0);
        let zero = CMatrix::zeros(b.nrows(), b.ncols());
        if lo >= -tol {
            pos.push(linalg::hermitian_part(b));
            neg.push(zero);
        } else if hi <= tol {
            pos.push(zero);
            neg.push(-linalg::hermitian_part(b));
        } else {
            return Err(Error::Domain(format!(
                "coefficient block {k} is indefinite; only block-separated Jordan splits are supported"
            )));
        }
    }
    let bs = s.blocks();
    Ok((
        Functional::new(bs.functional_from_blocks(&pos)),
        Functional::new(bs.functional_from_blocks(&neg)),
    ))
}

/// The convolution algebra on functionals: product `⋆`, unit `ε`, involution `φ ↦ φ*`.
/// Its basis is the dual basis `e^i` of the algebra basis.
pub fn convolution_algebra<S: ConvolutionStructure + ?Sized>(s: &S) -> AlgebraPresentation {
    let d = s.dim();
    let comul = s.comul();
    let mut entries = Vec::new();
    for a in 0..d {
        for b in 0..d {
            for i in 0..d {
                let v = comul[(a * d + b, i)];
                if v.norm() > 0.0 {
                    entries.push((a, b, i, v));
                }
            }
        }
    }
    let invol = antipode_star_matrix(s).adjoint();
    AlgebraPresentation::new(d, entries, s.counit().clone(), invol).expect("dimensions agree")
}

/// Fourier image: blocks `φ̂(α)_{ij} = φ(u^α_{ij})`.
pub type FourierImage = Vec<CMatrix>;
