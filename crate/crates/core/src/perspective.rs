//! Noncommutative perspectives `P_f(B, A) = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`,
//! weighted geometric and arithmetic means, and relative operator entropy.

use crate::error::{Error, Result};
use crate::loewner::{make_log_normalized, LoewnerFunction, OperatorFunction};
use alloc::vec::Vec;

use crate::matrix::Matrix;
use crate::spd::{check_dims, loewner_leq, sym_eig, SpdMatrix, SymMatrix};

/// Weight `ν ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Weight(f64);

impl Weight {
    pub fn new(nu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::ParamOutOfRange {
                name: "weight",
                value: nu,
            });
        }
        Ok(Self(nu))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

/// `A^{1/2} φ(A^{-1/2} B A^{-1/2}) A^{1/2}` for a fallible scalar `φ`.
fn perspective_with<F>(phi: F, b: &SymMatrix, a: &SpdMatrix) -> Result<SymMatrix>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_dims(a.dim(), b.dim())?;
    // Work in A's eigenbasis, A = Q D Qᵀ: the middle factor is similar to
    // D^{-1/2} QᵀBQ D^{-1/2}, so A^{±1/2} is never formed.
    let eig = sym_eig(a.as_sym())?;
    if let Some(&bad) = eig.values.iter().find(|x| !(**x > 0.0)) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: bad });
    }
    let roots: Vec<f64> = eig.values.iter().map(|&x| libm::sqrt(x)).collect();
    let q = &eig.basis;
    let mut middle = q.tr_matmul(&b.matmul(q));
    scale_two_sided(&mut middle, &roots, |r| 1.0 / r);
    let mut mapped = sym_eig(&SymMatrix::symmetrize(&middle))?.map(phi)?.into_matrix();
    scale_two_sided(&mut mapped, &roots, |r| r);
    Ok(SymMatrix::symmetrize(&q.matmul(&mapped).matmul(&q.transpose())))
}

/// `m[i][j] *= s(r_i) s(r_j)`.
fn scale_two_sided(m: &mut Matrix, roots: &[f64], s: impl Fn(f64) -> f64) {
    let n = roots.len();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] *= s(roots[i]) * s(roots[j]);
        }
    }
}

/// `P_f(B, A)`, computed spectrally.
pub fn perspective<F: OperatorFunction + ?Sized>(
    f: &F,
    b: &SymMatrix,
    a: &SpdMatrix,
) -> Result<SymMatrix> {
    perspective_with(|x| f.value(x), b, a)
}

/// Relative Frobenius residual between `P_f̃(A, B)` and `P_f(B, A)`.
pub fn transpose_identity_check(f: &LoewnerFunction, a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    let direct = perspective(f, b, a)?;
    let via_transpose = perspective(&f.transpose(), a, b)?;
    Ok(relative_residual(&direct, &via_transpose))
}

/// `‖lhs − rhs‖_F / max(1, ‖lhs‖_F)`.
pub fn relative_residual(lhs: &SymMatrix, rhs: &SymMatrix) -> f64 {
    (lhs.as_matrix() - rhs.as_matrix()).frobenius_norm() / lhs.frobenius_norm().max(1.0)
}

/// `A ♯_ν B = A^{1/2} (A^{-1/2} B A^{-1/2})^ν A^{1/2}`.
pub fn geometric_mean(a: &SpdMatrix, b: &SpdMatrix, nu: Weight) -> Result<SpdMatrix> {
    check_dims(a.dim(), b.dim())?;
    let nu = nu.get();
    if nu == 0.0 {
        return Ok(a.clone());
    }
    if nu == 1.0 {
        return Ok(b.clone());
    }
    let g = perspective_with(|x| Ok(libm::pow(x, nu)), b, a)?;
    SpdMatrix::from_sym(g)
}

/// `A ∇_ν B = (1 − ν) A + ν B`.
pub fn arithmetic_mean(a: &SpdMatrix, b: &SpdMatrix, nu: Weight) -> Result<SpdMatrix> {
    check_dims(a.dim(), b.dim())?;
    let nu = nu.get();
    SpdMatrix::from_sym(SymMatrix::lin_comb(1.0 - nu, a, nu, b))
}

/// `S(A|B) = A^{1/2} ln(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn relative_entropy(a: &SpdMatrix, b: &SpdMatrix) -> Result<SymMatrix> {
    perspective(&make_log_normalized(), b, a)
}

/// Smallest eigenvalue of `A ∇_ν B − A ♯_ν B`.
pub fn young_check(a: &SpdMatrix, b: &SpdMatrix, nu: Weight) -> Result<f64> {
    let am = arithmetic_mean(a, b, nu)?;
    let gm = geometric_mean(a, b, nu)?;
    Ok(loewner_leq(&gm, &am, 0.0)?.margin)
}

/// Smallest eigenvalue of `P_f(A, B) − P_f(C, D)` for `A ≥ C > 0`,
/// `B ≥ D > 0` and nonnegative `f`.
pub fn perspective_monotone_check(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    c: &SpdMatrix,
    d: &SpdMatrix,
) -> Result<f64> {
    if !f.is_nonnegative() {
        return Err(Error::NotNonnegative { label: f.label() });
    }
    let upper = perspective(f, a, b)?;
    let lower = perspective(f, c, d)?;
    Ok(loewner_leq(&lower, &upper, 0.0)?.margin)
}
