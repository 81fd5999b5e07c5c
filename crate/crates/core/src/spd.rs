//! Symmetric and symmetric positive-definite matrices, the cyclic Jacobi
//! eigensolver, functional calculus, resolvents and Loewner-order tests.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};
use crate::matrix::{Cholesky, Matrix};

/// Relative asymmetry accepted before symmetrizing.
pub const SYMMETRY_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Real symmetric matrix, not necessarily definite.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Checks symmetry to [`SYMMETRY_TOL`] and stores `(M + Mᵀ)/2`.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_finite() {
            let n = m.dim();
            for i in 0..n {
                for j in 0..n {
                    if !m[(i, j)].is_finite() {
                        return Err(Error::NonFiniteEntry { row: i, col: j });
                    }
                }
            }
        }
        let asymmetry = m.relative_asymmetry();
        if asymmetry > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { asymmetry });
        }
        Ok(Self(m.symmetrized()))
    }

    /// Symmetrizes without checking. Used for results that are symmetric in
    /// exact arithmetic.
    pub fn symmetrize(m: &Matrix) -> Self {
        Self(m.symmetrized())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(Matrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Matrix::identity(dim))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self(Matrix::from_diag(diag))
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.scale(factor))
    }

    /// `alpha * x + beta * y`.
    pub fn lin_comb(alpha: f64, x: &SymMatrix, beta: f64, y: &SymMatrix) -> Self {
        Self(Matrix::lin_comb(alpha, &x.0, beta, &y.0))
    }

    pub fn sub(&self, other: &SymMatrix) -> Self {
        Self::lin_comb(1.0, self, -1.0, other)
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        Self::lin_comb(1.0, self, 1.0, other)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> Result<f64> {
        let eig = sym_eig(self)?;
        Ok(eig
            .values
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs())))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(sym_eig(self)?.values[0])
    }
}

impl Deref for SymMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

/// Real symmetric positive-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    inner: SymMatrix,
    min_eigenvalue: f64,
}

impl SpdMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        validate_spd(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: SymMatrix::identity(dim),
            min_eigenvalue: 1.0,
        }
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        validate_spd(Matrix::from_diag(diag))
    }

    pub fn from_sym(s: SymMatrix) -> Result<Self> {
        let min_eigenvalue = s.min_eigenvalue()?;
        if !(min_eigenvalue > 0.0) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        Ok(Self {
            inner: s,
            min_eigenvalue,
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.inner
    }

    pub fn into_sym(self) -> SymMatrix {
        self.inner
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::from_sym(self.inner.scale(factor))
    }
}

impl Deref for SpdMatrix {
    type Target = SymMatrix;

    fn deref(&self) -> &SymMatrix {
        &self.inner
    }
}

/// Validates a square matrix of finite reals as symmetric positive definite.
pub fn validate_spd(m: Matrix) -> Result<SpdMatrix> {
    SpdMatrix::from_sym(SymMatrix::new(m)?)
}

/// Eigenvalues in ascending order with an orthonormal basis of
/// eigenvectors stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub values: Vec<f64>,
    pub basis: Matrix,
}

impl EigenPair {
    /// `basis · diag(φ(values)) · basisᵀ`.
    pub fn reconstruct_with(&self, phi_values: &[f64]) -> SymMatrix {
        let n = self.basis.dim();
        let mut scaled = self.basis.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= phi_values[j];
            }
        }
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += scaled[(i, k)] * self.basis[(j, k)];
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        SymMatrix(out)
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(&self.values)
    }

    /// Applies a fallible scalar function to the spectrum.
    pub fn map<F>(&self, mut phi: F) -> Result<SymMatrix>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut mapped = Vec::with_capacity(self.values.len());
        for &v in &self.values {
            let y = phi(v)?;
            if !y.is_finite() {
                return Err(Error::DomainViolation { argument: v });
            }
            mapped.push(y);
        }
        Ok(self.reconstruct_with(&mapped))
    }
}

/// Cyclic Jacobi eigensolver. Deterministic for a fixed input.
pub fn sym_eig(m: &SymMatrix) -> Result<EigenPair> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let floor = f64::EPSILON * f64::EPSILON * a.frobenius_norm();

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs() <= floor
                    || apq.abs() <= f64::EPSILON * libm::sqrt((app * aqq).abs())
                {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (theta.abs() + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        let new_kp = c * akp - s * akq;
                        let new_kq = s * akp + c * akq;
                        a[(k, p)] = new_kp;
                        a[(p, k)] = new_kp;
                        a[(k, q)] = new_kq;
                        a[(q, k)] = new_kq;
                    }
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut basis = Matrix::zeros(n);
    for (new_j, &old_j) in order.iter().enumerate() {
        basis.set_column(new_j, &v.column(old_j));
    }
    Ok(EigenPair { values, basis })
}

/// `basis · diag(φ(eigenvalues)) · basisᵀ`.
pub fn apply_scalar_function<F>(m: &SymMatrix, phi: F) -> Result<SymMatrix>
where
    F: Fn(f64) -> f64,
{
    sym_eig(m)?.map(|x| Ok(phi(x)))
}

/// `(M^{1/2}, M^{-1/2})`, both from one eigendecomposition.
pub fn sqrt_and_inv_sqrt(m: &SpdMatrix) -> Result<(SpdMatrix, SpdMatrix)> {
    let eig = sym_eig(m)?;
    let roots: Vec<f64> = eig.values.iter().map(|&x| libm::sqrt(x)).collect();
    if let Some(&bad) = eig.values.iter().find(|x| !(**x > 0.0)) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: bad,
        });
    }
    let inv_roots: Vec<f64> = roots.iter().map(|r| 1.0 / r).collect();
    let sqrt = SpdMatrix {
        inner: eig.reconstruct_with(&roots),
        min_eigenvalue: roots[0],
    };
    let inv_sqrt = SpdMatrix {
        inner: eig.reconstruct_with(&inv_roots),
        min_eigenvalue: *inv_roots.last().unwrap(),
    };
    Ok((sqrt, inv_sqrt))
}

/// `S · X · S`, symmetrized.
pub fn congruence(x: &SymMatrix, s: &SymMatrix) -> Result<SymMatrix> {
    check_dims(x.dim(), s.dim())?;
    let sx = s.matmul(x);
    Ok(SymMatrix::symmetrize(&sx.matmul(s)))
}

/// `(M + shift·I)^{-1} · rhs` through a Cholesky solve.
pub fn resolvent_apply(m: &SpdMatrix, shift: f64, rhs: &Matrix) -> Result<Matrix> {
    check_dims(m.dim(), rhs.dim())?;
    if !(shift >= 0.0) {
        return Err(Error::ParamOutOfRange {
            name: "shift",
            value: shift,
        });
    }
    let chol = Cholesky::factor(&m.shifted(shift))?;
    Ok(chol.solve(rhs))
}

/// Outcome of a Loewner-order comparison `X ≤ Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoewnerOrder {
    pub ordered: bool,
    /// Smallest eigenvalue of `Y − X`.
    pub margin: f64,
    /// `1 + ‖X‖₂ + ‖Y‖₂`, the scale the tolerance is relative to.
    pub scale: f64,
}

/// Tests `X ≤ Y` with tolerance relative to `1 + ‖X‖₂ + ‖Y‖₂`.
pub fn loewner_leq(x: &SymMatrix, y: &SymMatrix, tol: f64) -> Result<LoewnerOrder> {
    check_dims(x.dim(), y.dim())?;
    if !(tol >= 0.0) {
        return Err(Error::ParamOutOfRange {
            name: "tol",
            value: tol,
        });
    }
    let margin = y.sub(x).min_eigenvalue()?;
    let scale = 1.0 + x.spectral_norm()? + y.spectral_norm()?;
    Ok(LoewnerOrder {
        ordered: margin >= -tol * scale,
        margin,
        scale,
    })
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_spd;
    use approx::assert_abs_diff_eq;

    fn rel(a: &Matrix, b: &Matrix) -> f64 {
        (a - b).frobenius_norm() / b.frobenius_norm().max(1e-300)
    }

    #[test]
    fn identity_is_valid() {
        let m = validate_spd(Matrix::identity(3)).unwrap();
        assert_eq!(m.min_eigenvalue(), 1.0);
    }

    #[test]
    fn sign_indefinite_rejected() {
        assert!(matches!(
            validate_spd(Matrix::from_diag(&[1.0, -1.0])),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn asymmetric_rejected_and_tiny_asymmetry_symmetrized() {
        let m = Matrix::from_rows(&[[2.0, 1.0], [1.1, 2.0]]).unwrap();
        assert!(matches!(validate_spd(m), Err(Error::NotSymmetric { .. })));
        let m = Matrix::from_rows(&[[2.0, 1.0], [1.0 + 1e-15, 2.0]]).unwrap();
        let s = validate_spd(m).unwrap();
        assert_eq!(s[(0, 1)], s[(1, 0)]);
    }

    #[test]
    fn two_by_two_eigenvalues() {
        let s = validate_spd(Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        let e = sym_eig(&s).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 3.0, epsilon = 1e-14);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        // columns (1,−1)/√2 and (1,1)/√2 up to sign
        let c0 = e.basis.column(0);
        let c1 = e.basis.column(1);
        assert_abs_diff_eq!((c0[0] * r - c0[1] * r).abs(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!((c1[0] * r + c1[1] * r).abs(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.min_eigenvalue(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn diagonal_eigen_is_sorted_permutation() {
        let e = sym_eig(&SymMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, [1.0, 2.0, 3.0]);
        assert_eq!(e.basis.column(0), [0.0, 1.0, 0.0]);
        assert_eq!(e.basis.column(1), [0.0, 0.0, 1.0]);
        assert_eq!(e.basis.column(2), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn eigen_reconstruction_and_orthonormality() {
        for seed in 0..20 {
            let m = random_spd(6, 1e4, seed);
            let e = sym_eig(&m).unwrap();
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let gram = e.basis.tr_matmul(&e.basis);
            assert!((&gram - &Matrix::identity(6)).max_abs() < 1e-10);
            assert!(rel(&e.reconstruct(), &m) < 1e-10);
        }
    }

    #[test]
    fn indefinite_symmetric_eigen() {
        let s = SymMatrix::new(Matrix::from_rows(&[[0.0, 2.0], [2.0, 0.0]]).unwrap()).unwrap();
        let e = sym_eig(&s).unwrap();
        assert_abs_diff_eq!(e.values[0], -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn scalar_function_examples() {
        let m = random_spd(4, 10.0, 3);
        let same = apply_scalar_function(&m, |x| x).unwrap();
        assert!(rel(&same, &m) < 1e-12);

        let d = SymMatrix::from_diag(&[1.0, core::f64::consts::E]);
        let l = apply_scalar_function(&d, libm::log).unwrap();
        assert_abs_diff_eq!(l[(0, 0)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l[(1, 1)], 1.0, epsilon = 1e-15);

        // √ of [[2,1],[1,2]] squares back and has eigenvalues (1, √3)
        let s = SymMatrix::new(Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        let r = apply_scalar_function(&s, libm::sqrt).unwrap();
        assert!(rel(&r.matmul(&r), &s) < 1e-14);
        let e = sym_eig(&r).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], libm::sqrt(3.0), epsilon = 1e-14);

        assert!(matches!(
            apply_scalar_function(&SymMatrix::from_diag(&[-1.0, 1.0]), libm::log),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn sqrt_examples() {
        let (s, i) = sqrt_and_inv_sqrt(&SpdMatrix::identity(3)).unwrap();
        assert_eq!(s.as_matrix(), &Matrix::identity(3));
        assert_eq!(i.as_matrix(), &Matrix::identity(3));

        let (s, i) = sqrt_and_inv_sqrt(&SpdMatrix::from_diag(&[4.0, 9.0]).unwrap()).unwrap();
        assert_eq!(s.diag(), [2.0, 3.0]);
        assert_abs_diff_eq!(i[(0, 0)], 0.5, epsilon = 1e-16);
        assert_abs_diff_eq!(i[(1, 1)], 1.0 / 3.0, epsilon = 1e-16);
    }

    #[test]
    fn congruence_examples() {
        let x = SymMatrix::new(Matrix::from_rows(&[[1.0, 2.0], [2.0, -3.0]]).unwrap()).unwrap();
        assert_eq!(congruence(&x, &SymMatrix::identity(2)).unwrap(), x);
        let y = congruence(&SymMatrix::identity(2), &SymMatrix::from_diag(&[2.0, 3.0])).unwrap();
        assert_eq!(y.diag(), [4.0, 9.0]);
        assert!(matches!(
            congruence(&x, &SymMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn congruence_preserves_semidefiniteness() {
        for seed in 0..50 {
            let x = random_spd(4, 1e3, seed);
            let s = random_spd(4, 1e2, seed + 1000);
            let y = congruence(&x, &s).unwrap();
            assert!(y.min_eigenvalue().unwrap() >= 0.0);
        }
    }

    #[test]
    fn resolvent_examples() {
        let m = random_spd(4, 100.0, 9);
        let out = resolvent_apply(&m, 0.0, &m).unwrap();
        assert!((&out - &Matrix::identity(4)).max_abs() < 1e-12);

        let d = SpdMatrix::from_diag(&[1.0, 3.0]).unwrap();
        let out = resolvent_apply(&d, 1.0, &Matrix::identity(2)).unwrap();
        let d = out.diag();
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn resolvent_residual_is_small() {
        for seed in 0..20 {
            let m = random_spd(6, 1e4, seed);
            let rhs = random_spd(6, 10.0, seed + 7);
            for &shift in &[0.0, 1e-3, 1.0, 1e4] {
                let out = resolvent_apply(&m, shift, &rhs).unwrap();
                let back = m.shifted(shift).matmul(&out);
                let r = rel(&back, &rhs);
                assert!(r <= 1e-12, "seed {seed} shift {shift}: {r:e}");
            }
        }
    }

    /// At condition 1e6 any binary64 solution has a residual near
    /// `eps·κ`, so the bound is on the normwise backward error instead.
    #[test]
    fn resolvent_backward_error_ill_conditioned() {
        for seed in 0..20 {
            let m = random_spd(6, 1e6, seed);
            let rhs = random_spd(6, 10.0, seed + 7);
            for &shift in &[0.0, 1e-3, 1.0, 1e4] {
                let shifted = m.shifted(shift);
                let out = resolvent_apply(&m, shift, &rhs).unwrap();
                let back = shifted.matmul(&out);
                let eta = (&back - rhs.as_matrix()).frobenius_norm()
                    / (shifted.frobenius_norm() * out.frobenius_norm() + rhs.frobenius_norm());
                assert!(eta <= 1e-12, "seed {seed} shift {shift}: {eta:e}");
            }
        }
    }

    #[test]
    fn loewner_examples() {
        let x = SymMatrix::from_diag(&[1.0, 1.0]);
        let o = loewner_leq(&x, &x, 0.0).unwrap();
        assert!(o.ordered);
        assert_eq!(o.margin, 0.0);

        let o = loewner_leq(&x, &SymMatrix::from_diag(&[2.0, 3.0]), 0.0).unwrap();
        assert!(o.ordered);
        assert_eq!(o.margin, 1.0);

        let o = loewner_leq(
            &SymMatrix::from_diag(&[0.0, 2.0]),
            &SymMatrix::from_diag(&[1.0, 1.0]),
            1e-9,
        )
        .unwrap();
        assert!(!o.ordered);
        assert_eq!(o.margin, -1.0);
    }

    #[test]
    fn loewner_scalar_agreement() {
        for (a, b) in [(1.0, 2.0), (2.0, 1.0), (-3.0, -3.0), (0.5, 0.25)] {
            let o = loewner_leq(&SymMatrix::from_diag(&[a]), &SymMatrix::from_diag(&[b]), 0.0)
                .unwrap();
            assert_eq!(o.ordered, a <= b);
        }
    }
}
