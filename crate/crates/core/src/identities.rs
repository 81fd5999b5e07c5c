//! Difference identities for operator monotone functions and their
//! perspectives, evaluated as quadrature objects and checked against
//! spectrally computed left-hand sides, plus the Loewner-order inequalities
//! that follow from them.
//!
//! Every right-hand side is a double integral of a resolvent "sandwich"
//!
//! ```text
//! ∫_0^∞ λ^m ∫_0^1 X R(λ,t) Δ R(λ,t) X dt dw(λ)
//! ```
//!
//! where `R` is the inverse of an SPD matrix that is affine in both `λ` and
//! `t`, computed with a Cholesky solve at every node. The left-hand sides
//! never touch the quadrature code, so a small residual is evidence for the
//! identity rather than for a shared code path.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::loewner::{
    eval_matrix_spectral, make_log_normalized, power_measure_constant, LoewnerFunction, Measure,
    OperatorFunction,
};
use crate::matrix::{Cholesky, Matrix};
use crate::perspective::{geometric_mean, perspective, relative_entropy, relative_residual, Weight};
use crate::quadrature::{integrate_double, integrate_halfline, integrate_unit_graded, IntegralResult, PoleGaps, QuadraturePlan};
use crate::spd::{check_dims, loewner_leq, LoewnerOrder, SpdMatrix, SymMatrix};

/// Identifier of a checked identity or inequality. The string forms are
/// the report tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    /// `C^{-1} − D^{-1}` as a segment integral.
    InverseDifference,
    /// `f(V) − f(U)`.
    MonotoneDifference,
    /// `P_f(B,P) − P_f(A,P)`.
    PerspectiveDifference,
    /// `f̃(V) − f̃(U)`.
    TransposeDifference,
    /// `P_f̃(D,Q) − P_f̃(C,Q)`.
    TransposePerspectiveDifference,
    /// `P_f(Q,D) − P_f(Q,C)`, sharing the right-hand side above.
    ReversedPerspectiveDifference,
    /// `P_f(A,B) − P_f(C,D)`.
    FourOperatorDifference,
    /// `P ♯_r B − P ♯_r A`.
    GeometricMeanDifference,
    /// `D ♯_r Q − C ♯_r Q`.
    DualGeometricMeanDifference,
    /// `ln V − ln U`.
    LogDifference,
    /// `S(P|B) − S(P|A)`.
    EntropyDifference,
    /// `P_f(B,P) − P_f(A,P) ≥ b(B − A)`.
    PerspectiveLowerBound,
    /// `P_f(P,B) − P_f(P,A) ≥ a(B − A)`.
    DualLowerBound,
    /// `P_f(A,B) − P_f(C,D) ≥ b(A − C) + a(B − D)`.
    FourOperatorLowerBound,
    /// `P_f(P,B) − P_f(P,A) ≥ a(B − A) ≥ 0` for nonnegative `f`.
    DualNonnegative,
    /// `A ♯_ν B ≤ A ∇_ν B`.
    Young,
    /// `P_f(A,B) ≥ P_f(C,D)` for nonnegative `f`.
    PerspectiveMonotone,
    /// `P_f̃(A,B) = P_f(B,A)`.
    TransposeSymmetry,
}

impl IdentityId {
    pub const ALL: [IdentityId; 18] = [
        IdentityId::InverseDifference,
        IdentityId::MonotoneDifference,
        IdentityId::PerspectiveDifference,
        IdentityId::TransposeDifference,
        IdentityId::TransposePerspectiveDifference,
        IdentityId::ReversedPerspectiveDifference,
        IdentityId::FourOperatorDifference,
        IdentityId::GeometricMeanDifference,
        IdentityId::DualGeometricMeanDifference,
        IdentityId::LogDifference,
        IdentityId::EntropyDifference,
        IdentityId::PerspectiveLowerBound,
        IdentityId::DualLowerBound,
        IdentityId::FourOperatorLowerBound,
        IdentityId::DualNonnegative,
        IdentityId::Young,
        IdentityId::PerspectiveMonotone,
        IdentityId::TransposeSymmetry,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::InverseDifference => "E2.5",
            IdentityId::MonotoneDifference => "L2.1",
            IdentityId::PerspectiveDifference => "T2.1",
            IdentityId::TransposeDifference => "L2.2",
            IdentityId::TransposePerspectiveDifference => "T2.2",
            IdentityId::ReversedPerspectiveDifference => "C2.1",
            IdentityId::FourOperatorDifference => "C2.2",
            IdentityId::GeometricMeanDifference => "P3.1",
            IdentityId::DualGeometricMeanDifference => "P3.2",
            IdentityId::LogDifference => "L2.3",
            IdentityId::EntropyDifference => "T2.4",
            IdentityId::PerspectiveLowerBound => "INEQ-2.16",
            IdentityId::DualLowerBound => "INEQ-2.17",
            IdentityId::FourOperatorLowerBound => "INEQ-2.17a",
            IdentityId::DualNonnegative => "INEQ-2.18",
            IdentityId::Young => "YOUNG",
            IdentityId::PerspectiveMonotone => "THM-C",
            IdentityId::TransposeSymmetry => "TRANSPOSE-1.4",
        }
    }

    /// Inequalities report a Loewner margin instead of a residual.
    pub fn is_inequality(self) -> bool {
        matches!(
            self,
            IdentityId::PerspectiveLowerBound
                | IdentityId::DualLowerBound
                | IdentityId::FourOperatorLowerBound
                | IdentityId::DualNonnegative
                | IdentityId::Young
                | IdentityId::PerspectiveMonotone
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Unsupported(alloc::format!("unknown identity `{s}`")))
    }
}

/// One row of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub identity: IdentityId,
    pub fn_label: String,
    pub dim: usize,
    pub seed: u64,
    pub lhs_norm: f64,
    /// Relative residual for identities, Loewner margin for inequalities.
    pub value: f64,
    pub panels_used: usize,
    pub converged: bool,
    pub pass: bool,
}

/// Residual of one identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub lhs_norm: f64,
    /// `‖LHS − RHS‖_F / max(1, ‖LHS‖_F)`.
    pub residual: f64,
    pub panels_used: usize,
    pub converged: bool,
}

impl IdentityCheck {
    fn new(lhs: &SymMatrix, rhs: &IntegralResult<SymMatrix>) -> Self {
        Self {
            lhs_norm: lhs.frobenius_norm(),
            residual: relative_residual(lhs, &rhs.value),
            panels_used: rhs.panels_used,
            converged: rhs.converged,
        }
    }
}

/// λ-exponent convention for the geometric-mean identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    /// `λ^r` and `λ^{r−1}`, the exponents implied by the measure
    /// `sin(rπ)/π · λ^{r−2} dλ` of `t^r`.
    #[default]
    Corrected,
    /// `λ^{r+1}` and `λ^r`. These do not reproduce the means (the first
    /// integral diverges) and are kept only to demonstrate that.
    AsPrinted,
}

impl ExponentMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExponentMode::Corrected => "corrected",
            ExponentMode::AsPrinted => "as_printed",
        }
    }
}

impl FromStr for ExponentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(ExponentMode::Corrected),
            "as_printed" | "as-printed" => Ok(ExponentMode::AsPrinted),
            other => Err(Error::Unsupported(alloc::format!(
                "unknown exponent mode `{other}`"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// kernels

/// `X R Δ R X` with `R = shifted^{-1}`; `X = I` when `outer` is `None`.
fn sandwich(shifted: &Matrix, outer: Option<&Matrix>, diff: &Matrix) -> Result<Matrix> {
    let chol = Cholesky::factor(shifted)?;
    let y = match outer {
        Some(x) => chol.solve(x),
        None => chol.solve(&Matrix::identity(shifted.dim())),
    };
    // yᵀ = X R since R and X are symmetric
    Ok(y.tr_matmul(&diff.matmul(&y)))
}

/// A `t`-integrand family together with bounds on its pole gaps.
trait SegmentFamily {
    fn dim(&self) -> usize;
    fn eval(&self, lambda: f64, t: f64) -> Result<Matrix>;
    fn gaps(&self, lambda: f64) -> PoleGaps;
}

fn gap(numerator: f64, denominator: f64) -> f64 {
    if denominator > 0.0 {
        numerator / denominator
    } else {
        f64::INFINITY
    }
}

/// `X ((1−t)A + tB + λX)^{-1} (B − A) ((1−t)A + tB + λX)^{-1} X`.
struct SegmentKernel<'a> {
    start: &'a SpdMatrix,
    end: &'a SpdMatrix,
    base: Option<&'a SpdMatrix>,
    diff: Matrix,
    diff_norm: f64,
}

impl<'a> SegmentKernel<'a> {
    fn new(start: &'a SpdMatrix, end: &'a SpdMatrix, base: Option<&'a SpdMatrix>) -> Self {
        let diff = end.as_matrix() - start.as_matrix();
        Self {
            start,
            end,
            base,
            diff_norm: diff.frobenius_norm(),
            diff,
        }
    }
}

impl SegmentFamily for SegmentKernel<'_> {
    fn dim(&self) -> usize {
        self.diff.dim()
    }

    fn eval(&self, lambda: f64, t: f64) -> Result<Matrix> {
        let mut m = Matrix::lin_comb(1.0 - t, self.start, t, self.end);
        match self.base {
            Some(p) => m.add_scaled(lambda, p),
            None => m = m.shifted(lambda),
        }
        sandwich(&m, self.base.map(|p| p.as_matrix()), &self.diff)
    }

    // A + λX + tΔ ≥ λ_min(A) + λ·λ_min(X) − |t|·‖Δ‖ for t < 0, and likewise at t = 1
    fn gaps(&self, lambda: f64) -> PoleGaps {
        let shift = lambda * self.base.map_or(1.0, |p| p.min_eigenvalue());
        PoleGaps::new(
            gap(self.start.min_eigenvalue() + shift, self.diff_norm),
            gap(self.end.min_eigenvalue() + shift, self.diff_norm),
        )
    }
}

/// `X (X + λ[(1−t)C + tD])^{-1} (D − C) (X + λ[(1−t)C + tD])^{-1} X`.
struct DualKernel<'a> {
    start: &'a SpdMatrix,
    end: &'a SpdMatrix,
    base: Option<&'a SpdMatrix>,
    diff: Matrix,
    diff_norm: f64,
}

impl<'a> DualKernel<'a> {
    fn new(start: &'a SpdMatrix, end: &'a SpdMatrix, base: Option<&'a SpdMatrix>) -> Self {
        let diff = end.as_matrix() - start.as_matrix();
        Self {
            start,
            end,
            base,
            diff_norm: diff.frobenius_norm(),
            diff,
        }
    }
}

impl SegmentFamily for DualKernel<'_> {
    fn dim(&self) -> usize {
        self.diff.dim()
    }

    fn eval(&self, lambda: f64, t: f64) -> Result<Matrix> {
        let segment = Matrix::lin_comb(1.0 - t, self.start, t, self.end);
        let m = match self.base {
            Some(q) => Matrix::lin_comb(1.0, q, lambda, &segment),
            None => segment.scale(lambda).shifted(1.0),
        };
        sandwich(&m, self.base.map(|q| q.as_matrix()), &self.diff)
    }

    fn gaps(&self, lambda: f64) -> PoleGaps {
        let base = self.base.map_or(1.0, |q| q.min_eigenvalue());
        let scale = lambda * self.diff_norm;
        PoleGaps::new(
            gap(base + lambda * self.start.min_eigenvalue(), scale),
            gap(base + lambda * self.end.min_eigenvalue(), scale),
        )
    }
}

fn zero_result(dim: usize) -> IntegralResult<Matrix> {
    IntegralResult {
        value: Matrix::zeros(dim),
        error_estimate: 0.0,
        panels_used: 0,
        converged: true,
    }
}

/// `∫ λ^m ∫_0^1 kernel(λ, t) dt dw(λ)`; kernels are `O(1)` at the origin
/// and `O(λ^{-2})` at infinity.
fn measure_double_integral<K: SegmentFamily>(
    measure: &Measure,
    lambda_power: f64,
    kernel: &K,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<Matrix>> {
    match measure {
        Measure::Discrete(atoms) => {
            let mut out = zero_result(kernel.dim());
            for atom in atoms {
                let inner = integrate_unit_graded(
                    |t| kernel.eval(atom.position, t),
                    kernel.gaps(atom.position),
                    plan.t_order,
                    plan.rel_tol,
                    plan.t_max_panels,
                )?;
                let w = atom.weight * libm::pow(atom.position, lambda_power);
                out.value.add_scaled(w, &inner.value);
                out.error_estimate += w * inner.error_estimate;
                out.panels_used += inner.panels_used;
                out.converged &= inner.converged;
            }
            Ok(out)
        }
        Measure::Density(d) => {
            let sigma = lambda_power + d.singularity_exponent();
            let delta = 2.0 - lambda_power + d.decay_exponent();
            if !integrable(sigma, delta) {
                return divergent(kernel);
            }
            integrate_double(
                |l, t| kernel.eval(l, t),
                |l| libm::pow(l, lambda_power) * d.eval(l),
                |l| kernel.gaps(l),
                &plan.with_endpoints(sigma, delta),
            )
        }
    }
}

/// `c ∫ λ^k ∫_0^1 kernel dt dλ` against Lebesgue measure.
fn lebesgue_double_integral<K: SegmentFamily>(
    coefficient: f64,
    lambda_power: f64,
    kernel: &K,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<Matrix>> {
    if !integrable(lambda_power, 2.0 - lambda_power) {
        return divergent(kernel);
    }
    integrate_double(
        |l, t| kernel.eval(l, t),
        |l| coefficient * libm::pow(l, lambda_power),
        |l| kernel.gaps(l),
        &plan.with_endpoints(lambda_power, 2.0 - lambda_power),
    )
}

/// `∫ λ^σ` near 0 and `∫ λ^{−δ}` near ∞ both finite.
fn integrable(sigma: f64, delta: f64) -> bool {
    sigma > -1.0 && delta > 1.0
}

/// A non-integrable weight against a kernel that is not identically zero
/// (it vanishes only when the difference does): the integral is infinite.
/// Reported as unconverged without sampling the half-line.
fn divergent<K: SegmentFamily>(kernel: &K) -> Result<IntegralResult<Matrix>> {
    let probe = kernel.eval(1.0, 0.5)?;
    if probe.max_abs() == 0.0 {
        return Ok(zero_result(kernel.dim()));
    }
    let n = kernel.dim();
    Ok(IntegralResult {
        value: Matrix::from_row_major(n, alloc::vec![f64::INFINITY; n * n]),
        error_estimate: f64::INFINITY,
        panels_used: 0,
        converged: false,
    })
}

fn require_loewner(f: &LoewnerFunction) -> Result<()> {
    if f.is_logarithm() {
        return Err(Error::Unsupported(String::from(
            "the logarithm has no Löwner triple here; use the logarithmic identities",
        )));
    }
    Ok(())
}

fn finish(affine: Matrix, integral: IntegralResult<Matrix>) -> IntegralResult<SymMatrix> {
    integral.map(|m| SymMatrix::symmetrize(&(&affine + &m)))
}

fn combine(
    x: IntegralResult<SymMatrix>,
    y: IntegralResult<SymMatrix>,
) -> IntegralResult<SymMatrix> {
    IntegralResult {
        value: x.value.add(&y.value),
        error_estimate: x.error_estimate + y.error_estimate,
        panels_used: x.panels_used + y.panels_used,
        converged: x.converged && y.converged,
    }
}

fn power_parameter(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "power exponent",
            value: r,
        });
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// right-hand sides

/// `∫_0^1 ((1−t)C + tD)^{-1} (D − C) ((1−t)C + tD)^{-1} dt`.
pub fn rhs_inverse_difference(
    c: &SpdMatrix,
    d: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    check_dims(c.dim(), d.dim())?;
    plan.validate()?;
    let kernel = SegmentKernel::new(c, d, None);
    let r = integrate_unit_graded(
        |t| kernel.eval(0.0, t),
        kernel.gaps(0.0),
        plan.t_order,
        plan.rel_tol,
        plan.t_max_panels,
    )?;
    Ok(r.map(|m| SymMatrix::symmetrize(&m)))
}

/// Directional derivative `T^{-1} S T^{-1}` of `T ↦ −T^{-1}`.
pub fn frechet_inverse(t: &SpdMatrix, s: &SymMatrix) -> Result<SymMatrix> {
    check_dims(t.dim(), s.dim())?;
    let chol = Cholesky::factor(t)?;
    let y = chol.solve(s); // T^{-1} S
    let z = chol.solve(&y.transpose()); // T^{-1} S T^{-1}, transposed
    Ok(SymMatrix::symmetrize(&z.transpose()))
}

/// `b(V − U) + ∫ λ² ∫ (M(t)+λ)^{-1} (V − U) (M(t)+λ)^{-1} dt dw(λ)`,
/// `M(t) = (1−t)U + tV`.
pub fn rhs_monotone_difference(
    f: &LoewnerFunction,
    u: &SpdMatrix,
    v: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    segment_rhs(f, u, v, None, plan)
}

/// `b(B − A) + ∫ λ² ∫ P (M(t)+λP)^{-1} (B − A) (M(t)+λP)^{-1} P dt dw(λ)`,
/// `M(t) = (1−t)A + tB`.
pub fn rhs_perspective_difference(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    segment_rhs(f, a, b, Some(p), plan)
}

fn segment_rhs(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: Option<&SpdMatrix>,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    require_loewner(f)?;
    check_dims(a.dim(), b.dim())?;
    if let Some(p) = p {
        check_dims(a.dim(), p.dim())?;
    }
    let kernel = SegmentKernel::new(a, b, p);
    let affine = kernel.diff.scale(f.b());
    let integral = if f.measure().is_zero() {
        zero_result(a.dim())
    } else {
        measure_double_integral(f.measure(), 2.0, &kernel, plan)?
    };
    Ok(finish(affine, integral))
}

/// `a(V − U) + ∫ λ ∫ (1 + λM(t))^{-1} (V − U) (1 + λM(t))^{-1} dt dw(λ)`.
pub fn rhs_transpose_difference(
    f: &LoewnerFunction,
    u: &SpdMatrix,
    v: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    dual_rhs(f, u, v, None, plan)
}

/// `a(D − C) + ∫ λ ∫ Q (Q + λN(t))^{-1} (D − C) (Q + λN(t))^{-1} Q dt dw(λ)`,
/// `N(t) = (1−t)C + tD`.
pub fn rhs_transpose_perspective_difference(
    f: &LoewnerFunction,
    c: &SpdMatrix,
    d: &SpdMatrix,
    q: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    dual_rhs(f, c, d, Some(q), plan)
}

fn dual_rhs(
    f: &LoewnerFunction,
    c: &SpdMatrix,
    d: &SpdMatrix,
    q: Option<&SpdMatrix>,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    require_loewner(f)?;
    check_dims(c.dim(), d.dim())?;
    if let Some(q) = q {
        check_dims(c.dim(), q.dim())?;
    }
    let kernel = DualKernel::new(c, d, q);
    let affine = kernel.diff.scale(f.a());
    let integral = if f.measure().is_zero() {
        zero_result(c.dim())
    } else {
        measure_double_integral(f.measure(), 1.0, &kernel, plan)?
    };
    Ok(finish(affine, integral))
}

/// `P_f(A,B) − P_f(C,D)` split as `[P_f(A,B) − P_f(C,B)] + [P_f(C,B) − P_f(C,D)]`:
/// a segment integral with base `B` from `C` to `A` plus a dual integral
/// with base `C` from `D` to `B`.
pub fn rhs_four_operator_difference(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    c: &SpdMatrix,
    d: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    let first = rhs_perspective_difference(f, c, a, b, plan)?;
    let second = rhs_transpose_perspective_difference(f, d, b, c, plan)?;
    Ok(combine(first, second))
}

/// `P ♯_r B − P ♯_r A = sin(rπ)/π ∫ λ^k ∫ P (M(t)+λP)^{-1} (B − A) (M(t)+λP)^{-1} P dt dλ`
/// with `k = r` (or `r + 1` in [`ExponentMode::AsPrinted`]).
pub fn rhs_geometric_mean_difference(
    r: f64,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    plan: &QuadraturePlan,
    mode: ExponentMode,
) -> Result<IntegralResult<SymMatrix>> {
    let r = power_parameter(r)?;
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), p.dim())?;
    let k = match mode {
        ExponentMode::Corrected => r,
        ExponentMode::AsPrinted => r + 1.0,
    };
    let kernel = SegmentKernel::new(a, b, Some(p));
    let res = lebesgue_double_integral(power_measure_constant(r), k, &kernel, plan)?;
    Ok(res.map(|m| SymMatrix::symmetrize(&m)))
}

/// `D ♯_r Q − C ♯_r Q = sin(rπ)/π ∫ λ^k ∫ Q (Q + λN(t))^{-1} (D − C) (Q + λN(t))^{-1} Q dt dλ`
/// with `k = r − 1` (or `r` in [`ExponentMode::AsPrinted`]).
pub fn rhs_dual_geometric_mean_difference(
    r: f64,
    c: &SpdMatrix,
    d: &SpdMatrix,
    q: &SpdMatrix,
    plan: &QuadraturePlan,
    mode: ExponentMode,
) -> Result<IntegralResult<SymMatrix>> {
    let r = power_parameter(r)?;
    check_dims(c.dim(), d.dim())?;
    check_dims(c.dim(), q.dim())?;
    let k = match mode {
        ExponentMode::Corrected => r - 1.0,
        ExponentMode::AsPrinted => r,
    };
    let kernel = DualKernel::new(c, d, Some(q));
    let res = lebesgue_double_integral(power_measure_constant(r), k, &kernel, plan)?;
    Ok(res.map(|m| SymMatrix::symmetrize(&m)))
}

/// `ln V − ln U = ∫_0^∞ ∫_0^1 (λ + M(t))^{-1} (V − U) (λ + M(t))^{-1} dt dλ`.
pub fn rhs_log_difference(
    u: &SpdMatrix,
    v: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    check_dims(u.dim(), v.dim())?;
    let kernel = SegmentKernel::new(u, v, None);
    let res = lebesgue_double_integral(1.0, 0.0, &kernel, plan)?;
    Ok(res.map(|m| SymMatrix::symmetrize(&m)))
}

/// `ln V − ln U = ∫_0^∞ [(λ + U)^{-1} − (λ + V)^{-1}] dλ`.
pub fn rhs_log_difference_single(
    u: &SpdMatrix,
    v: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    check_dims(u.dim(), v.dim())?;
    let id = Matrix::identity(u.dim());
    let res = integrate_halfline(
        |l| {
            let ru = Cholesky::factor(&u.shifted(l))?.solve(&id);
            let rv = Cholesky::factor(&v.shifted(l))?.solve(&id);
            Ok(&ru - &rv)
        },
        &plan.with_endpoints(0.0, 2.0),
    )?;
    Ok(res.map(|m| SymMatrix::symmetrize(&m)))
}

/// `S(P|B) − S(P|A) = ∫_0^∞ ∫_0^1 P (M(t)+λP)^{-1} (B − A) (M(t)+λP)^{-1} P dt dλ`.
pub fn rhs_entropy_difference(
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), p.dim())?;
    let kernel = SegmentKernel::new(a, b, Some(p));
    let res = lebesgue_double_integral(1.0, 0.0, &kernel, plan)?;
    Ok(res.map(|m| SymMatrix::symmetrize(&m)))
}

// ---------------------------------------------------------------------------
// checks: spectral left-hand side against quadrature right-hand side

fn spectral_inverse(m: &SpdMatrix) -> Result<Matrix> {
    Ok(Cholesky::factor(m)?.solve(&Matrix::identity(m.dim())))
}

pub fn check_inverse_difference(
    c: &SpdMatrix,
    d: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IdentityCheck> {
    let lhs = SymMatrix::symmetrize(&(&spectral_inverse(c)? - &spectral_inverse(d)?));
    Ok(IdentityCheck::new(&lhs, &rhs_inverse_difference(c, d, plan)?))
}

pub fn check_monotone_difference(
    f: &LoewnerFunction,
    u: &SpdMatrix,
    v: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IdentityCheck> {
    let rhs = rhs_monotone_difference(f, u, v, plan)?;
    let lhs = eval_matrix_spectral(f, v)?.sub(&eval_matrix_spectral(f, u)?);
    Ok(IdentityCheck::new(&lhs, &rhs))
}

pub fn check_perspective_difference(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IdentityCheck> {
    let rhs = rhs_perspective_difference(f, a, b, p, plan)?;
    let lhs = perspective(f, b, p)?.sub(&perspective(f, a, p)?);
    Ok(IdentityCheck::new(&lhs, &rhs))
}

pub fn check_transpose_difference(
    f: &LoewnerFunction,
    u: &SpdMatrix,
    v: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IdentityCheck> {
    let rhs = rhs_transpose_difference(f, u, v, plan)?;
    let ft = f.transpose();
    let lhs = eval_matrix_spectral(&ft, v)?.sub(&eval_matrix_spectral(&ft, u)?);
    Ok(IdentityCheck::new(&lhs, &rhs))
}

/// Checks both `P_f̃(D,Q) − P_f̃(C,Q)` and `P_f(Q,D) − P_f(Q,C)` against one
/// right-hand side. Returns `(transpose form, reversed form)`.
pub fn check_transpose_perspective_difference(
    f: &LoewnerFunction,
    c: &SpdMatrix,
    d: &SpdMatrix,
    q: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<(IdentityCheck, IdentityCheck)> {
    let rhs = rhs_transpose_perspective_difference(f, c, d, q, plan)?;
    let ft = f.transpose();
    let via_transpose = perspective(&ft, d, q)?.sub(&perspective(&ft, c, q)?);
    let reversed = perspective(f, q, d)?.sub(&perspective(f, q, c)?);
    Ok((
        IdentityCheck::new(&via_transpose, &rhs),
        IdentityCheck::new(&reversed, &rhs),
    ))
}

pub fn check_four_operator_difference(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    c: &SpdMatrix,
    d: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IdentityCheck> {
    let rhs = rhs_four_operator_difference(f, a, b, c, d, plan)?;
    let lhs = perspective(f, a, b)?.sub(&perspective(f, c, d)?);
    Ok(IdentityCheck::new(&lhs, &rhs))
}

pub fn check_geometric_mean_difference(
    r: f64,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    plan: &QuadraturePlan,
    mode: ExponentMode,
) -> Result<IdentityCheck> {
    let rhs = rhs_geometric_mean_difference(r, a, b, p, plan, mode)?;
    let nu = Weight::new(r)?;
    let lhs = geometric_mean(p, b, nu)?.into_sym().sub(geometric_mean(p, a, nu)?.as_sym());
    Ok(IdentityCheck::new(&lhs, &rhs))
}

pub fn check_dual_geometric_mean_difference(
    r: f64,
    c: &SpdMatrix,
    d: &SpdMatrix,
    q: &SpdMatrix,
    plan: &QuadraturePlan,
    mode: ExponentMode,
) -> Result<IdentityCheck> {
    let rhs = rhs_dual_geometric_mean_difference(r, c, d, q, plan, mode)?;
    let nu = Weight::new(r)?;
    let lhs = geometric_mean(d, q, nu)?.into_sym().sub(geometric_mean(c, q, nu)?.as_sym());
    Ok(IdentityCheck::new(&lhs, &rhs))
}

pub fn check_log_difference(
    u: &SpdMatrix,
    v: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IdentityCheck> {
    let rhs = rhs_log_difference(u, v, plan)?;
    let ln = make_log_normalized();
    let lhs = eval_matrix_spectral(&ln, v)?.sub(&eval_matrix_spectral(&ln, u)?);
    Ok(IdentityCheck::new(&lhs, &rhs))
}

/// Relative agreement of the double- and single-integral forms of
/// `ln V − ln U`.
pub fn log_forms_agreement(u: &SpdMatrix, v: &SpdMatrix, plan: &QuadraturePlan) -> Result<f64> {
    let double = rhs_log_difference(u, v, plan)?;
    let single = rhs_log_difference_single(u, v, plan)?;
    Ok(relative_residual(&single.value, &double.value))
}

pub fn check_entropy_difference(
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IdentityCheck> {
    let rhs = rhs_entropy_difference(a, b, p, plan)?;
    let lhs = relative_entropy(p, b)?.sub(&relative_entropy(p, a)?);
    Ok(IdentityCheck::new(&lhs, &rhs))
}

// ---------------------------------------------------------------------------
// inequalities

/// Loewner margin of one inequality trial.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub order: LoewnerOrder,
    /// Norm of the larger side.
    pub upper_norm: f64,
}

fn inequality(lower: &SymMatrix, upper: &SymMatrix, tol: f64) -> Result<InequalityCheck> {
    Ok(InequalityCheck {
        order: loewner_leq(lower, upper, tol)?,
        upper_norm: upper.frobenius_norm(),
    })
}

/// `P_f(B,P) ≥ P_f(A,P) + b(B − A)` for `B ≥ A`.
pub fn inequality_perspective_lower_bound(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    tol: f64,
) -> Result<InequalityCheck> {
    require_loewner(f)?;
    let upper = perspective(f, b, p)?;
    let lower = perspective(f, a, p)?.add(&b.sub(a).scale(f.b()));
    inequality(&lower, &upper, tol)
}

/// `P_f(P,B) ≥ P_f(P,A) + a(B − A)` for `B ≥ A`.
pub fn inequality_dual_lower_bound(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    tol: f64,
) -> Result<InequalityCheck> {
    require_loewner(f)?;
    let upper = perspective(f, p, b)?;
    let lower = perspective(f, p, a)?.add(&b.sub(a).scale(f.a()));
    inequality(&lower, &upper, tol)
}

/// `P_f(P,B) − P_f(P,A) ≥ a(B − A) ≥ 0` for nonnegative `f` and `B ≥ A`.
/// The margin is the smaller of the two links of the chain.
pub fn inequality_dual_nonnegative(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &SpdMatrix,
    tol: f64,
) -> Result<InequalityCheck> {
    if !f.is_nonnegative() {
        return Err(Error::NotNonnegative { label: f.label() });
    }
    let first = inequality_dual_lower_bound(f, a, b, p, tol)?;
    let bound = b.sub(a).scale(f.a());
    let second = inequality(&SymMatrix::zeros(a.dim()), &bound, tol)?;
    let order = if first.order.margin <= second.order.margin {
        first.order
    } else {
        second.order
    };
    Ok(InequalityCheck {
        order: LoewnerOrder {
            ordered: first.order.ordered && second.order.ordered,
            ..order
        },
        upper_norm: first.upper_norm,
    })
}

/// Four-operator bound for `A ≥ C`, `B ≥ D`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourOperatorInequality {
    pub check: InequalityCheck,
    /// `λ_min[P_f(A,B) − P_f(C,D)] − λ_min[b(A − C) + a(B − D)]`; positive
    /// when the affine bound improves on plain monotonicity.
    pub improvement_gap: f64,
}

/// `P_f(A,B) − P_f(C,D) ≥ b(A − C) + a(B − D)` for `A ≥ C`, `B ≥ D`.
pub fn inequality_four_operator(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    c: &SpdMatrix,
    d: &SpdMatrix,
    tol: f64,
) -> Result<FourOperatorInequality> {
    require_loewner(f)?;
    let upper = perspective(f, a, b)?;
    let base = perspective(f, c, d)?;
    let bound = SymMatrix::lin_comb(f.b(), &a.sub(c), f.a(), &b.sub(d));
    let check = inequality(&base.add(&bound), &upper, tol)?;
    let improvement_gap = upper.sub(&base).min_eigenvalue()? - bound.min_eigenvalue()?;
    Ok(FourOperatorInequality {
        check,
        improvement_gap,
    })
}

/// `A ♯_ν B ≤ A ∇_ν B`.
pub fn inequality_young(
    a: &SpdMatrix,
    b: &SpdMatrix,
    nu: Weight,
    tol: f64,
) -> Result<InequalityCheck> {
    let am = crate::perspective::arithmetic_mean(a, b, nu)?;
    let gm = geometric_mean(a, b, nu)?;
    inequality(&gm, &am, tol)
}

/// `P_f(A,B) ≥ P_f(C,D)` for nonnegative `f`, `A ≥ C`, `B ≥ D`.
pub fn inequality_perspective_monotone(
    f: &LoewnerFunction,
    a: &SpdMatrix,
    b: &SpdMatrix,
    c: &SpdMatrix,
    d: &SpdMatrix,
    tol: f64,
) -> Result<InequalityCheck> {
    if !f.is_nonnegative() {
        return Err(Error::NotNonnegative { label: f.label() });
    }
    inequality(&perspective(f, c, d)?, &perspective(f, a, b)?, tol)
}

/// Inputs of one inequality trial: ordered pairs `lower ≤ upper`.
#[derive(Debug, Clone)]
pub struct InequalityTrial {
    pub seed: u64,
    /// `(A, B)` with `B ≥ A`, used as `(C, A)` for the four-operator forms.
    pub first: (SpdMatrix, SpdMatrix),
    /// `(D, B)` for the four-operator forms.
    pub second: (SpdMatrix, SpdMatrix),
    pub p: SpdMatrix,
    pub nu: Weight,
}

/// Runs every inequality applicable to `f` over the trials.
pub fn check_inequalities(
    f: &LoewnerFunction,
    trials: &[InequalityTrial],
    tol: f64,
) -> Result<alloc::vec::Vec<ResidualReport>> {
    let mut out = alloc::vec::Vec::new();
    for trial in trials {
        for id in inequality_ids(f) {
            out.push(run_inequality(f, id, trial, tol)?);
        }
    }
    Ok(out)
}

/// Inequalities that apply to `f`.
pub fn inequality_ids(f: &LoewnerFunction) -> alloc::vec::Vec<IdentityId> {
    let mut ids = alloc::vec::Vec::new();
    if !f.is_logarithm() {
        ids.extend([
            IdentityId::PerspectiveLowerBound,
            IdentityId::DualLowerBound,
            IdentityId::FourOperatorLowerBound,
        ]);
        if f.is_nonnegative() {
            ids.extend([IdentityId::DualNonnegative, IdentityId::PerspectiveMonotone]);
        }
    }
    ids.push(IdentityId::Young);
    ids
}

/// One inequality on one trial, as a report row.
pub fn run_inequality(
    f: &LoewnerFunction,
    id: IdentityId,
    trial: &InequalityTrial,
    tol: f64,
) -> Result<ResidualReport> {
    let (a, b) = (&trial.first.0, &trial.first.1);
    let (c, a4) = (&trial.first.0, &trial.first.1);
    let (d, b4) = (&trial.second.0, &trial.second.1);
    let check = match id {
        IdentityId::PerspectiveLowerBound => inequality_perspective_lower_bound(f, a, b, &trial.p, tol)?,
        IdentityId::DualLowerBound => inequality_dual_lower_bound(f, a, b, &trial.p, tol)?,
        IdentityId::DualNonnegative => inequality_dual_nonnegative(f, a, b, &trial.p, tol)?,
        IdentityId::FourOperatorLowerBound => inequality_four_operator(f, a4, b4, c, d, tol)?.check,
        IdentityId::PerspectiveMonotone => inequality_perspective_monotone(f, a4, b4, c, d, tol)?,
        IdentityId::Young => inequality_young(a, b, trial.nu, tol)?,
        other => {
            return Err(Error::Unsupported(alloc::format!(
                "{other} is not an inequality"
            )))
        }
    };
    Ok(ResidualReport {
        identity: id,
        fn_label: f.label(),
        dim: a.dim(),
        seed: trial.seed,
        lhs_norm: check.upper_norm,
        value: check.order.margin,
        panels_used: 0,
        converged: true,
        pass: check.order.ordered,
    })
}
