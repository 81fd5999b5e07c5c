//! Gauss–Legendre rules on `[0, 1]` and panel-adaptive integration on the
//! half-line `(0, ∞)` for scalar- and matrix-valued integrands.
//!
//! Half-line integrals are mapped to the unit interval with
//! `λ = u / (1 − u)`. An integrand behaving like `λ^σ` at the origin with
//! non-integer `σ > −1` is graded by `u = x^{k/(1+σ)}`; one decaying like
//! `λ^{−δ}` with non-integer `δ > 1` by `x = 1 − (1 − w)^{k/(δ−1)}`. Both
//! turn the leading endpoint term into a polynomial, so panels need not be
//! bisected down to the endpoint.
//!
//! Inner `t`-integrals over `[0, 1]` cluster nodes logarithmically toward
//! an endpoint when the caller reports a real pole just outside it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Narrowest panel (in the mapped variable) that is still bisected.
const MIN_PANEL_WIDTH: f64 = 1e-12;

/// Values that can be accumulated by a quadrature rule.
pub trait QuadValue: Clone {
    fn scaled(&self, factor: f64) -> Self;
    fn add_scaled(&mut self, factor: f64, other: &Self);
    fn norm(&self) -> f64;
    fn distance(&self, other: &Self) -> f64;
    fn all_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn scaled(&self, factor: f64) -> Self {
        self * factor
    }

    fn add_scaled(&mut self, factor: f64, other: &Self) {
        *self += factor * other;
    }

    fn norm(&self) -> f64 {
        self.abs()
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }

    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Matrix {
    fn scaled(&self, factor: f64) -> Self {
        self.scale(factor)
    }

    fn add_scaled(&mut self, factor: f64, other: &Self) {
        Matrix::add_scaled(self, factor, other);
    }

    fn norm(&self) -> f64 {
        self.frobenius_norm()
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Roots of `P_n` by Newton iteration from the Tricomi initial guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss–Legendre order must be positive");
        let n = order;
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = libm::cos(
                core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5),
            );
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // x is the i-th largest root; store ascending on [0, 1]
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[n - 1 - i] = 0.5 * w;
            nodes[i] = 0.5 * (1.0 - x);
            weights[i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b g` with this rule.
    pub fn apply<V, G>(&self, a: f64, b: f64, g: &mut G) -> Result<V>
    where
        V: QuadValue,
        G: FnMut(f64) -> Result<V>,
    {
        let width = b - a;
        let mut acc: Option<V> = None;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let t = a + width * x;
            let y = g(t)?;
            if !y.all_finite() {
                return Err(Error::NonFiniteIntegrand { at: t });
            }
            match acc.as_mut() {
                Some(s) => s.add_scaled(w * width, &y),
                None => acc = Some(y.scaled(w * width)),
            }
        }
        Ok(acc.expect("rule has at least one node"))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// Node budgets and tolerances for the `t`- and `λ`-integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraturePlan {
    /// Gauss–Legendre nodes per `t`-panel (the fine rule; the coarse rule has half).
    pub t_order: usize,
    /// Panel cap for the adaptive `t`-integral.
    pub t_max_panels: usize,
    /// Initial panels on the mapped `λ`-interval.
    pub lambda_panels_init: usize,
    /// Nodes per `λ`-panel for the coarse estimate; the fine estimate uses twice as many.
    pub lambda_order: usize,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// `σ` with integrand `~ λ^σ` as `λ → 0`.
    pub singularity_exponent: Option<f64>,
    /// `δ` with integrand `~ λ^{−δ}` as `λ → ∞`.
    pub decay_exponent: Option<f64>,
}

impl Default for QuadraturePlan {
    fn default() -> Self {
        Self {
            t_order: 32,
            t_max_panels: 128,
            lambda_panels_init: 8,
            lambda_order: 16,
            rel_tol: 1e-9,
            max_panels: 4096,
            singularity_exponent: None,
            decay_exponent: None,
        }
    }
}

impl QuadraturePlan {
    pub fn validate(&self) -> Result<()> {
        if self.t_order < 2 {
            return Err(Error::InvalidPlan("t_order must be at least 2"));
        }
        if self.t_max_panels < 1 {
            return Err(Error::InvalidPlan("t_max_panels must be positive"));
        }
        if self.lambda_order < 1 {
            return Err(Error::InvalidPlan("lambda_order must be positive"));
        }
        if self.lambda_panels_init < 1 {
            return Err(Error::InvalidPlan("lambda_panels_init must be positive"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidPlan("rel_tol must be positive"));
        }
        if self.max_panels < self.lambda_panels_init {
            return Err(Error::InvalidPlan(
                "max_panels must be at least lambda_panels_init",
            ));
        }
        Ok(())
    }

    /// Same budgets with the given endpoint behavior.
    pub fn with_endpoints(&self, singularity: f64, decay: f64) -> Self {
        Self {
            singularity_exponent: Some(singularity),
            decay_exponent: Some(decay),
            ..self.clone()
        }
    }

    /// Same plan capped at `budget` λ-panels.
    pub fn with_panel_budget(&self, budget: usize) -> Self {
        Self {
            max_panels: budget,
            lambda_panels_init: self.lambda_panels_init.min(budget),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult<V> {
    pub value: V,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub converged: bool,
}

impl<V> IntegralResult<V> {
    pub fn into_converged(self) -> Result<V> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::QuadratureBudgetExceeded {
                panels: self.panels_used,
                error_estimate: self.error_estimate,
            })
        }
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> IntegralResult<W> {
        IntegralResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            panels_used: self.panels_used,
            converged: self.converged,
        }
    }
}

/// Fixed-order Gauss–Legendre on `[0, 1]`.
pub fn integrate_unit<V, G>(mut g: G, order: usize) -> Result<V>
where
    V: QuadValue,
    G: FnMut(f64) -> Result<V>,
{
    GaussRule::new(order).apply(0.0, 1.0, &mut g)
}

struct Panel<V> {
    a: f64,
    b: f64,
    fine: V,
    error: f64,
}

struct Adaptive<'r> {
    coarse: &'r GaussRule,
    fine: &'r GaussRule,
    rel_tol: f64,
    /// Added to the running-sum norm when scaling the tolerance: 1 gives the
    /// mixed `rel_tol·(1 + ‖I‖)` criterion, 0 a purely relative one.
    abs_floor: f64,
    init_panels: usize,
    max_panels: usize,
}

impl Adaptive<'_> {
    fn panel<V, G>(&self, a: f64, b: f64, g: &mut G) -> Result<Panel<V>>
    where
        V: QuadValue,
        G: FnMut(f64) -> Result<V>,
    {
        let coarse: V = self.coarse.apply(a, b, g)?;
        let fine: V = self.fine.apply(a, b, g)?;
        let error = coarse.distance(&fine);
        Ok(Panel { a, b, fine, error })
    }

    fn run<V, G>(&self, mut g: G) -> Result<IntegralResult<V>>
    where
        V: QuadValue,
        G: FnMut(f64) -> Result<V>,
    {
        let init = self.init_panels.max(1).min(self.max_panels.max(1));
        let mut panels = Vec::with_capacity(init);
        for i in 0..init {
            let a = i as f64 / init as f64;
            let b = (i + 1) as f64 / init as f64;
            panels.push(self.panel(a, b, &mut g)?);
        }

        loop {
            let total = sum_fine(&panels);
            let scale = self.abs_floor + total.norm();
            let mut candidates: Vec<usize> = panels
                .iter()
                .enumerate()
                .filter(|(_, p)| {
                    let width = p.b - p.a;
                    p.error > self.rel_tol * width * scale
                        && p.error > 64.0 * f64::EPSILON * p.fine.norm()
                        && width > MIN_PANEL_WIDTH
                })
                .map(|(i, _)| i)
                .collect();
            let room = self.max_panels.saturating_sub(panels.len());
            if candidates.is_empty() || room == 0 {
                break;
            }
            if candidates.len() > room {
                candidates.sort_by(|&i, &j| {
                    panels[j]
                        .error
                        .total_cmp(&panels[i].error)
                        .then(i.cmp(&j))
                });
                candidates.truncate(room);
                candidates.sort_unstable();
            }
            let mut next = Vec::with_capacity(panels.len() + candidates.len());
            let mut pick = candidates.iter().peekable();
            for (i, p) in panels.into_iter().enumerate() {
                if pick.peek() == Some(&&i) {
                    pick.next();
                    let mid = 0.5 * (p.a + p.b);
                    next.push(self.panel(p.a, mid, &mut g)?);
                    next.push(self.panel(mid, p.b, &mut g)?);
                } else {
                    next.push(p);
                }
            }
            panels = next;
        }

        let value = sum_fine(&panels);
        let error_estimate: f64 = panels.iter().map(|p| p.error).sum();
        let converged = error_estimate <= self.rel_tol * (self.abs_floor + value.norm());
        Ok(IntegralResult {
            value,
            error_estimate,
            panels_used: panels.len(),
            converged,
        })
    }
}

fn sum_fine<V: QuadValue>(panels: &[Panel<V>]) -> V {
    let mut acc = panels[0].fine.clone();
    for p in &panels[1..] {
        acc.add_scaled(1.0, &p.fine);
    }
    acc
}

/// Panel-adaptive Gauss–Legendre on `[0, 1]` with a purely relative
/// criterion. `order` is the fine rule; the coarse rule has `order / 2`
/// nodes.
pub fn integrate_unit_adaptive<V, G>(
    g: G,
    order: usize,
    rel_tol: f64,
    max_panels: usize,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    G: FnMut(f64) -> Result<V>,
{
    integrate_unit_graded(g, PoleGaps::NONE, order, rel_tol, max_panels)
}

/// Lower bounds on the distance from `[0, 1]` to the nearest singularity of
/// a `t`-integrand below `0` and above `1`. Singularities are assumed to lie
/// on the real axis, as they do for resolvents of symmetric pencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleGaps {
    pub below: f64,
    pub above: f64,
}

impl PoleGaps {
    pub const NONE: PoleGaps = PoleGaps {
        below: f64::INFINITY,
        above: f64::INFINITY,
    };

    pub fn new(below: f64, above: f64) -> Self {
        Self { below, above }
    }
}

/// Gaps at least this wide need no grading.
const GRADING_GAP: f64 = 0.5;

/// Half-interval map `s ∈ [0, 1] → τ ∈ [0, ½]` with `τ + d = d·e^{cs}`,
/// `c = ln(1 + 1/(2d))`. A double pole at `τ = −d` becomes the entire
/// function `e^{−cs}`, and any real pole at `τ ≤ −d` lands at imaginary
/// distance `π/c` from the real `s`-axis.
#[derive(Debug, Clone, Copy)]
struct EndpointMap {
    gap: f64,
    rate: f64,
}

impl EndpointMap {
    fn new(gap: f64) -> Option<Self> {
        (gap > 0.0 && gap < GRADING_GAP).then(|| Self {
            gap,
            rate: libm::log1p(0.5 / gap),
        })
    }

    fn eval(map: Option<Self>, s: f64) -> (f64, f64) {
        match map {
            Some(m) => {
                let tau = m.gap * libm::expm1(m.rate * s);
                (tau, m.rate * (tau + m.gap))
            }
            None => (0.5 * s, 0.5),
        }
    }
}

/// Adaptive `∫_0^1 g` where `g` may have real poles just outside the
/// interval. The two halves are mapped separately so that nodes cluster
/// logarithmically toward an endpoint with a narrow gap.
pub fn integrate_unit_graded<V, G>(
    mut g: G,
    gaps: PoleGaps,
    order: usize,
    rel_tol: f64,
    max_panels: usize,
) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    G: FnMut(f64) -> Result<V>,
{
    let coarse = GaussRule::new((order / 2).max(1));
    let fine = GaussRule::new(order);
    let lower = EndpointMap::new(gaps.below);
    let upper = EndpointMap::new(gaps.above);
    let graded = lower.is_some() || upper.is_some();
    let adaptive = Adaptive {
        coarse: &coarse,
        fine: &fine,
        rel_tol,
        abs_floor: 0.0,
        init_panels: if graded { 2.min(max_panels) } else { 1 },
        max_panels,
    };
    if !graded {
        return adaptive.run(g);
    }
    // s ∈ [0, ½] covers t ∈ [0, ½]; s ∈ [½, 1] covers t ∈ [½, 1] reflected
    adaptive.run(|s| {
        let (t, jac) = if s <= 0.5 {
            EndpointMap::eval(lower, 2.0 * s)
        } else {
            let (tau, jac) = EndpointMap::eval(upper, 2.0 - 2.0 * s);
            (1.0 - tau, jac)
        };
        Ok(g(t)?.scaled(2.0 * jac))
    })
}

/// Grading strength `k`: an endpoint term `λ^σ` becomes `v^{k−1}` and the
/// next term of its expansion gains `k/(1+σ)` powers of smoothness.
const GRADING_ORDER: f64 = 3.0;

fn is_integer(x: f64) -> bool {
    libm::fabs(x - libm::round(x)) < 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLineMap {
    origin_power: f64,
    tail_power: f64,
}

impl HalfLineMap {
    pub fn new(singularity: Option<f64>, decay: Option<f64>) -> Self {
        let k = GRADING_ORDER;
        let origin_power = match singularity {
            Some(s) if s > -1.0 && !is_integer(s) => k / (1.0 + s),
            _ => 1.0,
        };
        let tail_power = match decay {
            Some(d) if d > 1.0 && !is_integer(d) => k / (d - 1.0),
            _ => 1.0,
        };
        Self {
            origin_power,
            tail_power,
        }
    }

    pub fn eval(&self, w: f64) -> (f64, f64) {
        let p = self.origin_power;
        let q = self.tail_power;
        let one_minus_w = 1.0 - w;
        // s = (1 − w)^q, x = 1 − s
        let s = libm::pow(one_minus_w, q);
        let x = -libm::expm1(q * libm::log1p(-w));
        // u = x^p, 1 − u computed without cancellation
        let ln_x = libm::log1p(-s);
        let u = libm::exp(p * ln_x);
        let one_minus_u = -libm::expm1(p * ln_x);
        let lambda = u / one_minus_u;
        let du_dw = p * (u / x) * q * (s / one_minus_w);
        (lambda, du_dw / (one_minus_u * one_minus_u))
    }
}

/// `∫_0^∞ g(λ) dλ`, panel-adaptive in the mapped variable.
pub fn integrate_halfline<V, G>(mut g: G, plan: &QuadraturePlan) -> Result<IntegralResult<V>>
where
    V: QuadValue,
    G: FnMut(f64) -> Result<V>,
{
    plan.validate()?;
    let map = HalfLineMap::new(plan.singularity_exponent, plan.decay_exponent);
    let coarse = GaussRule::new(plan.lambda_order);
    let fine = GaussRule::new(2 * plan.lambda_order);
    Adaptive {
        coarse: &coarse,
        fine: &fine,
        rel_tol: plan.rel_tol,
        abs_floor: 1.0,
        init_panels: plan.lambda_panels_init,
        max_panels: plan.max_panels,
    }
    .run(|w| {
        let (lambda, jac) = map.eval(w);
        if !lambda.is_finite() || !jac.is_finite() {
            return Err(Error::NonFiniteIntegrand { at: lambda });
        }
        let y: V = g(lambda)?;
        if !y.all_finite() {
            return Err(Error::NonFiniteIntegrand { at: lambda });
        }
        Ok(y.scaled(jac))
    })
}

/// `∫_0^∞ weight(λ) ∫_0^1 kernel(λ, t) dt dλ`, with the inner integral
/// graded according to `gaps(λ)`. Converged only if the outer and every
/// inner integral converged.
pub fn integrate_double<K, W, P>(
    mut kernel: K,
    mut weight: W,
    mut gaps: P,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<Matrix>>
where
    K: FnMut(f64, f64) -> Result<Matrix>,
    W: FnMut(f64) -> f64,
    P: FnMut(f64) -> PoleGaps,
{
    plan.validate()?;
    let mut inner_ok = true;
    let outer = integrate_halfline(
        |lambda| {
            let inner = integrate_unit_graded(
                |t| kernel(lambda, t),
                gaps(lambda),
                plan.t_order,
                plan.rel_tol,
                plan.t_max_panels,
            )?;
            inner_ok &= inner.converged;
            Ok(inner.value.scaled(weight(lambda)))
        },
        plan,
    )?;
    Ok(IntegralResult {
        converged: outer.converged && inner_ok,
        ..outer
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{LN_2, PI};

    #[test]
    fn rules_integrate_constants_and_cubics() {
        for order in [2, 5, 16, 32, 64] {
            let one: f64 = integrate_unit(|_| Ok(1.0), order).unwrap();
            assert_abs_diff_eq!(one, 1.0, epsilon = 1e-15);
            let w: f64 = GaussRule::new(order).weights.iter().sum();
            assert_abs_diff_eq!(w, 1.0, epsilon = 1e-14);
        }
        let c: f64 = integrate_unit(|t| Ok(t * t * t), 32).unwrap();
        assert_abs_diff_eq!(c, 0.25, epsilon = 1e-15);
        assert_eq!(integrate_unit::<f64, _>(|_| Ok(1.0), 1).unwrap(), 1.0);
    }

    #[test]
    fn rule_is_symmetric_and_ascending() {
        let r = GaussRule::new(17);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        for i in 0..17 {
            assert_abs_diff_eq!(r.nodes[i] + r.nodes[16 - i], 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(r.weights[i], r.weights[16 - i], epsilon = 1e-15);
        }
        assert_abs_diff_eq!(r.nodes[8], 0.5, epsilon = 1e-16);
    }

    #[test]
    fn inverse_difference_kernel() {
        // ∫ 1/((1−t)·2 + t·5)² dt = (1/2 − 1/5)/3
        let v: f64 = integrate_unit(
            |t| {
                let m = (1.0 - t) * 2.0 + t * 5.0;
                Ok(1.0 / (m * m))
            },
            32,
        )
        .unwrap();
        assert_abs_diff_eq!(v, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn non_finite_integrand_reported() {
        let r = integrate_unit::<f64, _>(|t| Ok(if t > 0.5 { f64::NAN } else { 1.0 }), 4);
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn halfline_exponential() {
        let r = integrate_halfline(|l| Ok(libm::exp(-l)), &QuadraturePlan::default()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn halfline_power_kernel_with_grading() {
        let plan = QuadraturePlan::default().with_endpoints(-0.5, 1.5);
        let r = integrate_halfline(|l| Ok(1.0 / (libm::sqrt(l) * (1.0 + l))), &plan).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, PI, epsilon = 1e-8);
    }

    #[test]
    fn halfline_log_kernel() {
        let r = integrate_halfline(
            |l| Ok(1.0 / ((l + 1.0) * (l + 2.0))),
            &QuadraturePlan::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.value, LN_2, epsilon = 1e-10);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let plan = QuadraturePlan {
            max_panels: 8,
            ..QuadraturePlan::default()
        };
        // ∫ λ^{−1/2}/(1+λ) without grading needs many panels at the origin
        let r = integrate_halfline(|l| Ok(1.0 / (libm::sqrt(l) * (1.0 + l))), &plan).unwrap();
        assert!(!r.converged);
        assert_eq!(r.panels_used, 8);
        assert!(matches!(
            r.into_converged(),
            Err(Error::QuadratureBudgetExceeded { panels: 8, .. })
        ));
    }

    #[test]
    fn converged_error_bound_holds() {
        let plan = QuadraturePlan::default();
        let r = integrate_halfline(|l| Ok(libm::exp(-l) * 1e3), &plan).unwrap();
        assert!(r.converged);
        assert!(r.error_estimate >= 0.0);
        assert!(r.error_estimate <= plan.rel_tol * (1.0 + r.value.abs()));
    }

    #[test]
    fn zero_kernel_double_integral() {
        let r = integrate_double(
            |_, _| Ok(Matrix::zeros(3)),
            |l| l * l,
            |_| PoleGaps::NONE,
            &QuadraturePlan::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert_eq!(r.value, Matrix::zeros(3));
    }

    #[test]
    fn map_is_monotone_and_covers_halfline() {
        let map = HalfLineMap::new(Some(-0.75), Some(1.25));
        let mut prev = 0.0;
        for i in 1..1000 {
            let (l, j) = map.eval(i as f64 / 1000.0);
            assert!(l > prev && j > 0.0);
            prev = l;
        }
        assert!(map.eval(1e-9).0 < 1e-20);
        assert!(map.eval(1.0 - 1e-9).0 > 1e20);
    }

    #[test]
    fn invalid_plans_rejected() {
        let bad = QuadraturePlan {
            t_order: 1,
            ..QuadraturePlan::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadraturePlan {
            max_panels: 2,
            ..QuadraturePlan::default()
        };
        assert!(bad.validate().is_err());
        assert!(QuadraturePlan::default().with_panel_budget(4).validate().is_ok());
    }
}
