//! Operator monotone functions in Löwner form
//! `f(t) = a + b t + ∫ t λ / (t + λ) dw(λ)` and their evaluation on
//! scalars and matrices.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quadrature::{integrate_halfline, IntegralResult, QuadraturePlan};
use crate::spd::{resolvent_apply, sym_eig, SpdMatrix, SymMatrix};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Point mass `weight` at `position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

/// Positive measure on `(0, ∞)` given by a density `d(λ)`, with
/// `d(λ) ~ λ^σ` at the origin and `d(λ) ~ λ^{−δ}` at infinity.
#[derive(Clone)]
pub struct Density {
    pdf: ScalarFn,
    singularity_exponent: f64,
    decay_exponent: f64,
}

impl Density {
    pub fn eval(&self, lambda: f64) -> f64 {
        (self.pdf)(lambda)
    }

    pub fn singularity_exponent(&self) -> f64 {
        self.singularity_exponent
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("singularity_exponent", &self.singularity_exponent)
            .field("decay_exponent", &self.decay_exponent)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Measure {
    Discrete(Vec<Atom>),
    Density(Density),
}

impl Measure {
    pub fn zero() -> Self {
        Measure::Discrete(Vec::new())
    }

    pub fn discrete(atoms: &[(f64, f64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(atoms.len());
        for &(position, weight) in atoms {
            if !(position > 0.0) || !position.is_finite() {
                return Err(Error::ParamOutOfRange {
                    name: "atom position",
                    value: position,
                });
            }
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(Error::ParamOutOfRange {
                    name: "atom weight",
                    value: weight,
                });
            }
            out.push(Atom { position, weight });
        }
        Ok(Measure::Discrete(out))
    }

    /// Density measure. The declared exponents must allow
    /// `∫ λ/(1+λ) d(λ) dλ < ∞`, and the integral is also checked
    /// numerically.
    pub fn density(
        pdf: ScalarFn,
        singularity_exponent: f64,
        decay_exponent: f64,
    ) -> Result<Self> {
        if !(singularity_exponent > -2.0) {
            return Err(Error::NonIntegrableMeasure {
                reason: format!("singularity exponent {singularity_exponent} ≤ −2"),
            });
        }
        if !(decay_exponent > 1.0) {
            return Err(Error::NonIntegrableMeasure {
                reason: format!("decay exponent {decay_exponent} ≤ 1"),
            });
        }
        let plan = QuadraturePlan::default()
            .with_endpoints(singularity_exponent + 1.0, decay_exponent);
        let mass = integrate_halfline(
            |l| {
                let d = pdf(l);
                if !(d >= 0.0) {
                    return Err(Error::NonIntegrableMeasure {
                        reason: format!("density is negative or undefined at {l:e}"),
                    });
                }
                Ok(l / (1.0 + l) * d)
            },
            &plan,
        )?;
        if !mass.converged || !mass.value.is_finite() {
            return Err(Error::NonIntegrableMeasure {
                reason: format!(
                    "∫ λ/(1+λ) dw did not converge (estimate {:e})",
                    mass.value
                ),
            });
        }
        Ok(Measure::Density(Density {
            pdf,
            singularity_exponent,
            decay_exponent,
        }))
    }

    /// `Σ w_i g(λ_i)` for atoms, `∫ g(λ) d(λ) dλ` for densities. `origin`
    /// and `decay` describe `g` alone; the density's exponents are added.
    pub fn integrate<V, G>(
        &self,
        mut g: G,
        origin: f64,
        decay: f64,
        plan: &QuadraturePlan,
    ) -> Result<IntegralResult<V>>
    where
        V: crate::quadrature::QuadValue,
        G: FnMut(f64) -> Result<V>,
    {
        match self {
            Measure::Discrete(atoms) => {
                let mut acc: Option<V> = None;
                for atom in atoms {
                    let y = g(atom.position)?;
                    match acc.as_mut() {
                        Some(s) => s.add_scaled(atom.weight, &y),
                        None => acc = Some(y.scaled(atom.weight)),
                    }
                }
                match acc {
                    Some(value) => Ok(IntegralResult {
                        value,
                        error_estimate: 0.0,
                        panels_used: 0,
                        converged: true,
                    }),
                    // caller supplies the zero of the right shape
                    None => Err(Error::Unsupported(String::from("empty measure"))),
                }
            }
            Measure::Density(d) => integrate_halfline(
                |l| Ok(g(l)?.scaled(d.eval(l))),
                &plan.with_endpoints(
                    origin + d.singularity_exponent,
                    decay + d.decay_exponent,
                ),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Measure::Discrete(a) if a.is_empty())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    /// Evaluated through its Löwner triple.
    Loewner,
    /// `ln`, evaluated through `ln t = (t−1) ∫ dλ / ((λ+1)(λ+t))`.
    Logarithm,
}

/// Anything with a scalar value on `(0, ∞)` that can be lifted to matrices
/// spectrally.
pub trait OperatorFunction {
    fn label(&self) -> String;

    /// Scalar value, closed form when one is known.
    fn value(&self, t: f64) -> Result<f64>;
}

/// An operator monotone function in Löwner form.
#[derive(Clone)]
pub struct LoewnerFunction {
    a: f64,
    b: f64,
    measure: Measure,
    closed_form: Option<ScalarFn>,
    label: String,
    kind: FunctionKind,
    power: Option<f64>,
}

impl fmt::Debug for LoewnerFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoewnerFunction")
            .field("label", &self.label)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("measure", &self.measure)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

/// `t^r`, `0 < r ≤ 1`. For `r < 1` the measure has density
/// `sin(rπ)/π · λ^{r−2}`.
pub fn make_power(r: f64) -> Result<LoewnerFunction> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "power exponent",
            value: r,
        });
    }
    let label = format!("power:{r}");
    let closed: ScalarFn = Arc::new(move |t| libm::pow(t, r));
    if r == 1.0 {
        return Ok(LoewnerFunction {
            a: 0.0,
            b: 1.0,
            measure: Measure::zero(),
            closed_form: Some(closed),
            label,
            kind: FunctionKind::Loewner,
            power: Some(1.0),
        });
    }
    let c = power_measure_constant(r);
    let measure = Measure::density(Arc::new(move |l| c * libm::pow(l, r - 2.0)), r - 2.0, 2.0 - r)?;
    Ok(LoewnerFunction {
        a: 0.0,
        b: 0.0,
        measure,
        closed_form: Some(closed),
        label,
        kind: FunctionKind::Loewner,
        power: Some(r),
    })
}

/// `sin(rπ)/π`.
pub fn power_measure_constant(r: f64) -> f64 {
    libm::sin(r * PI) / PI
}

/// Natural logarithm, carried with its own resolvent kernel.
pub fn make_log_normalized() -> LoewnerFunction {
    LoewnerFunction {
        a: 0.0,
        b: 0.0,
        measure: Measure::zero(),
        closed_form: Some(Arc::new(libm::log)),
        label: String::from("log"),
        kind: FunctionKind::Logarithm,
        power: None,
    }
}

/// `a + b t + Σ w_i t λ_i / (t + λ_i)`.
pub fn make_discrete(a: f64, b: f64, atoms: &[(f64, f64)]) -> Result<LoewnerFunction> {
    if !a.is_finite() {
        return Err(Error::ParamOutOfRange { name: "a", value: a });
    }
    if !(b >= 0.0) || !b.is_finite() {
        return Err(Error::ParamOutOfRange { name: "b", value: b });
    }
    let measure = Measure::discrete(atoms)?;
    let Measure::Discrete(list) = &measure else {
        unreachable!()
    };
    let owned: Vec<Atom> = list.clone();
    let closed: ScalarFn = Arc::new(move |t| {
        a + b * t
            + owned
                .iter()
                .map(|at| at.weight * t * at.position / (t + at.position))
                .sum::<f64>()
    });
    let label = if atoms.is_empty() {
        format!("affine:{a},{b}")
    } else {
        let parts: Vec<String> = atoms.iter().map(|(l, w)| format!("{l}:{w}")).collect();
        format!("discrete:{a},{b},[{}]", parts.join(","))
    };
    Ok(LoewnerFunction {
        a,
        b,
        measure,
        closed_form: Some(closed),
        label,
        kind: FunctionKind::Loewner,
        power: if a == 0.0 && b == 1.0 && atoms.is_empty() {
            Some(1.0)
        } else {
            None
        },
    })
}

pub fn make_affine(a: f64, b: f64) -> Result<LoewnerFunction> {
    make_discrete(a, b, &[])
}

impl LoewnerFunction {
    /// General constructor for a user-supplied measure.
    pub fn new(
        a: f64,
        b: f64,
        measure: Measure,
        closed_form: Option<ScalarFn>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::ParamOutOfRange { name: "a", value: a });
        }
        if !(b >= 0.0) || !b.is_finite() {
            return Err(Error::ParamOutOfRange { name: "b", value: b });
        }
        Ok(Self {
            a,
            b,
            measure,
            closed_form,
            label: label.into(),
            kind: FunctionKind::Loewner,
            power: None,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn is_logarithm(&self) -> bool {
        self.kind == FunctionKind::Logarithm
    }

    /// Exponent `r` when this is `t^r`.
    pub fn power_exponent(&self) -> Option<f64> {
        self.power
    }

    pub fn closed_form(&self) -> Option<&ScalarFn> {
        self.closed_form.as_ref()
    }

    /// Nonnegative on `(0, ∞)`: Löwner form with `a ≥ 0`, since `b` and
    /// `w` are nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.kind == FunctionKind::Loewner && self.a >= 0.0
    }

    /// Scalar value through the integral representation.
    pub fn eval_scalar(&self, t: f64) -> Result<f64> {
        self.eval_scalar_with(t, &QuadraturePlan::default())
    }

    pub fn eval_scalar_with(&self, t: f64, plan: &QuadraturePlan) -> Result<f64> {
        check_argument(t)?;
        match self.kind {
            FunctionKind::Logarithm => {
                if t == 1.0 {
                    return Ok(0.0);
                }
                let r = integrate_halfline(
                    |l| Ok(1.0 / ((l + 1.0) * (l + t))),
                    &plan.with_endpoints(0.0, 2.0),
                )?;
                Ok((t - 1.0) * r.into_converged()?)
            }
            FunctionKind::Loewner => {
                let tail = if self.measure.is_zero() {
                    0.0
                } else {
                    self.measure
                        .integrate(|l| Ok(t * l / (t + l)), 1.0, 0.0, plan)?
                        .into_converged()?
                };
                Ok(self.a + self.b * t + tail)
            }
        }
    }

    /// Largest relative deviation between the representation and the
    /// closed form on `{0.1, 0.5, 1, 2, 10}`.
    pub fn closed_form_deviation(&self, plan: &QuadraturePlan) -> Result<f64> {
        let Some(cf) = &self.closed_form else {
            return Ok(0.0);
        };
        let mut worst = 0.0_f64;
        for &t in &CLOSED_FORM_GRID {
            let rep = self.eval_scalar_with(t, plan)?;
            let exact = cf(t);
            worst = worst.max((rep - exact).abs() / exact.abs().max(1.0));
        }
        Ok(worst)
    }

    pub fn transpose(&self) -> TransposeView {
        TransposeView { base: self.clone() }
    }
}

/// Grid on which closed forms are cross-checked.
pub const CLOSED_FORM_GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];

impl OperatorFunction for LoewnerFunction {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn value(&self, t: f64) -> Result<f64> {
        match &self.closed_form {
            Some(cf) => {
                check_argument(t)?;
                Ok(cf(t))
            }
            None => self.eval_scalar(t),
        }
    }
}

/// `f̃(t) = t f(1/t)`.
#[derive(Debug, Clone)]
pub struct TransposeView {
    base: LoewnerFunction,
}

impl TransposeView {
    pub fn base(&self) -> &LoewnerFunction {
        &self.base
    }

    /// `b + t a + ∫ tλ/(1+tλ) dw(λ)` for Löwner-form bases.
    pub fn eval_scalar_integral_form(&self, t: f64, plan: &QuadraturePlan) -> Result<f64> {
        check_argument(t)?;
        let f = &self.base;
        match f.kind {
            FunctionKind::Logarithm => Ok(t * f.eval_scalar_with(1.0 / t, plan)?),
            FunctionKind::Loewner => {
                let tail = if f.measure.is_zero() {
                    0.0
                } else {
                    f.measure
                        .integrate(|l| Ok(t * l / (1.0 + t * l)), 1.0, 0.0, plan)?
                        .into_converged()?
                };
                Ok(f.b + t * f.a + tail)
            }
        }
    }

    pub fn transpose(&self) -> TransposeView {
        TransposeView {
            base: self.base.clone(),
        }
    }
}

impl OperatorFunction for TransposeView {
    fn label(&self) -> String {
        format!("transpose({})", self.base.label)
    }

    fn value(&self, t: f64) -> Result<f64> {
        check_argument(t)?;
        Ok(t * self.base.value(1.0 / t)?)
    }
}

/// Transpose of a transpose, as a scalar function: `t ↦ t·f̃(1/t)`.
pub struct DoubleTranspose<'a>(pub &'a TransposeView);

impl OperatorFunction for DoubleTranspose<'_> {
    fn label(&self) -> String {
        format!("transpose({})", self.0.label())
    }

    fn value(&self, t: f64) -> Result<f64> {
        check_argument(t)?;
        Ok(t * self.0.value(1.0 / t)?)
    }
}

fn check_argument(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::DomainViolation { argument: t });
    }
    Ok(())
}

/// `f(U)` through the eigendecomposition of `U`.
pub fn eval_matrix_spectral<F: OperatorFunction + ?Sized>(
    f: &F,
    u: &SymMatrix,
) -> Result<SymMatrix> {
    sym_eig(u)?.map(|x| f.value(x))
}

/// `f(U) = aI + bU + ∫ λ U(U+λ)^{-1} dw(λ)` by quadrature (a finite sum for
/// discrete measures); `ln U = ∫ (U−I)(U+λ)^{-1} / (λ+1) dλ`.
pub fn eval_matrix_integral(
    f: &LoewnerFunction,
    u: &SpdMatrix,
    plan: &QuadraturePlan,
) -> Result<IntegralResult<SymMatrix>> {
    let n = u.dim();
    let id = Matrix::identity(n);
    match f.kind {
        FunctionKind::Logarithm => {
            let u_minus_i = u.as_matrix() - &id;
            let r = integrate_halfline(
                |l| Ok(resolvent_apply(u, l, &u_minus_i)?.scale(1.0 / (l + 1.0))),
                &plan.with_endpoints(0.0, 2.0),
            )?;
            Ok(r.map(|m| SymMatrix::symmetrize(&m)))
        }
        FunctionKind::Loewner => {
            let affine = Matrix::lin_comb(f.a, &id, f.b, u.as_matrix());
            if f.measure.is_zero() {
                return Ok(IntegralResult {
                    value: SymMatrix::symmetrize(&affine),
                    error_estimate: 0.0,
                    panels_used: 0,
                    converged: true,
                });
            }
            let r = f.measure.integrate(
                |l| Ok(resolvent_apply(u, l, u.as_matrix())?.scale(l)),
                1.0,
                0.0,
                plan,
            )?;
            Ok(r.map(|m| SymMatrix::symmetrize(&(&affine + &m))))
        }
    }
}
