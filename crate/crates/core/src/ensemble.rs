//! Seeded trial grids for the verification suites.
//!
//! Each trial is a pure function of `(group, fn label, dim, trial index,
//! base seed)`: its inputs come from a seed derived by hashing those fields,
//! so adding or removing checks never shifts the inputs of other trials.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::Result;
use crate::identities::{
    check_dual_geometric_mean_difference, check_entropy_difference, check_four_operator_difference,
    check_geometric_mean_difference, check_inverse_difference, check_log_difference,
    check_monotone_difference, check_perspective_difference, check_transpose_difference,
    check_transpose_perspective_difference, inequality_ids, run_inequality, ExponentMode,
    IdentityCheck, IdentityId, InequalityTrial, ResidualReport,
};
use crate::loewner::{LoewnerFunction, OperatorFunction};
use crate::perspective::{transpose_identity_check, Weight};
use crate::quadrature::QuadraturePlan;
use crate::random::{random_ordered_pair, random_spd, rng_from_seed};
use crate::spd::SpdMatrix;

/// Largest condition number drawn in the default ensembles.
pub const DEFAULT_MAX_CONDITION: f64 = 1e4;

/// Every `DEGENERATE_PERIOD`-th inequality trial uses `B = A`.
pub const DEGENERATE_PERIOD: usize = 8;

/// Tolerance for Loewner margins, relative to the operand scale.
pub const INEQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Inequalities,
    All,
}

impl core::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "inequalities" => Ok(Suite::Inequalities),
            "all" => Ok(Suite::All),
            other => Err(crate::Error::Unsupported(format!("unknown suite `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub plan: QuadraturePlan,
    /// Residual tolerance for identities.
    pub tol: f64,
    pub inequality_tol: f64,
    pub exponent_mode: ExponentMode,
    pub max_condition: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            plan: QuadraturePlan::default(),
            tol: 1e-6,
            inequality_tol: INEQUALITY_TOL,
            exponent_mode: ExponentMode::Corrected,
            max_condition: DEFAULT_MAX_CONDITION,
        }
    }
}

/// One unit of work. `group` names the computation; it may emit several
/// report rows (the transpose-perspective group also yields the reversed
/// perspective form).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trial {
    pub group: IdentityId,
    pub dim: usize,
    pub index: usize,
    pub seed: u64,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// `base ⊕ FNV-1a(group, fn, dim, index)`.
pub fn trial_seed(base: u64, group: IdentityId, fn_label: &str, dim: usize, index: usize) -> u64 {
    let mut h = FNV_OFFSET;
    h = fnv1a(h, group.as_str().as_bytes());
    h = fnv1a(h, &[0]);
    h = fnv1a(h, fn_label.as_bytes());
    h = fnv1a(h, &[0]);
    h = fnv1a(h, &(dim as u64).to_le_bytes());
    h = fnv1a(h, &(index as u64).to_le_bytes());
    base ^ h
}

/// Report rows produced by a group.
pub fn group_outputs(group: IdentityId) -> &'static [IdentityId] {
    use IdentityId::*;
    match group {
        TransposePerspectiveDifference => &[TransposePerspectiveDifference, ReversedPerspectiveDifference],
        InverseDifference => &[InverseDifference],
        MonotoneDifference => &[MonotoneDifference],
        PerspectiveDifference => &[PerspectiveDifference],
        TransposeDifference => &[TransposeDifference],
        ReversedPerspectiveDifference => &[ReversedPerspectiveDifference],
        FourOperatorDifference => &[FourOperatorDifference],
        GeometricMeanDifference => &[GeometricMeanDifference],
        DualGeometricMeanDifference => &[DualGeometricMeanDifference],
        LogDifference => &[LogDifference],
        EntropyDifference => &[EntropyDifference],
        PerspectiveLowerBound => &[PerspectiveLowerBound],
        DualLowerBound => &[DualLowerBound],
        FourOperatorLowerBound => &[FourOperatorLowerBound],
        DualNonnegative => &[DualNonnegative],
        Young => &[Young],
        PerspectiveMonotone => &[PerspectiveMonotone],
        TransposeSymmetry => &[TransposeSymmetry],
    }
}

/// Identity groups that apply to `f`.
pub fn identity_groups(f: &LoewnerFunction) -> Vec<IdentityId> {
    use IdentityId::*;
    if f.is_logarithm() {
        return alloc::vec![InverseDifference, LogDifference, EntropyDifference, TransposeSymmetry];
    }
    let mut groups = alloc::vec![
        InverseDifference,
        MonotoneDifference,
        PerspectiveDifference,
        TransposeDifference,
        TransposePerspectiveDifference,
        FourOperatorDifference,
        TransposeSymmetry,
    ];
    if matches!(f.power_exponent(), Some(r) if r > 0.0 && r < 1.0) {
        groups.extend([GeometricMeanDifference, DualGeometricMeanDifference]);
    }
    groups
}

/// Groups for a suite, optionally restricted to those emitting an id in `only`.
pub fn suite_groups(f: &LoewnerFunction, suite: Suite, only: Option<&[IdentityId]>) -> Vec<IdentityId> {
    let mut groups = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        groups.extend(identity_groups(f));
    }
    if matches!(suite, Suite::Inequalities | Suite::All) {
        groups.extend(inequality_ids(f));
    }
    if let Some(only) = only {
        groups.retain(|g| group_outputs(*g).iter().any(|id| only.contains(id)));
    }
    groups
}

/// The full `groups × dims × trials` grid for `f`.
pub fn plan_trials(
    f: &LoewnerFunction,
    groups: &[IdentityId],
    dims: &[usize],
    trials: usize,
    base_seed: u64,
) -> Vec<Trial> {
    let label = f.label();
    let mut out = Vec::with_capacity(groups.len() * dims.len() * trials);
    for &group in groups {
        for &dim in dims {
            for index in 0..trials {
                out.push(Trial {
                    group,
                    dim,
                    index,
                    seed: trial_seed(base_seed, group, &label, dim, index),
                });
            }
        }
    }
    out
}

/// SPD matrix with condition number log-uniform in `[1, max_condition]`.
fn draw_spd<R: RngCore>(rng: &mut R, dim: usize, max_condition: f64) -> SpdMatrix {
    let u: f64 = rng.random();
    let kappa = libm::exp(u * libm::log(max_condition));
    random_spd(dim, kappa, rng.next_u64())
}

/// Inputs of an inequality trial; degenerate trials set `B = A` and `D = C`
/// style pairs to equality.
pub fn inequality_trial(dim: usize, index: usize, seed: u64) -> InequalityTrial {
    let mut rng = rng_from_seed(seed);
    let mut first = random_ordered_pair(dim, rng.next_u64());
    let mut second = random_ordered_pair(dim, rng.next_u64());
    let p = random_spd(dim, 100.0, rng.next_u64());
    let nu = Weight::new(rng.random::<f64>()).expect("unit interval");
    if index % DEGENERATE_PERIOD == DEGENERATE_PERIOD - 1 {
        first.1 = first.0.clone();
        second.1 = second.0.clone();
    }
    InequalityTrial {
        seed,
        first,
        second,
        p,
        nu,
    }
}

fn identity_row(
    id: IdentityId,
    f: &LoewnerFunction,
    trial: &Trial,
    check: &IdentityCheck,
    tol: f64,
) -> ResidualReport {
    ResidualReport {
        identity: id,
        fn_label: f.label(),
        dim: trial.dim,
        seed: trial.seed,
        lhs_norm: check.lhs_norm,
        value: check.residual,
        panels_used: check.panels_used,
        converged: check.converged,
        pass: check.residual <= tol,
    }
}

fn run_identity_group(
    f: &LoewnerFunction,
    trial: &Trial,
    cfg: &TrialConfig,
) -> Result<Vec<(IdentityId, IdentityCheck)>> {
    use IdentityId::*;
    let mut rng = rng_from_seed(trial.seed);
    let mut m = || draw_spd(&mut rng, trial.dim, cfg.max_condition);
    let (a, b) = (m(), m());
    let plan = &cfg.plan;
    let one = |id, c| Ok(alloc::vec![(id, c)]);
    match trial.group {
        InverseDifference => one(InverseDifference, check_inverse_difference(&a, &b, plan)?),
        MonotoneDifference => one(MonotoneDifference, check_monotone_difference(f, &a, &b, plan)?),
        PerspectiveDifference => {
            let p = m();
            one(PerspectiveDifference, check_perspective_difference(f, &a, &b, &p, plan)?)
        }
        TransposeDifference => one(TransposeDifference, check_transpose_difference(f, &a, &b, plan)?),
        TransposePerspectiveDifference => {
            let q = m();
            let (t, r) = check_transpose_perspective_difference(f, &a, &b, &q, plan)?;
            Ok(alloc::vec![(TransposePerspectiveDifference, t), (ReversedPerspectiveDifference, r)])
        }
        FourOperatorDifference => {
            let (c, d) = (m(), m());
            one(FourOperatorDifference, check_four_operator_difference(f, &a, &b, &c, &d, plan)?)
        }
        GeometricMeanDifference | DualGeometricMeanDifference => {
            let r = f.power_exponent().unwrap_or(f64::NAN);
            let p = m();
            let check = if trial.group == GeometricMeanDifference {
                check_geometric_mean_difference(r, &a, &b, &p, plan, cfg.exponent_mode)?
            } else {
                check_dual_geometric_mean_difference(r, &a, &b, &p, plan, cfg.exponent_mode)?
            };
            one(trial.group, check)
        }
        LogDifference => one(LogDifference, check_log_difference(&a, &b, plan)?),
        EntropyDifference => {
            let p = m();
            one(EntropyDifference, check_entropy_difference(&a, &b, &p, plan)?)
        }
        TransposeSymmetry => {
            let residual = transpose_identity_check(f, &a, &b)?;
            let lhs_norm = crate::perspective::perspective(f, &b, &a)?.frobenius_norm();
            one(
                TransposeSymmetry,
                IdentityCheck {
                    lhs_norm,
                    residual,
                    panels_used: 0,
                    converged: true,
                },
            )
        }
        other => Err(crate::Error::Unsupported(format!("{other} is not an identity group"))),
    }
}

fn failure_row(id: IdentityId, label: String, trial: &Trial) -> ResidualReport {
    ResidualReport {
        identity: id,
        fn_label: label,
        dim: trial.dim,
        seed: trial.seed,
        lhs_norm: f64::NAN,
        value: f64::NAN,
        panels_used: 0,
        converged: false,
        pass: false,
    }
}

/// Runs one trial. Errors are reported as failing rows with NaN values
/// rather than aborting the suite.
pub fn run_trial(f: &LoewnerFunction, trial: &Trial, cfg: &TrialConfig) -> Vec<ResidualReport> {
    if trial.group.is_inequality() {
        let inputs = inequality_trial(trial.dim, trial.index, trial.seed);
        return alloc::vec![run_inequality(f, trial.group, &inputs, cfg.inequality_tol)
            .unwrap_or_else(|_| failure_row(trial.group, f.label(), trial))];
    }
    match run_identity_group(f, trial, cfg) {
        Ok(rows) => rows
            .iter()
            .map(|(id, c)| identity_row(*id, f, trial, c, cfg.tol))
            .collect(),
        Err(_) => group_outputs(trial.group)
            .iter()
            .map(|&id| failure_row(id, f.label(), trial))
            .collect(),
    }
}

/// Deterministic report order: identity, fn, dim, seed.
pub fn sort_reports(reports: &mut [ResidualReport]) {
    reports.sort_by(|x, y| {
        (x.identity, &x.fn_label, x.dim, x.seed).cmp(&(y.identity, &y.fn_label, y.dim, y.seed))
    });
}
