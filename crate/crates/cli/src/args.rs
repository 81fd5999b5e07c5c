//! Command-line surface. Every subcommand's resolved arguments serialize as
//! the run configuration echoed by `--dump-config`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opmono_core::QuadraturePlan;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "opmono", version, about = "Perspectives of operator monotone functions: evaluation and identity verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Evaluate a perspective, mean, entropy or matrix function on JSON inputs.
    Eval(EvalArgs),
    /// Run identity and inequality checks over seeded random ensembles.
    Verify(VerifyArgs),
    /// Residual of one identity check as the λ-panel budget grows.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalOp {
    /// P_f(B, A) = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}
    Perspective,
    /// A ♯_ν B
    Gmean,
    /// A ∇_ν B
    Amean,
    /// S(A|B)
    Entropy,
    /// f(A)
    FOfMatrix,
    /// Residual of the identity named by --only on the given matrices
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Identities,
    Inequalities,
    All,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlanArgs {
    /// Gauss–Legendre nodes per t-panel.
    #[arg(long, default_value_t = 32)]
    pub t_order: usize,
    /// Gauss–Legendre nodes per λ-panel (coarse rule).
    #[arg(long, default_value_t = 16)]
    pub lambda_order: usize,
    /// Cap on adaptive λ-panels.
    #[arg(long, default_value_t = 4096)]
    pub max_panels: usize,
}

impl PlanArgs {
    pub fn plan(&self) -> CliResult<QuadraturePlan> {
        let plan = QuadraturePlan {
            t_order: self.t_order,
            lambda_order: self.lambda_order,
            max_panels: self.max_panels,
            ..QuadraturePlan::default()
        };
        let plan = if plan.max_panels < plan.lambda_panels_init {
            plan.with_panel_budget(plan.max_panels)
        } else {
            plan
        };
        plan.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(plan)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub op: EvalOp,
    /// Function spec for perspective, f-of-matrix and check.
    #[arg(long = "fn")]
    pub fn_spec: Option<String>,
    #[arg(long = "A")]
    pub a: PathBuf,
    #[arg(long = "B")]
    pub b: Option<PathBuf>,
    #[arg(long = "P")]
    pub p: Option<PathBuf>,
    #[arg(long = "C")]
    pub c: Option<PathBuf>,
    #[arg(long = "D")]
    pub d: Option<PathBuf>,
    #[arg(long = "Q")]
    pub q: Option<PathBuf>,
    /// Weight for gmean and amean.
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    /// Identity for --op check.
    #[arg(long)]
    pub only: Option<String>,
    /// Residual tolerance for --op check.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value = "corrected")]
    pub exponent_mode: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub plan: PlanArgs,
    /// Result as Matrix JSON; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    #[serde(skip)]
    pub dump_config: bool,
}

pub const DEFAULT_FNS: [&str; 5] = [
    "power:0.25",
    "power:0.5",
    "power:0.75",
    "discrete:1,2,[0.5:1,3:0.7]",
    "log",
];

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
    /// Function spec; repeat for several. Defaults to the standard set.
    #[arg(long = "fn")]
    pub fns: Vec<String>,
    /// Restrict to these identity ids (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Residual tolerance for identities.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value = "corrected")]
    pub exponent_mode: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub plan: PlanArgs,
    /// Report CSV path; written to stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub dump_config: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvergenceArgs {
    /// Identity to study.
    #[arg(long, default_value = "T2.4")]
    pub only: String,
    #[arg(long = "fn", default_value = "log")]
    pub fn_spec: String,
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub dims: Vec<usize>,
    /// Strictly increasing λ-panel budgets.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
    pub budgets: Vec<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Gate on the residual at the final budget.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value = "corrected")]
    pub exponent_mode: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub plan: PlanArgs,
    /// CSV path (budget,residual); written to stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub dump_config: bool,
}
