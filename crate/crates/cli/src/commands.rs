//! Subcommand implementations.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use opmono_core::ensemble::{
    group_outputs, identity_groups, plan_trials, run_trial, sort_reports, suite_groups,
    trial_seed, Suite, Trial, TrialConfig, DEFAULT_MAX_CONDITION, INEQUALITY_TOL,
};
use opmono_core::identities::{
    check_dual_geometric_mean_difference, check_entropy_difference,
    check_four_operator_difference, check_geometric_mean_difference, check_inverse_difference,
    check_log_difference, check_monotone_difference, check_perspective_difference,
    check_transpose_difference, check_transpose_perspective_difference, ExponentMode,
    IdentityCheck, IdentityId,
};
use opmono_core::loewner::eval_matrix_spectral;
use opmono_core::perspective::{
    arithmetic_mean, geometric_mean, perspective, relative_entropy, transpose_identity_check,
    Weight,
};
use opmono_core::spd::sym_eig;
use opmono_core::{LoewnerFunction, OperatorFunction, SpdMatrix, SymMatrix};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    Command, ConvergenceArgs, EvalArgs, EvalOp, SuiteArg, VerifyArgs, DEFAULT_FNS,
};
use crate::error::{CliError, CliResult};
use crate::fnspec::parse_fn;
use crate::matrix_io::{read_spd, to_json, write_matrix};
use crate::report::{real, summarize, write_reports};

pub fn dispatch(command: Command) -> CliResult<()> {
    let dump = match &command {
        Command::Eval(a) => a.dump_config,
        Command::Verify(a) => a.dump_config,
        Command::Convergence(a) => a.dump_config,
    };
    if dump {
        return dump_config(&command);
    }
    match command {
        Command::Eval(a) => eval(&a),
        Command::Verify(a) => verify(&a),
        Command::Convergence(a) => convergence(&a),
    }
}

fn dump_config<T: Serialize>(config: &T) -> CliResult<()> {
    let json = serde_json::to_string_pretty(config)
        .map_err(|e| CliError::Config(format!("cannot serialize configuration: {e}")))?;
    println!("{json}");
    Ok(())
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_mode(s: &str) -> CliResult<ExponentMode> {
    s.parse().map_err(|e: opmono_core::Error| config_error(e.to_string()))
}

fn parse_identity(s: &str) -> CliResult<IdentityId> {
    s.parse().map_err(|e: opmono_core::Error| config_error(e.to_string()))
}

fn check_tol(tol: f64) -> CliResult<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(config_error(format!("--tol must be positive and finite, got {tol}")))
    }
}

fn check_dims(dims: &[usize]) -> CliResult<()> {
    if dims.is_empty() || dims.contains(&0) {
        Err(config_error("--dims must list positive dimensions"))
    } else {
        Ok(())
    }
}

/// Refuses to write over an input file.
fn check_distinct(output: Option<&Path>, inputs: &[&Path]) -> CliResult<()> {
    let Some(out) = output else { return Ok(()) };
    let canon = |p: &Path| p.canonicalize().unwrap_or_else(|_| p.to_path_buf());
    let out_c = canon(out);
    if inputs.iter().any(|p| canon(p) == out_c) {
        return Err(config_error(format!(
            "output path {} is also an input",
            out.display()
        )));
    }
    Ok(())
}

/// Writes through `body` to `path`, or to stdout.
fn with_output(
    path: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CliResult<()> {
    match path {
        Some(p) => {
            let out_err = |source| CliError::Output {
                path: p.to_path_buf(),
                source,
            };
            let file = File::create(p).map_err(out_err)?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(out_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w).map_err(|source| CliError::Output {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// eval

fn required<'a>(p: &'a Option<PathBuf>, flag: &str, op: &str) -> CliResult<&'a Path> {
    p.as_deref()
        .ok_or_else(|| config_error(format!("--op {op} requires --{flag}")))
}

fn same_dim(inputs: &[(&Path, &SpdMatrix)]) -> CliResult<()> {
    let (p0, m0) = inputs[0];
    for (p, m) in &inputs[1..] {
        if m.dim() != m0.dim() {
            return Err(CliError::Dimension(format!(
                "{} is {}x{} but {} is {}x{}",
                p0.display(),
                m0.dim(),
                m0.dim(),
                p.display(),
                m.dim(),
                m.dim()
            )));
        }
    }
    Ok(())
}

/// Reads the named inputs, all of the same dimension.
fn read_all(paths: &[&Path]) -> CliResult<Vec<SpdMatrix>> {
    let mats = paths.iter().map(|p| read_spd(p)).collect::<CliResult<Vec<_>>>()?;
    let pairs: Vec<_> = paths.iter().copied().zip(mats.iter()).collect();
    same_dim(&pairs)?;
    Ok(mats)
}

fn eval_fn(a: &EvalArgs) -> CliResult<LoewnerFunction> {
    let spec = a
        .fn_spec
        .as_deref()
        .ok_or_else(|| config_error("this --op requires --fn"))?;
    parse_fn(spec)
}

fn eval(a: &EvalArgs) -> CliResult<()> {
    if a.op == EvalOp::Check {
        return eval_check(a);
    }
    let op_name = a.op.to_possible_value_name();
    let inputs: Vec<&Path> = [Some(a.a.as_path()), a.b.as_deref()]
        .into_iter()
        .flatten()
        .collect();
    check_distinct(a.out.as_deref(), &inputs)?;
    let nu = || Weight::new(a.nu).map_err(|_| config_error(format!("--nu must lie in [0, 1], got {}", a.nu)));
    let result: SymMatrix = match a.op {
        EvalOp::FOfMatrix => {
            let f = eval_fn(a)?;
            let m = read_all(&[&a.a])?;
            eval_matrix_spectral(&f, m[0].as_sym())?
        }
        op => {
            let b_path = required(&a.b, "B", &op_name)?;
            let f = if op == EvalOp::Perspective { Some(eval_fn(a)?) } else { None };
            let weight = match op {
                EvalOp::Gmean | EvalOp::Amean => Some(nu()?),
                _ => None,
            };
            let m = read_all(&[&a.a, b_path])?;
            let (ma, mb) = (&m[0], &m[1]);
            match op {
                EvalOp::Perspective => perspective(f.as_ref().expect("parsed above"), mb.as_sym(), ma)?,
                EvalOp::Gmean => geometric_mean(ma, mb, weight.expect("parsed above"))?.into_sym(),
                EvalOp::Amean => arithmetic_mean(ma, mb, weight.expect("parsed above"))?.into_sym(),
                EvalOp::Entropy => relative_entropy(ma, mb)?,
                EvalOp::FOfMatrix | EvalOp::Check => unreachable!(),
            }
        }
    };
    let eig = sym_eig(&result)?;
    let (lo, hi) = (eig.values[0], eig.values[eig.values.len() - 1]);
    match &a.out {
        Some(path) => {
            write_matrix(path, result.as_matrix())?;
            println!("min_eigenvalue {}", real(lo));
            println!("max_eigenvalue {}", real(hi));
        }
        None => {
            println!("{}", to_json(result.as_matrix()));
            eprintln!("min_eigenvalue {}", real(lo));
            eprintln!("max_eigenvalue {}", real(hi));
        }
    }
    Ok(())
}

trait PossibleName {
    fn to_possible_value_name(&self) -> String;
}

impl<T: clap::ValueEnum> PossibleName for T {
    fn to_possible_value_name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

/// Runs one identity check on user-supplied matrices.
fn eval_check(a: &EvalArgs) -> CliResult<()> {
    use IdentityId::*;
    let id = parse_identity(
        a.only
            .as_deref()
            .ok_or_else(|| config_error("--op check requires --only <identity>"))?,
    )?;
    check_tol(a.tol)?;
    let mode = parse_mode(&a.exponent_mode)?;
    let plan = a.plan.plan()?;
    let f = || eval_fn(a);
    let op = "check";
    let need = |p: &Option<PathBuf>, flag: &str| required(p, flag, op).map(Path::to_path_buf);
    let power = |f: &LoewnerFunction| {
        f.power_exponent()
            .filter(|r| *r > 0.0 && *r < 1.0)
            .ok_or_else(|| config_error(format!("{id} needs --fn power:r with 0 < r < 1")))
    };
    let paths: Vec<PathBuf> = match id {
        InverseDifference | MonotoneDifference | TransposeDifference | LogDifference
        | TransposeSymmetry => vec![a.a.clone(), need(&a.b, "B")?],
        PerspectiveDifference | GeometricMeanDifference | EntropyDifference => {
            vec![a.a.clone(), need(&a.b, "B")?, need(&a.p, "P")?]
        }
        TransposePerspectiveDifference | ReversedPerspectiveDifference
        | DualGeometricMeanDifference => {
            vec![need(&a.c, "C")?, need(&a.d, "D")?, need(&a.q, "Q")?]
        }
        FourOperatorDifference => vec![
            a.a.clone(),
            need(&a.b, "B")?,
            need(&a.c, "C")?,
            need(&a.d, "D")?,
        ],
        other => {
            return Err(config_error(format!(
                "--op check supports identities only, not {other}"
            )))
        }
    };
    let refs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
    let m = read_all(&refs)?;
    let check: IdentityCheck = match id {
        InverseDifference => check_inverse_difference(&m[0], &m[1], &plan)?,
        MonotoneDifference => check_monotone_difference(&f()?, &m[0], &m[1], &plan)?,
        TransposeDifference => check_transpose_difference(&f()?, &m[0], &m[1], &plan)?,
        LogDifference => check_log_difference(&m[0], &m[1], &plan)?,
        PerspectiveDifference => check_perspective_difference(&f()?, &m[0], &m[1], &m[2], &plan)?,
        EntropyDifference => check_entropy_difference(&m[0], &m[1], &m[2], &plan)?,
        GeometricMeanDifference => {
            let r = power(&f()?)?;
            check_geometric_mean_difference(r, &m[0], &m[1], &m[2], &plan, mode)?
        }
        DualGeometricMeanDifference => {
            let r = power(&f()?)?;
            check_dual_geometric_mean_difference(r, &m[0], &m[1], &m[2], &plan, mode)?
        }
        TransposePerspectiveDifference | ReversedPerspectiveDifference => {
            let (t, rev) =
                check_transpose_perspective_difference(&f()?, &m[0], &m[1], &m[2], &plan)?;
            if id == TransposePerspectiveDifference { t } else { rev }
        }
        FourOperatorDifference => {
            check_four_operator_difference(&f()?, &m[0], &m[1], &m[2], &m[3], &plan)?
        }
        TransposeSymmetry => {
            let residual = transpose_identity_check(&f()?, &m[0], &m[1])?;
            IdentityCheck {
                lhs_norm: f64::NAN,
                residual,
                panels_used: 0,
                converged: true,
            }
        }
        _ => unreachable!(),
    };
    println!(
        "{id} residual {} lhs_norm {} panels {} converged {}",
        real(check.residual),
        real(check.lhs_norm),
        check.panels_used,
        check.converged
    );
    if check.residual <= a.tol && check.converged {
        Ok(())
    } else {
        Err(CliError::ChecksFailed { failed: 1, total: 1 })
    }
}

// ---------------------------------------------------------------------------
// verify

fn parse_only(only: &[String]) -> CliResult<Option<Vec<IdentityId>>> {
    if only.is_empty() {
        return Ok(None);
    }
    only.iter().map(|s| parse_identity(s.trim())).collect::<CliResult<Vec<_>>>().map(Some)
}

fn trial_config(tol: f64, mode: &str, plan: &crate::args::PlanArgs) -> CliResult<TrialConfig> {
    check_tol(tol)?;
    Ok(TrialConfig {
        plan: plan.plan()?,
        tol,
        inequality_tol: INEQUALITY_TOL,
        exponent_mode: parse_mode(mode)?,
        max_condition: DEFAULT_MAX_CONDITION,
    })
}

fn verify(a: &VerifyArgs) -> CliResult<()> {
    check_dims(&a.dims)?;
    if a.trials == 0 {
        return Err(config_error("--trials must be at least 1"));
    }
    let cfg = trial_config(a.tol, &a.exponent_mode, &a.plan)?;
    let only = parse_only(&a.only)?;
    let suite = match a.suite {
        SuiteArg::Identities => Suite::Identities,
        SuiteArg::Inequalities => Suite::Inequalities,
        SuiteArg::All => Suite::All,
    };
    let specs: Vec<String> = if a.fns.is_empty() {
        DEFAULT_FNS.iter().map(|s| s.to_string()).collect()
    } else {
        a.fns.clone()
    };
    let fns = specs.iter().map(|s| parse_fn(s)).collect::<CliResult<Vec<_>>>()?;

    let jobs: Vec<(usize, Trial)> = fns
        .iter()
        .enumerate()
        .flat_map(|(i, f)| {
            let groups = suite_groups(f, suite, only.as_deref());
            plan_trials(f, &groups, &a.dims, a.trials, a.seed)
                .into_iter()
                .map(move |t| (i, t))
        })
        .collect();
    if jobs.is_empty() {
        return Err(config_error("no checks selected for the given suite, --fn and --only"));
    }

    let mut reports: Vec<_> = jobs
        .par_iter()
        .flat_map_iter(|(i, t)| run_trial(&fns[*i], t, &cfg))
        .collect();
    if let Some(only) = &only {
        reports.retain(|r| only.contains(&r.identity));
    }
    sort_reports(&mut reports);

    with_output(a.report.as_deref(), |w| {
        write_reports(w, &reports).map_err(io::Error::other)
    })?;
    let summaries = summarize(&reports);
    for s in &summaries {
        if a.report.is_some() {
            println!("{s}");
        } else {
            eprintln!("{s}");
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// convergence

fn convergence(a: &ConvergenceArgs) -> CliResult<()> {
    check_dims(&a.dims)?;
    let dim = a.dims[0];
    if a.budgets.is_empty() || a.budgets[0] == 0 || a.budgets.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config_error("--budgets must be positive and strictly increasing"));
    }
    let cfg = trial_config(a.tol, &a.exponent_mode, &a.plan)?;
    let id = parse_identity(&a.only)?;
    let f = parse_fn(&a.fn_spec)?;
    let group = identity_groups(&f)
        .into_iter()
        .find(|g| group_outputs(*g).contains(&id))
        .ok_or_else(|| config_error(format!("{id} does not apply to {}", f.label())))?;
    let trial = Trial {
        group,
        dim,
        index: 0,
        seed: trial_seed(a.seed, group, &f.label(), dim, 0),
    };

    let mut rows = Vec::with_capacity(a.budgets.len());
    for &budget in &a.budgets {
        let cfg = TrialConfig {
            plan: cfg.plan.with_panel_budget(budget),
            ..cfg.clone()
        };
        let residual = run_trial(&f, &trial, &cfg)
            .into_iter()
            .find(|r| r.identity == id)
            .map_or(f64::NAN, |r| r.value);
        rows.push((budget, residual));
    }

    with_output(a.report.as_deref(), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["budget", "residual"])?;
        for (b, r) in &rows {
            csv.write_record([b.to_string(), real(*r)])?;
        }
        csv.flush()
    })?;
    let last = rows.last().map_or(f64::NAN, |r| r.1);
    if a.report.is_some() {
        for (b, r) in &rows {
            println!("budget {b:>6} residual {r:.3e}");
        }
    }
    if last <= a.tol {
        Ok(())
    } else {
        Err(CliError::ChecksFailed { failed: 1, total: 1 })
    }
}
