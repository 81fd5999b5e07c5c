//! Report CSV and per-identity summaries.

use std::collections::BTreeMap;
use std::io::Write;

use opmono_core::identities::{IdentityId, ResidualReport};

pub const HEADER: [&str; 9] = [
    "identity",
    "fn",
    "dim",
    "seed",
    "lhs_norm",
    "residual_or_margin",
    "panels",
    "converged",
    "pass",
];

/// 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_reports<W: Write>(out: W, reports: &[ResidualReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in reports {
        w.write_record([
            r.identity.as_str().to_string(),
            r.fn_label.clone(),
            r.dim.to_string(),
            r.seed.to_string(),
            real(r.lhs_norm),
            real(r.value),
            r.panels_used.to_string(),
            r.converged.to_string(),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub identity: IdentityId,
    pub rows: usize,
    pub passed: usize,
    /// Largest residual, or smallest margin for inequalities. NaN rows win.
    pub extreme: f64,
}

pub fn summarize(reports: &[ResidualReport]) -> Vec<Summary> {
    let mut by_id: BTreeMap<IdentityId, Summary> = BTreeMap::new();
    for r in reports {
        let s = by_id.entry(r.identity).or_insert(Summary {
            identity: r.identity,
            rows: 0,
            passed: 0,
            extreme: if r.identity.is_inequality() {
                f64::INFINITY
            } else {
                0.0
            },
        });
        s.rows += 1;
        s.passed += usize::from(r.pass);
        s.extreme = if r.value.is_nan() || s.extreme.is_nan() {
            f64::NAN
        } else if r.identity.is_inequality() {
            s.extreme.min(r.value)
        } else {
            s.extreme.max(r.value)
        };
    }
    by_id.into_values().collect()
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let what = if self.identity.is_inequality() {
            "min margin"
        } else {
            "max residual"
        };
        write!(
            f,
            "{:<14} {what} {:>10.3e}  pass {}/{}",
            self.identity.as_str(),
            self.extreme,
            self.passed,
            self.rows
        )
    }
}
