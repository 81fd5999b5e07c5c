//! Text form of the built-in functions:
//! `power:R`, `log`, `affine:A,B`, `discrete:A,B,[l1:w1,l2:w2,...]`.

use opmono_core::loewner::{make_affine, make_discrete, make_log_normalized, make_power};
use opmono_core::LoewnerFunction;

use crate::error::{CliError, CliResult};

fn number(text: &str, what: &str, spec: &str) -> CliResult<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Config(format!("bad {what} `{text}` in function spec `{spec}`")))
}

pub fn parse_fn(spec: &str) -> CliResult<LoewnerFunction> {
    let spec = spec.trim();
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let f = match kind {
        "log" if args.is_empty() => Ok(make_log_normalized()),
        "power" => make_power(number(args, "exponent", spec)?),
        "affine" => {
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| CliError::Config(format!("`{spec}`: expected affine:A,B")))?;
            make_affine(number(a, "a", spec)?, number(b, "b", spec)?)
        }
        "discrete" => {
            let (head, atoms) = args
                .split_once('[')
                .ok_or_else(|| CliError::Config(format!("`{spec}`: expected discrete:A,B,[l:w,...]")))?;
            let atoms = atoms
                .strip_suffix(']')
                .ok_or_else(|| CliError::Config(format!("`{spec}`: unterminated atom list")))?;
            let mut ab = head.trim_end().trim_end_matches(',').split(',');
            let (Some(a), Some(b), None) = (ab.next(), ab.next(), ab.next()) else {
                return Err(CliError::Config(format!("`{spec}`: expected discrete:A,B,[l:w,...]")));
            };
            let atoms = atoms
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|pair| {
                    let (l, w) = pair
                        .split_once(':')
                        .ok_or_else(|| CliError::Config(format!("`{spec}`: atom `{pair}` is not l:w")))?;
                    Ok((number(l, "atom position", spec)?, number(w, "atom weight", spec)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            make_discrete(number(a, "a", spec)?, number(b, "b", spec)?, &atoms)
        }
        _ => return Err(CliError::Config(format!("unknown function spec `{spec}`"))),
    };
    f.map_err(|e| CliError::Config(format!("`{spec}`: {e}")))
}
