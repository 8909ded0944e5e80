//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{check_binomial_identities, u_coefficients, ArithError};
use crate::cgroup::{
    build_generators, sweep_params, verify_params, VerificationReport, VerifyConfig,
};
use crate::extension::{Extension, DEFAULT_CLOSURE_CAP};
use crate::json::BigSigned;
use crate::pgroup::{Group, GroupParams};
use crate::polytope::{
    build_lattice, euler_characteristic, export_lattice, FaceLattice, PolytopeError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "regpoly",
    about = "Build and verify regular 3-polytopes of order 4p^m with type {p, 2p}"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Largest explicit enumeration of the extension or its subgroups
    #[arg(long, env = "REGPOLY_CAP", default_value_t = DEFAULT_CLOSURE_CAP as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    /// Seed for sampled checks
    #[arg(long, env = "REGPOLY_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write output to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct Instance {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub e: u32,
    #[arg(long)]
    pub r: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify every string C-group axiom for one instance
    Verify {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Random pairs per automorphism check
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Verify all valid instances with 4p^m <= order cap
    Sweep {
        #[arg(long)]
        p_max: u64,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP as u64)]
        order_cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check the binomial identities and the u-coefficients for p
    Identities {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 30)]
        n_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Write the face lattice as JSON or DOT
    Export {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Build the face lattice and report counts, Euler characteristic and
    /// structural checks
    Lattice {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INVALID_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&config.command, out) {
        Ok(code) => code,
        Err(CliError::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID_INPUT
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID_INPUT
        }
    }
}

#[derive(Debug)]
enum CliError {
    Invalid(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn params(instance: &Instance) -> Result<GroupParams, CliError> {
    GroupParams::new(instance.p, instance.e, instance.r)
        .map_err(|e| CliError::Invalid(e.to_string()))
}

fn emit(output: &Option<PathBuf>, bytes: &[u8], out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => write_atomic(path, bytes)?,
        None => out.write_all(bytes)?,
    }
    Ok(())
}

/// Writes to a sibling temporary file and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

fn to_json_line<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

fn verify_config(common: &Common, samples: usize) -> VerifyConfig {
    VerifyConfig {
        cap: common.cap as usize,
        samples,
        seed: common.seed,
        ..VerifyConfig::default()
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Verify {
            instance,
            format,
            samples,
            common,
        } => {
            let params = params(instance)?;
            let report = verify_params(&params, &verify_config(common, *samples), &[]);
            let bytes = match format {
                Format::Text => report.to_text().into_bytes(),
                Format::Json => to_json_line(&report),
                Format::Dot => {
                    return Err(CliError::Invalid("verify supports text or json".into()))
                }
            };
            emit(&common.output, &bytes, out)?;
            Ok(exit_for(report.passed()))
        }
        Command::Sweep {
            p_max,
            order_cap,
            format,
            samples,
            common,
        } => {
            if *format == Format::Dot {
                return Err(CliError::Invalid("sweep supports text or json".into()));
            }
            let grid = sweep_params(*p_max, *order_cap);
            let config = verify_config(common, *samples);
            let reports: Vec<VerificationReport> = grid
                .par_iter()
                .map(|params| verify_params(params, &config, &[]))
                .collect();
            let all_ok = reports.iter().all(VerificationReport::passed);
            let bytes = match format {
                Format::Json => to_json_line(&reports),
                _ => {
                    let mut s = String::new();
                    for rep in &reports {
                        s.push_str(&rep.to_text());
                        s.push('\n');
                    }
                    let passed = reports.iter().filter(|r| r.passed()).count();
                    s.push_str(&format!("{passed}/{} instances passed\n", reports.len()));
                    s.into_bytes()
                }
            };
            emit(&common.output, &bytes, out)?;
            Ok(exit_for(all_ok))
        }
        Command::Identities {
            p,
            n_max,
            format,
            common,
        } => identities(*p, *n_max, *format, common, out),
        Command::Export {
            instance,
            format,
            common,
        } => {
            let params = params(instance)?;
            let fmt = match format {
                Format::Json => "json",
                Format::Dot => "dot",
                Format::Text => {
                    return Err(CliError::Invalid(
                        PolytopeError::UnsupportedFormat("text".into()).to_string(),
                    ))
                }
            };
            match lattice_for(&params, common.cap as usize) {
                Ok(lattice) => {
                    let bytes = export_lattice(&lattice, fmt)
                        .map_err(|e| CliError::Invalid(e.to_string()))?;
                    emit(&common.output, &bytes, out)?;
                    Ok(exit_for(
                        lattice_checks(&lattice, &params).iter().all(|(_, ok)| *ok),
                    ))
                }
                Err(e @ PolytopeError::CapExceeded { .. }) => {
                    writeln!(out, "skipped: {e}")?;
                    Ok(EXIT_OK)
                }
                Err(e) => Err(CliError::Invalid(e.to_string())),
            }
        }
        Command::Lattice {
            instance,
            format,
            common,
        } => {
            let params = params(instance)?;
            lattice_summary(&params, *format, common, out)
        }
    }
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn lattice_for(params: &GroupParams, cap: usize) -> Result<FaceLattice, PolytopeError> {
    let ext = Extension::new(Group::new(params.clone()));
    let gens = build_generators(&ext);
    build_lattice(&ext, &gens, cap)
}

fn lattice_checks(lattice: &FaceLattice, params: &GroupParams) -> Vec<(&'static str, bool)> {
    let p = params.p() as usize;
    vec![
        (
            "counts_match_closed_form",
            lattice.counts() == crate::polytope::closed_form_counts(params),
        ),
        (
            "euler_matches_closed_form",
            num_bigint::BigInt::from(lattice.euler()) == euler_characteristic(params),
        ),
        ("diamond", lattice.check_diamond()),
        ("connected", lattice.is_connected()),
        ("degrees", lattice.uniform_degrees() == Some((2 * p, p))),
    ]
}

#[derive(Serialize)]
struct LatticeSummary {
    p: u64,
    e: u32,
    r: u64,
    m: u64,
    enumerated: bool,
    counts: crate::polytope::Counts,
    #[serde(serialize_with = "crate::json::bigint")]
    euler: num_bigint::BigInt,
    checks: Vec<(&'static str, bool)>,
}

fn lattice_summary(
    params: &GroupParams,
    format: Format,
    common: &Common,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let (summary, lattice) = match lattice_for(params, common.cap as usize) {
        Ok(lattice) => {
            let checks = lattice_checks(&lattice, params);
            (
                LatticeSummary {
                    p: params.p(),
                    e: params.e(),
                    r: params.r(),
                    m: params.m(),
                    enumerated: true,
                    counts: lattice.counts(),
                    euler: lattice.euler().into(),
                    checks,
                },
                Some(lattice),
            )
        }
        Err(PolytopeError::CapExceeded { counts, euler, .. }) => (
            LatticeSummary {
                p: params.p(),
                e: params.e(),
                r: params.r(),
                m: params.m(),
                enumerated: false,
                counts: *counts,
                euler,
                checks: Vec::new(),
            },
            None,
        ),
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    let ok = summary.checks.iter().all(|(_, ok)| *ok);
    let bytes = match format {
        Format::Json => to_json_line(&summary),
        Format::Dot => match &lattice {
            Some(l) => export_lattice(l, "dot").map_err(|e| CliError::Invalid(e.to_string()))?,
            None => return Err(CliError::Invalid("lattice over cap; no diagram".into())),
        },
        Format::Text => {
            let c = &summary.counts;
            let mut s = format!(
                "instance  p={} e={} r={} m={}\nvertices  {}\nedges     {}\nfaces     {}\nflags     {}\neuler     {}\n",
                summary.p, summary.e, summary.r, summary.m, c.vertices, c.edges, c.faces, c.flags, summary.euler
            );
            if summary.enumerated {
                for (name, pass) in &summary.checks {
                    s.push_str(&format!(
                        "{name:<26} {}\n",
                        if *pass { "pass" } else { "fail" }
                    ));
                }
            } else {
                s.push_str("lattice not enumerated (over cap); counts from closed forms\n");
            }
            s.into_bytes()
        }
    };
    emit(&common.output, &bytes, out)?;
    Ok(exit_for(ok))
}

#[derive(Serialize)]
struct IdentitiesReport {
    p: u64,
    n_max: u64,
    binomial_violations: usize,
    u: Vec<String>,
    u_first: String,
    u_last: String,
}

fn identities(
    p: u64,
    n_max: u64,
    format: Format,
    common: &Common,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if n_max < 1 {
        return Err(CliError::Invalid("n-max must be at least 1".into()));
    }
    let u = match u_coefficients(p) {
        Ok(u) => u,
        Err(e @ ArithError::NotOddPrime(_)) => return Err(CliError::Invalid(e.to_string())),
        Err(e) => {
            writeln!(out, "{e}")?;
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    let violations = check_binomial_identities(n_max);
    let values: Vec<String> = u.values().iter().map(|v| v.to_string()).collect();
    let report = IdentitiesReport {
        p,
        n_max,
        binomial_violations: violations.len(),
        u_first: values[0].clone(),
        u_last: values[values.len() - 1].clone(),
        u: values,
    };
    let bytes = match format {
        Format::Json => {
            let ints: Vec<serde_json::Value> = u
                .values()
                .iter()
                .map(|v| serde_json::to_value(BigSigned(v)).expect("serializable"))
                .collect();
            let mut doc = serde_json::to_value(&report).expect("serializable");
            doc["u"] = serde_json::Value::Array(ints.clone());
            doc["u_first"] = ints[0].clone();
            doc["u_last"] = ints[ints.len() - 1].clone();
            to_json_line(&doc)
        }
        Format::Text => format!(
            "binomial identities up to n = {}: {} violations\nu (p = {}): [{}]\nu_1 = {}, u_(p+1) = {}\n",
            n_max,
            report.binomial_violations,
            p,
            report.u.join(", "),
            report.u_first,
            report.u_last
        )
        .into_bytes(),
        Format::Dot => return Err(CliError::Invalid("identities supports text or json".into())),
    };
    emit(&common.output, &bytes, out)?;
    Ok(exit_for(violations.is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["regpoly"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn verify_json() {
        let (code, out, _) = run_args(&[
            "verify", "--p", "3", "--e", "1", "--r", "2", "--format", "json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schlafli"], serde_json::json!([3, 6]));
        assert_eq!(v["group_order"], 108);
    }

    #[test]
    fn verify_rejects_composite_p() {
        let (code, _, err) = run_args(&["verify", "--p", "4", "--e", "1", "--r", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("p must be an odd prime"));
    }

    #[test]
    fn identities_prints_u() {
        let (code, out, _) = run_args(&["identities", "--p", "7"]);
        assert_eq!(code, 0);
        assert!(out.contains("[-7, 21, 91, 175, 189, 119, 42, 7]"), "{out}");
    }

    #[test]
    fn unknown_flag_is_invalid_input() {
        let (code, _, _) = run_args(&["verify", "--q", "3"]);
        assert_eq!(code, 2);
    }
}
