//! Batch interface over the ratio-bounds library: point enclosures, grid
//! sweeps, the property-suite driver and the tail-policy benchmark.
//!
//! Exit codes: 0 on success, 2 for usage or validity errors, 3 for oracle or
//! convergence failures.

// Negated comparisons (`!(x > 0.0)`) deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ratio_bounds::bound::Side;
use ratio_bounds::bounds_i::{self, IBoundSpec, IFamily};
use ratio_bounds::bounds_k::{self, KBoundSpec, KFamily};
use ratio_bounds::cf::{self, TailPolicy};
use ratio_bounds::oracle::{self, PrecisionConfig};
use ratio_bounds::verify::{self, VerifyConfig};
use ratio_bounds::{log_spaced, Error};

#[derive(Parser)]
#[command(
    name = "ratio-bounds",
    version,
    about = "Certified enclosures for modified Bessel function ratios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enclose one ratio value, or evaluate a single named bound.
    Enclose(EncloseArgs),
    /// Run a named property suite and report pass/fail with margins.
    Verify(VerifyArgs),
    /// Sweep a (nu, x) grid and write one row per point.
    Sweep(SweepArgs),
    /// Benchmark iterations-to-tolerance for the tail policies.
    Cfbench(CfbenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    #[value(alias = "I")]
    I,
    #[value(alias = "K")]
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliSide {
    Lower,
    Upper,
}

impl From<CliSide> for Side {
    fn from(s: CliSide) -> Side {
        match s {
            CliSide::Lower => Side::Lower,
            CliSide::Upper => Side::Upper,
        }
    }
}

#[derive(Args)]
struct EncloseArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long)]
    x: f64,
    /// Enclosure level (I: 0..=2, K: 0..=1).
    #[arg(long, default_value_t = 1)]
    level: u8,
    /// Also print the oracle value.
    #[arg(long)]
    oracle: bool,
    /// Evaluate a single family member instead of an enclosure
    /// (b, B, Btilde, d, D).
    #[arg(long)]
    family: Option<String>,
    #[arg(long, requires = "family", allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, value_enum, requires = "family")]
    side: Option<CliSide>,
    /// Evaluate outside the proven validity table (reported invalid, never
    /// used inside enclosures).
    #[arg(long)]
    unchecked: bool,
    /// Oracle precision in decimal digits (default 50, or RATIO_BOUNDS_DIGITS).
    #[arg(long)]
    digits: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of enclosures, monotonicity, identities, sharpness, crossings,
    /// cf, all.
    #[arg(long)]
    suite: String,
    /// Override the order grid (comma-separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nu: Option<Vec<f64>>,
    /// Override the argument grid (comma-separated).
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<f64>>,
    #[arg(long)]
    digits: Option<u32>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Comma-separated order values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nu: Vec<f64>,
    /// Explicit x values (comma-separated).
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<f64>>,
    /// Log-spaced x grid, lo:hi:n.
    #[arg(long, value_name = "LO:HI:N")]
    x_log: Option<String>,
    /// Linearly spaced x grid, lo:hi:n.
    #[arg(long, value_name = "LO:HI:N")]
    x_lin: Option<String>,
    #[arg(long, default_value_t = 1)]
    level: u8,
    /// Add oracle and margin columns.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
    format: SweepFormat,
    #[arg(long)]
    digits: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct CfbenchArgs {
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    /// Comma-separated x values.
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Comma-separated subset of zero,b,B.
    #[arg(long, value_delimiter = ',', default_value = "zero,b,B")]
    policies: Vec<String>,
}

/// Failures carry the exit code mandated by the interface contract.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Validity(_) => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enclose(args) => cmd_enclose(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Cfbench(args) => cmd_cfbench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn env_digits() -> Option<u32> {
    std::env::var("RATIO_BOUNDS_DIGITS")
        .ok()
        .and_then(|s| s.parse().ok())
}

fn precision(digits: Option<u32>) -> PrecisionConfig {
    PrecisionConfig::with_digits(digits.or_else(env_digits).unwrap_or(50))
}

/// 17 significant digits, scientific.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn oracle_value(kind: Kind, nu: f64, x: f64, cfg: &PrecisionConfig) -> Result<f64, Failure> {
    let v = match kind {
        Kind::I => oracle::oracle_ratio_i(nu, x, cfg)?.value.to_f64(),
        Kind::K => oracle::oracle_ratio_k(nu, x, cfg)?.value.to_f64(),
    };
    Ok(v)
}

fn cmd_enclose(args: EncloseArgs) -> Result<(), Failure> {
    if let Some(family) = args.family.clone() {
        return enclose_single(&args, &family);
    }
    let mut line = format!("nu={} x={}", fmt(args.nu), fmt(args.x));
    let (lower, upper, lo_label, up_label) = match args.kind {
        Kind::I => {
            let e = bounds_i::enclosure_i(args.nu, args.x, args.level)?;
            (e.lower.value, e.upper.value, e.lower.label, e.upper.label)
        }
        Kind::K => {
            let e = bounds_k::enclosure_k(args.nu, args.x, args.level)?;
            (e.lower.value, e.upper.value, e.lower.label, e.upper.label)
        }
    };
    write!(
        line,
        " lower={} lower_family={lo_label} upper={} upper_family={up_label} gap={}",
        fmt(lower),
        fmt(upper),
        fmt(upper / lower - 1.0)
    )
    .unwrap();
    if args.oracle {
        let o = oracle_value(args.kind, args.nu, args.x, &precision(args.digits))?;
        write!(line, " oracle={}", fmt(o)).unwrap();
    }
    println!("{line}");
    Ok(())
}

fn enclose_single(args: &EncloseArgs, family: &str) -> Result<(), Failure> {
    let alpha = args
        .alpha
        .ok_or_else(|| Failure::usage("--family needs --alpha"))?;
    let side: Side = args
        .side
        .ok_or_else(|| Failure::usage("--family needs --side"))?
        .into();
    let (value, validity, label) = match (args.kind, family) {
        (Kind::I, "b") => {
            let spec = IBoundSpec::new(IFamily::Root, alpha, side);
            (
                bounds_i::b_alpha(args.nu, alpha, args.x)?,
                bounds_i::validity_i(&spec, args.nu),
                spec.label(),
            )
        }
        (Kind::I, "B") => {
            let spec = IBoundSpec::new(IFamily::Iterated, alpha, side);
            (
                bounds_i::big_b_alpha(args.nu, alpha, args.x)?,
                bounds_i::validity_i(&spec, args.nu),
                spec.label(),
            )
        }
        (Kind::I, "Btilde") => {
            let spec = IBoundSpec::new(IFamily::Mapped, alpha, side);
            (
                bounds_i::big_b_tilde_alpha(args.nu, alpha, args.x)?,
                bounds_i::validity_i(&spec, args.nu),
                spec.label(),
            )
        }
        (Kind::K, "d") => {
            let spec = KBoundSpec::new(KFamily::Root, alpha, side);
            (
                bounds_k::d_alpha(args.nu, alpha, args.x)?,
                bounds_k::validity_k(&spec, args.nu),
                spec.label(),
            )
        }
        (Kind::K, "D") => {
            let spec = KBoundSpec::new(KFamily::Iterated, alpha, side);
            (
                bounds_k::big_d_alpha(args.nu, alpha, args.x)?,
                bounds_k::validity_k(&spec, args.nu),
                spec.label(),
            )
        }
        (kind, other) => {
            return Err(Failure::usage(format!(
                "unknown family '{other}' for kind {kind:?}"
            )))
        }
    };
    if !validity.valid && !args.unchecked {
        return Err(Failure {
            code: 2,
            message: format!(
                "{label} is not proven as a {side} bound at nu = {} ({}); pass --unchecked to evaluate anyway",
                args.nu, validity.reason
            ),
        });
    }
    let mut line = format!(
        "nu={} x={} family={label} side={side} value={} valid={} reason=\"{}\"",
        fmt(args.nu),
        fmt(args.x),
        fmt(value),
        validity.valid,
        validity.reason
    );
    if args.oracle {
        let o = oracle_value(args.kind, args.nu, args.x, &precision(args.digits))?;
        write!(line, " oracle={}", fmt(o)).unwrap();
    }
    println!("{line}");
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let cfg = VerifyConfig {
        nu_override: args.nu,
        x_override: args.x,
        digits: args.digits.or_else(env_digits),
    };
    let reports = verify::run_suites(&args.suite, &cfg)?;
    let mut all = true;
    for report in &reports {
        println!("[suite {}]", report.suite);
        for check in &report.checks {
            println!(
                "{} {} margin={:.3e} {}",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.margin,
                check.detail
            );
            all &= check.passed;
        }
    }
    if all {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "one or more checks failed".into(),
        })
    }
}

#[derive(Serialize)]
struct SweepRow {
    nu: f64,
    x: f64,
    lower: f64,
    upper: f64,
    gap: f64,
    lower_family: String,
    upper_family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper_margin: Option<f64>,
}

fn parse_grid_spec(spec: &str, log: bool) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::usage(format!("grid spec '{spec}' is not lo:hi:n")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Failure::usage("bad grid lo"))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Failure::usage("bad grid hi"))?;
    let n: usize = parts[2].parse().map_err(|_| Failure::usage("bad grid n"))?;
    if n < 2 || !(hi > lo) || (log && !(lo > 0.0)) {
        return Err(Failure::usage(format!("grid spec '{spec}' out of range")));
    }
    Ok(if log {
        log_spaced(lo, hi, n)
    } else {
        ratio_bounds::lin_spaced(lo, hi, n)
    })
}

fn sweep_xs(args: &SweepArgs) -> Result<Vec<f64>, Failure> {
    let explicit = args.x.clone().unwrap_or_default();
    match (&args.x_log, &args.x_lin, explicit.is_empty()) {
        (Some(spec), None, true) => parse_grid_spec(spec, true),
        (None, Some(spec), true) => parse_grid_spec(spec, false),
        (None, None, false) => Ok(explicit),
        (None, None, true) => Err(Failure::usage("empty x grid: pass --x, --x-log or --x-lin")),
        _ => Err(Failure::usage("pass exactly one of --x, --x-log, --x-lin")),
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let xs = sweep_xs(&args)?;
    if args.nu.is_empty() {
        return Err(Failure::usage("empty nu list"));
    }
    if xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Failure::usage("x values must be positive"));
    }
    let cfg = precision(args.digits);

    let mut rows = Vec::with_capacity(args.nu.len() * xs.len());
    for &nu in &args.nu {
        for &x in &xs {
            let (lower, upper) = match args.kind {
                Kind::I => {
                    let e = bounds_i::enclosure_i(nu, x, args.level)?;
                    (
                        (e.lower.value, e.lower.label),
                        (e.upper.value, e.upper.label),
                    )
                }
                Kind::K => {
                    let e = bounds_k::enclosure_k(nu, x, args.level)?;
                    (
                        (e.lower.value, e.lower.label),
                        (e.upper.value, e.upper.label),
                    )
                }
            };
            let oracle = if args.oracle {
                Some(oracle_value(args.kind, nu, x, &cfg)?)
            } else {
                None
            };
            rows.push(SweepRow {
                nu,
                x,
                lower: lower.0,
                upper: upper.0,
                gap: upper.0 / lower.0 - 1.0,
                lower_family: lower.1,
                upper_family: upper.1,
                oracle,
                lower_margin: oracle.map(|o| o - lower.0),
                upper_margin: oracle.map(|o| upper.0 - o),
            });
        }
    }

    let body = match args.format {
        SweepFormat::Csv => render_csv(&rows, args.oracle),
        SweepFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("serializable rows");
            s.push('\n');
            s
        }
    };
    fs::write(&args.out, body).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", args.out.display()),
    })?;
    println!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn render_csv(rows: &[SweepRow], with_oracle: bool) -> String {
    let mut out = String::new();
    out.push_str("nu,x,lower,upper,gap,lower_family,upper_family");
    if with_oracle {
        out.push_str(",oracle,lower_margin,upper_margin");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            fmt(r.nu),
            fmt(r.x),
            fmt(r.lower),
            fmt(r.upper),
            fmt(r.gap),
            r.lower_family,
            r.upper_family
        );
        if with_oracle {
            let _ = write!(
                out,
                ",{},{},{}",
                fmt(r.oracle.unwrap_or(f64::NAN)),
                fmt(r.lower_margin.unwrap_or(f64::NAN)),
                fmt(r.upper_margin.unwrap_or(f64::NAN))
            );
        }
        out.push('\n');
    }
    out
}

fn cmd_cfbench(args: CfbenchArgs) -> Result<(), Failure> {
    if args.x.is_empty() {
        return Err(Failure::usage("empty x list"));
    }
    let mut policies = Vec::new();
    for name in &args.policies {
        policies.push(match name.as_str() {
            "zero" => TailPolicy::Zero,
            "b" => TailPolicy::RootPair,
            "B" => TailPolicy::IteratedPair,
            other => return Err(Failure::usage(format!("unknown policy '{other}'"))),
        });
    }
    if policies.is_empty() {
        return Err(Failure::usage("empty policy list"));
    }

    let mut header = String::from("x");
    for p in &policies {
        let _ = write!(header, "\t{p}");
    }
    let all_three = policies.len() == 3;
    if all_three {
        header.push_str("\tordering(x>=10)");
    }
    println!("{header}");

    for &x in &args.x {
        let mut line = fmt(x);
        let mut counts = Vec::new();
        for &p in &policies {
            match cf::evaluate_ratio_i(args.nu, x, args.tol, p) {
                Ok(run) => {
                    let _ = write!(line, "\t{}", run.iterations);
                    counts.push(Some(run.iterations));
                }
                Err(Error::Convergence { .. }) => {
                    line.push_str("\terr");
                    counts.push(None);
                }
                Err(e) => return Err(e.into()),
            }
        }
        if all_three {
            let verdict = if x < 10.0 {
                "-"
            } else {
                match (counts[0], counts[1], counts[2]) {
                    (Some(z), Some(b), Some(bb)) if bb <= b && b <= z => "ok",
                    (Some(_), Some(_), Some(_)) => "violated",
                    _ => "err",
                }
            };
            let _ = write!(line, "\t{verdict}");
        }
        println!("{line}");
    }
    Ok(())
}
