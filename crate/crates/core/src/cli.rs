//! The `qcurv` command line.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check (or
//! output cannot be written), 2 on any argument error.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::curvature::{
    default_rule, infinitesimal_coefficients, path_expansion, root_of_unity_expansion,
    verify_suite, Mode, Report, Status,
};
use crate::cyclo::{q_binomial, CycloModulus, QPoly};
use crate::paths::{path_sum_dp, path_sum_enum, Comp, WeightRule};
use crate::render;

#[derive(Parser, Debug)]
#[command(
    name = "qcurv",
    version,
    about = "Exact N-curvature expansions of D = d + a"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand D^N = Σ c[k] d^k.
    Curvature(CurvatureArgs),
    /// A single path sum c_q(s, N).
    Cq(CqArgs),
    /// The Gaussian binomial C(n, k)_q.
    Binom(BinomArgs),
    /// First-order coefficients of (d + t e)^N with t^2 = 0.
    Infinitesimal(InfinitesimalArgs),
    /// Run the cross-validation suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Generic,
    Root,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Generic => Mode::Generic,
            ModeArg::Root => Mode::RootOfUnity,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Default,
    Literal,
    Prefix,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Dp,
    Enum,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Root)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Default)]
    rule: RuleArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct CqArgs {
    #[arg(long)]
    n: usize,
    /// Composition such as "0,1"; "∅" or "" for the empty one.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Root)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Default)]
    rule: RuleArg,
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct BinomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    #[arg(long, value_enum, default_value_t = ModeArg::Root)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct InfinitesimalArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Root)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Default)]
    rule: RuleArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, value_enum, default_value_t = RuleArg::Default)]
    rule: RuleArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the subcommand, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .next()
                .unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: cannot write output: {e}");
            1
        }
    }
}

fn resolve_rule(rule: RuleArg, err: &mut dyn Write) -> io::Result<WeightRule> {
    Ok(match rule {
        RuleArg::Literal => WeightRule::Literal,
        RuleArg::Prefix => WeightRule::Prefix,
        RuleArg::Default => {
            let chosen = default_rule();
            writeln!(err, "note: --rule default resolved to {chosen} (the rule that matches the operator expansion)")?;
            chosen
        }
    })
}

fn require_n(what: &str, n: usize, min: usize) -> Result<(), Failure> {
    if n < min {
        Err(Failure::Usage(format!(
            "{what} requires --n >= {min}, got {n}"
        )))
    } else {
        Ok(())
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Curvature(args) => curvature(args, out, err),
        Command::Cq(args) => cq(args, out, err),
        Command::Binom(args) => binom(args, out),
        Command::Infinitesimal(args) => infinitesimal(args, out, err),
        Command::Verify(args) => verify(args, out, err),
    }
}

fn curvature(
    args: CurvatureArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let mode = Mode::from(args.mode);
    require_n(
        "curvature",
        args.n,
        if mode == Mode::Generic { 1 } else { 2 },
    )?;
    let rule = resolve_rule(args.rule, err)?;
    let exp = match mode {
        Mode::Generic => path_expansion(args.n, rule)?,
        Mode::RootOfUnity => root_of_unity_expansion(args.n, rule)?,
    };
    match args.format {
        Format::Text => out.write_all(render::curvature_text(&exp).as_bytes())?,
        Format::Latex => out.write_all(render::curvature_latex(&exp).as_bytes())?,
        Format::Json => writeln!(out, "{}", render::curvature_to_json(&exp))?,
    }
    Ok(0)
}

fn modulus_for(mode: Mode, what: &str, n: usize) -> Result<Option<CycloModulus>, Failure> {
    match mode {
        Mode::Generic => Ok(None),
        Mode::RootOfUnity => {
            require_n(what, n, 2)?;
            Ok(Some(CycloModulus::new(n)?))
        }
    }
}

fn emit_poly(
    p: &QPoly,
    format: Format,
    doc: serde_json::Value,
    out: &mut dyn Write,
) -> io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{p}"),
        Format::Latex => writeln!(out, "{}", render::latex_qpoly(p)),
        Format::Json => writeln!(out, "{doc}"),
    }
}

fn cq(args: CqArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    require_n("cq", args.n, 1)?;
    let s: Comp = args.s.parse()?;
    let mode = Mode::from(args.mode);
    let modulus = modulus_for(mode, "cq in root mode", args.n)?;
    let rule = resolve_rule(args.rule, err)?;
    let value = match args.method {
        Method::Dp => path_sum_dp(&s, args.n, rule),
        Method::Enum => path_sum_enum(&s, args.n, rule),
    };
    let value = modulus.map_or(value.clone(), |m| m.reduce(&value));
    let doc = json!({
        "n": args.n,
        "s": s,
        "mode": mode,
        "rule": rule,
        "method": match args.method { Method::Dp => "dp", Method::Enum => "enum" },
        "coeff": value,
    });
    emit_poly(&value, args.format, doc, out)?;
    Ok(0)
}

fn binom(args: BinomArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mode = Mode::from(args.mode);
    let modulus = modulus_for(mode, "binom in root mode", args.n)?;
    let value = q_binomial(args.n, args.k);
    let value = modulus.map_or(value.clone(), |m| m.reduce(&value));
    let doc = json!({ "n": args.n, "k": args.k, "mode": mode, "coeff": value });
    emit_poly(&value, args.format, doc, out)?;
    Ok(0)
}

fn infinitesimal(
    args: InfinitesimalArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    require_n("infinitesimal", args.n, 2)?;
    let mode = Mode::from(args.mode);
    let rule = resolve_rule(args.rule, err)?;
    let mut coeffs = infinitesimal_coefficients(args.n, rule)?;
    if let Some(m) = modulus_for(mode, "infinitesimal", args.n)? {
        coeffs = coeffs.reduce(&m);
    }
    match args.format {
        Format::Text => out.write_all(render::infinitesimal_text(&coeffs).as_bytes())?,
        Format::Latex => out.write_all(render::infinitesimal_latex(&coeffs).as_bytes())?,
        Format::Json => {
            let entries: Vec<_> = coeffs
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| json!({ "m": m, "coeff": c }))
                .collect();
            let doc = json!({ "n": args.n, "mode": mode, "rule": rule, "coeffs": entries });
            writeln!(out, "{doc}")?;
        }
    }
    Ok(0)
}

fn verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    require_n("verify", args.n, 2)?;
    let rule = resolve_rule(args.rule, err)?;
    let report = verify_suite(args.n, rule);
    match args.format {
        Format::Text => write_report_text(&report, out)?,
        Format::Latex => write_report_latex(&report, out)?,
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&report).expect("report serialises")
        )?,
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn write_report_text(report: &Report, out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "verification for n = 2..={}, rule = {}",
        report.n_max, report.rule
    )?;
    let width = report
        .checks
        .iter()
        .map(|c| c.check.len())
        .max()
        .unwrap_or(0);
    for check in &report.checks {
        let status = match check.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(out, "{status}  {:<width$}  n={}", check.check, check.n)?;
        if let Some(cx) = &check.counterexample {
            write!(
                out,
                "  {}: expected {}, got {}",
                cx.note, cx.expected, cx.actual
            )?;
        }
        writeln!(out)?;
    }

    let arb = &report.arbitration;
    let passing: Vec<&str> = arb.passing.iter().map(|r| r.name()).collect();
    writeln!(
        out,
        "weight rule arbitration (n <= {}): passing = [{}], selected = {}",
        arb.max_n,
        passing.join(", "),
        arb.selected
    )?;
    for f in &arb.rejected {
        writeln!(
            out,
            "  {} first fails at n={} s={} k={}: path sum {} vs operator {}",
            f.rule, f.n, f.s, f.k, f.path_value, f.oracle_value
        )?;
    }

    writeln!(
        out,
        "hand-listing discrepancies: {}",
        report.discrepancies.len()
    )?;
    for d in &report.discrepancies {
        let s = d.s.as_ref().map(Comp::to_string).unwrap_or_default();
        let k = d.k.map(|k| k.to_string()).unwrap_or_default();
        let root = if d.agrees_at_root {
            "agrees"
        } else {
            "differs"
        };
        writeln!(
            out,
            "  {} n={} k={} s={}: listed {}, computed {} ({root} mod Φ_{})",
            d.topic, d.n, k, s, d.listed, d.computed, d.n
        )?;
    }

    let failed = report.failures().count();
    writeln!(
        out,
        "summary: {} passed, {} failed",
        report.checks.len() - failed,
        failed
    )
}

fn write_report_latex(report: &Report, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "\\begin{{tabular}}{{llc}}")?;
    writeln!(out, "check & $N$ & status \\\\ \\hline")?;
    for check in &report.checks {
        let status = match check.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
        };
        writeln!(
            out,
            "\\texttt{{{}}} & {} & {status} \\\\",
            check.check.replace('_', "\\_"),
            check.n
        )?;
    }
    writeln!(out, "\\end{{tabular}}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["qcurv"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn s_and_k_only_where_allowed() {
        assert_eq!(run_capture(&["cq", "--n", "3"]).0, 2);
        assert_eq!(run_capture(&["binom", "--n", "3"]).0, 2);
        assert_eq!(run_capture(&["curvature", "--n", "3", "--s", "0"]).0, 2);
        assert_eq!(run_capture(&["curvature", "--n", "3", "--k", "0"]).0, 2);
        assert_eq!(run_capture(&["verify", "--n", "3", "--k", "1"]).0, 2);
    }

    #[test]
    fn order_minimums() {
        let (code, out, err) = run_capture(&["curvature", "--n", "1"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
        assert_eq!(
            run_capture(&["curvature", "--n", "1", "--mode", "generic"]).0,
            0
        );
        assert_eq!(run_capture(&["infinitesimal", "--n", "1"]).0, 2);
        assert_eq!(run_capture(&["verify", "--n", "1"]).0, 2);
        assert_eq!(run_capture(&["binom", "--n", "1", "--k", "0"]).0, 2);
        assert_eq!(
            run_capture(&["binom", "--n", "1", "--k", "0", "--mode", "generic"]).0,
            0
        );
    }

    #[test]
    fn negative_k_is_accepted() {
        let (code, out, _) = run_capture(&["binom", "--n", "3", "--k", "-1", "--mode", "generic"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0\n");
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_capture(&["--help"]).0, 0);
    }
}
