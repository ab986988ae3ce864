mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use umbral_core::conv::{binom_convolve, conv_invert, Seq};
use umbral_core::duality::{
    dual_curve, known_roots, sheffer_dual, umbral_wronskian, vandermonde_general, vandermonde_shifted,
};
use umbral_core::pairing::{
    add_conv_inverse, appell_from_structure, deviation_closed_delta, deviation_poly, deviation_via_appell,
    polarity_pairing, umbral_add_convolve,
};
use umbral_core::roots::{
    apolar_campaign, poly_roots, verify_deviation_line, verify_grace, verify_walsh, ComplexPoly,
    VerificationReport, DEFAULT_MAX_ITER, ROOT_TOL,
};
use umbral_core::umbral::{binomial_curve, is_sheffer, sheffer_curve};
use umbral_core::{Curve, DeltaOp, NamedOp, Poly};

use input::{json_arg, operator, scalar_arg, scalar_list};

#[derive(Parser)]
#[command(name = "umbral", version, about = "Exact umbral calculus on polynomials of bounded degree")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    output: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct OpArgs {
    /// derivative, forward_difference, backward_difference, abel:a=<q> or touchard
    #[arg(long)]
    op: Option<String>,
    /// JSON file with {"level", "coeffs"} or {"level", "named"}
    #[arg(long)]
    op_file: Option<PathBuf>,
    #[arg(long)]
    level: Option<usize>,
}

impl OpArgs {
    fn resolve(&self) -> Result<DeltaOp, CliError> {
        operator(self.op.as_deref(), self.op_file.as_deref(), self.level)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Solve,
    Closed,
    Appell,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Binomial curve (S_0, ..., S_n) of an operator
    Binomial {
        #[command(flatten)]
        op: OpArgs,
    },
    /// Sheffer curve v ⋆ η (with --seq), or a Sheffer test (with --curve)
    Sheffer {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, conflicts_with = "curve")]
        seq: Option<String>,
        #[arg(long)]
        curve: Option<String>,
    },
    /// Polarity pairing of two polynomials
    Pairing {
        #[command(flatten)]
        op: OpArgs,
        /// Polynomial JSON or @file; give exactly two
        #[arg(long)]
        poly: Vec<String>,
    },
    /// Umbral additive convolution of polynomials, or binomial convolution of sequences
    Convolve {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        poly: Vec<String>,
        #[arg(long, conflicts_with = "poly")]
        seq: Vec<String>,
        /// Invert the single argument instead
        #[arg(long)]
        invert: bool,
    },
    /// Deviation polynomial R_n
    Deviation {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Appell family A_0, ..., A_n attached to an operator
    Appell {
        #[command(flatten)]
        op: OpArgs,
    },
    /// Dual curve, or the dual of the Sheffer curve v ⋆ η (with --seq)
    Dual {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, conflicts_with = "seq")]
        curve: Option<String>,
        #[arg(long)]
        seq: Option<String>,
    },
    /// Umbral Wronskian form of a curve
    Wronskian {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        curve: String,
    },
    /// Vandermonde determinants: at --points, or shifted along the roots of S_n
    Vandermonde {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        curve: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Vec<String>,
        /// Roots of S_n; defaults to the known ones for the operator
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        roots: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long)]
        seq: Option<String>,
    },
    /// Numerical roots and root strip of a polynomial
    Roots {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = ROOT_TOL)]
        tol: f64,
    },
    /// Numerical verification campaigns
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Roots of R_n on the line Re z = -(n-1)/2, for n up to --level
    DeviationLine {
        #[arg(long, default_value_t = 12)]
        level: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Strip containment for the forward difference convolution
    Walsh {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Strip intersection for apolar pairs: two --poly, or a seeded campaign
    Grace {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        poly: Vec<String>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
}

#[derive(Debug)]
pub struct CliError {
    code: String,
    detail: String,
    exit: u8,
}

impl CliError {
    fn usage(detail: impl Into<String>) -> Self {
        CliError { code: "usage".into(), detail: detail.into(), exit: 1 }
    }
}

/// A computed value; `verified = false` turns into exit code 3.
struct Outcome {
    value: Value,
    verified: bool,
}

fn ok<T: Serialize>(v: T) -> Result<Outcome, CliError> {
    Ok(Outcome { value: to_value(v), verified: true })
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn report(r: VerificationReport) -> Result<Outcome, CliError> {
    let verified = r.passed();
    Ok(Outcome { value: to_value(r), verified })
}

fn polys(args: &[String]) -> Result<Vec<Poly>, CliError> {
    args.iter().map(|a| json_arg(a, "polynomial")).collect()
}

fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Binomial { op } => ok(binomial_curve(&op.resolve()?)),
        Command::Sheffer { op, seq, curve } => match (seq, curve) {
            (Some(seq), None) => {
                let v: Seq = json_arg(seq, "sequence")?;
                let d = operator(op.op.as_deref(), op.op_file.as_deref(), Some(op.level.unwrap_or(v.level())))?;
                ok(sheffer_curve(&v, &binomial_curve(&d))?)
            }
            (None, Some(curve)) => {
                let c: Curve = json_arg(curve, "curve")?;
                let found = is_sheffer(&c);
                ok(json!({ "sheffer": found.is_some(), "op": found }))
            }
            _ => Err(CliError::usage("give --seq or --curve")),
        },
        Command::Pairing { op, poly } => {
            let [a, b] = <[Poly; 2]>::try_from(polys(poly)?)
                .map_err(|_| CliError::usage("pairing takes exactly two --poly"))?;
            let d = op.resolve()?;
            let r = polarity_pairing(&a, &b, &d, d.level())?;
            let verified = r.constant;
            Ok(Outcome { value: to_value(r), verified })
        }
        Command::Convolve { op, poly, seq, invert } => convolve(op, poly, seq, *invert),
        Command::Deviation { op, method } => deviation(&op.resolve()?, *method),
        Command::Appell { op } => {
            let d = op.resolve()?;
            ok(json!({ "level": d.level(), "op": d.label(), "family": appell_from_structure(&d, d.level())? }))
        }
        Command::Dual { op, curve, seq } => match (curve, seq) {
            (Some(curve), None) => {
                let c: Curve = json_arg(curve, "curve")?;
                let d = operator(op.op.as_deref(), op.op_file.as_deref(), Some(op.level.unwrap_or(c.level())))?;
                ok(dual_curve(&c, &d)?)
            }
            (None, Some(seq)) => {
                let v: Seq = json_arg(seq, "sequence")?;
                let d = operator(op.op.as_deref(), op.op_file.as_deref(), Some(op.level.unwrap_or(v.level())))?;
                let inverse = sheffer_dual(&v, &d)?;
                let curve = sheffer_curve(&inverse, &binomial_curve(&d))?;
                ok(json!({ "inverse": inverse, "curve": curve }))
            }
            _ => Err(CliError::usage("give --curve or --seq")),
        },
        Command::Wronskian { op, curve } => {
            let c: Curve = json_arg(curve, "curve")?;
            let d = operator(op.op.as_deref(), op.op_file.as_deref(), Some(op.level.unwrap_or(c.level())))?;
            ok(umbral_wronskian(&c, &d)?)
        }
        Command::Vandermonde { op, curve, points, roots, t, seq } => {
            let c: Curve = json_arg(curve, "curve")?;
            let r = if !points.is_empty() {
                vandermonde_general(&c, &scalar_list(points)?)?
            } else {
                let t = scalar_arg(t.as_deref().ok_or_else(|| CliError::usage("give --points, or --t and --seq"))?)?;
                let v: Seq = json_arg(seq.as_deref().ok_or_else(|| CliError::usage("--seq is required"))?, "sequence")?;
                let n = c.level();
                let d = operator(op.op.as_deref(), op.op_file.as_deref(), Some(op.level.unwrap_or(n)))?;
                let roots = if roots.is_empty() {
                    known_roots(&d, n).ok_or_else(|| CliError {
                        code: "bad_roots".into(),
                        detail: format!("no known simple roots for {} at level {n}; pass --roots", d.label()),
                        exit: 2,
                    })?
                } else {
                    scalar_list(roots)?
                };
                vandermonde_shifted(&c, &d, &roots, &t, &v)?
            };
            let verified = r.holds;
            Ok(Outcome { value: to_value(r), verified })
        }
        Command::Roots { poly, tol } => {
            let p: Poly = json_arg(poly, "polynomial")?;
            let cp = ComplexPoly::from_poly(&p)?;
            let roots = poly_roots(&cp, *tol, DEFAULT_MAX_ITER)?;
            let lo = roots.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            let hi = roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            let pairs: Vec<[f64; 2]> = roots.iter().map(|z| [z.re, z.im]).collect();
            ok(json!({ "degree": cp.degree(), "roots": pairs, "strip": { "lo": lo, "hi": hi } }))
        }
        Command::Verify { which } => match which {
            Verify::DeviationLine { level, tol } => report(verify_deviation_line(*level, *tol)?),
            Verify::Walsh { level, trials, seed, tol } => report(verify_walsh(*level, *trials, *seed, *tol)?),
            Verify::Grace { level, poly, trials, seed, tol } => match poly.len() {
                0 => report(apolar_campaign(*level, *trials, *seed, *tol)?),
                2 => {
                    let p = polys(poly)?;
                    report(verify_grace(&p[0], &p[1], *level, *tol)?)
                }
                _ => Err(CliError::usage("grace takes zero or two --poly")),
            },
        },
    }
}

fn convolve(op: &OpArgs, poly: &[String], seq: &[String], invert: bool) -> Result<Outcome, CliError> {
    let arity = if invert { 1 } else { 2 };
    if !seq.is_empty() {
        let s: Vec<Seq> = seq.iter().map(|a| json_arg(a, "sequence")).collect::<Result<_, _>>()?;
        if s.len() != arity {
            return Err(CliError::usage(format!("expected {arity} --seq")));
        }
        let out = if invert { conv_invert(&s[0])? } else { binom_convolve(&s[0], &s[1])? };
        return ok(out);
    }
    let p = polys(poly)?;
    if p.len() != arity {
        return Err(CliError::usage(format!("expected {arity} --poly")));
    }
    let d = op.resolve()?;
    let n = d.level();
    let out = if invert { add_conv_inverse(&p[0], &d, n)? } else { umbral_add_convolve(&p[0], &p[1], &d, n)? };
    ok(out)
}

fn deviation(d: &DeltaOp, method: Method) -> Result<Outcome, CliError> {
    let n = d.level();
    let is_delta = matches!(d.named_op(), Some(NamedOp::ForwardDifference));
    let mut results: Vec<(&str, Poly)> = Vec::new();
    if matches!(method, Method::Solve | Method::All) {
        results.push(("solve", deviation_poly(d, n)?));
    }
    if matches!(method, Method::Closed) && !is_delta {
        return Err(CliError {
            code: "unsupported_method".into(),
            detail: "the closed form is only available for forward_difference".into(),
            exit: 2,
        });
    }
    if is_delta && matches!(method, Method::Closed | Method::All) {
        results.push(("closed", deviation_closed_delta(n)));
    }
    if matches!(method, Method::Appell | Method::All) {
        results.push(("appell", deviation_via_appell(d, n)?));
    }
    let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
    let results: Vec<Value> =
        results.into_iter().map(|(m, p)| json!({ "method": m, "poly": p })).collect();
    Ok(Outcome { value: json!({ "level": n, "op": d.label(), "results": results, "agree": agree }), verified: agree })
}

/// Whether `--output table` was requested, for errors raised before parsing succeeds.
fn wants_table() -> bool {
    let args: Vec<String> = std::env::args().collect();
    args.iter().any(|a| a == "--output=table") || args.windows(2).any(|w| w[0] == "--output" && w[1] == "table")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            if !wants_table() {
                let detail = e.kind().to_string();
                println!("{}", json!({ "error": "usage", "detail": detail }));
            }
            return ExitCode::from(1);
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            match cli.output {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.value).expect("json")),
                Format::Table => print!("{}", render::table(&out.value)),
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.detail);
            if cli.output == Format::Json {
                println!("{}", json!({ "error": e.code, "detail": e.detail }));
            }
            ExitCode::from(e.exit)
        }
    }
}
