//! `opcli`: command-line front end for the operator engine.
//!
//! Every subcommand that takes an operator reads it from `--expr` or, when
//! absent, from standard input. Output is human text by default or a single
//! JSON object with `--json`. Exact rationals appear in JSON as strings like
//! `"3/2"` so no precision is lost.
//!
//! Exit codes: 0 success, 2 parse error, 3 binding error, 4 domain error,
//! 1 internal error or failed verification.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use consop::conservation::{
    classify, delta_expectation, expectation, solve_special_case, substitute_physical,
    ConservationError, ConstraintKind, EquivalenceMode,
};
use consop::diffop::{DiffOp, WaveSpec};
use consop::numlab::{
    eval_const, probe_ensemble, quad_expectation, Binding, GridSpec, NumlabError,
};
use consop::syntax::{parse_operator, print_fourier_poly, print_operator, ParseError};
use consop::verify::run_corpus;

#[derive(Parser)]
#[command(
    name = "opcli",
    version,
    about = "Symbolic and numeric analysis of differential operators on periodic waves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Collapse an operator to its second-order form (A0, B1, B2).
    Reduce(ExprArgs),
    /// Classify an operator into the canonical families.
    Classify(ExprArgs),
    /// Symbolic expectation value, optionally cross-checked by quadrature.
    Expect {
        #[command(flatten)]
        expr: ExprArgs,
        /// Also compute the quadrature value and the absolute difference.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        numerics: NumericArgs,
    },
    /// Change in expectation under a perturbation, or a seeded Monte-Carlo
    /// ensemble of random perturbations.
    Probe {
        #[command(flatten)]
        expr: ExprArgs,
        /// Perturbation operator for a single symbolic probe.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["trials", "seed", "family_only"])]
        delta: Option<String>,
        /// Number of random perturbations to draw.
        #[arg(long)]
        trials: Option<u32>,
        /// Seed for the perturbation ensemble.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw perturbations inside the conserved family only.
        #[arg(long)]
        family_only: bool,
        #[command(flatten)]
        numerics: NumericArgs,
    },
    /// Solve one of the six special cases of the conserved form.
    SolveCase {
        /// Case index, 1 through 6.
        #[arg(long)]
        k: u8,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// Render a classified operator in a physical variable with the family
    /// constant bound to a named physical constant.
    Phys {
        #[command(flatten)]
        expr: ExprArgs,
        /// Variable name for the derivative, e.g. `x`.
        #[arg(long, default_value = "x")]
        var: String,
        /// Name substituted for the family constant, e.g. `hbar`.
        #[arg(long = "const", default_value = "hbar")]
        constant: String,
    },
    /// Run the built-in symbolic-vs-numeric cross-check corpus.
    Verify {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ExprArgs {
    /// Operator expression; read from stdin when omitted.
    #[arg(long, short, allow_hyphen_values = true)]
    expr: Option<String>,
    /// Emit a JSON object instead of human-readable text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct NumericArgs {
    /// Bind a symbolic constant to an exact rational, e.g. `--bind A=3/2`.
    #[arg(long, value_name = "NAME=P/Q")]
    bind: Vec<String>,
    /// Grid nodes for quadrature.
    #[arg(long, default_value_t = 64)]
    nodes: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Integral,
    Pointwise,
}

impl From<ModeArg> for EquivalenceMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Integral => EquivalenceMode::Integral,
            ModeArg::Pointwise => EquivalenceMode::Pointwise,
        }
    }
}

enum CliError {
    Parse(ParseError),
    Binding(String),
    Domain(String),
    VerifyFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Binding(_) => 3,
            CliError::Domain(_) => 4,
            CliError::VerifyFailed => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(e) => e.to_string(),
            CliError::Binding(m) => format!("binding error: {m}"),
            CliError::Domain(m) => format!("domain error: {m}"),
            CliError::VerifyFailed => "verification failed".to_string(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<NumlabError> for CliError {
    fn from(e: NumlabError) -> Self {
        match e {
            NumlabError::UnboundConstant(_) => CliError::Binding(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<ConservationError> for CliError {
    fn from(e: ConservationError) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn read_operator(expr: &Option<String>) -> Result<DiffOp, CliError> {
    let src = match expr {
        Some(s) => s.clone(),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Domain(format!("failed to read stdin: {e}")))?;
            buf
        }
    };
    Ok(parse_operator(src.trim())?)
}

fn parse_bindings(specs: &[String]) -> Result<Binding, CliError> {
    let mut b = Binding::new();
    for spec in specs {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Binding(format!("'{spec}' is not of the form NAME=P/Q")))?;
        let rational = parse_rational(value)
            .ok_or_else(|| CliError::Binding(format!("'{value}' is not a rational P/Q")))?;
        b = b.bind(name.trim(), rational);
    }
    Ok(b)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().ok()?;
            let den: BigInt = q.trim().parse().ok()?;
            if den == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn grid(nodes: usize) -> Result<GridSpec, CliError> {
    Ok(GridSpec::new(nodes)?)
}

fn complex_json(z: num_complex::Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Reduce(args) => {
            let p = read_operator(&args.expr)?;
            let c = p.collapse();
            let (a0, b1, b2) = (
                print_fourier_poly(&c.a0),
                print_fourier_poly(&c.b1),
                print_fourier_poly(&c.b2),
            );
            if args.json {
                Ok(json!({ "a0": a0, "b1": b1, "b2": b2 }).to_string())
            } else {
                Ok(format!("A0 = {a0}\nB1 = {b1}\nB2 = {b2}"))
            }
        }
        Command::Classify(args) => {
            let p = read_operator(&args.expr)?;
            let family = classify(&p);
            let kind = family.kind().name();
            let constant = family.constant().to_string();
            if args.json {
                Ok(json!({ "kind": kind, "constant": constant }).to_string())
            } else {
                Ok(format!("kind = {kind}\nconstant = {constant}"))
            }
        }
        Command::Expect {
            expr,
            numeric,
            numerics,
        } => {
            let p = read_operator(&expr.expr)?;
            let w = WaveSpec::normalized();
            let symbolic = expectation(&p, &w);
            let rendered = symbolic.to_string();
            if !numeric {
                return Ok(if expr.json {
                    json!({ "expectation": rendered }).to_string()
                } else {
                    format!("expectation = {rendered}")
                });
            }
            let b = parse_bindings(&numerics.bind)?;
            let g = grid(numerics.nodes)?;
            let quad = quad_expectation(&p, &w, &b, &g)?;
            let exact = eval_const(&symbolic, &b)?;
            let abs_diff = (quad - exact).norm();
            if expr.json {
                Ok(json!({
                    "expectation": rendered,
                    "numeric": complex_json(quad),
                    "abs_diff": abs_diff,
                })
                .to_string())
            } else {
                Ok(format!(
                    "expectation = {rendered}\nnumeric = {} + {}i\nabs_diff = {abs_diff:e}",
                    quad.re, quad.im
                ))
            }
        }
        Command::Probe {
            expr,
            delta,
            trials,
            seed,
            family_only,
            numerics,
        } => {
            let p = read_operator(&expr.expr)?;
            match (delta, trials) {
                (Some(d), None) => {
                    let dp = parse_operator(d.trim())?;
                    let w = WaveSpec::normalized();
                    let value = delta_expectation(&p, &dp, &w);
                    let rendered = value.to_string();
                    if expr.json {
                        Ok(json!({ "delta": rendered }).to_string())
                    } else {
                        Ok(format!("delta = {rendered}"))
                    }
                }
                (None, Some(n)) => {
                    let b = parse_bindings(&numerics.bind)?;
                    let g = grid(numerics.nodes)?;
                    let report = probe_ensemble(&p, family_only, n, seed, &b, &g)?;
                    if expr.json {
                        Ok(json!({
                            "trials": report.trials,
                            "family_only": report.family_only,
                            "max_abs_delta": report.max_abs_delta,
                            "detected": report.detected,
                            "fraction": report.detected_fraction(),
                        })
                        .to_string())
                    } else {
                        Ok(format!(
                            "trials = {}\nfamily_only = {}\nmax_abs_delta = {:e}\ndetected = {}\nfraction = {}",
                            report.trials,
                            report.family_only,
                            report.max_abs_delta,
                            report.detected,
                            report.detected_fraction()
                        ))
                    }
                }
                (None, None) => Err(CliError::Domain(
                    "probe needs either --delta or --trials".to_string(),
                )),
                (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
            }
        }
        Command::SolveCase {
            k,
            mode,
            json: as_json,
        } => {
            let constraint = solve_special_case(k, mode.into())?;
            let operator = constraint.solved_operator().map(|op| print_operator(&op));
            let b2 = match &constraint.constraint {
                ConstraintKind::B2Equals(f) => Some(print_fourier_poly(f)),
                _ => None,
            };
            if as_json {
                Ok(json!({
                    "case": constraint.case_index,
                    "mode": constraint.mode.to_string(),
                    "condition": constraint.condition,
                    "b2": b2,
                    "operator": operator,
                })
                .to_string())
            } else {
                let mut out = format!(
                    "case = {}\nmode = {}\ncondition = {}",
                    constraint.case_index, constraint.mode, constraint.condition
                );
                if let Some(b2) = b2 {
                    out.push_str(&format!("\nB2 = {b2}"));
                }
                if let Some(op) = operator {
                    out.push_str(&format!("\noperator = {op}"));
                }
                Ok(out)
            }
        }
        Command::Phys {
            expr,
            var,
            constant,
        } => {
            let p = read_operator(&expr.expr)?;
            let family = classify(&p);
            let form = substitute_physical(&family, &var, &constant)?;
            if expr.json {
                Ok(json!({
                    "kind": family.kind().name(),
                    "var": var,
                    "constant": constant,
                    "form": form,
                })
                .to_string())
            } else {
                Ok(form)
            }
        }
        Command::Verify { json: as_json } => {
            let report = run_corpus();
            let mut out = String::new();
            if as_json {
                let entries: Vec<Value> = report
                    .outcomes
                    .iter()
                    .map(|o| {
                        json!({
                            "name": o.name,
                            "expr": o.expr,
                            "passed": o.passed,
                            "failures": o.failures,
                        })
                    })
                    .collect();
                out = json!({ "passed": report.all_passed(), "entries": entries }).to_string();
            } else {
                for o in &report.outcomes {
                    if o.passed {
                        out.push_str(&format!("PASS {} ({})\n", o.name, o.expr));
                    } else {
                        out.push_str(&format!(
                            "FAIL {} ({}): {}\n",
                            o.name,
                            o.expr,
                            o.failures.join("; ")
                        ));
                    }
                }
                let total = report.outcomes.len();
                let passed = report.outcomes.iter().filter(|o| o.passed).count();
                out.push_str(&format!("verify: {passed}/{total} checks passed"));
            }
            if report.all_passed() {
                Ok(out)
            } else {
                println!("{out}");
                Err(CliError::VerifyFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("opcli: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
