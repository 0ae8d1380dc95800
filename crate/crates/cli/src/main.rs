//! `polyopt`: analyze polyhedral convex optimization problems from JSON documents.
//!
//! Exit codes: 0 solved or verified, 2 infeasible, 3 unbounded, 4 input
//! error, 5 optimality refuted, 1 internal cross-check failure.

mod encode;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyopt::analysis::{existence_report, solve_primal, verify_optimal, PrimalOutcome, Problem};
use polyopt::document::parse_problem;
use polyopt::duality::{duality_report, joint_certificate, weak_duality_check, DualOutcome, DualProblem, JointVerdict};
use polyopt::numeric::{parse_point, Rational};
use polyopt::Error;
use serde_json::{json, Value};

const OK: u8 = 0;
const INTERNAL: u8 = 1;
const INFEASIBLE: u8 = 2;
const UNBOUNDED: u8 = 3;
const INPUT: u8 = 4;
const REFUTED: u8 = 5;

#[derive(Parser)]
#[command(
    name = "polyopt",
    version,
    about = "Exact analysis of polyhedral convex optimization problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Compact single-line JSON (default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,

    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args)]
struct Input {
    /// Problem document.
    file: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the primal problem.
    Solve(Input),
    /// Run the three existence tests.
    Existence(Input),
    /// Certify or refute optimality of a point; with a dual point, also check the joint certificate.
    Optimal {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        dual_point: Option<String>,
    },
    /// Solve the dual problem, or evaluate the dual objective at a point.
    Dual {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        dual_point: Option<String>,
    },
    /// Solve both problems and report the duality gap.
    Report(Input),
    /// Evaluate the objective at a point; with a dual point, also the dual objective and weak duality.
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        dual_point: Option<String>,
    },
    /// Generators of the subdifferential and of the normal cone at a point.
    Subdiff {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

fn load(input: &Input) -> Result<Problem, (u8, String)> {
    let text = std::fs::read_to_string(&input.file)
        .map_err(|e| (INPUT, format!("cannot read {}: {e}", input.file.display())))?;
    parse_problem(&text).map_err(classify)
}

fn point(text: &str) -> Result<Vec<Rational>, (u8, String)> {
    parse_point(text).map_err(classify)
}

fn classify(e: Error) -> (u8, String) {
    let code = match e {
        Error::CertificateViolation(_) | Error::Inconsistent(_) => INTERNAL,
        _ => INPUT,
    };
    (code, e.to_string())
}

fn primal_code(o: &PrimalOutcome) -> u8 {
    match o {
        PrimalOutcome::Solved { .. } => OK,
        PrimalOutcome::Infeasible => INFEASIBLE,
        PrimalOutcome::Unbounded { .. } => UNBOUNDED,
    }
}

fn run(command: &Command) -> Result<(Value, u8), (u8, String)> {
    match command {
        Command::Solve(input) => {
            let p = load(input)?;
            let out = solve_primal(&p).map_err(classify)?;
            Ok((encode::primal(&out), primal_code(&out)))
        }
        Command::Existence(input) => {
            let p = load(input)?;
            let r = existence_report(&p).map_err(classify)?;
            let code = match r.solution_exists() {
                None => INFEASIBLE,
                Some(true) => OK,
                Some(false) => UNBOUNDED,
            };
            Ok((encode::existence(&r), code))
        }
        Command::Optimal {
            input,
            point: x,
            dual_point,
        } => {
            let p = load(input)?;
            let x = point(x)?;
            let verdict = verify_optimal(&p, &x).map_err(classify)?;
            let mut code = if verdict.is_certified() { OK } else { REFUTED };
            let mut out = json!({ "optimality": encode::optimality(&verdict) });
            if let Some(w) = dual_point {
                let j = joint_certificate(&p, &x, &point(w)?).map_err(classify)?;
                if matches!(j, JointVerdict::Mismatch(_)) {
                    code = REFUTED;
                }
                out["joint"] = encode::joint(&j);
            }
            Ok((out, code))
        }
        Command::Dual { input, dual_point } => {
            let p = load(input)?;
            let dp = DualProblem::new(&p);
            match dual_point {
                Some(w) => {
                    let w = point(w)?;
                    let g = dp.dual_value(&w).map_err(classify)?;
                    Ok((json!({ "point": encode::vector(&w), "value": encode::ext(&g) }), OK))
                }
                None => {
                    let out = dp.solve().map_err(classify)?;
                    let code = match out {
                        DualOutcome::Solved { .. } => OK,
                        DualOutcome::Infeasible => INFEASIBLE,
                        DualOutcome::Unbounded { .. } => UNBOUNDED,
                    };
                    Ok((encode::dual(&out), code))
                }
            }
        }
        Command::Report(input) => {
            let p = load(input)?;
            let r = duality_report(&p).map_err(classify)?;
            Ok((encode::report(&r), primal_code(&r.primal)))
        }
        Command::Eval {
            input,
            point: x,
            dual_point,
        } => {
            let p = load(input)?;
            let x = point(x)?;
            let fx = p.objective().evaluate(&x).map_err(classify)?;
            let mut out = json!({
                "point": encode::vector(&x),
                "value": encode::ext(&fx),
                "in_constraint_set": p.constraints().contains(&x).map_err(classify)?,
            });
            if let Some(w) = dual_point {
                let w = point(w)?;
                out["dual_point"] = encode::vector(&w);
                out["dual_value"] = encode::ext(&DualProblem::new(&p).dual_value(&w).map_err(classify)?);
                if p.constraints().contains(&x).map_err(classify)? {
                    out["weak_duality"] = encode::weak(&weak_duality_check(&p, &x, &w).map_err(classify)?);
                }
            }
            Ok((out, OK))
        }
        Command::Subdiff { input, point: x } => {
            let p = load(input)?;
            let x = point(x)?;
            let sub = p.objective().subdifferential_at(&x).map_err(classify)?;
            let mut out = json!({
                "point": encode::vector(&x),
                "subdifferential": encode::combo(&sub),
            });
            if p.constraints().contains(&x).map_err(classify)? {
                out["normal_cone"] = encode::combo(&p.constraints().normal_cone(&x).map_err(classify)?);
            }
            Ok((out, OK))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { OK });
        }
    };
    match run(&cli.command) {
        Ok((value, code)) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            };
            println!("{}", text.expect("values are plain JSON"));
            ExitCode::from(code)
        }
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
