//! `cvf`: command-line front end for the cvf-core library.
//!
//! Exit codes: 0 when every check passes, 2 on an invariant violation (with
//! JSON diagnostics on stderr), 1 on usage or parse errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use cvf_core::artin_schreier::{
    as_solve_complete, classify_extension, extension_valuation, membership_rational, Base, Element, Membership,
};
use cvf_core::harness::{corpus_run, criterion_scan, theorem_demo, FieldSpec};
use cvf_core::literal::{parse_x_poly, x_poly_literal};
use cvf_core::parallel::Execution;
use cvf_core::pseudo_convergence::{
    c_set_probe, is_pseudo_convergent, min_degree_check, pc_valuation_table, step2_generate, CoeffPool,
};
use cvf_core::{Error, RatFunc};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BaseArg {
    Complete,
    Rational,
}

#[derive(Parser, Debug)]
#[command(
    name = "cvf",
    version,
    about = "Artin-Schreier theory of F_q((t)) and F_q(t), exactly"
)]
struct Cli {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Residue field degree, q = p^n.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Modulus of F_q over F_p as a polynomial in u, e.g. "u^2+u+1".
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Working precision O(t^N) for series.
    #[arg(long, global = true, env = "CVF_PREC", default_value_t = 64)]
    prec: i64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = BaseArg::Rational)]
    base: BaseArg,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots of X^p - X - b (completion) or solutions in F_q(t).
    Solve { b: String },
    /// Classify the extension defined by X^p - X - b.
    Classify {
        b: String,
        /// Also report v(Q(a)) for this polynomial in X of degree < p.
        #[arg(long)]
        q: Option<String>,
    },
    /// Decide whether b = x^p - x in the base field.
    Member { b: String },
    /// The pseudo-convergent sequence a_i = -(b + ... + b^(p^i)).
    Pcs {
        b: String,
        /// Last index of the prefix.
        #[arg(long, default_value_t = 7)]
        len: usize,
        /// Random polynomials per degree for the minimal-degree check.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Test M_v ⊆ {x^p - x} on a sample of the maximal ideal.
    Criterion {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// End-to-end report for one b.
    Demo { b: String },
    /// Classify random elements and check the invariants; JSON lines.
    Corpus {
        #[arg(long, default_value_t = 500)]
        count: usize,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Violation(Json),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalConsistency(msg) => Failure::Violation(json!({ "violation": msg })),
            e => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("cvf: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(diag)) => {
            eprintln!("{}", json!({ "status": "invariant_violation", "details": diag }));
            ExitCode::from(2)
        }
    }
}

fn spec_of(cli: &Cli) -> FieldSpec {
    FieldSpec {
        p: cli.p,
        n: cli.n,
        modulus: cli.modulus.clone(),
        base: match cli.base {
            BaseArg::Complete => Base::Complete,
            BaseArg::Rational => Base::Rational,
        },
        prec: cli.prec,
        seed: cli.seed,
    }
}

fn emit(cli: &Cli, value: &impl serde::Serialize, text: impl FnOnce() -> String) -> Outcome {
    let mut out = io::stdout().lock();
    let res = if cli.json {
        let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
        writeln!(out, "{s}")
    } else {
        write!(out, "{}", text())
    };
    res.map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: &Cli) -> Outcome {
    let spec = spec_of(cli);
    let field = spec.field()?;
    let mode = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Solve { b } => {
            let el = Element::parse(&field, spec.base, b, spec.prec)?;
            let roots: Vec<String> = match &el {
                Element::Series(s) => as_solve_complete(s)?.iter().map(|r| r.to_string()).collect(),
                Element::Rational(r) => membership_rational(r)?
                    .solutions()?
                    .iter()
                    .map(|x| x.to_string())
                    .collect(),
            };
            emit(cli, &json!({ "b": el.to_string(), "roots": roots }), || {
                if roots.is_empty() {
                    format!("X^p - X - ({el}) has no root in F_q(t)\n")
                } else {
                    roots.iter().map(|r| format!("{r}\n")).collect()
                }
            })
        }
        Command::Classify { b, q } => {
            let el = Element::parse(&field, spec.base, b, spec.prec)?;
            let report = classify_extension(&el, spec.prec)?;
            let valuation = match q {
                Some(q) => {
                    let coeffs = parse_x_poly(&field, q)?;
                    let qe: Vec<Element> = coeffs
                        .iter()
                        .map(|c| match spec.base {
                            Base::Rational => Element::Rational(c.clone()),
                            Base::Complete => Element::Series(c.expand(spec.prec)),
                        })
                        .collect();
                    Some((x_poly_literal(&coeffs), extension_valuation(&qe, &report)?))
                }
                None => None,
            };
            let mut j = serde_json::to_value(&report).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some((lit, v)) = &valuation {
                j["valuation"] = json!({ "q": lit, "value": v });
            }
            if report.degree() != spec.p {
                return Err(Failure::Violation(json!({ "e*f*g*d": report.degree(), "report": j })));
            }
            emit(cli, &j, || {
                let mut s = format!(
                    "{} (e, f, g, d) = ({}, {}, {}, {})\nreduced b = {}\nshift = {}\n",
                    report.kind, report.e, report.f, report.g, report.d, report.reduced_b, report.shift
                );
                if let Some((lit, v)) = &valuation {
                    s += &format!("v({lit}) = {v}\n");
                }
                s
            })
        }
        Command::Member { b } => {
            let el = Element::parse(&field, Base::Rational, b, spec.prec)?;
            let r = el.as_rational().expect("rational");
            let m = membership_rational(r)?;
            emit(cli, &m, || match &m {
                Membership::Solvable { x } => format!("solvable: x = {x} (+ F_p)\n"),
                Membership::NotSolvable { certificate } => format!("not solvable: {certificate}\n"),
            })
        }
        Command::Pcs { b, len, trials } => {
            let r = RatFunc::parse(&field, b)?;
            let prefix = step2_generate(&r, *len)?;
            let rows = prefix.rows()?;
            let pc = is_pseudo_convergent(&prefix)?;
            let probe = c_set_probe(&r, *len, 16, spec.seed)?;
            let check = min_degree_check(&prefix, &CoeffPool::standard(&field)?, *trials, spec.seed, mode)?;
            let table = pc_valuation_table(&prefix, &[]);
            let table_json = match &table {
                Ok(t) => serde_json::to_value(t).map_err(|e| Failure::Usage(e.to_string()))?,
                Err(e) => json!({ "error": e.to_string() }),
            };
            let j = json!({
                "prefix": rows,
                "pseudo_convergent": pc,
                "c_set": probe,
                "min_degree_check": check,
                "valuation_table": table_json,
            });
            if !pc || !check.passed {
                return Err(Failure::Violation(j));
            }
            emit(cli, &j, || {
                let mut s = String::new();
                for row in &rows {
                    s += &format!(
                        "a_{:<3} gamma = {:<6} vP = {:<6} {}\n",
                        row.index,
                        row.gamma.map_or("-".into(), |g| g.to_string()),
                        row.v_p.map_or("-".into(), |v| v.to_string()),
                        row.element
                    );
                }
                s += &format!("pseudo-convergent: {pc}\n");
                s += &format!(
                    "C maxima: {}\n",
                    probe
                        .maxima
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                for d in &check.per_degree {
                    s += &format!(
                        "degree {}: {} trials, {} stabilized, {} increasing, {} inconclusive\n",
                        d.degree, d.trials, d.stabilized, d.increasing, d.inconclusive
                    );
                }
                s += &format!("P increasing: {}\n", check.generator_increasing);
                match &table {
                    Ok(t) => {
                        for row in t {
                            s += &format!("v({}) = {} from index {}\n", row.polynomial, row.value, row.stable_from);
                        }
                    }
                    Err(e) => s += &format!("valuation table: {e}\n"),
                }
                s
            })
        }
        Command::Criterion { samples } => {
            let verdict = criterion_scan(&spec, *samples, mode)?;
            let coupled = verdict.witness_b.is_some() == verdict.nonunique_extension.is_some();
            if !verdict.failures.is_empty() || !coupled {
                return Err(Failure::Violation(serde_json::to_value(&verdict).unwrap_or(Json::Null)));
            }
            emit(cli, &verdict, || {
                let mut s = format!(
                    "criterion holds on {} sampled elements: {}\n",
                    verdict.sample_size, verdict.criterion_holds_on_sample
                );
                if let (Some(w), Some(r)) = (&verdict.witness_b, &verdict.nonunique_extension) {
                    s += &format!("witness b = {}: {}\n", w.b, w.certificate);
                    s += &format!(
                        "extension: {} (e, f, g, d) = ({}, {}, {}, {})\n",
                        r.kind, r.e, r.f, r.g, r.d
                    );
                }
                s
            })
        }
        Command::Demo { b } => {
            let report = theorem_demo(b, &spec, mode)?;
            let violations = report.violations();
            if !violations.is_empty() {
                return Err(Failure::Violation(json!(violations)));
            }
            emit(cli, &report, || report.to_text())
        }
        Command::Corpus { count, out } => {
            let summary = match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?);
                    corpus_run(&spec, *count, mode, &mut w)?
                }
                None => corpus_run(&spec, *count, mode, &mut io::stdout().lock())?,
            };
            if summary.violations > 0 {
                return Err(Failure::Violation(serde_json::to_value(&summary).unwrap_or(Json::Null)));
            }
            eprintln!("{}", serde_json::to_string(&summary).unwrap_or_default());
            Ok(())
        }
    }
}
