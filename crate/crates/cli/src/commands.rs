use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fungraph::checks::{self, DEFAULT_MAX_SIZE};
use fungraph::division::{factorize, quotients, DivisionConfig, DEFAULT_BOUND};
use fungraph::enumerate::{all_digraphs, EnumFilter};
use fungraph::witness::{build_witness, WitnessReport};
use fungraph::{FunctionalDigraph, Verdict};

use crate::expr::{parse, Expr, ParseError};

/// Success.
pub const EXIT_OK: i32 = 0;
/// Bad usage, unparsable expression or invalid input.
pub const EXIT_USAGE: i32 = 1;
/// A verification or invariant check failed.
pub const EXIT_VERIFY: i32 = 2;
/// The answer is unknown because a search bound was exceeded.
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fungraph", version, about = "Arithmetic, divisibility and non-primality witnesses for functional digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical representative and code of an expression.
    Canon { expr: String },
    /// Test two expressions for isomorphism.
    Eq { lhs: String, rhs: String },
    /// Direct product of two expressions.
    Prod { lhs: String, rhs: String },
    /// Disjoint union of two expressions.
    Sum { lhs: String, rhs: String },
    /// Decide whether the first expression divides the second.
    Divides {
        divisor: String,
        dividend: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// List every quotient of the second expression by the first.
    Quotients {
        divisor: String,
        dividend: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Decide whether an expression is irreducible.
    Irreducible {
        expr: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Build and verify a non-primality witness.
    Witness {
        expr: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write X, A, B and Y as DOT files into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// List all digraphs of a size up to isomorphism, one literal per line.
    Enumerate {
        size: usize,
        #[arg(long)]
        connected: bool,
        /// Keep only digraphs whose cycles all have this length.
        #[arg(long)]
        cycle_len: Option<usize>,
    },
    /// Run the invariant suites.
    CheckLemmas {
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        max_size: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot parse '{input}': {source}")]
    Parse { input: String, source: ParseError },
    #[error(transparent)]
    Graph(#[from] fungraph::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Graph(fungraph::Error::WitnessInvalid(_) | fungraph::Error::Invariant(_)) => EXIT_VERIFY,
            CliError::Graph(fungraph::Error::SizeLimit { .. }) => EXIT_UNKNOWN,
            _ => EXIT_USAGE,
        }
    }
}

fn eval(text: &str) -> Result<FunctionalDigraph, CliError> {
    let e = parse(text).map_err(|source| CliError::Parse { input: text.to_string(), source })?;
    Ok(e.eval()?)
}

fn verdict_code(v: Verdict) -> i32 {
    if v == Verdict::Unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    }
}

/// Runs a command, writing its report to `out`, and returns the exit code.
pub fn run(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Canon { expr } => {
            let x = eval(expr)?;
            let code = x.canonical_form();
            writeln!(out, "{}", code.to_digraph())?;
            writeln!(out, "code: {code}")?;
            writeln!(out, "expr: {}", Expr::from_digraph(&x))?;
        }
        Command::Eq { lhs, rhs } => {
            writeln!(out, "{}", eval(lhs)?.is_isomorphic(&eval(rhs)?))?;
        }
        Command::Prod { lhs, rhs } => {
            writeln!(out, "{}", fungraph::algebra::product(&eval(lhs)?, &eval(rhs)?))?;
        }
        Command::Sum { lhs, rhs } => {
            writeln!(out, "{}", fungraph::algebra::sum(&eval(lhs)?, &eval(rhs)?))?;
        }
        Command::Divides { divisor, dividend, bound } => {
            let q = quotients(&eval(divisor)?, &eval(dividend)?, *bound)?;
            let v = q.verdict();
            writeln!(out, "{v}")?;
            if let Some(y) = q.quotients.first() {
                writeln!(out, "quotient: {y}")?;
            }
            return Ok(verdict_code(v));
        }
        Command::Quotients { divisor, dividend, bound } => {
            let q = quotients(&eval(divisor)?, &eval(dividend)?, *bound)?;
            for y in &q.quotients {
                writeln!(out, "{y}")?;
            }
            if !q.exhaustive {
                writeln!(out, "unknown: quotient size exceeds the bound {bound}")?;
                return Ok(EXIT_UNKNOWN);
            }
        }
        Command::Irreducible { expr, bound } => {
            let f = factorize(&eval(expr)?, &DivisionConfig::with_bound(*bound))?;
            writeln!(out, "{}", f.irreducible)?;
            if let Some((a, b)) = &f.factors {
                writeln!(out, "factors: {a} * {b}")?;
            }
            return Ok(verdict_code(f.irreducible));
        }
        Command::Witness { expr, bound, json, dot } => {
            let report = build_witness(&eval(expr)?, *bound)?;
            write_summary(&report, out)?;
            if let Some(path) = json {
                std::fs::write(path, report.to_json() + "\n")?;
            }
            if let Some(dir) = dot {
                write_dot(&report, dir)?;
            }
        }
        Command::Enumerate { size, connected, cycle_len } => {
            let filter = EnumFilter {
                size: *size,
                connected_only: *connected,
                cycle_len: *cycle_len,
            };
            for x in all_digraphs(filter)? {
                writeln!(out, "{x}")?;
            }
        }
        Command::CheckLemmas { max_size } => {
            let mut failed = 0;
            for (module, name, suite) in checks::SUITES {
                let outcome = suite(*max_size)?;
                let status = if outcome.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {module}/{name} ({} cases)", outcome.cases)?;
                for f in &outcome.failures {
                    writeln!(out, "    counterexample: {f}")?;
                }
                if !outcome.passed() {
                    failed += 1;
                }
            }
            writeln!(out, "{} suites, {failed} failed", checks::SUITES.len())?;
            if failed > 0 {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(EXIT_OK)
}

fn write_summary(r: &WitnessReport, out: &mut dyn Write) -> std::io::Result<()> {
    let branch = match r.subcase {
        Some(sub) => format!("{:?} ({})", r.branch, serde_name(&sub)),
        None => format!("{:?}", r.branch),
    };
    writeln!(out, "branch: {branch}")?;
    let p = &r.parameters;
    let params: Vec<String> = [("p", p.p), ("alpha", p.alpha.map(|a| a as usize)), ("ell", p.ell), ("d", p.d), ("x_hat", p.x_hat)]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| format!("{k}={v}")))
        .collect();
    writeln!(out, "parameters: {}", params.join(" "))?;
    for (name, g) in [("X", &r.x), ("A", &r.a), ("B", &r.b), ("Y", &r.y)] {
        writeln!(out, "{name}: |{name}|={} {}", g.len(), Expr::from_digraph(g))?;
    }
    writeln!(out, "|XY| = |AB| = {}", r.x.len() * r.y.len())?;
    if let Some(radix) = &r.radix {
        writeln!(out, "radix: {radix:?}")?;
    }
    if let Some(beta) = r.beta {
        writeln!(out, "beta: {beta}")?;
    }
    writeln!(out, "isomorphism: {}", if r.iso.is_some() { "explicit phi" } else { "canonical forms" })?;
    writeln!(out, "X does not divide A: {}", describe(&r.not_div_a))?;
    writeln!(out, "X does not divide B: {}", describe(&r.not_div_b))?;
    writeln!(out, "verified")
}

fn serde_name(sub: &fungraph::witness::Subcase) -> String {
    match sub {
        fungraph::witness::Subcase::PrimePowerCycle => "prime-power-cycle".into(),
        fungraph::witness::Subcase::General => "general".into(),
    }
}

fn describe(e: &fungraph::witness::NonDivEvidence) -> String {
    use fungraph::witness::NonDivEvidence::*;
    match e {
        SizeArgument { divisor_size, target_size } => format!("size-argument ({target_size} is not a multiple of {divisor_size})"),
        ExhaustiveSearch { quotient_size, candidates } => {
            format!("exhaustive-search ({candidates} candidates of size {quotient_size})")
        }
        Certificate(c) => format!(
            "certificate (d(X)={}, d(B)={}, n_X={}, n_B={})",
            c.height_x, c.height_b, c.classes_x, c.classes_b
        ),
        IrreducibleCycle { cycle_len } => format!("irreducible-cycle (C{cycle_len})"),
        CyclicPart { quotient_size } => format!("cyclic-part (no cyclic quotient with at most {quotient_size} vertices)"),
    }
}

fn write_dot(r: &WitnessReport, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, g) in [("X", &r.x), ("A", &r.a), ("B", &r.b), ("Y", &r.y)] {
        std::fs::write(dir.join(format!("{name}.dot")), g.to_dot(name))?;
    }
    Ok(())
}
