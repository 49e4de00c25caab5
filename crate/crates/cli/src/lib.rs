//! Command-line front end for the `fini` engine.
//!
//! [`run`] takes a full argument vector (program name first) and returns the
//! exit status together with everything that would be printed, so the binary
//! is a thin wrapper and tests can drive the dispatcher directly.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fini_core::calculus::{self, GRAMMAR as EXPR_GRAMMAR};
use fini_core::seqcore::GRAMMAR as SEQ_GRAMMAR;
use fini_core::shadow;
use fini_core::ultralab::{self, IndexSet};
use fini_core::{parse_seq, BranchLimit, Error, Expr, Rational, Seq};

#[derive(Debug, Parser)]
#[command(name = "fini", version, about = "Exact arithmetic on eventual sequences, shadows and infinitesimal calculus")]
struct Cli {
    /// Print intermediate canonical forms as `key: value` lines.
    #[arg(long, global = true)]
    trace: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a sequence at an index, or print its canonical form.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long)]
        at: Option<u64>,
        /// Combine with `--with` before evaluating.
        #[arg(long, value_enum, requires = "with")]
        op: Option<Op>,
        #[arg(long = "with", allow_hyphen_values = true, requires = "op")]
        with: Option<String>,
    },
    /// Eventual comparison: LT, EQ, GT or INCOMPARABLE.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Infinitesimal, appreciable, infinite, finite-non-convergent or mixed-galaxy.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
    },
    /// Limit of a sequence, exactly or by bisection over sampled values.
    Shadow {
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long, requires_all = ["lo", "hi", "tol"])]
        bisect: bool,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        lo: Option<Rational>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        hi: Option<Rational>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        tol: Option<Rational>,
    },
    /// Exact derivative of a rational function at a point.
    Deriv {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        at: Rational,
    },
    /// Definite integral: exact for polynomials, a numeric enclosure otherwise.
    Integrate {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        from: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        to: Rational,
        /// Enclosure width for integrands that are not polynomials.
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        tol: Option<Rational>,
    },
    /// Finite-scale demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
    /// Run one command per line from standard input.
    Batch,
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// Diagonal sequence, greedy pseudo-intersection and oscillation on a scene file.
    Ppoint {
        #[arg(long)]
        scene: PathBuf,
    },
}

fn rational(text: &str) -> Result<Rational, String> {
    let ok = text.split_once('/').map_or(text, |(p, _)| p).trim_start_matches('-').chars().all(|c| c.is_ascii_digit())
        && !text.is_empty();
    match text.parse::<Rational>() {
        Ok(v) if ok => Ok(v),
        _ => Err(format!("`{text}` is not a rational of the form p/q")),
    }
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { status: 0, stdout, stderr: String::new() }
    }

    fn fail(status: i32, stderr: String) -> Self {
        Self { status, stdout: String::new(), stderr }
    }
}

/// A failure, already sorted into domain (1) or usage (2).
struct Failure {
    status: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { status: 2, message: message.into() }
    }

    fn domain(e: &Error) -> Self {
        Self { status: 1, message: format!("error: {e}") }
    }

    /// Parse errors from `--seq`/`--expr` get the input, a caret and the grammar.
    fn input(e: Error, flag: &str, text: &str, grammar: &str) -> Self {
        let position = match &e {
            Error::Syntax(s) => s.position,
            Error::NonIntegerExponent { position } | Error::NegativeExponent { position } => *position,
            Error::MultipleVariables { .. } => return Self::usage(format!("error: {flag}: {e}")),
            _ => return Self::domain(&e),
        };
        let caret = text[..position.min(text.len())].chars().count();
        let mut msg = format!("error: {flag}: {e}\n  {text}\n  {}^\ngrammar:\n", " ".repeat(caret));
        for line in grammar.lines() {
            let _ = writeln!(msg, "  {}", line.trim_start());
        }
        Self::usage(msg.trim_end())
    }
}

/// Result plus the trace lines that led to it.
struct Report {
    result: String,
    /// Single-line `key=value` form for batch mode.
    kv: String,
    trace: Vec<(String, String)>,
}

impl Report {
    fn new(result: impl Into<String>) -> Self {
        let result = result.into();
        Self { kv: format!("result={}", quote(&result)), result, trace: Vec::new() }
    }

    fn with_kv(mut self, kv: String) -> Self {
        self.kv = kv;
        self
    }

    fn step(&mut self, key: &str, value: impl ToString) {
        self.trace.push((key.to_string(), value.to_string()));
    }

    fn render(&self, format: Format, trace: bool) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                if trace {
                    for (k, v) in &self.trace {
                        let _ = writeln!(out, "{k}: {v}");
                    }
                }
                let _ = writeln!(out, "{}", self.result);
                out
            }
            Format::Json => {
                let mut obj = serde_json::Map::new();
                obj.insert("result".into(), self.result.clone().into());
                if trace {
                    let steps = self.trace.iter().map(|(k, v)| serde_json::json!({ "key": k, "value": v })).collect();
                    obj.insert("trace".into(), serde_json::Value::Array(steps));
                }
                format!("{}\n", serde_json::Value::Object(obj))
            }
        }
    }
}

fn quote(v: &str) -> String {
    if v.is_empty() || v.contains(char::is_whitespace) || v.contains('"') {
        serde_json::Value::from(v).to_string()
    } else {
        v.to_string()
    }
}

fn seq_arg(flag: &str, text: &str) -> Result<Seq, Failure> {
    parse_seq(text).map_err(|e| Failure::input(e, flag, text, SEQ_GRAMMAR))
}

fn expr_arg(text: &str) -> Result<Expr, Failure> {
    calculus::parse_expr(text).map_err(|e| Failure::input(e, "--expr", text, EXPR_GRAMMAR))
}

fn limits(detail: &[BranchLimit<Rational>]) -> String {
    detail.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn eval(seq: &str, at: Option<u64>, op: Option<Op>, with: Option<&str>) -> Result<Report, Failure> {
    let mut s = seq_arg("--seq", seq)?;
    let mut steps = Vec::new();
    if let (Some(op), Some(with)) = (op, with) {
        let t = seq_arg("--with", with)?;
        s = match op {
            Op::Add => &s + &t,
            Op::Sub => &s - &t,
            Op::Mul => &s * &t,
            Op::Div => s.checked_div(&t).map_err(|e| Failure::domain(&e))?,
        };
        steps.push(("canonical".to_string(), s.to_string()));
    }
    let mut report = match at {
        Some(n) => {
            let v = s.eval_at(n).map_err(|e| Failure::domain(&e))?;
            steps.push(("stabilization".to_string(), s.stabilization_index().to_string()));
            Report::new(v.to_string())
        }
        None => Report::new(s.to_string()),
    };
    report.trace = steps;
    Ok(report)
}

fn compare(a: &str, b: &str) -> Result<Report, Failure> {
    let (a, b) = (seq_arg("--a", a)?, seq_arg("--b", b)?);
    let verdict = match a.germ().compare(&b.germ()) {
        Some(Ordering::Less) => "LT",
        Some(Ordering::Equal) => "EQ",
        Some(Ordering::Greater) => "GT",
        None => "INCOMPARABLE",
    };
    let diff = &a - &b;
    let mut report = Report::new(verdict);
    report.step("difference", &diff);
    report.step("stabilization", diff.stabilization_index());
    report.step(
        "branch-signs",
        diff.branches().iter().map(|f| f.sign_at_infinity().to_string()).collect::<Vec<_>>().join(", "),
    );
    Ok(report)
}

fn classify(seq: &str) -> Result<Report, Failure> {
    let s = seq_arg("--seq", seq)?;
    let c = s.classify();
    let mut report = Report::new(c.tag.as_str());
    report.step("canonical", &s);
    report.step("branch-limits", limits(&c.detail));
    Ok(report)
}

fn shadow_cmd(seq: &str, bisect: Option<(Rational, Rational, Rational)>) -> Result<Report, Failure> {
    let s = seq_arg("--seq", seq)?;
    let Some((lo, hi, tol)) = bisect else {
        let r = shadow::shadow_exact(&s);
        let mut report = Report::new(r.to_string()).with_kv(r.to_kv());
        report.step("canonical", &s);
        if let Some(w) = &r.witness {
            report.step("branch-limits", limits(w));
        }
        return Ok(report);
    };
    // indices before the start read as the first defined value
    let start = s.start();
    let evaluator = |n: u64| s.eval_at(n.max(start)).expect("index clamped to start");
    let (r, steps) = shadow::bisection_trace(evaluator, lo, hi, tol, &shadow::default_horizons())
        .map_err(|e| Failure::domain(&e))?;
    let mut report = Report::new(r.to_string()).with_kv(r.to_kv());
    for (i, st) in steps.iter().enumerate() {
        report.step("step", format!("{} lo={} hi={} horizon={} kept={}", i + 1, st.lo, st.hi, st.horizon, st.kept));
    }
    Ok(report)
}

fn deriv(expr: &str, at: &Rational) -> Result<Report, Failure> {
    let f = expr_arg(expr)?;
    let d = calculus::derivative_trace(&f, at).map_err(|e| Failure::domain(&e))?;
    let mut report = Report::new(d.value.to_string());
    report.step("function", f.canonical().display_in(f.variable().unwrap_or("x")));
    report.step("point", at);
    let quotient = match d.quotient.branches() {
        [only] => only.display_split("n"),
        _ => d.quotient.to_string(),
    };
    report.step("quotient", quotient);
    report.step("shadow", &d.value);
    Ok(report)
}

fn integrate(expr: &str, from: &Rational, to: &Rational, tol: Option<&Rational>) -> Result<Report, Failure> {
    let f = expr_arg(expr)?;
    let var = f.variable().unwrap_or("x").to_string();
    if f.is_polynomial() {
        let i = calculus::integral_trace(&f, from, to).map_err(|e| Failure::domain(&e))?;
        let mut report = Report::new(i.value.to_string());
        report.step("function", f.canonical().display_in(&var));
        report.step("interval", format!("[{from}, {to}]"));
        report.step("riemann-sum", i.riemann_sum.display_split("n"));
        report.step("shadow", &i.value);
        return Ok(report);
    }
    let Some(tol) = tol else {
        return Err(Failure {
            status: 1,
            message: format!("error: {}; pass --tol for a numeric enclosure", Error::NonPolynomialIntegrand),
        });
    };
    let r = calculus::numeric_shadow(&f, from, to, tol).map_err(|e| Failure::domain(&e))?;
    let mut report = Report::new(r.to_string()).with_kv(r.to_kv());
    report.step("function", f.canonical().display_in(&var));
    report.step("interval", format!("[{from}, {to}]"));
    report.step("method", "numeric");
    Ok(report)
}

fn set_text(s: &IndexSet) -> String {
    s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn demo_ppoint(path: &PathBuf) -> Result<Report, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("error: cannot read scene file {}: {e}", path.display())))?;
    let scene = ultralab::parse_scene(&text).map_err(|e| Failure::usage(format!("error: {e}")))?;
    let mut out = Vec::new();
    out.push(("universe".to_string(), scene.universe().to_string()));
    out.push(("cells".to_string(), scene.partition().len().to_string()));
    let greedy = ultralab::greedy_pseudo_intersection(&scene);
    let passes = ultralab::check_pseudo_intersection(&scene, &greedy, 1).map_err(|e| Failure::domain(&e))?;
    out.push(("pseudo-intersection".to_string(), set_text(&greedy)));
    out.push(("check-bound-1".to_string(), if passes { "pass" } else { "fail" }.to_string()));
    match scene.chain() {
        None => out.push(("diagonal".to_string(), "none (no chain)".to_string())),
        Some(_) => {
            let table: fini_core::Table = ultralab::build_diagonal_sequence(&scene).map_err(|e| Failure::domain(&e))?;
            let strata = scene.strata().map_err(|e| Failure::domain(&e))?;
            let diag = table.iter().map(|(i, v)| format!("{i}:{v}")).collect::<Vec<_>>().join(" ");
            out.push(("diagonal".to_string(), diag));
            // a set with two points of one stratum and one point two levels down
            for n in 0..strata.len().saturating_sub(2) {
                let (here, below) = (&strata[n], &strata[n + 2]);
                if here.len() < 2 || below.is_empty() {
                    continue;
                }
                let y: IndexSet = here.iter().take(2).chain(below.iter().take(1)).copied().collect();
                let value = ultralab::oscillation_on(&table, &y, 1);
                let level = n as i64 + 1;
                let bound = Rational::new(1.into(), level.into()) - Rational::new(1.into(), (level + 2).into());
                out.push((
                    "oscillation".to_string(),
                    format!("n={level} subset={{{}}} value={value} bound={bound}", set_text(&y)),
                ));
            }
        }
    }
    let result = out.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n");
    let kv = out
        .iter()
        .filter(|(k, _)| k != "oscillation" && k != "diagonal")
        .map(|(k, v)| format!("{k}={}", quote(v)))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(Report { result, kv, trace: Vec::new() })
}

fn dispatch(command: &Command, stdin: &mut dyn FnMut() -> String) -> Result<Report, Failure> {
    match command {
        Command::Eval { seq, at, op, with } => eval(seq, *at, *op, with.as_deref()),
        Command::Compare { a, b } => compare(a, b),
        Command::Classify { seq } => classify(seq),
        Command::Shadow { seq, bisect, lo, hi, tol } => {
            let range = match (bisect, lo, hi, tol) {
                (true, Some(lo), Some(hi), Some(tol)) => Some((lo.clone(), hi.clone(), tol.clone())),
                _ => None,
            };
            shadow_cmd(seq, range)
        }
        Command::Deriv { expr, at } => deriv(expr, at),
        Command::Integrate { expr, from, to, tol } => integrate(expr, from, to, tol.as_ref()),
        Command::Demo { demo: Demo::Ppoint { scene } } => demo_ppoint(scene),
        Command::Batch => Ok(batch(&stdin())),
    }
}

/// One `status=... key=value ...` line per input command.
fn batch(input: &str) -> Report {
    let mut lines = Vec::new();
    let mut worst = 0;
    for (i, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let outcome = match shlex::split(line) {
            None => Outcome::fail(2, "error: unbalanced quotes".into()),
            Some(words) if words.first().is_some_and(|w| w == "batch") => {
                Outcome::fail(2, "error: batch cannot be nested".into())
            }
            Some(words) => run_inner(std::iter::once("fini".to_string()).chain(words), &mut String::new, true),
        };
        worst = worst.max(outcome.status);
        let body = if outcome.status == 0 {
            outcome.stdout.trim_end().to_string()
        } else {
            let first = outcome.stderr.lines().next().unwrap_or("").trim_start_matches("error: ");
            format!("error={}", quote(first))
        };
        lines.push(format!("line={} status={} {body}", i + 1, outcome.status));
    }
    let result = lines.join("\n");
    Report { kv: result.clone(), result, trace: vec![("batch-status".into(), worst.to_string())] }
}

fn run_inner<I, S>(argv: I, stdin: &mut dyn FnMut() -> String, kv: bool) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if status == 0 { Outcome::ok(text) } else { Outcome::fail(status, text) };
        }
    };
    match dispatch(&cli.command, stdin) {
        Ok(report) => {
            let status = match cli.command {
                Command::Batch => report.trace[0].1.parse().unwrap_or(0),
                _ => 0,
            };
            let stdout = match (&cli.command, kv) {
                (Command::Batch, _) => format!("{}\n", report.result),
                (_, true) => report.kv.clone(),
                (_, false) => report.render(cli.format, cli.trace),
            };
            Outcome {
                status,
                stdout: if stdout.ends_with('\n') || stdout.is_empty() { stdout } else { stdout + "\n" },
                stderr: String::new(),
            }
        }
        Err(f) => Outcome::fail(f.status, format!("{}\n", f.message)),
    }
}

/// Runs one invocation; `batch` reads standard input.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_inner(argv, &mut read_stdin, false)
}

/// Like [`run`], with `input` standing in for standard input.
pub fn run_with_input<I, S>(argv: I, input: &str) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_inner(argv, &mut || input.to_string(), false)
}

fn read_stdin() -> String {
    let mut buf = String::new();
    let _ = std::io::stdin().read_to_string(&mut buf);
    buf
}
