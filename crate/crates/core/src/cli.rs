//! Command-line front end. `run` is what the binary calls; it is a library
//! function so tests can drive it without spawning processes.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expr::{self, compare, expand_dense, parse_expr, print_expr, BirdtrackExpr, Comparison};
use crate::rules::{self, simplify, verify_step, Direction, Policy, RewriteTrace, SimplifyOptions, Step, TungMode, Verification};
use crate::symgroup::{matrix_stats, AlgebraElement, MatrixStats, MAX_DENSE_DEGREE};
use crate::tableau::parse_tableau;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNEQUAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

const DEFAULT_MAX_N: usize = 7;
const SLOW_MAX_N: usize = 9;

#[derive(Parser, Debug)]
#[command(name = "birdtrack", version, about = "Exact birdtrack operator algebra")]
pub struct Cli {
    /// Print a JSON run report instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Leave timings out of the report so that output is byte-stable.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Largest degree the expansion oracle may use.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
    /// Allow the oracle up to degree 9.
    #[arg(long, global = true)]
    slow: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an operator from a tableau.
    Build {
        kind: BuildKind,
        /// Tableau text such as "[[1,2],[3]]"; "-" reads stdin.
        tableau: Option<String>,
    },
    /// Rewrite an expression with the cancellation and propagation rules.
    Simplify {
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = PolicyArg::All)]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value_t = TungArg::Structural)]
        tung: TungArg,
        /// Check each step against the expansion (fails with exit code 5).
        #[arg(long)]
        verify: bool,
    },
    /// Apply a single rule at a given position.
    Apply {
        expr: Option<String>,
        #[arg(long, value_enum)]
        rule: RuleArg,
        /// Factor position (0-based); the span start for `tung`.
        #[arg(long, default_value_t = 0)]
        pos: usize,
        /// Last factor of the span for `tung`.
        #[arg(long)]
        end: Option<usize>,
        #[arg(long, value_enum, default_value_t = TungArg::Structural)]
        tung: TungArg,
        #[arg(long, value_enum, default_value_t = DirectionArg::Right)]
        direction: DirectionArg,
        /// The set R for `propagate`, e.g. "6 7".
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Compare two expressions in the group algebra.
    Eq {
        left: String,
        right: String,
        /// Accept a nonzero rational ratio between the two sides.
        #[arg(long)]
        upto_scalar: bool,
    },
    /// Expand into the group algebra, or report matrix statistics.
    Expand {
        expr: Option<String>,
        /// Dimension N of the representation on (C^N)^{⊗n}.
        #[arg(long)]
        matrix: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuildKind {
    Young,
    YoungBar,
    Ks,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Absorb,
    Wedge,
    Ancestor,
    Tung,
    Propagate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    All,
    CancelOnly,
    PropagateOnly,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TungArg {
    Structural,
    Exact,
    Off,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub text: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set_count_before: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set_count_after: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<RewriteTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<AlgebraElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Invalid(_) => EXIT_PARSE,
        Error::Refused(_) => EXIT_REFUSED,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Verify(_) => EXIT_VERIFY,
    }
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    report: RunReport,
    timings: BTreeMap<String, f64>,
}

impl Ctx<'_> {
    fn input(&mut self, arg: Option<&str>) -> Result<String> {
        let text = match arg {
            Some(s) if s != "-" => s.to_string(),
            _ => {
                let mut buf = String::new();
                self.stdin.read_to_string(&mut buf).map_err(|e| Error::invalid(format!("reading stdin: {e}")))?;
                buf.trim().to_string()
            }
        };
        self.report.inputs.push(InputDigest { sha256: sha256_hex(&text), text: text.clone() });
        Ok(text)
    }

    fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.timings.insert(phase.to_string(), t0.elapsed().as_secs_f64() * 1e3);
        out
    }

    fn parse(&mut self, text: &str) -> Result<BirdtrackExpr> {
        self.timed("parse", || parse_expr(text))
    }
}

fn tung_mode(t: TungArg) -> TungMode {
    match t {
        TungArg::Structural => TungMode::Structural,
        TungArg::Exact => TungMode::Exact,
        TungArg::Off => TungMode::Off,
    }
}

fn parse_index_list(text: &str) -> Result<Vec<u32>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| t.parse().map_err(|_| Error::parse(i, format!("bad index '{t}'"))))
        .collect()
}

fn bound(cli: &Cli) -> usize {
    let n = if cli.slow { cli.max_n.max(SLOW_MAX_N) } else { cli.max_n };
    n.min(MAX_DENSE_DEGREE)
}

fn execute(cli: &Cli, ctx: &mut Ctx) -> Result<i32> {
    let bound = bound(cli);
    match &cli.command {
        Command::Build { kind, tableau } => {
            let text = ctx.input(tableau.as_deref())?;
            let t = parse_tableau(&text)?;
            let e = ctx.timed("build", || match kind {
                BuildKind::Young => expr::young(&t),
                BuildKind::YoungBar => Ok(expr::young_bar(&t)),
                BuildKind::Ks => expr::ks_hermitian(&t),
            })?;
            ctx.report.set_count_after = Some(e.set_count());
            ctx.report.outputs.push(print_expr(&e));
        }
        Command::Simplify { expr, policy, tung, verify } => {
            let text = ctx.input(expr.as_deref())?;
            let e = ctx.parse(&text)?;
            let opts = SimplifyOptions {
                policy: match policy {
                    PolicyArg::All => Policy::All,
                    PolicyArg::CancelOnly => Policy::CancelOnly,
                    PolicyArg::PropagateOnly => Policy::PropagateOnly,
                },
                tung: tung_mode(*tung),
                verify: *verify,
                verify_bound: bound,
                ..Default::default()
            };
            let out = ctx.timed("simplify", || simplify(&e, &opts))?;
            ctx.report.set_count_before = Some(e.set_count());
            ctx.report.set_count_after = Some(out.expr.set_count());
            ctx.report.outputs.push(print_expr(&out.expr));
            ctx.report.trace = Some(out.trace);
        }
        Command::Apply { expr, rule, pos, end, tung, direction, set, verify } => {
            let text = ctx.input(expr.as_deref())?;
            let e = ctx.parse(&text)?;
            let set = set.as_deref().map(parse_index_list).transpose()?;
            let (out, mut inst) = ctx.timed("rule", || match rule {
                RuleArg::Absorb => rules::apply_step(&e, &Step::Absorb { position: *pos }),
                RuleArg::Wedge => rules::cancel_wedged_young(&e, *pos),
                RuleArg::Ancestor => rules::cancel_wedged_ancestor(&e, *pos),
                RuleArg::Tung => {
                    let end = end.ok_or_else(|| Error::invalid("tung needs --end"))?;
                    rules::tung_collapse(&e, *pos, end, tung_mode(*tung))
                }
                RuleArg::Propagate => {
                    let d = match direction {
                        DirectionArg::Right => Direction::Right,
                        DirectionArg::Left => Direction::Left,
                    };
                    rules::propagate(&e, *pos, d, set.as_deref())
                }
            })?;
            if *verify {
                inst.verified = ctx.timed("oracle", || verify_step(&e, &out, bound))?;
                if let Verification::Failed { degree, witness } = &inst.verified {
                    return Err(Error::Verify(format!("rewrite differs at degree {degree}, witness {witness}")));
                }
            }
            ctx.report.set_count_before = Some(e.set_count());
            ctx.report.set_count_after = Some(out.set_count());
            ctx.report.outputs.push(print_expr(&out));
            ctx.report.trace = Some(RewriteTrace { input: print_expr(&e), steps: vec![inst], output: print_expr(&out) });
        }
        Command::Eq { left, right, upto_scalar } => {
            let (ta, tb) = (ctx.input(Some(left))?, ctx.input(Some(right))?);
            let (a, b) = (ctx.parse(&ta)?, ctx.parse(&tb)?);
            let c = ctx.timed("oracle", || compare(&a, &b, bound, *upto_scalar))?;
            let code = match c {
                Comparison::Unequal { .. } => EXIT_UNEQUAL,
                _ => EXIT_OK,
            };
            ctx.report.comparison = Some(c);
            return Ok(code);
        }
        Command::Expand { expr, matrix } => {
            let text = ctx.input(expr.as_deref())?;
            let e = ctx.parse(&text)?;
            let degree = e.degree().max(1);
            let el = ctx.timed("oracle", || expand_dense(&e, degree, bound))?.to_algebra();
            if let Some(n_dim) = matrix {
                ctx.report.matrix = Some(ctx.timed("matrix", || matrix_stats(&el, *n_dim))?);
            } else {
                ctx.report.element = Some(el);
            }
        }
    }
    Ok(EXIT_OK)
}

fn render_text(r: &RunReport, out: &mut dyn Write) -> std::io::Result<()> {
    for o in &r.outputs {
        writeln!(out, "{o}")?;
    }
    if let (Some(b), Some(a)) = (r.set_count_before, r.set_count_after) {
        writeln!(out, "sets: {b} -> {a}")?;
    }
    if let Some(t) = &r.trace {
        for (i, s) in t.steps.iter().enumerate() {
            writeln!(out, "  {i:>3} {:?} at {:?}: {}", s.rule, s.positions, s.after)?;
        }
    }
    match &r.comparison {
        Some(Comparison::Equal { degree }) => writeln!(out, "equal (n = {degree})")?,
        Some(Comparison::Proportional { degree, ratio }) => {
            writeln!(out, "equal up to scalar {ratio} (n = {degree})")?
        }
        Some(Comparison::Unequal { degree, witness, left, right }) => {
            writeln!(out, "unequal (n = {degree}): coefficient of {witness} is {left} vs {right}")?
        }
        None => {}
    }
    if let Some(el) = &r.element {
        writeln!(out, "{el}")?;
    }
    if let Some(m) = &r.matrix {
        writeln!(out, "N = {}: size {}, rank {}, trace {}, zero {}", m.dimension, m.size, m.rank, m.trace, m.zero)?;
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let mut ctx = Ctx {
        stdin,
        report: RunReport { command: args.iter().skip(1).cloned().collect(), ..Default::default() },
        timings: BTreeMap::new(),
    };
    let result = execute(&cli, &mut ctx);
    let Ctx { mut report, timings, .. } = ctx;
    if !cli.no_meta {
        report.timings_ms = Some(timings);
    }
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if cli.json {
                let _ = writeln!(stdout, "{}", serde_json::json!({ "error": e.to_string(), "exit_code": exit_code(&e) }));
            }
            return exit_code(&e);
        }
    };
    let written = if cli.json {
        serde_json::to_string_pretty(&report).map_err(std::io::Error::other).and_then(|s| writeln!(stdout, "{s}"))
    } else {
        render_text(&report, stdout)
    };
    if written.is_err() {
        return EXIT_RESOURCE;
    }
    code
}
