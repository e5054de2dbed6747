//! Command-line front end. `run` takes its arguments and output sinks
//! explicitly so the binary and the integration tests share one code path.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::assembly::{flip_difference, total_generic, window_tau, BettiTable, ContributionLedger, TermKind};
use crate::blocks::{critical_set_poincare, jacobian_poincare, SurfaceParams};
use crate::error::Error;
use crate::rational::ExactRational;
use crate::strata::{default_j_max, enumerate_delta, flip_map, DeltaSign, ModuliParams, StratumClass, StratumLabel};
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_BUFFER: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "pairpoly", version, about = "Betti numbers of moduli spaces of rank-2 stable pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Betti numbers of the moduli space for tau in window N, with invariant checks.
    Betti(WindowArgs),
    /// The Betti table plus every stratum contribution that produced it.
    Ledger(WindowArgs),
    /// Strata of the Morse stratification at a generic tau.
    Strata(StrataArgs),
    /// Change of the Poincaré polynomial across the wall tau = N.
    Flip(FlipArgs),
    /// Run identity and invariant checks over a (g, d, N) grid.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Truncation buffer above the top degree 2(d + 2g - 2).
    #[arg(long, env = "PAIRPOLY_TRUNC")]
    pub trunc: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct WindowArgs {
    #[arg(long)]
    pub g: i64,
    #[arg(long)]
    pub d: i64,
    /// Window: tau in (max{d/2, N-1}, N).
    #[arg(long = "N")]
    pub n: i64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct StrataArgs {
    #[arg(long)]
    pub g: i64,
    #[arg(long)]
    pub d: i64,
    /// Stability parameter as p/q.
    #[arg(long)]
    pub tau: ExactRational,
    /// Largest j listed for the Ib family.
    #[arg(long)]
    pub jmax: Option<i64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct FlipArgs {
    #[arg(long)]
    pub g: i64,
    #[arg(long)]
    pub d: i64,
    /// The wall tau = N, with d/2 < N <= d - 1.
    #[arg(long = "N")]
    pub n: i64,
    /// Fixed-determinant moduli space (drops the Jacobian factor).
    #[arg(long)]
    pub fixed_det: bool,
    #[arg(long)]
    pub jmax: Option<i64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Genus or range `a..b` (inclusive).
    #[arg(long, value_parser = parse_range)]
    pub g: RangeInclusive<i64>,
    #[arg(long, value_parser = parse_range)]
    pub d: RangeInclusive<i64>,
    /// Run a single check.
    #[arg(long)]
    pub only: Option<String>,
    /// Debug builds only: add t^2 to one contribution class to make sure the grid notices.
    #[arg(long, hide = true)]
    pub perturb: Option<String>,
    #[command(flatten)]
    pub out: Output,
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let num = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(num(a)?..=num(b)?)
        }
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

/// What a subcommand produced: rendered output and an exit code.
struct Emitted {
    body: String,
    code: i32,
    /// Diagnostic for stderr.
    note: Option<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::NonGeneric { .. } | Error::InsufficientBuffer { .. } => EXIT_USAGE,
        _ => EXIT_VERIFY,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let out = match &cli.command {
        Command::Betti(a) | Command::Ledger(a) => &a.out,
        Command::Strata(a) => &a.out,
        Command::Flip(a) => &a.out,
        Command::Verify(a) => &a.out,
    }
    .clone();
    let result = match cli.command {
        Command::Betti(a) => cmd_betti(&a, false),
        Command::Ledger(a) => cmd_betti(&a, true),
        Command::Strata(a) => cmd_strata(&a),
        Command::Flip(a) => cmd_flip(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    let emitted = match result {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    if let Some(note) = &emitted.note {
        let _ = writeln!(stderr, "{note}");
    }
    match &out.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &emitted.body) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = stdout.write_all(emitted.body.as_bytes());
        }
    }
    emitted.code
}

fn buffer(out: &Output) -> crate::Result<usize> {
    let b = out.trunc.unwrap_or(DEFAULT_BUFFER);
    if b == 0 {
        return Err(Error::domain("truncation buffer must be at least 1"));
    }
    Ok(b)
}

fn int(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integers are valid JSON numbers"))
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(j: Option<i64>) -> String {
    j.map(|j| j.to_string()).unwrap_or_default()
}

/// Canonical JSON for a Betti table (sorted keys, integers only), optionally
/// with the contribution ledger.
pub fn betti_to_json(t: &BettiTable, ledger: Option<&ContributionLedger>) -> String {
    to_json(&betti_json(t, ledger))
}

fn betti_json(t: &BettiTable, ledger: Option<&ContributionLedger>) -> Value {
    let checks: Map<String, Value> = t.checks.named().iter().map(|(k, v)| (k.to_string(), Value::Bool(*v))).collect();
    let mut obj = json!({
        "g": t.surface.g,
        "d": t.surface.d,
        "N": t.window,
        "dim": t.surface.moduli_dim(),
        "betti": ints(&t.betti),
        "poincare_string": t.poincare_string(),
        "checks": checks,
    });
    if let Some(l) = ledger {
        let entries: Vec<Value> = l
            .entries
            .iter()
            .map(|e| {
                json!({
                    "class": e.kind.as_str(),
                    "j": e.j,
                    "delta": e.delta.to_string(),
                    "series": ints(e.series.coeffs()),
                })
            })
            .collect();
        obj["ledger"] = Value::Array(entries);
        obj["tau"] = Value::String(l.tau.to_string());
    }
    obj
}

fn cmd_betti(a: &WindowArgs, with_ledger: bool) -> crate::Result<Emitted> {
    let p = SurfaceParams::new(a.g, a.d)?;
    let order = p.top_degree() + buffer(&a.out)?;
    let ledger = total_generic(p, a.n, order)?;
    let table = BettiTable::from_total(p, a.n, &ledger.total)?;
    let ledger = with_ledger.then_some(&ledger);
    let body = match a.out.format {
        Format::Json => to_json(&betti_json(&table, ledger)),
        Format::Csv => match ledger {
            None => {
                let mut s = String::from("degree,betti\n");
                for (k, b) in table.betti.iter().enumerate() {
                    let _ = writeln!(s, "{k},{b}");
                }
                s
            }
            Some(l) => {
                let mut s = String::from("class,j,delta,series\n");
                for e in &l.entries {
                    let series: Vec<String> = e.series.coeffs().iter().map(|c| c.to_string()).collect();
                    let _ = writeln!(s, "{},{},{},{}", e.kind, opt(e.j), e.delta, series.join(" "));
                }
                s
            }
        },
        Format::Text => {
            let mut s = format!(
                "g = {}, d = {}, N = {} (complex dimension {})\nP_t = {}\n",
                p.g,
                p.d,
                a.n,
                p.moduli_dim(),
                table.poincare_string()
            );
            let bs: Vec<String> = table.betti.iter().map(|b| b.to_string()).collect();
            let _ = writeln!(s, "betti: {}", bs.join(" "));
            for (name, ok) in table.checks.named() {
                let _ = writeln!(s, "  {name:<13} {}", if ok { "ok" } else { "FAIL" });
            }
            if let Some(l) = ledger {
                let _ = writeln!(s, "ledger at tau = {}:", l.tau);
                let _ = writeln!(s, "  P(BG)             {:?}", l.bgauge);
                for e in &l.entries {
                    let label = StratumLabelText(e.kind, e.j);
                    let _ = writeln!(s, "  - {:<16} delta = {:<6} {:?}", label.to_string(), e.delta, e.series);
                }
            }
            s
        }
    };
    let failure = table.checks.first_failure();
    Ok(Emitted {
        body,
        code: if failure.is_some() { EXIT_VERIFY } else { EXIT_OK },
        note: failure.map(|name| format!("check failed: {name}")),
    })
}

struct StratumLabelText(TermKind, Option<i64>);

impl std::fmt::Display for StratumLabelText {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.1 {
            Some(j) => write!(f, "{}({j})", self.0),
            None => write!(f, "{}", self.0),
        }
    }
}

fn sign_str(s: DeltaSign) -> &'static str {
    match s {
        DeltaSign::Plus => "plus",
        DeltaSign::Minus => "minus",
        DeltaSign::Special => "special",
    }
}

fn cmd_strata(a: &StrataArgs) -> crate::Result<Emitted> {
    let mp = ModuliParams::new(a.g, a.d, a.tau.clone())?;
    let p = mp.surface;
    let order = p.top_degree() + buffer(&a.out)?;
    let j_max = a.jmax.unwrap_or_else(|| default_j_max(&mp, order));
    let index = enumerate_delta(&mp, j_max)?;
    let body = match a.out.format {
        Format::Csv => {
            let mut s = String::from("class,j,delta,sigma\n");
            for st in index.iter() {
                let _ = writeln!(s, "{},{},{},{}", st.class, opt(st.j), st.delta, opt(st.sigma));
            }
            s
        }
        Format::Json => {
            let mut rows = Vec::new();
            for st in index.iter() {
                let critical = match st.class {
                    StratumClass::Open => Value::Null,
                    _ => ints(critical_set_poincare(st, p, order)?.coeffs()),
                };
                rows.push(json!({
                    "class": st.class.as_str(),
                    "j": st.j,
                    "delta": st.delta.to_string(),
                    "sigma": st.sigma,
                    "sign": sign_str(st.sign),
                    "has_a_component": st.has_a_component,
                    "has_b_component": st.has_b_component,
                    "critical_series": critical,
                }));
            }
            to_json(&json!({
                "g": p.g,
                "d": p.d,
                "tau": mp.tau.to_string(),
                "dim": p.moduli_dim(),
                "j_max": j_max,
                "strata": rows,
            }))
        }
        Format::Text => {
            let mut s = format!("g = {}, d = {}, tau = {}, j <= {}\n", p.g, p.d, mp.tau, j_max);
            let _ = writeln!(s, "{:<8} {:>4} {:>8} {:>6}  critical set", "class", "j", "delta", "sigma");
            for st in index.iter() {
                let critical = match st.class {
                    StratumClass::Open => String::from("-"),
                    _ => critical_set_poincare(st, p, order)?.truncate(12).to_string() + " + ...",
                };
                let _ = writeln!(
                    s,
                    "{:<8} {:>4} {:>8} {:>6}  {}",
                    st.class.as_str(),
                    opt(st.j),
                    st.delta.to_string(),
                    opt(st.sigma),
                    critical
                );
            }
            s
        }
    };
    Ok(Emitted { body, code: EXIT_OK, note: None })
}

fn labels(v: &[StratumLabel]) -> Value {
    Value::Array(v.iter().map(|l| Value::String(l.to_string())).collect())
}

fn cmd_flip(a: &FlipArgs) -> crate::Result<Emitted> {
    let p = SurfaceParams::new(a.g, a.d)?;
    let order = p.top_degree() + buffer(&a.out)?;
    let closed = flip_difference(p, a.n, order, a.fixed_det)?;
    let subtraction = &total_generic(p, a.n + 1, order)?.total - &total_generic(p, a.n, order)?.total;
    let equal = if a.fixed_det { &closed * &jacobian_poincare(p.g, order) == subtraction } else { closed == subtraction };

    // representatives on either side of the wall
    let tau2 = ExactRational::new(8 * a.n + 1, 8)?;
    let mp1 = ModuliParams::new(a.g, a.d, window_tau(a.n))?;
    let j_max = a.jmax.unwrap_or(a.d + 1);
    let corr = flip_map(&enumerate_delta(&mp1, j_max)?, tau2.clone())?;

    let body = match a.out.format {
        Format::Json => {
            let pairs: Vec<Value> = corr
                .pairs
                .iter()
                .map(|pr| {
                    json!({
                        "source": pr.source.to_string(),
                        "source_delta": pr.source_delta.to_string(),
                        "mapped_delta": pr.mapped_delta.to_string(),
                        "target": pr.target.map(|t| t.to_string()),
                    })
                })
                .collect();
            let retyped: Vec<Value> =
                corr.retyped.iter().map(|(s, t)| json!([s.to_string(), t.to_string()])).collect();
            to_json(&json!({
                "g": p.g,
                "d": p.d,
                "N": a.n,
                "fixed_det": a.fixed_det,
                "closed_form": ints(closed.coeffs()),
                "closed_form_string": closed.to_string(),
                "subtraction": ints(subtraction.coeffs()),
                "equal": equal,
                "correspondence": {
                    "tau_before": mp1.tau.to_string(),
                    "tau_after": tau2.to_string(),
                    "critical_values_crossed": corr.critical_values_crossed.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "pairs": pairs,
                    "annihilated": labels(&corr.annihilated),
                    "created": labels(&corr.created),
                    "retyped": retyped,
                    "is_bijection": corr.is_bijection,
                    "order_preserving": corr.order_preserving,
                },
            }))
        }
        Format::Csv => {
            let mut s = String::from("degree,closed_form,subtraction\n");
            for k in 0..=order {
                let _ = writeln!(s, "{k},{},{}", closed.coeff(k), subtraction.coeff(k));
            }
            s
        }
        Format::Text => {
            let mut s = format!("g = {}, d = {}, wall tau = {}{}\n", p.g, p.d, a.n, if a.fixed_det { ", fixed determinant" } else { "" });
            let _ = writeln!(s, "closed form:  {:?}", closed);
            let _ = writeln!(s, "P(N+1) - P(N): {:?}", subtraction);
            let _ = writeln!(s, "equal: {equal}");
            let _ = writeln!(s, "strata from tau = {} to tau = {}:", mp1.tau, tau2);
            for pr in &corr.pairs {
                let target = pr.target.map(|t| t.to_string()).unwrap_or_else(|| "(annihilated)".into());
                let _ = writeln!(s, "  {:<12} {:>6} -> {:<6} {}", pr.source.to_string(), pr.source_delta.to_string(), pr.mapped_delta.to_string(), target);
            }
            for c in &corr.created {
                let _ = writeln!(s, "  created {c}");
            }
            for (x, y) in &corr.retyped {
                let _ = writeln!(s, "  retyped {x} -> {y}");
            }
            s
        }
    };
    Ok(Emitted {
        body,
        code: if equal { EXIT_OK } else { EXIT_VERIFY },
        note: (!equal).then(|| "flip mismatch: closed form differs from the difference of totals".to_string()),
    })
}

fn parse_kind(s: &str) -> crate::Result<TermKind> {
    [TermKind::IaSs, TermKind::Ia, TermKind::Ib, TermKind::IIPlus, TermKind::IIMinus]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| Error::domain(format!("unknown contribution class {s:?}")))
}

fn cmd_verify(a: &VerifyArgs) -> crate::Result<Emitted> {
    let mut cfg = VerifyConfig::new(a.g.clone(), a.d.clone());
    cfg.only = a.only.clone();
    cfg.buffer = buffer(&a.out)?;
    if let Some(kind) = &a.perturb {
        if !cfg!(debug_assertions) {
            return Err(Error::domain("--perturb is only available in debug builds"));
        }
        cfg.perturb = Some(parse_kind(kind)?);
    }
    let report = verify::run(&cfg)?;
    let body = match a.out.format {
        Format::Json => {
            let rows: Vec<Value> = report
                .results
                .iter()
                .map(|r| json!({"g": r.g, "d": r.d, "N": r.n, "check": r.check, "pass": r.pass, "detail": r.detail}))
                .collect();
            to_json(&json!({"all_pass": report.all_pass(), "count": report.results.len(), "results": rows}))
        }
        Format::Csv => {
            let mut s = String::from("g,d,N,check,pass\n");
            for r in &report.results {
                let _ = writeln!(s, "{},{},{},{},{}", r.g, r.d, r.n, csv_field(r.check), r.pass);
            }
            s
        }
        Format::Text => {
            let failed = report.failures().count();
            let mut s = format!(
                "{} checks over g in {}..{}, d in {}..{}: {}\n",
                report.results.len(),
                a.g.start(),
                a.g.end(),
                a.d.start(),
                a.d.end(),
                if failed == 0 { "all pass".to_string() } else { format!("{failed} failed") }
            );
            for r in report.failures() {
                let _ = writeln!(s, "FAIL {} g={} d={} N={}: {}", r.check, r.g, r.d, r.n, r.detail.as_deref().unwrap_or(""));
            }
            s
        }
    };
    let note = report.first_failure().map(|r| format!("first failing check: {} (g={}, d={}, N={})", r.check, r.g, r.d, r.n));
    Ok(Emitted { body, code: if report.all_pass() { EXIT_OK } else { EXIT_VERIFY }, note })
}
