//! Command-line front end: `compute`, `verify` and `tables`.
//!
//! Exit codes: 0 success, 2 usage, 3 domain error (also when every prime
//! was skipped), 4 verification mismatch.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::charvar::{char, CharCase, CharReport, Route};
use crate::ffcount::{
    verify, verify_strata, FfError, OracleParams, Status, Stratum, StratumRecord, VerificationReport,
    DEFAULT_CAP,
};
use crate::gring::MotiveExpr;
use crate::repvar::{
    rep_mixed, strata_jordan, strata_nopar, strata_semisimple, FormulaError, StrataReport,
};
use crate::topology::{ExactScalar, NodeSurface, ParabolicStructure, TopologyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "nodevar", version, about = "Virtual classes of SL2 representation and character varieties of node-surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a virtual class.
    Compute(ComputeArgs),
    /// Check a representation-variety class against point counts over F_p.
    Verify(VerifyArgs),
    /// Tabulate character-variety classes of Σ_{g,b} over parameter ranges.
    Tables(TablesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Variety {
    Rep,
    Char,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Latex,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Assembled,
    Closed,
    Both,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Assembled => Route::Assembled,
            RouteArg::Closed => Route::Closed,
            RouteArg::Both => Route::Both,
        }
    }
}

#[derive(Debug, Args)]
struct Shape {
    /// Node-surface, e.g. "g=2;branches=3,2".
    #[arg(long)]
    surface: String,
    /// Punctures, e.g. "t=1;j+=2;j-=0;ss=2,3".
    #[arg(long, default_value = "")]
    parabolic: String,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[arg(long, value_enum, default_value_t = Variety::Rep)]
    variety: Variety,
    #[command(flatten)]
    shape: Shape,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Evaluate at these values of q.
    #[arg(long, value_delimiter = ',')]
    eval: Vec<i64>,
    /// Character varieties only.
    #[arg(long, value_enum, default_value_t = RouteArg::Both)]
    route: RouteArg,
    /// Representation varieties only: also print the reducible strata.
    #[arg(long)]
    strata: bool,
    /// Print version and timestamp to stderr.
    #[arg(long)]
    meta: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    primes: Vec<u64>,
    /// Also enumerate and compare per-stratum counts.
    #[arg(long)]
    strata: bool,
    /// Largest number of tuples a strata enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long)]
    meta: bool,
}

#[derive(Debug, Args)]
struct TablesArgs {
    /// Genus range, e.g. "1..3" or "1,2".
    #[arg(long, default_value = "1..2")]
    g_range: String,
    #[arg(long, default_value = "1..2")]
    b_range: String,
    /// Semisimple punctures, with generic eigenvalues.
    #[arg(long, default_value = "0")]
    s_range: String,
    /// Jordan punctures of type J+.
    #[arg(long, default_value = "0")]
    r_range: String,
    #[arg(long, value_enum, default_value_t = RouteArg::Closed)]
    route: RouteArg,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long)]
    meta: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Domain(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn topo_failure(flag: &str, e: TopologyError) -> Failure {
    let msg = format!("{flag}: {e}");
    if e.is_parse() {
        Failure::Usage(msg)
    } else {
        Failure::Domain(msg)
    }
}

fn formula_failure(e: FormulaError) -> Failure {
    formula_failure_at("--route", e)
}

fn formula_failure_at(case_flag: &str, e: FormulaError) -> Failure {
    let flag = match &e {
        FormulaError::GenusZero | FormulaError::NoBranches => "--surface",
        FormulaError::InvalidEigenvalue(_) | FormulaError::Topology(_) => "--parabolic",
        FormulaError::WrongCase(_) => case_flag,
    };
    Failure::Domain(format!("{flag}: {e}"))
}

fn ff_failure(e: FfError) -> Failure {
    let flag = match &e {
        FfError::TooLarge { .. } => "--cap",
        FfError::InvalidEigenvalue(_) | FfError::WrongCharacteristic { .. } => "--parabolic",
        _ => "--primes",
    };
    Failure::Domain(format!("{flag}: {e}"))
}

fn parse_shape(s: &Shape) -> Result<(NodeSurface, ParabolicStructure), Failure> {
    let ns = s.surface.parse::<NodeSurface>().map_err(|e| topo_failure("--surface", e))?;
    let par = s.parabolic.parse::<ParabolicStructure>().map_err(|e| topo_failure("--parabolic", e))?;
    Ok((ns, par))
}

/// Parses "a..b", "a-b", "a,b,c" or a single value, ascending and deduplicated.
pub fn parse_range(flag: &str, s: &str) -> Result<Vec<u32>, String> {
    let bad = || format!("{flag}: cannot read range {s:?}");
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in s.split(',').filter(|t| !t.trim().is_empty()) {
        let bounds = part.split_once("..").or_else(|| part.split_once('-'));
        match bounds {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn render(e: &MotiveExpr, f: Format) -> String {
    match f {
        Format::Latex => e.to_latex(),
        _ => e.to_plain(),
    }
}

fn evaluations(e: &MotiveExpr, at: &[i64]) -> Result<BTreeMap<String, String>, Failure> {
    at.iter()
        .map(|&q0| {
            e.eval_at(&BigInt::from(q0))
                .map(|v| (q0.to_string(), v.to_string()))
                .map_err(|err| Failure::Domain(format!("--eval: {err}")))
        })
        .collect()
}

#[derive(Serialize)]
struct Input<'a> {
    surface: &'a NodeSurface,
    parabolic: &'a ParabolicStructure,
    #[serde(skip_serializing_if = "Option::is_none")]
    variety: Option<Variety>,
    #[serde(skip_serializing_if = "Option::is_none")]
    route: Option<Route>,
    #[serde(skip_serializing_if = "Option::is_none")]
    primes: Option<&'a [u64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eval: Option<&'a [i64]>,
}

#[derive(Serialize)]
struct PrimeRow {
    prime: u64,
    status: Status,
    expected: Option<String>,
    actual: Option<String>,
    note: Option<String>,
}

#[derive(Serialize)]
struct StratumRow {
    prime: u64,
    stratum: Stratum,
    status: Status,
    expected: Option<String>,
    actual: Option<String>,
    note: Option<String>,
}

fn prime_rows(r: &VerificationReport) -> Vec<PrimeRow> {
    r.records
        .iter()
        .map(|x| PrimeRow {
            prime: x.prime,
            status: x.status,
            expected: x.expected.as_ref().map(ToString::to_string),
            actual: x.actual.as_ref().map(ToString::to_string),
            note: x.note.clone(),
        })
        .collect()
}

fn stratum_row(r: &StratumRecord) -> StratumRow {
    StratumRow {
        prime: r.prime,
        stratum: r.stratum,
        status: if r.matches() { Status::Match } else { Status::Mismatch },
        expected: Some(r.expected.to_string()),
        actual: Some(r.actual.to_string()),
        note: None,
    }
}

fn json_line(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("output records serialize")
}

fn compute(a: &ComputeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (ns, par) = parse_shape(&a.shape)?;
    let input = Input {
        surface: &ns,
        parabolic: &par,
        variety: Some(a.variety),
        route: (a.variety == Variety::Char).then(|| a.route.into()),
        primes: None,
        eval: (!a.eval.is_empty()).then_some(a.eval.as_slice()),
    };
    let mut rec = json!({ "command": "compute", "input": input });
    let mut text = Vec::new();
    match a.variety {
        Variety::Rep => {
            let e = rep_mixed(&ns, &par).map_err(|e| formula_failure_at("--parabolic", e))?;
            text.push(render(&e, a.format));
            let ev = evaluations(&e, &a.eval)?;
            for (k, v) in &ev {
                text.push(format!("q={k}: {v}"));
            }
            rec["result"] = e.to_json_value();
            if !ev.is_empty() {
                rec["evaluations"] = json!(ev);
            }
            if a.strata {
                let s = strata_for(&ns, &par)?
                    .ok_or_else(|| Failure::Domain("--strata: no stratification for this puncture type".into()))?;
                for (st, e) in s.strata() {
                    text.push(format!("{st}: {}", render(e, a.format)));
                }
                text.push(format!("reducible: {}", render(&s.reducible_total, a.format)));
                rec["strata"] = serde_json::to_value(&s).expect("strata serialize");
            }
        }
        Variety::Char => {
            let r = char(&ns, &par, a.route.into()).map_err(formula_failure)?;
            let primary = r.primary().expect("at least one route is computed").clone();
            text.extend(char_lines(&r, a.format));
            let ev = evaluations(&primary, &a.eval)?;
            for (k, v) in &ev {
                text.push(format!("q={k}: {v}"));
            }
            rec["result"] = primary.to_json_value();
            if !ev.is_empty() {
                rec["evaluations"] = json!(ev);
            }
            rec["cross_validation"] = serde_json::to_value(&r).expect("report serializes");
        }
    }
    emit(out, a.format, &rec, &text);
    Ok(EXIT_OK)
}

fn case_name(c: CharCase) -> &'static str {
    match c {
        CharCase::Nopar => "nopar",
        CharCase::Jordan => "jordan",
        CharCase::Semisimple => "semisimple",
        CharCase::Mixed => "mixed",
        CharCase::Twisted => "twisted",
    }
}

fn char_lines(r: &CharReport, f: Format) -> Vec<String> {
    let mut v = vec![format!("case: {}", case_name(r.case))];
    if let Some(e) = &r.assembled {
        v.push(format!("assembled: {}", render(e, f)));
    }
    if let Some(e) = &r.closed_form {
        v.push(format!("closed: {}", render(e, f)));
    }
    if let Some(e) = &r.difference {
        v.push(format!("difference: {}", render(e, f)));
    }
    if let Some(ok) = r.agrees {
        v.push(format!("agrees: {ok}"));
    }
    v
}

fn emit(out: &mut dyn Write, f: Format, rec: &Value, text: &[String]) {
    let body = match f {
        Format::Json => json_line(rec),
        _ => text.join("\n"),
    };
    let _ = writeln!(out, "{body}");
}

fn strata_for(ns: &NodeSurface, par: &ParabolicStructure) -> Result<Option<StrataReport>, Failure> {
    let red = par.reduce().map_err(|e| topo_failure("--parabolic", e))?;
    let (g, b) = (ns.genus(), ns.b_eff());
    let s = match (red.twisted, red.r, red.s()) {
        (true, _, _) => None,
        (false, 0, 0) => Some(strata_nopar(g, b)),
        (false, r, 0) => Some(strata_jordan(g, b, r)),
        (false, 0, _) => Some(strata_semisimple(g, b, &red.eigenvalues)),
        _ => None,
    };
    s.transpose().map_err(formula_failure)
}

fn run_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (ns, par) = parse_shape(&a.shape)?;
    if a.primes.is_empty() {
        return Err(Failure::Usage("--primes: no primes given".into()));
    }
    let expr = rep_mixed(&ns, &par).map_err(|e| formula_failure_at("--parabolic", e))?;
    let params = OracleParams { genus: ns.genus(), nu: ns.free_rank(), parabolic: par.clone() };
    let report = verify(&expr, &params, &a.primes).map_err(ff_failure)?;
    let mut text: Vec<String> = report
        .records
        .iter()
        .map(|r| {
            let mut line = format!("p={}: {}", r.prime, status_word(r.status));
            if let (Some(e), Some(c)) = (&r.expected, &r.actual) {
                line += &format!(" (expected {e}, actual {c})");
            }
            if let Some(n) = &r.note {
                line += &format!(" [{n}]");
            }
            line
        })
        .collect();
    let mut strata_rows = Vec::new();
    if a.strata {
        let s = strata_for(&ns, &par)?
            .ok_or_else(|| Failure::Domain("--strata: no stratification for this puncture type".into()))?;
        let mut formulas: Vec<(Stratum, MotiveExpr)> = vec![(Stratum::Irreducible, &expr - &s.reducible_total)];
        formulas.extend(s.strata().into_iter().map(|(st, e)| (st, e.clone())));
        for r in report.records.iter().filter(|r| r.status != Status::Skipped) {
            match verify_strata(&formulas, &params, r.prime, a.cap) {
                Ok(Some(recs)) => strata_rows.extend(recs.iter().map(stratum_row)),
                Ok(None) => {}
                Err(e @ FfError::TooLarge { .. }) => strata_rows.extend(formulas.iter().map(|(st, _)| StratumRow {
                    prime: r.prime,
                    stratum: *st,
                    status: Status::Skipped,
                    expected: None,
                    actual: None,
                    note: Some(e.to_string()),
                })),
                Err(e) => return Err(ff_failure(e)),
            }
        }
        for r in &strata_rows {
            let mut line = format!("p={} {}: {}", r.prime, r.stratum, status_word(r.status));
            if let (Some(e), Some(c)) = (&r.expected, &r.actual) {
                line += &format!(" (expected {e}, actual {c})");
            }
            if let Some(n) = &r.note {
                line += &format!(" [{n}]");
            }
            text.push(line);
        }
    }
    let strata_mismatch = strata_rows.iter().any(|r| r.status == Status::Mismatch);
    text.push(format!(
        "summary: {} matched, {} mismatched, {} skipped",
        report.matched(),
        report.mismatched(),
        report.skipped()
    ));
    let input = Input {
        surface: &ns,
        parabolic: &par,
        variety: Some(Variety::Rep),
        route: None,
        primes: Some(&a.primes),
        eval: None,
    };
    let mut rec = json!({
        "command": "verify",
        "input": input,
        "result": expr.to_json_value(),
        "verification": prime_rows(&report),
    });
    if a.strata {
        rec["strata_verification"] = json!(strata_rows);
    }
    emit(out, a.format, &rec, &text);
    Ok(if report.mismatched() > 0 || strata_mismatch {
        EXIT_MISMATCH
    } else if report.matched() == 0 {
        EXIT_DOMAIN
    } else {
        EXIT_OK
    })
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Match => "match",
        Status::Mismatch => "MISMATCH",
        Status::Skipped => "skipped",
    }
}

#[derive(Serialize)]
struct Cell {
    g: u32,
    b: u32,
    r: u32,
    s: u32,
    case: CharCase,
    formula: MotiveExpr,
    #[serde(skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
}

fn tables(a: &TablesArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let gs = parse_range("--g-range", &a.g_range).map_err(Failure::Usage)?;
    let bs = parse_range("--b-range", &a.b_range).map_err(Failure::Usage)?;
    let ss = parse_range("--s-range", &a.s_range).map_err(Failure::Usage)?;
    let rs = parse_range("--r-range", &a.r_range).map_err(Failure::Usage)?;
    let mut cells = Vec::new();
    for &g in &gs {
        for &b in &bs {
            for &r in &rs {
                for &s in &ss {
                    let ns = NodeSurface::single_point(g, b).map_err(|e| topo_failure("--b-range", e))?;
                    let eigs = (1..=s).map(|i| ExactScalar::generic(format!("x{i}"))).collect();
                    let par = ParabolicStructure { t: 0, r_plus: r, r_minus: 0, eigenvalues: eigs };
                    let route: Route = a.route.into();
                    let route = match route {
                        Route::Assembled if r > 0 && s > 0 => Route::Closed,
                        other => other,
                    };
                    let rep = char(&ns, &par, route).map_err(formula_failure)?;
                    let formula = rep.closed_form.clone().or_else(|| rep.assembled.clone()).expect("a route ran");
                    cells.push(Cell { g, b, r, s, case: rep.case, formula, agrees: rep.agrees });
                }
            }
        }
    }
    let body = match a.format {
        Format::Json => json_line(&json!({
            "command": "tables",
            "input": { "g": gs, "b": bs, "r": rs, "s": ss, "route": Route::from(a.route) },
            "cells": cells,
        })),
        Format::Plain => cells
            .iter()
            .map(|c| format!("g={} b={} r={} s={}: {}", c.g, c.b, c.r, c.s, c.formula.to_plain()))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Latex => {
            let mut t = String::from("\\begin{tabular}{rrrrl}\n$g$ & $b$ & $r$ & $s$ & $[\\mathrm{Char}]$ \\\\\n\\hline\n");
            for c in &cells {
                t += &format!("{} & {} & {} & {} & ${}$ \\\\\n", c.g, c.b, c.r, c.s, c.formula.to_latex());
            }
            t + "\\end{tabular}"
        }
    };
    let _ = writeln!(out, "{body}");
    Ok(EXIT_OK)
}

fn meta_line(err: &mut dyn Write) {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let _ = writeln!(err, "nodevar {} generated_at_unix={secs}", env!("CARGO_PKG_VERSION"));
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let (res, meta) = match &cli.command {
        Command::Compute(a) => (compute(a, out), a.meta),
        Command::Verify(a) => (run_verify(a, out), a.meta),
        Command::Tables(a) => (tables(a, out), a.meta),
    };
    if meta {
        meta_line(err);
    }
    match res {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["nodevar"];
        full.extend_from_slice(args);
        let code = run(full, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("x", "1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_range("x", "2,1,2").unwrap(), vec![1, 2]);
        assert_eq!(parse_range("x", "0-1").unwrap(), vec![0, 1]);
        assert!(parse_range("x", "3..1").is_err());
        assert!(parse_range("x", "").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["compute", "--surface", "g=1"]).0, EXIT_OK);
        let (code, _, err) = call(&["compute", "--surface", "g=0"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("--surface") && err.contains("g >= 1"), "{err}");
        assert_eq!(call(&["compute", "--surface", "g=one"]).0, EXIT_USAGE);
        assert_eq!(call(&["compute", "--surface", "g=1", "--parabolic", "ss=1"]).0, EXIT_DOMAIN);
        assert_eq!(call(&["compute", "--surface", "g=1", "--format", "yaml"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn eval_at_pole_is_domain_error() {
        let (code, _, err) = call(&["compute", "--surface", "g=1", "--variety", "char", "--eval", "1"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("--eval"));
    }
}
