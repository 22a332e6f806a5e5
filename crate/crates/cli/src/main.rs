//! `ogq`: run the verifications of the `ogq-core` library from the shell.
//!
//! Every command prints a JSON report `{command, inputs, status, details}`
//! (plus `timing` with `--timing`). Exit codes: 0 pass, 1 verification
//! failure, 2 usage or guard error. When `OGQ_REPORT_DIR` is set the report is
//! also written there as `<command>.json`.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ogq_core::pfaffian::verify_thm23;
use ogq_core::rewrite::{verify_veronese_equality, ReductionSystem, SymMinorIdeal, SystemCase};
use ogq_core::ringcheck::{verify_lemma51, verify_prop11, verify_thm51, GradedDims, Grading, QuotientCase};
use ogq_core::straighten::{verify_lemma52, verify_lemma53};
use ogq_core::weyl::{self, bruhat_leq, enumerate_wp, minimal_semistable, v_tuple, v_word, WeylElement};
use ogq_core::{CosetTuple, Error, Guard, RankParam, Status};

#[derive(Parser)]
#[command(name = "ogq", version, about = "Exact checks for torus quotients of spin Schubert varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weyl group and coset computations.
    Weyl {
        #[command(subcommand)]
        sub: WeylCmd,
    },
    /// Run one verification.
    Verify {
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Hilbert function of the invariant ring on `X(v)`.
    Hilbert {
        /// Grading: `4lambda` (degree k is R_2k) or `2lambda`.
        #[arg(long, default_value = "4lambda")]
        grading: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// One-line notation of the selected element.
    OneLine {
        #[command(flatten)]
        common: Common,
    },
    /// The selected element as a `W^P` index tuple.
    Coset {
        #[command(flatten)]
        common: Common,
    },
    /// Is `x <= y` in the Bruhat order?
    Bruhat {
        x: String,
        y: String,
        #[command(flatten)]
        common: Common,
    },
    /// Every element of `W^P`.
    Enumerate {
        #[command(flatten)]
        common: Common,
    },
    /// The Bruhat-minimal `w` with `w(λ) <= 0`.
    Minimal {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Target {
    Thm23,
    Lemma51,
    Lemma52,
    Lemma53,
    Thm51,
    Prop11,
    Diamond,
    Veronese,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Args, Clone, Debug, Serialize)]
struct Common {
    /// Rank parameter: the group is SO(8n+4).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Largest degree examined.
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    /// Schubert variety: `v1`..`v6` or an explicit tuple such as `2,4,7,8,10,12`.
    #[arg(long)]
    v: Option<String>,
    /// Case selector (`i`..`v`, `1`..`3`, or `P1`..`P3`, depending on the target).
    #[arg(long)]
    case: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Lift the resource limits on `n` and degree.
    #[arg(long)]
    guard_override: bool,
    /// Rules file for `verify diamond`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rules: Option<PathBuf>,
    /// Include wall-clock timing (makes output non-reproducible).
    #[arg(long)]
    #[serde(skip)]
    timing: bool,
}

impl Common {
    fn rank(&self) -> Result<RankParam, Failure> {
        RankParam::new(self.n).map_err(Failure::usage)
    }

    fn guard(&self) -> Guard {
        if self.guard_override {
            Guard::unbounded()
        } else {
            Guard::default()
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: String,
    inputs: Value,
    status: Status,
    details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Value>,
}

/// What a command produced: status, JSON details, and a text rendering.
struct Outcome {
    status: Status,
    details: Value,
    text: String,
    csv: Option<String>,
}

impl Outcome {
    fn pass(details: Value, text: String) -> Self {
        Outcome { status: Status::Pass, details, text, csv: None }
    }

    fn report<T: Serialize>(status: Status, details: &T) -> Result<Self, Failure> {
        let details = serde_json::to_value(details).map_err(|e| Failure::internal(e.to_string()))?;
        let text = serde_json::to_string_pretty(&details).map_err(|e| Failure::internal(e.to_string()))?;
        Ok(Outcome { status, details, text, csv: None })
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure { code: 2, message: e.to_string() }
    }

    fn internal(message: String) -> Self {
        Failure { code: 1, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GuardExceeded(_)
            | Error::Parse(_)
            | Error::InvalidRank
            | Error::InvalidTuple(_)
            | Error::InvalidCompressedRow(_)
            | Error::IndexOutOfRange { .. }
            | Error::UnknownGenerator(_)
            | Error::Rewrite(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn parse_selector(s: &str, rank: RankParam) -> Result<CosetTuple, Failure> {
    let s = s.trim();
    if let Some(i) = s.strip_prefix('v').or_else(|| s.strip_prefix('V')) {
        let i: usize = i.parse().map_err(|_| Failure::usage(format!("bad selector {s:?}")))?;
        return Ok(v_tuple(i, rank)?);
    }
    let entries = s
        .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Failure::usage(format!("bad tuple entry {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let t = CosetTuple::new(entries)?;
    if !t.is_wp(rank) {
        return Err(Failure::usage(format!("{t} is not a W^P tuple for n = {}", rank.n())));
    }
    Ok(t)
}

fn selected(common: &Common, rank: RankParam) -> Result<CosetTuple, Failure> {
    parse_selector(common.v.as_deref().unwrap_or("v1"), rank)
}

fn run_weyl(sub: &WeylCmd) -> Result<(String, Common, Value, Outcome), Failure> {
    match sub {
        WeylCmd::OneLine { common } => {
            let rank = common.rank()?;
            let sel = common.v.clone().unwrap_or_else(|| "v1".into());
            // named elements go through their reduced words
            let w = match sel.strip_prefix('v').and_then(|i| i.parse::<usize>().ok()) {
                Some(i) => WeylElement::from_word(&v_word(i, rank)?, rank)?,
                None => parse_selector(&sel, rank)?.to_element(rank)?,
            };
            let one_line = w.one_line().to_vec();
            let text = format!("({})", join(&one_line));
            Ok(("weyl one-line".into(), common.clone(), json!({ "one_line": one_line, "coset": w.coset_rep() }), Outcome::pass(Value::Null, text)))
        }
        WeylCmd::Coset { common } => {
            let rank = common.rank()?;
            let t = selected(common, rank)?;
            Ok(("weyl coset".into(), common.clone(), json!({ "coset": t }), Outcome::pass(Value::Null, t.to_string())))
        }
        WeylCmd::Bruhat { x, y, common } => {
            let rank = common.rank()?;
            let (tx, ty) = (parse_selector(x, rank)?, parse_selector(y, rank)?);
            let leq = bruhat_leq(&tx, &ty);
            Ok((
                "weyl bruhat".into(),
                common.clone(),
                json!({ "x": tx, "y": ty, "leq": leq }),
                Outcome::pass(Value::Null, leq.to_string()),
            ))
        }
        WeylCmd::Enumerate { common } => {
            let rank = common.rank()?;
            let all = enumerate_wp(rank, &common.guard())?;
            let text = all.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            Ok(("weyl enumerate".into(), common.clone(), json!({ "count": all.len(), "tuples": all }), Outcome::pass(Value::Null, text)))
        }
        WeylCmd::Minimal { common } => {
            let rank = common.rank()?;
            let t = minimal_semistable(rank, &common.guard())?;
            let semistable = weyl::is_semistable(&t, rank)?;
            Ok((
                "weyl minimal".into(),
                common.clone(),
                json!({ "minimal": t, "semistable": semistable, "equals_v1": t == v_tuple(1, rank)? }),
                Outcome::pass(Value::Null, t.to_string()),
            ))
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Runs several sub-reports and passes only if all do.
fn combine(parts: Vec<(String, Outcome)>) -> Outcome {
    let status = Status::from_bool(parts.iter().all(|(_, o)| o.status.passed()));
    let text = parts
        .iter()
        .map(|(k, o)| format!("{k}: {}", if o.status.passed() { "pass" } else { "fail" }))
        .collect::<Vec<_>>()
        .join("\n");
    let details = Value::Object(parts.into_iter().map(|(k, o)| (k, o.details)).collect());
    Outcome { status, details, text, csv: None }
}

fn run_verify(target: Target, common: &Common) -> Result<Outcome, Failure> {
    let rank = common.rank()?;
    let guard = common.guard();
    if common.kmax < 1 {
        return Err(Failure::usage("--kmax must be at least 1"));
    }
    let case = common.case.as_deref();
    match target {
        Target::Thm23 => {
            let r = verify_thm23(rank, common.seed)?;
            Outcome::report(r.status, &r)
        }
        Target::Lemma51 => {
            guard.check_n(rank.n())?;
            let r = verify_lemma51(rank, common.kmax, &guard)?;
            Outcome::report(r.status, &r)
        }
        Target::Lemma52 | Target::Lemma53 => {
            let max = if matches!(target, Target::Lemma52) { 3 } else { 2 };
            let cases: Vec<usize> = match case {
                None => (1..=max).collect(),
                Some(c) => vec![parse_roman(c, max)?],
            };
            let mut parts = Vec::new();
            for c in cases {
                let r = if matches!(target, Target::Lemma52) {
                    verify_lemma52(c, rank, common.seed, &guard)?
                } else {
                    verify_lemma53(c, rank, common.seed, &guard)?
                };
                parts.push((roman(c).to_string(), Outcome::report(r.status, &r)?));
            }
            Ok(combine(parts))
        }
        Target::Thm51 => {
            guard.check_n(rank.n())?;
            let r = verify_thm51(rank, common.kmax, &guard)?;
            Outcome::report(r.status, &r)
        }
        Target::Prop11 => {
            let cases = match case {
                None => QuotientCase::ALL.to_vec(),
                Some(c) => vec![c.parse::<QuotientCase>()?],
            };
            let mut parts = Vec::new();
            for c in cases {
                let r = verify_prop11(c, rank, common.kmax, &guard)?;
                let key = serde_json::to_value(c).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                parts.push((key, Outcome::report(r.status, &r)?));
            }
            Ok(combine(parts))
        }
        Target::Diamond => {
            if let Some(path) = &common.rules {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                let sys = ReductionSystem::parse(&text)?;
                let r = sys.check_diamond();
                return Outcome::report(r.status, &r);
            }
            let mut parts = Vec::new();
            for c in system_cases(case)? {
                let r = ReductionSystem::builtin(c).check_diamond();
                parts.push((c.to_string(), Outcome::report(r.status, &r)?));
            }
            Ok(combine(parts))
        }
        Target::Veronese => {
            let mut parts = Vec::new();
            for c in system_cases(case)? {
                let r = verify_veronese_equality(&ReductionSystem::builtin(c), &SymMinorIdeal::builtin(c), common.kmax)?;
                parts.push((c.to_string(), Outcome::report(r.status, &r)?));
            }
            Ok(combine(parts))
        }
    }
}

fn system_cases(case: Option<&str>) -> Result<Vec<SystemCase>, Failure> {
    Ok(match case {
        None => SystemCase::ALL.to_vec(),
        Some(c) => vec![c.parse()?],
    })
}

fn roman(i: usize) -> &'static str {
    ["", "i", "ii", "iii"][i]
}

fn parse_roman(s: &str, max: usize) -> Result<usize, Failure> {
    let i = match s.to_ascii_lowercase().as_str() {
        "i" | "1" => 1,
        "ii" | "2" => 2,
        "iii" | "3" => 3,
        _ => 0,
    };
    if i == 0 || i > max {
        return Err(Failure::usage(format!("case {s:?} out of range (1..={max})")));
    }
    Ok(i)
}

fn run_hilbert(grading: &str, common: &Common) -> Result<Outcome, Failure> {
    let rank = common.rank()?;
    let guard = common.guard();
    guard.check_n(rank.n())?;
    let grading: Grading = grading.parse()?;
    let v = selected(common, rank)?;
    let dims = GradedDims::compute(rank, &v, common.kmax, grading, &guard)?;
    let text = dims.dims.iter().map(|(k, d)| format!("{k}\t{d}")).collect::<Vec<_>>().join("\n");
    let csv = dims.to_csv();
    let mut out = Outcome::report(Status::Pass, &dims)?;
    out.text = text;
    out.csv = Some(csv);
    Ok(out)
}

fn execute(cli: &Cli) -> Result<(String, Common, Outcome), Failure> {
    match &cli.command {
        Command::Weyl { sub } => {
            let (name, common, details, mut out) = run_weyl(sub)?;
            out.details = details;
            Ok((name, common, out))
        }
        Command::Verify { target, common } => {
            let name = format!("verify {}", serde_json::to_value(target).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
            Ok((name, common.clone(), run_verify(*target, common)?))
        }
        Command::Hilbert { grading, common } => {
            let mut c = common.clone();
            let out = run_hilbert(grading, common)?;
            c.v = Some(c.v.unwrap_or_else(|| "v1".into()));
            Ok(("hilbert".into(), c, out))
        }
    }
}

fn common_of(cli: &Cli) -> &Common {
    match &cli.command {
        Command::Weyl { sub } => match sub {
            WeylCmd::OneLine { common }
            | WeylCmd::Coset { common }
            | WeylCmd::Bruhat { common, .. }
            | WeylCmd::Enumerate { common }
            | WeylCmd::Minimal { common } => common,
        },
        Command::Verify { common, .. } | Command::Hilbert { common, .. } => common,
    }
}

fn emit(report: &Report, out: &Outcome, format: Format) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(report).map_err(|e| Failure::internal(e.to_string()))?;
    let body = match format {
        Format::Json => format!("{json}\n"),
        Format::Text => format!("{}\nstatus: {}\n", out.text, if report.status.passed() { "pass" } else { "fail" }),
        Format::Csv => match &out.csv {
            Some(csv) => csv.clone(),
            None => return Err(Failure::usage("csv output is only available for `hilbert`")),
        },
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().write_all(body.as_bytes());
    if let Some(dir) = std::env::var_os("OGQ_REPORT_DIR") {
        let dir = PathBuf::from(dir);
        std::fs::create_dir_all(&dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
        let path = dir.join(format!("{}.json", report.command.replace(' ', "-")));
        std::fs::write(&path, json + "\n").map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let common = common_of(&cli).clone();
    let result = execute(&cli).and_then(|(command, common, out)| {
        let timing = common.timing.then(|| json!({ "seconds": start.elapsed().as_secs_f64() }));
        let inputs = serde_json::to_value(&common).map_err(|e| Failure::internal(e.to_string()))?;
        let report = Report {
            command,
            inputs,
            status: out.status,
            details: out.details.clone(),
            timing,
        };
        emit(&report, &out, common.format)?;
        Ok(report.status)
    });
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(f) => {
            if f.code == 1 && common.format == Format::Json {
                // structured failure on stdout so scripts can still parse it
                println!("{}", json!({ "status": "fail", "details": { "error": f.message } }));
            }
            eprintln!("ogq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
