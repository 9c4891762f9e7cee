//! `homog`: analyze presentation files, cross-check the deciders against the
//! brute-force oracle, run reduction constructions and build isomorphisms.
//!
//! Exit codes: 0 success, 2 input error, 3 negative answer to the query
//! asked (not isomorphic, not exceptional), 4 internal disagreement.

mod crosscheck;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use homog_core::backforth::{back_and_forth, back_and_forth_symbolic};
use homog_core::deciders::{self, Verdict};
use homog_core::generators::{self, Kind, Run, Schedule, Tail};
use homog_core::oracle::{Oracle, DEFAULT_CAP};
use homog_core::presentations::json::{parse_value, presentation_to_json, structure_to_json, Input};
use homog_core::{Error, Family};
use serde_json::{json, Value};

const SCHEMA_VERSION: u64 = 1;

#[derive(Parser)]
#[command(name = "homog", version, about = "Ultrahomogeneity of countable structures from finite presentations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the main artifact here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide uh, wuh, cc and Δ⁰₂ for a presentation or finite structure file.
    Analyze { path: PathBuf },
    /// Compare oracle and decider on every structure of a family up to a size.
    Crosscheck {
        #[arg(long)]
        family: String,
        /// Number of relations, for nested-eq.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per size above the exhaustive threshold.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Where a reproducer goes on disagreement.
        #[arg(long, default_value = "crosscheck-reproducer.json")]
        reproducer: PathBuf,
    },
    /// Run a reduction construction for a number of stages.
    Generate {
        kind: String,
        /// JSON file of `[element, stage]` pairs; a list of such lists for INJ_DEGREES.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        stages: u64,
        /// Check the invariants at every stage, and growth between stages.
        #[arg(long)]
        check_all: bool,
        /// Also report the limit structure for this reading of the schedule's tail.
        #[arg(long)]
        tail: Option<String>,
    },
    /// Build an isomorphism between two files by back-and-forth.
    Backforth {
        a: PathBuf,
        b: PathBuf,
        /// Pairs to produce for symbolic presentations.
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Test whether a set of elements is exceptional in a finite structure.
    Exceptional {
        path: PathBuf,
        /// Comma-separated element indices.
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

/// A failure that ends the command.
enum Failure {
    Core(Error),
    Io { path: PathBuf, message: String },
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::NoIsomorphism { .. }) => 3,
            _ => 2,
        }
    }

    fn to_json(&self) -> Value {
        let err = match self {
            Failure::Core(e) => {
                let mut v = json!({"kind": e.kind(), "message": e.to_string()});
                match e {
                    Error::Input { path, .. } => v["path"] = json!(path),
                    Error::NoIsomorphism { prefix } => v["prefix"] = json!(prefix),
                    _ => {}
                }
                v
            }
            Failure::Io { path, message } => json!({"kind": "io", "path": path, "message": message}),
            Failure::Usage(m) => json!({"kind": "usage", "message": m}),
        };
        json!({"schema_version": SCHEMA_VERSION, "error": err})
    }
}

/// What a command produced: the JSON artifact, its text summary, an exit code.
struct Done {
    value: Value,
    text: String,
    code: u8,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io {
        path: path.into(),
        message: e.to_string(),
    })?;
    let v: Value = serde_json::from_str(&text).map_err(|e| {
        Error::input(
            format!("{}: line {} column {}", path.display(), e.line(), e.column()),
            e.to_string(),
        )
    })?;
    if let Some(sv) = v.get("schema_version") {
        if sv.as_u64() != Some(SCHEMA_VERSION) {
            return Err(Error::input("$.schema_version", format!("unsupported schema version {sv}")).into());
        }
    }
    Ok(v)
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let v = read_json(path)?;
    parse_value(&v).map_err(|e| match e {
        Error::Input { path: p, message } => Error::Input {
            path: format!("{}: {p}", path.display()),
            message,
        }
        .into(),
        e => e.into(),
    })
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Unknown => "unknown",
        Verdict::NotApplicable => "n/a",
    }
}

fn analyze(path: &Path) -> Result<Done, Failure> {
    let input = read_input(path)?;
    let report = deciders::analyze(&input.presentation()?)?;
    let mut value = json!({"schema_version": SCHEMA_VERSION, "command": "analyze", "report": report});
    let mut text = format!(
        "family {}\nuh {}\nwuh {}\ncc {}\ndelta2 {}\n",
        report.family,
        verdict_word(report.uh),
        verdict_word(report.wuh),
        verdict_word(report.cc),
        verdict_word(report.delta2)
    );
    for (i, e) in report.minimal_exceptional.iter().enumerate() {
        text += &format!("minimal exceptional {}: {}\n", i + 1, serde_json::to_string(e).unwrap_or_default());
    }
    let mut code = 0;
    // A finite structure small enough for the oracle gets a second opinion.
    if let Input::Structure(s) = &input {
        if s.size() <= DEFAULT_CAP {
            let o = Oracle::default().is_uh(s)?;
            value["oracle"] = json!(o);
            text += &format!("oracle uh {}\n", if o.holds { "yes" } else { "no" });
            if report.uh.as_bool().is_some_and(|d| d != o.holds) {
                code = 4;
            }
        }
    }
    if let Some(v) = report.implication_violation() {
        value["violation"] = json!(v);
        code = 4;
    }
    Ok(Done { value, text, code })
}

fn parse_family(name: &str, arity: usize) -> Result<Family, Failure> {
    Family::parse(name, Some(arity)).map_err(|e| match e {
        Error::Input { message, .. } => Error::input("--family", message).into(),
        e => e.into(),
    })
}

#[allow(clippy::too_many_arguments)]
fn crosscheck(
    family: &str,
    arity: usize,
    cap: usize,
    seed: u64,
    samples: usize,
    jobs: usize,
    reproducer: &Path,
) -> Result<Done, Failure> {
    let f = parse_family(family, arity)?;
    let rows = crosscheck::run(f, cap, seed, samples, jobs)?;
    let mut table = Vec::new();
    let mut text = String::new();
    let (mut total, mut bad, mut undecided) = (0, 0, 0);
    let mut first = None;
    for r in &rows {
        let dis = r.outcomes.iter().filter(|o| o.disagrees()).count();
        let und = r.outcomes.iter().filter(|o| o.decider.as_bool().is_none()).count();
        let uh = r.outcomes.iter().filter(|o| o.oracle).count();
        total += r.outcomes.len();
        bad += dis;
        undecided += und;
        if first.is_none() {
            first = r.outcomes.iter().find(|o| o.disagrees());
        }
        table.push(json!({
            "n": r.n,
            "mode": if r.sampled { "sampled" } else { "exhaustive" },
            "instances": r.outcomes.len(),
            "oracle_uh": uh,
            "disagreements": dis,
            "undecided": und,
        }));
        text += &format!(
            "n={:<2} {:<10} instances {:>5}  uh {:>5}  disagreements {}  undecided {}\n",
            r.n,
            if r.sampled { "sampled" } else { "exhaustive" },
            r.outcomes.len(),
            uh,
            dis,
            und
        );
    }
    let mut value = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "crosscheck",
        "family": f.to_string(),
        "cap": cap,
        "seed": seed,
        "exhaustive_up_to": crosscheck::exhaustive_limit(f).min(cap),
        "sizes": table,
        "instances": total,
        "disagreements": bad,
        "undecided": undecided,
    });
    text += &format!("total {total} instances, {bad} disagreements, {undecided} undecided\n");
    let mut code = 0;
    if let Some(o) = first {
        let mut rep = structure_to_json(&o.structure);
        rep["schema_version"] = json!(SCHEMA_VERSION);
        rep["reproducer"] = json!({
            "size": o.n,
            "index": o.index,
            "oracle_uh": o.oracle,
            "decider_uh": o.decider,
            "counterexample": o.counterexample,
        });
        write_file(reproducer, &rep)?;
        value["reproducer"] = json!(reproducer);
        text += &format!("reproducer written to {}\n", reproducer.display());
        code = 4;
    }
    Ok(Done { value, text, code })
}

/// Reads one schedule, or a list of them for INJ_DEGREES.
fn read_schedules(path: Option<&Path>, kind: Kind) -> Result<Vec<Schedule>, Failure> {
    let Some(path) = path else {
        return Ok(vec![Schedule::empty()]);
    };
    let v = read_json(path)?;
    let v = v.get("events").cloned().unwrap_or(v);
    let one = |v: &Value, at: &str| -> Result<Schedule, Failure> {
        let events: Vec<(u64, u64)> =
            serde_json::from_value(v.clone()).map_err(|e| Error::input(at, e.to_string()))?;
        Schedule::new(events).map_err(|e| match e {
            Error::Input { path, message } => Error::input(format!("{at}.{path}"), message).into(),
            e => e.into(),
        })
    };
    let nested = v
        .as_array()
        .and_then(|a| a.first())
        .and_then(|e| e.as_array())
        .and_then(|e| e.first())
        .is_some_and(Value::is_array);
    if kind == Kind::InjDegrees && nested {
        v.as_array()
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, w)| one(w, &format!("$[{i}]")))
            .collect()
    } else {
        Ok(vec![one(&v, "$")?])
    }
}

fn generate(kind: &str, schedule: Option<&Path>, stages: u64, check_all: bool, tail: Option<&str>) -> Result<Done, Failure> {
    let kind = Kind::parse(kind)?;
    let ws = read_schedules(schedule, kind)?;
    let mut violations = Vec::new();
    let snap = if ws.len() > 1 {
        let snap = generators::build_inj_degrees(ws.len() - 1, &ws, stages)?;
        violations.extend(generators::check_inj_degrees(&snap, &ws)?.violations);
        snap
    } else {
        let w = &ws[0];
        let mut run = Run::new(kind, w)?;
        let mut prev = run.snapshot()?;
        if check_all {
            violations.extend(stage_violations(kind, &prev, w)?);
        }
        while run.stage() < stages {
            run.step();
            if check_all || run.stage() == stages {
                let next = run.snapshot()?;
                if check_all {
                    violations.extend(generators::check_growth(&prev, &next).into_iter().map(|v| format!("stage {}: {v}", next.stage)));
                }
                violations.extend(stage_violations(kind, &next, w)?);
                prev = next;
            }
        }
        if !check_all {
            violations = stage_violations(kind, &prev, w)?;
        }
        prev
    };
    let mut value = snap.to_json();
    value["schema_version"] = json!(SCHEMA_VERSION);
    value["invariants"] = json!({"holds": violations.is_empty(), "violations": violations});
    let mut text = format!(
        "{} stage {}: {} elements, invariants {}\n",
        kind,
        snap.stage,
        snap.structure.size(),
        if violations.is_empty() { "hold" } else { "FAIL" }
    );
    for v in &violations {
        text += &format!("  {v}\n");
    }
    if let Some(t) = tail {
        if ws.len() > 1 {
            return Err(Error::Unsupported("limits of INJ_DEGREES".into()).into());
        }
        let p = generators::limit_presentation(kind, &ws[0], Tail::parse(t)?)?;
        let r = deciders::analyze(&p)?;
        text += &format!("limit uh {} wuh {}\n", verdict_word(r.uh), verdict_word(r.wuh));
        value["limit"] = json!({"tail": t, "presentation": presentation_to_json(&p), "uh": r.uh, "wuh": r.wuh});
    }
    let code = if violations.is_empty() { 0 } else { 4 };
    Ok(Done { value, text, code })
}

fn stage_violations(kind: Kind, snap: &generators::StageSnapshot, w: &Schedule) -> Result<Vec<String>, Failure> {
    let c = generators::check_stage_invariants(kind, snap, w)?;
    Ok(c.violations.into_iter().map(|v| format!("stage {}: {v}", snap.stage)).collect())
}

fn backforth(a: &Path, b: &Path, n: usize) -> Result<Done, Failure> {
    let (x, y) = (read_input(a)?, read_input(b)?);
    let sched = match (&x, &y) {
        (Input::Structure(s), Input::Structure(t)) => back_and_forth(s, t)?,
        (Input::Presentation(p), Input::Presentation(q)) => {
            back_and_forth_symbolic(p, q, n).map_err(|e| match e {
                // The only precondition is that the two sides are isomorphic.
                Error::Precondition(_) => Error::NoIsomorphism { prefix: vec![] },
                e => e,
            })?
        }
        _ => {
            return Err(Error::input("b", "both files must be finite structures, or both presentations").into());
        }
    };
    let text = format!(
        "{} pairs, all verified: {}\n",
        sched.pairs.len(),
        sched.verified.iter().all(|&v| v)
    );
    let value = json!({"schema_version": SCHEMA_VERSION, "command": "backforth", "schedule": sched});
    Ok(Done { value, text, code: 0 })
}

fn exceptional(path: &Path, set: &[usize], cap: usize) -> Result<Done, Failure> {
    let Input::Structure(s) = read_input(path)? else {
        return Err(Error::input("$", "exceptional takes a finite structure file").into());
    };
    let o = Oracle::with_cap(cap)?.is_exceptional(&s, set)?;
    let mut value = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "exceptional",
        "set": set,
        "oracle": o,
    });
    let mut code = if o.holds { 0 } else { 3 };
    if s.family() == Family::TreePo {
        let c = deciders::tree_po::is_exceptional_tree_po_finite(&s, set)?;
        value["predicate"] = json!(c);
        if c.holds != o.holds {
            code = 4;
        }
    }
    let text = format!("exceptional {}\n", if o.holds { "yes" } else { "no" });
    Ok(Done { value, text, code })
}

fn write_file(path: &Path, v: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    std::fs::write(path, s).map_err(|e| Failure::Io {
        path: path.into(),
        message: e.to_string(),
    })
}

fn run(cli: &Cli) -> Result<Done, Failure> {
    match &cli.command {
        Command::Analyze { path } => analyze(path),
        Command::Crosscheck {
            family,
            arity,
            cap,
            seed,
            samples,
            jobs,
            reproducer,
        } => crosscheck(family, *arity, *cap, *seed, *samples, *jobs, reproducer),
        Command::Generate {
            kind,
            schedule,
            stages,
            check_all,
            tail,
        } => generate(kind, schedule.as_deref(), *stages, *check_all, tail.as_deref()),
        Command::Backforth { a, b, n } => backforth(a, b, *n),
        Command::Exceptional { path, set, cap } => exceptional(path, set, *cap),
    }
}

/// Writes to stdout; a closed pipe is not an error worth a panic.
fn emit(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let f = Failure::Usage(e.to_string().trim_end().to_string());
            eprintln!("{}", f.to_json());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(done) => {
            let shown = match &cli.out {
                Some(p) => match write_file(p, &done.value) {
                    Ok(()) => None,
                    Err(f) => {
                        eprintln!("{}", f.to_json());
                        return ExitCode::from(f.code());
                    }
                },
                None => Some(&done.value),
            };
            match (cli.format, shown) {
                (Format::Text, _) => emit(&done.text),
                (Format::Json, Some(v)) => emit(&(serde_json::to_string_pretty(v).expect("serializable") + "\n")),
                (Format::Json, None) => {}
            }
            ExitCode::from(done.code)
        }
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code())
        }
    }
}
