//! The `psu4d` command line.
//!
//! Exit codes: 0 success, 1 verified mismatch or violation, 2 usage or parse
//! error, 3 I/O error. JSON reports have sorted keys and exact integers, so
//! two runs with `--no-timestamp` are byte-identical.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::designs::{
    are_isomorphic, build, complement, flags, read_design_file, to_design_string, verify_symmetric, DesignFileError,
    DesignKind, IncidenceStructure,
};
use crate::permgroup::groups::{design_action, identify, Variant};
use crate::permgroup::{induce_block_action, is_flag_transitive, is_primitive, is_transitive, stabilizer_orbit_sizes};
use crate::sieve::tables::{table, TableContent, TableId};
use crate::sieve::{scan, CaseOutcome, ScanReport, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "psu4d", version, about = "Flag-transitive symmetric designs with socle PSU4(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct JsonOut {
    /// Also write a JSON report to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Leave the timestamp out of the JSON report.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the arithmetic sieve over the subgroup catalog.
    Sieve {
        /// Catalog line 1..16, or `all`.
        #[arg(long, default_value = "all")]
        line: String,
        #[arg(long, default_value_t = 13)]
        pmax: u64,
        #[arg(long, default_value_t = 3)]
        amax: u32,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Recompute a bounding table and compare it with the expected content.
    Tables {
        /// One of 3, 4, 6, 7, 8, 9.
        #[arg(long)]
        table: u8,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Build, verify and write one of the four designs.
    Construct {
        kind: DesignKind,
        #[arg(long)]
        complement: bool,
        /// Design file to write; standard output if omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check that a design file holds a symmetric design.
    Verify { file: PathBuf },
    /// Decide whether two design files are isomorphic.
    Iso { first: PathBuf, second: PathBuf },
    /// Run a check on the group acting on one of the four designs.
    Group {
        #[arg(long)]
        design: DesignKind,
        #[arg(long, value_enum)]
        check: Check,
        /// Use the simple index-2 subgroup instead of the full group.
        #[arg(long)]
        simple: bool,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Flagtrans,
    Primitive,
    Order,
    Rank,
}

impl Check {
    fn name(&self) -> &'static str {
        match self {
            Check::Flagtrans => "flagtrans",
            Check::Primitive => "primitive",
            Check::Order => "order",
            Check::Rank => "rank",
        }
    }
}

/// A failure that ends the command with a specific exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

impl From<DesignFileError> for Failure {
    fn from(e: DesignFileError) -> Self {
        let code = match e {
            DesignFileError::Io { .. } => EXIT_IO,
            DesignFileError::Parse { .. } => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let echo = command_echo(&args);
    let mut text = String::new();
    let mut diag = String::new();
    let result = dispatch(cli.command, &echo, &mut text, &mut diag);
    let _ = out.write_all(text.as_bytes());
    let _ = err.write_all(diag.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn command_echo(args: &[OsString]) -> String {
    let parts: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    parts.join(" ")
}

fn dispatch(cmd: Command, echo: &str, out: &mut String, diag: &mut String) -> Result<i32, Failure> {
    match cmd {
        Command::Sieve { line, pmax, amax, out: json } => cmd_sieve(&line, pmax, amax, &json, echo, out),
        Command::Tables { table, out: json } => cmd_tables(table, &json, echo, out),
        Command::Construct { kind, complement, out: path } => cmd_construct(kind, complement, path.as_deref(), out, diag),
        Command::Verify { file } => cmd_verify(&file, out),
        Command::Iso { first, second } => cmd_iso(&first, &second, out),
        Command::Group { design, check, simple, out: json } => cmd_group(design, check, simple, &json, echo, out),
    }
}

fn big(n: &BigUint) -> Value {
    // Exact for any size with serde_json's arbitrary precision numbers.
    serde_json::from_str(&n.to_string()).expect("decimal integer is valid JSON")
}

fn envelope(command: &str, json: &JsonOut, payload: Map<String, Value>) -> Value {
    let mut m = payload;
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    if !json.no_timestamp {
        let ts = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        m.insert("timestamp".into(), json!(ts));
    }
    Value::Object(m)
}

fn write_json(json: &JsonOut, command: &str, payload: Map<String, Value>) -> Result<(), Failure> {
    if let Some(path) = &json.json {
        let mut s = serde_json::to_string_pretty(&envelope(command, json, payload)).expect("serializable");
        s.push('\n');
        std::fs::write(path, s).map_err(|e| Failure::io(path, e))?;
    }
    Ok(())
}

fn outcome_json(o: &CaseOutcome) -> Value {
    let mut m = Map::new();
    m.insert("line".into(), json!(o.line()));
    m.insert("q".into(), json!(o.q().q()));
    m.insert("p".into(), json!(o.q().p()));
    m.insert("a".into(), json!(o.q().a()));
    if let Some(s) = o.case.subfield {
        m.insert("q0".into(), json!(s.q0.q()));
    }
    m.insert("v".into(), big(&o.v));
    m.insert("k_bound".into(), big(&o.k_bound));
    m.insert("status".into(), json!(o.status));
    if let Some(r) = o.reason {
        m.insert("reason".into(), json!(r));
    }
    let rejected: Map<String, Value> = o
        .rejection_counts()
        .into_iter()
        .map(|(r, n)| (r.code().to_string(), json!(n)))
        .collect();
    m.insert("rejected".into(), Value::Object(rejected));
    let candidates: Vec<Value> = o
        .candidates
        .iter()
        .map(|c| {
            let mut t = Map::new();
            t.insert("square_root".into(), big(&c.trace.square_root));
            if let Some(g) = &c.trace.tits_gcd {
                t.insert("tits_gcd".into(), big(g));
            }
            let sub: Vec<Value> = c
                .trace
                .subdegree
                .iter()
                .map(|s| json!({"divisor": big(&s.divisor), "applied": big(&s.applied), "multiplier": big(&s.multiplier)}))
                .collect();
            t.insert("subdegree".into(), Value::Array(sub));
            if let Some(n) = &c.trace.note {
                t.insert("note".into(), json!(n));
            }
            json!({
                "k": big(c.params.k()),
                "lambda": big(c.params.lambda()),
                "status": c.status,
                "trace": Value::Object(t),
            })
        })
        .collect();
    m.insert("candidates".into(), Value::Array(candidates));
    Value::Object(m)
}

fn sieve_summary(r: &ScanReport, out: &mut String) {
    let lines = r.line_filter.map_or("all".to_string(), |l| l.to_string());
    let _ = writeln!(
        out,
        "sieve: line {lines}, p <= {}, a <= {}: {} cases",
        r.p_max,
        r.a_max,
        r.outcomes.len()
    );
    for (title, status) in [("survivors", Status::Survivor), ("unresolved", Status::Unresolved)] {
        let _ = writeln!(out, "{title}:");
        let mut any = false;
        for o in &r.outcomes {
            for c in o.candidates.iter().filter(|c| c.status == status) {
                any = true;
                let _ = write!(out, "  line {:>2}  q={:<6} {}", o.line(), o.q().q(), c.params);
                match &c.trace.note {
                    Some(n) if status == Status::Unresolved => {
                        let _ = writeln!(out, "  [{n}]");
                    }
                    _ => out.push('\n'),
                }
            }
        }
        if !any {
            let _ = writeln!(out, "  none");
        }
    }
    let eliminated: Vec<&CaseOutcome> = r.outcomes.iter().filter(|o| o.status == Status::Eliminated).collect();
    let mut by_reason = std::collections::BTreeMap::new();
    for o in &eliminated {
        *by_reason.entry(o.reason.expect("eliminated cases carry a reason")).or_insert(0usize) += 1;
    }
    let parts: Vec<String> = by_reason.iter().map(|(r, n)| format!("{r}: {n}")).collect();
    let _ = writeln!(out, "eliminated: {} cases ({})", eliminated.len(), parts.join(", "));
}

fn cmd_sieve(line: &str, pmax: u64, amax: u32, json: &JsonOut, echo: &str, out: &mut String) -> Result<i32, Failure> {
    let line = match line {
        "all" => None,
        s => match s.parse::<u8>() {
            Ok(l @ 1..=16) => Some(l),
            _ => return Err(Failure::usage(format!("--line must be 1..16 or all, got {s:?}"))),
        },
    };
    if pmax < 2 || amax < 1 {
        return Err(Failure::usage("need --pmax >= 2 and --amax >= 1"));
    }
    let report = scan(pmax, amax, line).map_err(|e| Failure { code: EXIT_MISMATCH, message: e.to_string() })?;
    sieve_summary(&report, out);
    let mut payload = Map::new();
    payload.insert("p_max".into(), json!(pmax));
    payload.insert("a_max".into(), json!(amax));
    payload.insert("line".into(), line.map_or(json!("all"), |l| json!(l)));
    payload.insert("outcomes".into(), Value::Array(report.outcomes.iter().map(outcome_json).collect()));
    write_json(json, echo, payload)?;
    Ok(EXIT_OK)
}

fn table_json(content: &TableContent) -> Value {
    match content {
        TableContent::PointsAndBounds(rows) => {
            Value::Array(rows.iter().map(|(q, v, kb)| json!({"q": q, "v": big(v), "k_bound": big(kb)})).collect())
        }
        TableContent::Caps(m) => Value::Array(m.iter().map(|(p, a)| json!({"p": p, "a_max": a})).collect()),
        TableContent::EvenSp4 { rows, exponents } => json!({
            "rows": rows.iter().map(|(q, v, m)| json!({"q": q, "v": big(v), "m_bound": m})).collect::<Vec<_>>(),
            "exponents": exponents,
        }),
        TableContent::Cube(m) => Value::Array(m.iter().map(|(l, qs)| json!({"line": l, "q": qs})).collect()),
    }
}

fn cmd_tables(n: u8, json: &JsonOut, echo: &str, out: &mut String) -> Result<i32, Failure> {
    let id = TableId::from_number(n).ok_or_else(|| Failure::usage(format!("unknown table {n}; expected 3, 4, 6, 7, 8 or 9")))?;
    let report = table(id);
    out.push_str(&report.render());
    let verdict = if report.matches() { "matches" } else { "DIFFERS" };
    let _ = writeln!(out, "{id}: {verdict}");
    let mut payload = Map::new();
    payload.insert("table".into(), json!(n));
    payload.insert("matches".into(), json!(report.matches()));
    payload.insert("content".into(), table_json(&report.content));
    payload.insert("diffs".into(), json!(report.diffs));
    payload.insert("annotations".into(), json!(report.annotations));
    write_json(json, echo, payload)?;
    Ok(if report.matches() { EXIT_OK } else { EXIT_MISMATCH })
}

/// With `--out` the parameters go to standard output; without it standard
/// output carries the design file itself and the parameters go to stderr.
fn cmd_construct(
    kind: DesignKind,
    comp: bool,
    path: Option<&Path>,
    out: &mut String,
    diag: &mut String,
) -> Result<i32, Failure> {
    let base = build(kind);
    let d = if comp { complement(&base) } else { base };
    let params = match verify_symmetric(&d) {
        Ok(p) => p,
        Err(v) => {
            let _ = writeln!(out, "violation: {v}");
            return Ok(EXIT_MISMATCH);
        }
    };
    let name = if comp { format!("complement of {kind}") } else { kind.to_string() };
    match path {
        Some(p) => {
            std::fs::write(p, to_design_string(&d)).map_err(|e| Failure::io(p, e))?;
            let _ = writeln!(out, "{name}: {params} written to {}", p.display());
        }
        None => {
            out.push_str(&to_design_string(&d));
            let _ = writeln!(diag, "{name}: {params}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(file: &Path, out: &mut String) -> Result<i32, Failure> {
    let d = read_design_file(file)?;
    match verify_symmetric(&d) {
        Ok(p) => {
            let _ = writeln!(out, "symmetric design {p}");
            Ok(EXIT_OK)
        }
        Err(v) => {
            let _ = writeln!(out, "violation: {v}");
            Ok(EXIT_MISMATCH)
        }
    }
}

fn verified(path: &Path, out: &mut String) -> Result<Option<IncidenceStructure>, Failure> {
    let d = read_design_file(path)?;
    match verify_symmetric(&d) {
        Ok(_) => Ok(Some(d)),
        Err(v) => {
            let _ = writeln!(out, "{}: violation: {v}", path.display());
            Ok(None)
        }
    }
}

fn cmd_iso(first: &Path, second: &Path, out: &mut String) -> Result<i32, Failure> {
    let (Some(d1), Some(d2)) = (verified(first, out)?, verified(second, out)?) else {
        return Ok(EXIT_MISMATCH);
    };
    match are_isomorphic(&d1, &d2) {
        Some(iso) => {
            let _ = writeln!(out, "yes");
            let pts: Vec<String> = iso.points.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "points: {}", pts.join(" "));
            let blocks: Vec<String> = iso.blocks.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "blocks: {}", blocks.join(" "));
        }
        None => {
            let _ = writeln!(out, "no");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_group(
    kind: DesignKind,
    check: Check,
    simple: bool,
    json: &JsonOut,
    echo: &str,
    out: &mut String,
) -> Result<i32, Failure> {
    let variant = if simple { Variant::Simple } else { Variant::Full };
    let internal = |e: crate::permgroup::GroupError| Failure { code: EXIT_MISMATCH, message: e.to_string() };
    let action = design_action(kind, variant).map_err(internal)?;
    let mut payload = Map::new();
    payload.insert("design".into(), json!(kind.name()));
    payload.insert("check".into(), json!(check.name()));
    payload.insert("variant".into(), json!(if simple { "simple" } else { "full" }));
    payload.insert("degree".into(), json!(action.degree()));
    let code = match check {
        Check::Order => {
            let (n, name) = identify(&action).map_err(internal)?;
            let _ = writeln!(out, "{kind}: order {n} ({name})");
            payload.insert("order".into(), big(&n));
            payload.insert("group".into(), json!(name.to_string()));
            EXIT_OK
        }
        Check::Primitive => {
            let ok = is_primitive(&action).map_err(internal)?;
            let _ = writeln!(out, "{kind}: primitive: {}", yes_no(ok));
            payload.insert("result".into(), json!(ok));
            if ok { EXIT_OK } else { EXIT_MISMATCH }
        }
        Check::Rank => {
            if !is_transitive(&action) {
                return Err(internal(crate::permgroup::GroupError::NotTransitive));
            }
            let sizes = stabilizer_orbit_sizes(&action, 0).map_err(internal)?;
            let list: Vec<String> = sizes.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{kind}: rank {}, subdegrees {}", sizes.len(), list.join(" "));
            payload.insert("rank".into(), json!(sizes.len()));
            payload.insert("subdegrees".into(), json!(sizes));
            EXIT_OK
        }
        Check::Flagtrans => {
            let comp = kind.flag_transitive_on_complement();
            let d = if comp { complement(&build(kind)) } else { build(kind) };
            let blocks = induce_block_action(&action, &d).map_err(internal)?;
            let ok = is_flag_transitive(&action, &d, &blocks).map_err(internal)?;
            let (n, name) = identify(&action).map_err(internal)?;
            let nflags = flags(&d).len();
            let on = if comp { format!("complement of {kind}") } else { kind.to_string() };
            let _ = writeln!(out, "{on}: flag-transitive: {} ({nflags} flags, |G| = {n}, {name})", yes_no(ok));
            payload.insert("result".into(), json!(ok));
            payload.insert("complement".into(), json!(comp));
            payload.insert("flags".into(), json!(nflags));
            payload.insert("order".into(), big(&n));
            if ok { EXIT_OK } else { EXIT_MISMATCH }
        }
    };
    write_json(json, echo, payload)?;
    Ok(code)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
