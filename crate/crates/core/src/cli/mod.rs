//! The `iwadec` command line: spec files, the builtin corpus, reports.

pub mod corpus;
pub mod report;
pub mod selfcheck;
pub mod spec_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::chars::CharacterTable;
use crate::error::Error;
use crate::sk1::{verdict, Options, Status, Verdict, DEFAULT_CAP};
use report::{build_report, ReportDocument, SpecEcho, TableDocument, SCHEMA_VERSION};
use spec_file::{load_spec, LoadedSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFCHECK: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_CONDITIONAL: i32 = 10;
pub const EXIT_UNKNOWN: i32 = 11;

#[derive(Parser, Debug)]
#[command(name = "iwadec", version, about = "Wedderburn data and SK1 verdicts for truncated Iwasawa algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Spec file, or builtin:<name> for a corpus entry.
    spec: String,
    #[arg(long)]
    json: bool,
    /// Largest group order whose subgroups are enumerated.
    #[arg(long, env = "IWADEC_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Finite quotient level for the subgroup reduction (default: m).
    #[arg(long)]
    quotient_level: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character table of H.
    Table(Common),
    /// Component reports with all checks.
    Decompose(Common),
    /// SK1 verdict.
    Sk1(Common),
    /// Invariant suites over a corpus directory (default: the builtin corpus).
    Selfcheck {
        dir: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_bad_idempotent: bool,
    },
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::MalformedInput(_) => EXIT_PARSE,
        Error::ResourceLimit { .. } => EXIT_UNKNOWN,
        _ => EXIT_INTERNAL,
    }
}

pub fn exit_for_status(s: Status) -> i32 {
    match s {
        Status::Trivial => EXIT_OK,
        Status::ConditionalOnProL => EXIT_CONDITIONAL,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

/// Reads `builtin:<name>` or a file.
pub fn read_source(spec: &str) -> Result<String, String> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return corpus::builtin(name)
            .map(str::to_string)
            .ok_or_else(|| format!("no builtin spec named `{name}`"));
    }
    std::fs::read_to_string(spec).map_err(|e| format!("cannot read: {e}"))
}

fn load(spec: &str, err: &mut dyn Write) -> Result<LoadedSpec, i32> {
    let src = read_source(spec).map_err(|e| {
        let _ = writeln!(err, "{spec}: {e}");
        EXIT_PARSE
    })?;
    load_spec(&src).map_err(|e| {
        let _ = writeln!(err, "{spec}:{e}");
        EXIT_PARSE
    })
}

fn options(c: &Common, loaded: &LoadedSpec) -> Options {
    Options {
        cap: c.cap,
        quotient_level: c.quotient_level,
        q_hint: None,
        designated_s: loaded.designated_s,
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("reports serialize")
}

#[derive(Serialize)]
struct VerdictDocument<'a> {
    schema_version: u32,
    spec: SpecEcho,
    verdict: &'a Verdict,
}

fn render_verdict(v: &Verdict, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let rule = v.rule.map_or("none", |r| r.tag());
    out.push_str(&format!("{pad}{:?} [{rule}] at quotient level {}\n", v.status, v.quotient_level));
    if let Some(f) = &v.footnote {
        out.push_str(&format!("{pad}  note: {f}\n"));
    }
    if let Some(r) = &v.resource {
        out.push_str(&format!("{pad}  resource: {r}\n"));
    }
    for o in &v.obligations {
        out.push_str(&format!(
            "{pad}  obligation: SK1(Q_l(zeta_{}) (x) QU_i) = 1, U_i: |H| = {}, m = {}, alpha = {:?}\n",
            o.conductor, o.u_i.h_order, o.u_i.m, o.u_i.alpha
        ));
    }
    for n in &v.reduction_tree {
        out.push_str(&format!(
            "{pad}  subgroup <{}> of order {} ({}-elementary):\n",
            n.generators.join(", "),
            n.order,
            n.q
        ));
        render_verdict(&n.verdict, indent + 4, out);
    }
}

fn cmd_table(c: &Common, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let loaded = match load(&c.spec, err) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let h = loaded.spec.h();
    let table = match CharacterTable::new(h).and_then(|t| t.check_orthogonality().map(|_| t)) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", c.spec);
            return exit_for(&e);
        }
    };
    let doc = TableDocument::new(h, &table);
    let text = if c.json { to_json(&doc) } else { doc.render() };
    let _ = writeln!(out, "{}", text.trim_end());
    EXIT_OK
}

fn cmd_decompose(c: &Common, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let loaded = match load(&c.spec, err) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let mut doc = ReportDocument::empty(SpecEcho::new(&c.spec, &loaded));
    let opts = options(c, &loaded);
    let code = match build_report(&mut doc, &loaded, || verdict(&loaded.spec, &opts)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", c.spec);
            doc.failure = Some(e.to_string());
            exit_for(&e)
        }
    };
    if c.json {
        let _ = writeln!(out, "{}", to_json(&doc));
    } else {
        let _ = writeln!(out, "{}", render_report(&doc).trim_end());
    }
    code
}

fn render_report(doc: &ReportDocument) -> String {
    let mut s = format!(
        "dim A = {} over K(T); |G_fin| = {}; degrees of Irr(H): {:?}\n",
        doc.dim, doc.spec.fin_order, doc.degrees
    );
    for (i, c) in doc.components.iter().enumerate() {
        let idx = c.schur_index.as_ref().map_or("undetermined".into(), |x| x.value.to_string());
        let deg = c.matrix_degree.as_ref().map_or("undetermined".into(), |x| x.value.to_string());
        s.push_str(&format!(
            "component {i}: dim {}, centre dim {}, chi(1) = {}, Schur index {idx}, matrix degree {deg}, {}\n",
            c.dim, c.center_dim, c.chi_degree, c.form
        ));
    }
    for ch in &doc.idempotent_checks {
        s.push_str(&format!("check {}: {}\n", ch.identity, if ch.passed { "ok" } else { "FAILED" }));
    }
    if let Some(e) = &doc.elementary {
        for p in &e.parts {
            let dims: Vec<usize> = p.base_components.iter().map(|b| b.dim).collect();
            s.push_str(&format!(
                "e_i for beta of conductor {}: dim {}, l^n = {}, U_i: |H| = {}, base components {:?}\n",
                p.conductor, p.dim, p.x.ln, p.u_i.h_order, dims
            ));
        }
    }
    if let Some(v) = &doc.verdict {
        s.push_str("SK1: ");
        render_verdict(v, 0, &mut s);
    }
    if let Some(f) = &doc.failure {
        s.push_str(&format!("FAILED: {f}\n"));
    }
    s
}

fn cmd_sk1(c: &Common, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let loaded = match load(&c.spec, err) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let v = match verdict(&loaded.spec, &options(c, &loaded)) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", c.spec);
            return exit_for(&e);
        }
    };
    if c.json {
        let doc = VerdictDocument {
            schema_version: SCHEMA_VERSION,
            spec: SpecEcho::new(&c.spec, &loaded),
            verdict: &v,
        };
        let _ = writeln!(out, "{}", to_json(&doc));
    } else {
        let mut s = String::new();
        render_verdict(&v, 0, &mut s);
        let _ = writeln!(out, "{}", s.trim_end());
    }
    exit_for_status(v.status)
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_PARSE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match &cli.command {
        Command::Table(c) => cmd_table(c, out, err),
        Command::Decompose(c) => cmd_decompose(c, out, err),
        Command::Sk1(c) => cmd_sk1(c, out, err),
        Command::Selfcheck {
            dir,
            inject_bad_idempotent,
        } => selfcheck::run(dir.as_deref(), *inject_bad_idempotent, out),
    }
}
