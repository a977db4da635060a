//! The `loosemat` command line.
//!
//! Exit codes: 0 on success or a passing suite, 1 when a check finds a
//! falsification, 2 on usage errors, unreadable input and resource guards.
//! `LOOSEMAT_WORKERS` overrides the worker count of `verify`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::families::{build_named, build_structural, series_substitute, two_sum, FamilyTag};
use crate::io::MatrixFile;
use crate::matroid::{iso_check, LinearMatroid};
use crate::report::{analyze, verify_result, AnalyzeReport, ElementReport, IsoReport, Report};
use crate::verify::{run_suite, Mode, Suite, SuiteConfig, SuiteOutcome, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "loosemat",
    version,
    about = "Loose and free elements of linear matroids over small fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Write a named matroid as a matrix file.
    Construct(ConstructArgs),
    /// Rank, girth, paving flags and per-element status of a matrix file.
    Analyze(AnalyzeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Dual, restriction, series substitution or 2-sum of matrix files.
    #[command(subcommand)]
    Transform(TransformCmd),
    /// Search for an isomorphism between two matrix files.
    Iso(IsoArgs),
}

#[derive(Debug, Args)]
struct ConstructArgs {
    /// Lr, Jr, Mr, Nr, Pr, circuit, U, fano, ag32, golay12, or a full tag such as M6
    #[arg(long)]
    family: String,
    #[arg(long)]
    rank: Option<usize>,
    /// Rank of a uniform matroid.
    #[arg(long)]
    m: Option<usize>,
    /// Size of a uniform matroid.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u8>,
    /// Build from the defining constructions instead of the matrix figures.
    #[arg(long)]
    structural: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    /// List every circuit (at most 24 elements).
    #[arg(long)]
    circuits: bool,
    /// Classify this element; defaults to the file's designated `e`.
    #[arg(long)]
    element: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// thm-binary, thm-ternary-bound, thm-two-loose, thm-paving or prop-free
    suite: String,
    #[arg(long)]
    q: Option<u8>,
    /// A rank `R` or a range `A..B` (inclusive).
    #[arg(long)]
    rank: Option<String>,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 256)]
    chunk_size: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum TransformCmd {
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Restrict {
        file: PathBuf,
        /// Comma-separated labels to keep.
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace an element by a series class.
    SeriesSub {
        file: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2-sum of A and B along `--a` and `--b`. Labels of B that clash with
    /// A get a `_b` suffix.
    TwoSum {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "a")]
        at_a: Option<String>,
        #[arg(long = "b")]
        at_b: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct IsoArgs {
    a: PathBuf,
    b: PathBuf,
    /// Require `x` of A to map to `y` of B, given as `x=y`.
    #[arg(long)]
    anchor: Option<String>,
    #[arg(long)]
    json: bool,
}

struct Failure(i32, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

/// Parses `args` (program name first) and runs the command. Returns the
/// exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(2).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(cli.cmd, &echo, out, err) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn dispatch(cmd: Cmd, echo: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Cmd::Construct(a) => construct(a, out),
        Cmd::Analyze(a) => cmd_analyze(a, echo, out),
        Cmd::Verify(a) => cmd_verify(a, echo, out, err),
        Cmd::Transform(t) => transform(t, out),
        Cmd::Iso(a) => iso(a, echo, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_USAGE, format!("write failed: {e}")))
}

fn read_file(path: &Path) -> Result<MatrixFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    MatrixFile::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_matroid(path: &Path) -> Result<(MatrixFile, LinearMatroid), Failure> {
    let file = read_file(path)?;
    let m = LinearMatroid::new(file.matrix.clone()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((file, m))
}

fn write_matroid(file: &MatrixFile, dest: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = file.print();
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

/// Keeps designated roles whose labels survive in `m`.
fn carry_designated(from: &MatrixFile, m: &LinearMatroid, comment: String) -> MatrixFile {
    let mut file = MatrixFile::new(m.rep().clone());
    file.comments.push(comment);
    for (role, label) in &from.designated {
        if m.index_of(label).is_ok() {
            file = file.with_designated(role, label);
        }
    }
    file
}

fn family_tag(a: &ConstructArgs) -> Result<FamilyTag, Failure> {
    let name = a.family.to_ascii_lowercase();
    let rank = || {
        a.rank
            .ok_or_else(|| usage(format!("--family {} needs --rank", a.family)))
    };
    let tag = match name.as_str() {
        "lr" => FamilyTag::L(rank()?),
        "jr" => FamilyTag::J(rank()?),
        "mr" => FamilyTag::M(rank()?),
        "nr" => FamilyTag::N(rank()?),
        "pr" => FamilyTag::P(rank()?),
        "circuit" => FamilyTag::Circuit {
            r: rank()?,
            q: a.q.unwrap_or(2),
        },
        "u" | "uniform" => FamilyTag::Uniform {
            m: a.m.or(a.rank).ok_or_else(|| usage("--family U needs --m"))?,
            n: a.n.ok_or_else(|| usage("--family U needs --n"))?,
            q: a.q.unwrap_or(2),
        },
        _ => a.family.parse().map_err(|e| usage(format!("{e}")))?,
    };
    if let Some(q) = a.q {
        if q != tag.q() {
            return Err(usage(format!("{tag} lives over GF({}), not GF({q})", tag.q())));
        }
    }
    if let Some(r) = a.rank {
        if r != tag.rank() {
            return Err(usage(format!("{tag} has rank {}, not {r}", tag.rank())));
        }
    }
    Ok(tag)
}

fn construct(a: ConstructArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let tag = family_tag(&a)?;
    let bad = |e: crate::families::FamilyError| usage(format!("{tag}: {e}"));
    let (m, e) = if a.structural {
        build_structural(tag).map_err(bad)?
    } else {
        let m = build_named(tag).map_err(bad)?;
        let e = m.index_of("e").ok().map(|_| "e".to_string());
        (m, e)
    };
    let mut file = MatrixFile::new(m.rep().clone());
    file.comments
        .push(format!("{tag}{}", if a.structural { " (structural)" } else { "" }));
    if let Some(e) = e {
        file = file.with_designated("e", &e);
    }
    write_matroid(&file, a.out.as_deref(), out)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or("-".to_string(), |g| g.to_string())
}

fn analyze_text(r: &AnalyzeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "GF({})  rank {} ({} rows)  {} elements  girth {}",
        r.q,
        r.rank,
        r.rows,
        r.size,
        opt(r.girth)
    );
    let coloops = if r.coloops.is_empty() {
        "none".to_string()
    } else {
        r.coloops.join(" ")
    };
    let _ = writeln!(
        s,
        "simple {}  paving {}  sparse paving {}  coloops {}",
        yes(r.simple),
        yes(r.paving),
        yes(r.sparse_paving),
        coloops
    );
    for (role, label) in &r.designated {
        let _ = writeln!(s, "designated {role} = {label}");
    }
    let w = r.elements.iter().map(|e| e.element.len()).max().unwrap_or(0).max(7);
    let _ = writeln!(s, "\n{:<w$}  girth  loose  free  coloop", "element");
    for e in &r.elements {
        let _ = writeln!(
            s,
            "{:<w$}  {:>5}  {:>5}  {:>4}  {:>6}",
            e.element,
            opt(e.girth_through),
            yes(e.is_loose),
            yes(e.is_free),
            yes(e.is_coloop)
        );
    }
    if let Some(cs) = &r.circuits {
        let _ = writeln!(s, "\n{} circuits", cs.len());
        for c in cs {
            let _ = writeln!(s, "  {{{}}}", c.join(", "));
        }
    }
    match &r.classification {
        None => {}
        Some(ElementReport::BinaryVerdict(v)) => {
            let _ = writeln!(s, "\n{} rank {} ({:?})", v.family.name(), v.rank, v.case);
            let _ = writeln!(s, "basis {}", v.basis.join(" "));
            let pairs: Vec<String> = v.witness_labels.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            let _ = writeln!(s, "witness {}", pairs.join(" "));
        }
        Some(ElementReport::TernaryCensus(c)) => {
            let _ = writeln!(s, "\ncensus around e, basis {}", c.basis.join(" "));
            let _ = writeln!(
                s,
                "size {}  top-zero {}  types {:?}  overflow {}  max same sign {}",
                c.size, c.top_zero_count, c.type_counts, c.overflow_count, c.max_same_sign
            );
            for b in &c.case_bound_breaches {
                let _ = writeln!(s, "case bound exceeded: {b}");
            }
            for v in &c.violations {
                let _ = writeln!(s, "VIOLATION: {v}");
            }
        }
        Some(ElementReport::Falsification(f)) => {
            let _ = writeln!(s, "\nFALSIFIED: {f}");
        }
        Some(ElementReport::NotApplicable { element, reason }) => {
            let _ = writeln!(s, "\n{element}: {reason}");
        }
    }
    s
}

fn cmd_analyze(a: AnalyzeArgs, echo: &[String], out: &mut dyn Write) -> Result<i32, Failure> {
    let (file, m) = read_matroid(&a.file)?;
    let element = a.element.clone().or_else(|| file.designated("e").map(str::to_string));
    let report = analyze(&m, &file.designated, a.circuits, element.as_deref()).map_err(|e| usage(e.to_string()))?;
    let falsified = report.classification.as_ref().is_some_and(|c| match c {
        ElementReport::TernaryCensus(c) => !c.violations.is_empty(),
        other => other.is_falsification(),
    });
    if a.json {
        emit(out, &(Report::new("analyze", echo, &report).to_json() + "\n"))?;
    } else {
        emit(out, &analyze_text(&report))?;
    }
    Ok(if falsified { EXIT_FALSIFIED } else { EXIT_OK })
}

fn parse_ranks(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("--rank takes R or A..B, got `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

/// Ranks run when `--rank` is left out.
fn default_ranks(suite: Suite, q: u8) -> (usize, usize) {
    match (suite, q) {
        (Suite::ThmBinary, _) => (3, 4),
        (Suite::ThmTernaryBound, _) => (5, 8),
        (Suite::ThmTwoLoose, q) => (2 * q as usize + 1, 2 * q as usize + 3),
        (Suite::ThmPaving, 3) => (6, 6),
        (Suite::ThmPaving, _) => (3, 4),
        (Suite::PropFree, 3) => (2, 5),
        (Suite::PropFree, _) => (2, 4),
    }
}

fn outcome_text(o: &SuiteOutcome) -> String {
    let c = &o.config;
    let mut s = String::new();
    let mode = match c.mode {
        Mode::Exhaustive => "exhaustive".to_string(),
        Mode::Sampled => format!("{} samples per rank, seed {}", c.samples, c.seed),
    };
    let _ = writeln!(
        s,
        "{}  GF({})  ranks {}..{}  {mode}",
        c.suite, c.q, c.min_rank, c.max_rank
    );
    let _ = writeln!(s, "examined {}", o.examined);
    if let Some(b) = &o.bias {
        let _ = writeln!(s, "sampling: {b}");
    }
    for (k, v) in &o.tallies {
        let _ = writeln!(s, "  {k} {v}");
    }
    for (k, v) in &o.maxima {
        let _ = writeln!(s, "  max {k} {v}");
    }
    for ctl in &o.controls {
        let kind = if ctl.negative { "negative" } else { "positive" };
        let status = if ctl.ok { "ok" } else { "FAILED" };
        let _ = writeln!(s, "control ({kind}) {}: {status} (observed {})", ctl.name, ctl.observed);
    }
    for v in &o.violations {
        let at = v
            .index
            .map_or("control".to_string(), |i| format!("rank {} index {i}", v.rank));
        let _ = writeln!(s, "VIOLATION at {at}: {}", v.falsification);
        let _ = write!(s, "{}", v.falsification.matrix);
    }
    if o.violation_count > o.violations.len() as u64 {
        let _ = writeln!(
            s,
            "({} violations, first {} shown)",
            o.violation_count,
            o.violations.len()
        );
    }
    let _ = writeln!(s, "{}", if o.pass { "PASS" } else { "FAIL" });
    s
}

fn cmd_verify(a: VerifyArgs, echo: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let suite: Suite = a.suite.parse().map_err(|e: VerifyError| usage(e.to_string()))?;
    let q = a.q.unwrap_or(if suite == Suite::ThmTernaryBound { 3 } else { 2 });
    let (lo, hi) = match &a.rank {
        Some(s) => parse_ranks(s)?,
        None => default_ranks(suite, q),
    };
    let mut cfg = SuiteConfig::new(suite, q, lo)
        .ranks(lo, hi)
        .samples(a.samples)
        .seed(a.seed)
        .chunk_size(a.chunk_size);
    if a.exhaustive {
        cfg = cfg.exhaustive();
    }
    let outcome = run_suite(&cfg).map_err(|e| usage(e.to_string()))?;
    let _ = writeln!(err, "{} finished in {} ms", suite, outcome.elapsed_ms);
    if a.json {
        emit(
            out,
            &(Report::new("verify", echo, verify_result(&outcome)).to_json() + "\n"),
        )?;
    } else {
        emit(out, &outcome_text(&outcome))?;
    }
    Ok(if outcome.pass { EXIT_OK } else { EXIT_FALSIFIED })
}

fn relabel_clashes(a: &LinearMatroid, b: &LinearMatroid, at_b: &str) -> Result<(LinearMatroid, String), Failure> {
    if !b.labels().iter().any(|l| a.labels().contains(l)) {
        return Ok((b.clone(), at_b.to_string()));
    }
    let labels: Vec<String> = b.labels().iter().map(|l| format!("{l}_b")).collect();
    let b = b.with_labels(labels).map_err(|e| usage(e.to_string()))?;
    Ok((b, format!("{at_b}_b")))
}

fn transform(t: TransformCmd, out: &mut dyn Write) -> Result<i32, Failure> {
    match t {
        TransformCmd::Dual { file, out: dest } => {
            let (mf, m) = read_matroid(&file)?;
            let d = m.dual();
            write_matroid(
                &carry_designated(&mf, &d, format!("dual of {}", file.display())),
                dest.as_deref(),
                out,
            )
        }
        TransformCmd::Restrict { file, keep, out: dest } => {
            let (mf, m) = read_matroid(&file)?;
            let r = m.restrict(&keep).map_err(|e| usage(e.to_string()))?;
            let note = format!("restriction of {} to {}", file.display(), keep.join(","));
            write_matroid(&carry_designated(&mf, &r, note), dest.as_deref(), out)
        }
        TransformCmd::SeriesSub {
            file,
            element,
            size,
            out: dest,
        } => {
            let (mf, m) = read_matroid(&file)?;
            let s = series_substitute(&m, &element, size).map_err(|e| usage(e.to_string()))?;
            let note = format!("{} with {element} replaced by a series class of {size}", file.display());
            write_matroid(&carry_designated(&mf, &s, note), dest.as_deref(), out)
        }
        TransformCmd::TwoSum {
            a,
            b,
            at_a,
            at_b,
            out: dest,
        } => {
            let (fa, ma) = read_matroid(&a)?;
            let (_, mb) = read_matroid(&b)?;
            let at_a = at_a.unwrap_or_else(|| ma.label(0).to_string());
            let at_b = at_b.unwrap_or_else(|| mb.label(0).to_string());
            let (mb, at_b) = relabel_clashes(&ma, &mb, &at_b)?;
            let s = two_sum(&ma, &mb, &at_a, &at_b).map_err(|e| usage(e.to_string()))?;
            let note = format!("2-sum of {} at {at_a} and {} at {at_b}", a.display(), b.display());
            write_matroid(&carry_designated(&fa, &s, note), dest.as_deref(), out)
        }
    }
}

fn iso(a: IsoArgs, echo: &[String], out: &mut dyn Write) -> Result<i32, Failure> {
    let (_, ma) = read_matroid(&a.a)?;
    let (_, mb) = read_matroid(&a.b)?;
    let anchor = match &a.anchor {
        Some(s) => Some(s.split_once('=').ok_or_else(|| usage("--anchor takes x=y"))?),
        None => None,
    };
    let found = iso_check(&ma, &mb, anchor).map_err(|e| usage(e.to_string()))?;
    let report = IsoReport {
        isomorphic: found.is_some(),
        map: found
            .map(|map| {
                map.iter()
                    .enumerate()
                    .map(|(i, &j)| (ma.label(i).to_string(), mb.label(j).to_string()))
                    .collect()
            })
            .unwrap_or_default(),
    };
    if a.json {
        emit(out, &(Report::new("iso", echo, &report).to_json() + "\n"))?;
    } else if report.isomorphic {
        let pairs: Vec<String> = report.map.iter().map(|(x, y)| format!("{x}->{y}")).collect();
        emit(out, &format!("isomorphic\n{}\n", pairs.join(" ")))?;
    } else {
        emit(out, "not isomorphic\n")?;
    }
    Ok(EXIT_OK)
}
