use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use similar::TextDiff;

use hamfix_core::classifier4::{classify4, GOLDEN4};
use hamfix_core::classifier6::{
    self, classify, golden, golden_row, unlisted, Blueprint, Classification, MaxKind, SearchConfig, Tfd,
    DEFAULT_BOUND, GOLDEN6,
};
use hamfix_core::rational::show;
use hamfix_core::reduction::dh_samples;
use hamfix_core::report::{to_json, to_tsv, ReportRow};
use hamfix_core::toric::{
    default_corpus_dir, level_profile, load_corpus, tfd_from_polytope, CircleDirection, Polytope,
};
use hamfix_core::Error;

const MISMATCH: u8 = 1;
const INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "hamfix", version, about = "Fixed point data of semifree monotone Hamiltonian circle actions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate and verify every fixed point data in a dimension.
    Classify {
        #[arg(long, value_parser = ["4", "6"])]
        dim: String,
        #[arg(long, value_enum, default_value = "all")]
        case: Case,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        /// Half-width of the coefficient box for level-0 classes.
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        /// Write one `t<TAB>DH(t)` table per row into this directory.
        #[arg(long, value_name = "DIR")]
        emit_dh: Option<PathBuf>,
        #[arg(short, long)]
        verbose: bool,
    },
    /// Chern number of one row by localization.
    Chern {
        #[arg(long)]
        row: String,
        #[arg(long, value_parser = ["4", "6"], default_value = "6")]
        dim: String,
    },
    /// Gromov width and Hofer-Zehnder capacity of every six-dimensional row.
    Capacities {
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    Toric {
        #[command(subcommand)]
        cmd: ToricCmd,
    },
    Tables {
        #[command(subcommand)]
        cmd: TablesCmd,
    },
}

#[derive(Subcommand)]
enum ToricCmd {
    /// Check polytopes and match them with the classification.
    Verify {
        #[arg(long, conflicts_with = "corpus")]
        polytope: Option<PathBuf>,
        /// Circle direction `a,b,c`; defaults to the one stored in the file.
        #[arg(long, requires = "polytope", allow_hyphen_values = true)]
        xi: Option<String>,
        /// Directory of polytope files (default: $HAMFIX_CORPUS or the bundled corpus).
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TablesCmd {
    /// Recompute every table and diff it against the reference values.
    Diff,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(clippy::upper_case_acronyms)]
enum Case {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    All,
}

impl Case {
    fn maxima(self) -> Vec<MaxKind> {
        match self {
            Case::I => vec![MaxKind::Point],
            Case::II => vec![MaxKind::Sphere],
            Case::III => vec![MaxKind::FourManifold],
            Case::All => MaxKind::ALL.to_vec(),
        }
    }

    fn matches(self, label: &str) -> bool {
        let numeral = label.split('-').next().unwrap_or("");
        match self {
            Case::All => true,
            Case::I => numeral == "I",
            Case::II => numeral == "II",
            Case::III => numeral == "III",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

fn render(rows: &[ReportRow], format: Format) -> String {
    match format {
        Format::Tsv => to_tsv(rows),
        Format::Json => to_json(rows),
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("hamfix: {msg}");
    ExitCode::from(code)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::BoundTooSmall { .. } | Error::InvalidPolytope(..) | Error::NonPrimitiveDirection(_) => INVALID,
        _ => MISMATCH,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INVALID } else { 0 });
        }
    };
    match cli.cmd {
        Cmd::Classify { dim, case, format, bound, emit_dh, verbose } => {
            if dim == "4" {
                classify_four(case, format, emit_dh.as_deref())
            } else {
                classify_six(case, format, bound, emit_dh.as_deref(), verbose)
            }
        }
        Cmd::Chern { row, dim } => chern(&row, &dim),
        Cmd::Capacities { format } => capacities(format),
        Cmd::Toric { cmd: ToricCmd::Verify { polytope, xi, corpus } } => toric_verify(polytope, xi, corpus),
        Cmd::Tables { cmd: TablesCmd::Diff } => tables_diff(),
    }
}

fn write_dh(dir: &Path, label: &str, samples: &[(hamfix_core::rational::Rational, hamfix_core::rational::Rational)]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut s = String::from("t\tDH\n");
    for (t, v) in samples {
        s.push_str(&format!("{}\t{}\n", show(t), show(v)));
    }
    fs::write(dir.join(format!("{label}.dh.tsv")), s)
}

fn classify_six(case: Case, format: Format, bound: i64, emit_dh: Option<&Path>, verbose: bool) -> ExitCode {
    let cfg = SearchConfig { bound, ..SearchConfig::default() };
    let c: Classification = match classify(&case.maxima(), &cfg) {
        Ok(c) => c,
        Err(e) => return fail(error_code(&e), e),
    };
    if verbose {
        let s = &c.stats;
        eprintln!(
            "search: {} prefiltered, {} passed the sweep, {} splittings, {} survivors",
            s.prefiltered, s.sweep_survivors, s.splittings, s.survivors
        );
        eprintln!("bound witness: largest survivor coefficient {} < bound {bound}", s.max_abs_coeff);
    }
    let rows: Result<Vec<ReportRow>, Error> = c.all_rows().map(ReportRow::from_tfd).collect();
    let rows = match rows {
        Ok(r) => r,
        Err(e) => return fail(MISMATCH, e),
    };
    print!("{}", render(&rows, format));
    if let Some(dir) = emit_dh {
        for t in c.all_rows() {
            if let Err(e) = write_dh(dir, &t.label_or_default(), &dh_samples(&t.slices, 4)) {
                return fail(INVALID, format!("{}: {e}", dir.display()));
            }
        }
    }
    if c.is_exact() {
        return ExitCode::SUCCESS;
    }
    for t in &c.extra {
        let note = t.blueprint.as_ref().and_then(unlisted).map_or("no documented explanation".to_string(), |u| {
            format!("{} (witness polytope {})", u.reason, u.witness)
        });
        eprintln!("hamfix: {} survives every predicate but is not in the reference table: {note}", t);
    }
    if !c.missing.is_empty() {
        eprintln!("hamfix: missing rows: {}", c.missing.join(", "));
    }
    ExitCode::from(MISMATCH)
}

fn classify_four(case: Case, format: Format, emit_dh: Option<&Path>) -> ExitCode {
    let rows = match classify4() {
        Ok(r) => r,
        Err(e) => return fail(error_code(&e), e),
    };
    let rows: Vec<_> = rows.into_iter().filter(|t| case.matches(t.label.as_deref().unwrap_or(""))).collect();
    if let Some(dir) = emit_dh {
        for t in &rows {
            if let Err(e) = write_dh(dir, t.label.as_deref().unwrap_or("?"), &t.dh_samples(4)) {
                return fail(INVALID, format!("{}: {e}", dir.display()));
            }
        }
    }
    let report: Vec<ReportRow> = rows.iter().map(ReportRow::from_tfd4).collect();
    print!("{}", render(&report, format));
    ExitCode::SUCCESS
}

/// A six-dimensional row rebuilt from its reference data and verified.
fn row_tfd(label: &str) -> Option<Result<Tfd, Error>> {
    let bp: Blueprint = match golden_row(label) {
        Some(g) => g.blueprint(),
        None => {
            let n: usize = label.strip_prefix("unlisted-")?.parse().ok()?;
            golden::UNLISTED.get(n.checked_sub(1)?)?.blueprint()
        }
    };
    Some(Tfd::assemble(&bp).and_then(|mut t| {
        t.derived = Some(classifier6::verify(&t)?);
        t.label = Some(label.to_string());
        Ok(t)
    }))
}

fn chern(label: &str, dim: &str) -> ExitCode {
    if dim == "4" {
        return match classify4() {
            Ok(rows) => match rows.iter().find(|t| t.label.as_deref() == Some(label)) {
                Some(t) => {
                    println!("{}", t.c1_squared());
                    ExitCode::SUCCESS
                }
                None => fail(INVALID, format!("unknown four-dimensional row {label}")),
            },
            Err(e) => fail(error_code(&e), e),
        };
    }
    match row_tfd(label) {
        None => fail(INVALID, format!("unknown row {label}")),
        Some(Err(e)) => fail(MISMATCH, e),
        Some(Ok(t)) => {
            println!("{}", t.derived.expect("verified").chern);
            ExitCode::SUCCESS
        }
    }
}

fn capacities(format: Format) -> ExitCode {
    let c = match classifier6::classify_all_with(&SearchConfig::default()) {
        Ok(c) => c,
        Err(e) => return fail(error_code(&e), e),
    };
    match format {
        Format::Tsv => {
            println!("label\tgromov_width\thofer_zehnder");
            for t in c.all_rows() {
                let (a, b) = t.derived.as_ref().and_then(|d| d.capacities.clone()).expect("isolated minimum");
                println!("{}\t{}\t{}", t.label_or_default(), show(&a), show(&b));
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = c
                .all_rows()
                .map(|t| {
                    let (a, b) = t.derived.as_ref().and_then(|d| d.capacities.clone()).expect("isolated minimum");
                    serde_json::json!({"label": t.label_or_default(), "gromov_width": show(&a), "hofer_zehnder": show(&b)})
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
        }
    }
    ExitCode::SUCCESS
}

fn toric_verify(polytope: Option<PathBuf>, xi: Option<String>, corpus: Option<PathBuf>) -> ExitCode {
    let polys: Vec<Polytope> = match &polytope {
        Some(path) => match Polytope::load(path) {
            Ok(p) => vec![p],
            Err(e) => return fail(INVALID, e),
        },
        None => match load_corpus(&corpus.unwrap_or_else(default_corpus_dir)) {
            Ok(ps) => ps,
            Err(e) => return fail(INVALID, e),
        },
    };
    let given = match xi.as_deref().map(CircleDirection::parse) {
        Some(None) => return fail(INVALID, format!("--xi expects a primitive vector a,b,c, got {}", xi.unwrap_or_default())),
        Some(Some(d)) => Some(d),
        None => None,
    };
    let c = match classifier6::classify_all_with(&SearchConfig::default()) {
        Ok(c) => c,
        Err(e) => return fail(error_code(&e), e),
    };
    let rows: Vec<Tfd> = c.all_rows().cloned().collect();
    let mut ok = true;
    let mut invalid = false;
    println!("polytope\txi\trow\tfixed (level:dim x count)\tc1^3 volume\tc1^3 localization\tstatus");
    for p in &polys {
        let Some(d) = given.or_else(|| p.xi.and_then(|v| CircleDirection::new(v).ok())) else {
            return fail(INVALID, format!("{} has no circle direction; pass --xi", p.name));
        };
        let xi_text = format!("{},{},{}", d.0[0], d.0[1], d.0[2]);
        match tfd_from_polytope(p, d, &rows) {
            Ok(m) => {
                let loc = rows
                    .iter()
                    .find(|t| t.label_or_default() == m.label)
                    .and_then(|t| t.derived.as_ref())
                    .map_or(0, |d| d.chern);
                // the stored row only describes the stored direction
                let expected = given.is_some() || p.row.as_deref().is_none_or(|r| r == m.label);
                let status = if !expected {
                    format!("MISMATCH (file names {})", p.row.as_deref().unwrap_or(""))
                } else if m.chern_from_volume != loc {
                    "MISMATCH (chern)".into()
                } else {
                    "ok".into()
                };
                ok &= status == "ok";
                let prof: Vec<String> =
                    level_profile(&m.faces).iter().map(|((l, dim), n)| format!("{l}:{dim}x{n}")).collect();
                println!("{}\t{xi_text}\t{}\t{}\t{}\t{loc}\t{status}", p.name, m.label, prof.join(" "), m.chern_from_volume);
            }
            Err(e) => {
                ok = false;
                invalid |= matches!(e, Error::NotDelzant(..) | Error::InvalidPolytope(..));
                println!("{}\t{xi_text}\t-\t-\t-\t-\t{e}", p.name);
            }
        }
    }
    if invalid {
        ExitCode::from(INVALID)
    } else if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(MISMATCH)
    }
}

fn tables_diff() -> ExitCode {
    let c = match classifier6::classify_all_with(&SearchConfig::default()) {
        Ok(c) => c,
        Err(e) => return fail(error_code(&e), e),
    };
    let four = match classify4() {
        Ok(r) => r,
        Err(e) => return fail(error_code(&e), e),
    };
    let mut reference: Vec<ReportRow> = Vec::new();
    for g in GOLDEN6.iter() {
        match ReportRow::from_golden(g) {
            Ok(r) => reference.push(r),
            Err(e) => return fail(MISMATCH, e),
        }
    }
    reference.extend(GOLDEN4.iter().map(|g| ReportRow::from_tfd4(&g.tfd())));
    let mut computed: Vec<ReportRow> = Vec::new();
    for t in c.all_rows() {
        match ReportRow::from_tfd(t) {
            Ok(r) => computed.push(r),
            Err(e) => return fail(MISMATCH, e),
        }
    }
    computed.extend(four.iter().map(ReportRow::from_tfd4));
    let (a, b) = (to_tsv(&reference), to_tsv(&computed));
    if a == b {
        println!("tables match");
        return ExitCode::SUCCESS;
    }
    print!("{}", TextDiff::from_lines(&a, &b).unified_diff().context_radius(0).header("reference", "computed"));
    println!();
    println!("explanations:");
    let changed: Vec<&ReportRow> = computed.iter().filter(|r| !reference.contains(r)).collect();
    for r in changed {
        if let Some(t) = c.extra.iter().find(|t| t.label_or_default() == r.label) {
            match t.blueprint.as_ref().and_then(unlisted) {
                Some(u) => println!("  {}: not in the reference table; {} (witness polytope {})", r.label, u.reason, u.witness),
                None => println!("  {}: not in the reference table; no documented explanation", r.label),
            }
            continue;
        }
        let Some(old) = reference.iter().find(|o| o.label == r.label && o.dim == r.dim) else { continue };
        if old.gromov_width != r.gromov_width {
            match golden::erratum(&r.label, "gromov_width") {
                Some(e) => println!("  {}: gromov_width printed {}, computed {}: {}", r.label, e.printed, e.corrected, e.reason),
                None => println!("  {}: gromov_width differs; no documented explanation", r.label),
            }
        }
        if old.hofer_zehnder != r.hofer_zehnder || old.chern != r.chern || old.b2 != r.b2 || old.components != r.components {
            println!("  {}: differs beyond the documented errata", r.label);
        }
    }
    ExitCode::from(MISMATCH)
}
