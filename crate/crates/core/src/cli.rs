//! Command-line surface: verify / build / compose / morita /
//! resolve-cocycle over JSON documents.
//!
//! Exit codes: 0 all checks pass, 1 a check fails (or a construction's
//! precondition does), 2 the input is malformed (unreadable, bad JSON,
//! schema mismatch, wrong document kind). See `docs/format.md`.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use crate::doc::{
    Body, CrossedModuleDoc, Document, FinBibundleDoc, FinGroupoidDoc, LieBibundleDoc,
    Lie2AlgebraDoc, Q,
};
use crate::report::Report;
use crate::{fingpd, lie2, liealg, twovect};

#[derive(Parser)]
#[command(name = "lie2kit", version, about = "Verify and build Lie 2-algebra and groupoid bibundle structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized searches (isomorphism witness hunting).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full axiom suite for a document (or every .json in a
    /// directory). With --against, search for an isomorphism between two
    /// bibundle documents.
    Verify {
        path: PathBuf,
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Construct a new document from a verified input.
    Build {
        verb: BuildVerb,
        file: PathBuf,
    },
    /// Compose two bibundle documents (Q after P).
    Compose {
        file_q: PathBuf,
        file_p: PathBuf,
    },
    /// Weak invertibility / essential equivalence report.
    Morita { file: PathBuf },
    /// Resolve a cocycle document into cells z_1..z_s.
    ResolveCocycle { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildVerb {
    /// Semidirect-product Lie 2-algebra of a crossed module.
    Lie2OfCm,
    /// Canonical crossed module (ker s, t, unit-conjugation action).
    CmOfLie2,
    /// The bibundle <f> of a functor document (Lie or finite).
    BundleOfFunctor,
    /// Linking groupoid of a biprincipal finite bibundle.
    Linking,
}

enum CliError {
    /// Exit 2.
    Malformed(String),
    /// Exit 1.
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Malformed(m) | CliError::Failed(m) => m,
        }
    }
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(pass) => ExitCode::from(if pass { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Verify { path, against: None } => cmd_verify(path, cli.format),
        Command::Verify {
            path,
            against: Some(other),
        } => cmd_verify_against(path, other, cli.format, cli.seed),
        Command::Build { verb, file } => cmd_build(*verb, file),
        Command::Compose { file_q, file_p } => cmd_compose(file_q, file_p),
        Command::Morita { file } => cmd_morita(file, cli.format),
        Command::ResolveCocycle { file } => cmd_resolve_cocycle(file, cli.format),
    }
}

fn load(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    Document::from_json(&text).map_err(|e| {
        CliError::Malformed(format!(
            "{}: parse error at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn schema_err(e: crate::doc::Error) -> CliError {
    CliError::Malformed(e.to_string())
}

/// Human-readable labels for check ids in text reports.
fn text_label(id: &str) -> String {
    match id {
        "axiom_i" => "crossed module axiom (i)".into(),
        "axiom_ii" => "crossed module axiom (ii)".into(),
        other => other.into(),
    }
}

fn print_report(report: &Report, format: Format) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"))
        }
        Format::Text => {
            println!(
                "{}: {}",
                report.subject,
                if report.pass() { "PASS" } else { "FAIL" }
            );
            for c in &report.checks {
                let mut line = format!(
                    "  [{}] {}",
                    if c.pass { "ok" } else { "FAIL" },
                    text_label(&c.id)
                );
                if let Some(d) = &c.detail {
                    line.push_str(&format!(": {d}"));
                }
                println!("{line}");
            }
            for (k, v) in &report.derived {
                println!("  {k} = {v}");
            }
        }
    }
}

fn verify_body(doc: &Document) -> Result<Report, CliError> {
    Ok(match &doc.body {
        Body::LieAlgebra(d) => liealg::verify_lie_algebra(&d.build().map_err(schema_err)?),
        Body::CrossedModule(d) => {
            lie2::verify_crossed_module(&d.build().map_err(schema_err)?)
        }
        Body::Lie2Algebra(d) => lie2::verify_lie2(&d.build().map_err(schema_err)?),
        Body::Lie2Functor(d) => lie2::verify_lie2_functor(&d.build().map_err(schema_err)?),
        Body::LieBibundle(d) => lie2::verify_bibundle(&d.build().map_err(schema_err)?),
        Body::FinGroupoid(d) => fingpd::verify_groupoid(&d.build().map_err(schema_err)?),
        Body::FinFunctor(d) => fingpd::verify_functor(&d.build().map_err(schema_err)?),
        Body::FinBibundle(d) => fingpd::verify_bibundle(&d.build().map_err(schema_err)?),
        Body::Cocycle(d) => twovect::verify_cocycle(&d.build().map_err(schema_err)?),
    })
}

fn cmd_verify(path: &Path, format: Format) -> Result<bool, CliError> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        entries.sort();
        let mut all_pass = true;
        for entry in entries {
            let doc = load(&entry)?;
            let mut report = verify_body(&doc)?;
            report.subject = format!("{}:{}", entry.display(), report.subject);
            all_pass &= report.pass();
            print_report(&report, format);
        }
        return Ok(all_pass);
    }
    let doc = load(path)?;
    let mut report = verify_body(&doc)?;
    report.subject = format!("{}:{}", doc.name, report.subject);
    print_report(&report, format);
    Ok(report.pass())
}

fn cmd_verify_against(
    path: &Path,
    other: &Path,
    format: Format,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    let doc_p = load(path)?;
    let doc_q = load(other)?;
    let mut report = Report::new("bibundle_isomorphism");
    match (&doc_p.body, &doc_q.body) {
        (Body::FinBibundle(dp), Body::FinBibundle(dq)) => {
            let p = dp.build().map_err(schema_err)?;
            let q = dq.build().map_err(schema_err)?;
            match fingpd::find_bibundle_iso(&p, &q, seed) {
                Some(witness) => {
                    report.ok("isomorphic");
                    report.derive("witness", witness);
                }
                None => report.fail(
                    "isomorphic",
                    "exhaustive search found no equivariant bijection",
                ),
            }
        }
        (Body::LieBibundle(dp), Body::LieBibundle(dq)) => {
            let p = dp.build().map_err(schema_err)?;
            let q = dq.build().map_err(schema_err)?;
            match lie2::find_bibundle_iso(&p, &q, seed) {
                Some(witness) => {
                    report.ok("isomorphic");
                    report.derive(
                        "witness",
                        (0..witness.matrix.rows())
                            .map(|i| {
                                (0..witness.matrix.cols())
                                    .map(|j| Q(witness.matrix.at(i, j).clone()))
                                    .collect::<Vec<_>>()
                            })
                            .collect::<Vec<_>>(),
                    );
                }
                None => report.fail(
                    "isomorphic",
                    "no invertible equivariant map in the constraint space",
                ),
            }
        }
        (a, b) => {
            return Err(CliError::Malformed(format!(
                "--against needs two bibundle documents of the same kind, got `{}` and `{}`",
                a.kind(),
                b.kind()
            )))
        }
    }
    print_report(&report, format);
    Ok(report.pass())
}

/// Verify a precondition report; failures become exit 1 with the report on
/// stderr.
fn require_pass(report: Report, what: &str) -> Result<(), CliError> {
    if let Some(fail) = report.first_failure() {
        return Err(CliError::Failed(format!(
            "{what} does not verify: check `{}` failed{}",
            fail.id,
            fail.detail
                .as_deref()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default()
        )));
    }
    Ok(())
}

fn cmd_build(verb: BuildVerb, file: &Path) -> Result<bool, CliError> {
    let doc = load(file)?;
    let out = match (verb, &doc.body) {
        (BuildVerb::Lie2OfCm, Body::CrossedModule(d)) => {
            let cm = d.build().map_err(schema_err)?;
            let a = lie2::lie2_of_crossed_module(&cm)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            Document::new(
                format!("{}.lie2", doc.name),
                Body::Lie2Algebra(Lie2AlgebraDoc::of(&a)),
            )
        }
        (BuildVerb::CmOfLie2, Body::Lie2Algebra(d)) => {
            let a = d.build().map_err(schema_err)?;
            let cm = lie2::crossed_module_of_lie2(&a)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            Document::new(
                format!("{}.cm", doc.name),
                Body::CrossedModule(CrossedModuleDoc::of(&cm)),
            )
        }
        (BuildVerb::BundleOfFunctor, Body::Lie2Functor(d)) => {
            let f = d.build().map_err(schema_err)?;
            let fb = lie2::bundle_of_functor(&f)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            Document::new(
                format!("{}.bundle", doc.name),
                Body::LieBibundle(LieBibundleDoc::of(&fb.bundle)),
            )
        }
        (BuildVerb::BundleOfFunctor, Body::FinFunctor(d)) => {
            let f = d.build().map_err(schema_err)?;
            require_pass(fingpd::verify_functor(&f), "functor")?;
            let fb = fingpd::bundle_of_functor(&f)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            Document::new(
                format!("{}.bundle", doc.name),
                Body::FinBibundle(FinBibundleDoc::of(&fb.bundle)),
            )
        }
        (BuildVerb::Linking, Body::FinBibundle(d)) => {
            let p = d.build().map_err(schema_err)?;
            let link = fingpd::linking_groupoid(&p)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            Document::new(
                format!("{}.linking", doc.name),
                Body::FinGroupoid(FinGroupoidDoc::of(&link.groupoid)),
            )
        }
        (_, body) => {
            return Err(CliError::Malformed(format!(
                "build verb does not apply to a `{}` document",
                body.kind()
            )))
        }
    };
    print!("{}", out.to_json());
    Ok(true)
}

fn cmd_compose(file_q: &Path, file_p: &Path) -> Result<bool, CliError> {
    let doc_q = load(file_q)?;
    let doc_p = load(file_p)?;
    let out = match (&doc_q.body, &doc_p.body) {
        (Body::FinBibundle(dq), Body::FinBibundle(dp)) => {
            let q = dq.build().map_err(schema_err)?;
            let p = dp.build().map_err(schema_err)?;
            let c = fingpd::compose_bibundles(&q, &p).map_err(|e| {
                CliError::Failed(format!(
                    "{e}: P targets a groupoid with {} objects / {} arrows, Q starts from {} objects / {} arrows",
                    p.target.n_objects(),
                    p.target.n_arrows(),
                    q.source.n_objects(),
                    q.source.n_arrows()
                ))
            })?;
            Document::new(
                format!("{}.{}", doc_q.name, doc_p.name),
                Body::FinBibundle(FinBibundleDoc::of(&c)),
            )
        }
        (Body::LieBibundle(dq), Body::LieBibundle(dp)) => {
            let q = dq.build().map_err(schema_err)?;
            let p = dp.build().map_err(schema_err)?;
            let c = lie2::compose_bibundles(&q, &p).map_err(|e| {
                CliError::Failed(format!(
                    "{e}: P targets dims ({}, {}), Q starts from dims ({}, {})",
                    p.target.v1.dim(),
                    p.target.v0.dim(),
                    q.source.v1.dim(),
                    q.source.v0.dim()
                ))
            })?;
            Document::new(
                format!("{}.{}", doc_q.name, doc_p.name),
                Body::LieBibundle(LieBibundleDoc::of(&c.bundle)),
            )
        }
        (a, b) => {
            return Err(CliError::Malformed(format!(
                "compose needs two bibundle documents of the same kind, got `{}` and `{}`",
                a.kind(),
                b.kind()
            )))
        }
    };
    print!("{}", out.to_json());
    Ok(true)
}

fn cmd_morita(file: &Path, format: Format) -> Result<bool, CliError> {
    let doc = load(file)?;
    let report = match &doc.body {
        Body::LieBibundle(d) => {
            let p = d.build().map_err(schema_err)?;
            lie2::is_weakly_invertible(&p).map_err(|e| CliError::Failed(e.to_string()))?
        }
        Body::Lie2Functor(d) => {
            let f = d.build().map_err(schema_err)?;
            lie2::functor_is_essential_equivalence(&f)
                .map_err(|e| CliError::Failed(e.to_string()))?
        }
        Body::FinBibundle(d) => fingpd::biprincipality_report(&d.build().map_err(schema_err)?),
        Body::FinFunctor(d) => {
            fingpd::is_essential_equivalence(&d.build().map_err(schema_err)?)
        }
        body => {
            return Err(CliError::Malformed(format!(
                "morita needs a bibundle or functor document, got `{}`",
                body.kind()
            )))
        }
    };
    print_report(&report, format);
    Ok(report.pass())
}

#[derive(Serialize)]
struct CellOut {
    u: Vec<Q>,
    v: Vec<Q>,
}

#[derive(Serialize)]
struct ResolutionOut {
    name: String,
    cells: Vec<CellOut>,
    report: Report,
}

fn cmd_resolve_cocycle(file: &Path, format: Format) -> Result<bool, CliError> {
    let doc = load(file)?;
    let Body::Cocycle(d) = &doc.body else {
        return Err(CliError::Malformed(format!(
            "resolve-cocycle needs a cocycle document, got `{}`",
            doc.body.kind()
        )));
    };
    let data = d.build().map_err(schema_err)?;
    let report = twovect::verify_cocycle(&data);
    let cells =
        twovect::resolve_cocycle(&data).map_err(|e| CliError::Failed(e.to_string()))?;
    match format {
        Format::Json => {
            let out = ResolutionOut {
                name: format!("{}.resolved", doc.name),
                cells: cells
                    .iter()
                    .map(|c| CellOut {
                        u: c.u.iter().map(|x| Q(x.clone())).collect(),
                        v: c.v.iter().map(|x| Q(x.clone())).collect(),
                    })
                    .collect(),
                report,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("resolution serializes")
            );
        }
        Format::Text => {
            print_report(&report, format);
            for (i, c) in cells.iter().enumerate() {
                let us: Vec<String> = c.u.iter().map(|x| x.to_string()).collect();
                let vs: Vec<String> = c.v.iter().map(|x| x.to_string()).collect();
                println!("z{} = ([{}], [{}])", i + 1, us.join(", "), vs.join(", "));
            }
        }
    }
    Ok(true)
}
