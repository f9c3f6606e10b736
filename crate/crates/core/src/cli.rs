//! Command-line front end. Results go to stdout as JSON, diagnostics to
//! stderr. Exit status is 0 on success, 1 when a check fails, 2 on usage or
//! I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decompose::CanonicalBasis;
use crate::error::Error;
use crate::format;
use crate::gkm::{self, VertexMap};
use crate::quadric::{self, AdmissibleSubset, QuadricContext};
use crate::relations::{self, GeneratorTable, RelationKind, VerifyOptions};
use crate::selfcheck::{self, SelfcheckOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "gkm-quadric",
    version,
    about = "Exact equivariant K-theory of even-dimensional complex quadrics"
)]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct NArg {
    /// The quadric has complex dimension 2n.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
    n: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the GKM graph.
    Graph {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a generator class or the canonical basis.
    Gen {
        #[command(flatten)]
        n: NArg,
        #[arg(long, value_enum)]
        class: ClassName,
        #[arg(long)]
        vertex: Option<usize>,
        /// Comma-separated vertex list, e.g. 2,4,6.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether a vertex map is a K-class.
    Check {
        #[command(flatten)]
        n: NArg,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Verify the relation families.
    Verify {
        #[command(flatten)]
        n: NArg,
        #[arg(long, default_value = "all", value_parser = parse_relations)]
        relations: RelationSelection,
        #[arg(long, default_value_t = 3)]
        family_bound: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a K-class over the canonical basis.
    Decompose {
        #[command(flatten)]
        n: NArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check for n = 1..=max-n.
    Selfcheck {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
        max_n: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassName {
    #[value(name = "M")]
    M,
    #[value(name = "Minv")]
    Minv,
    #[value(name = "Delta")]
    Delta,
    #[value(name = "X")]
    X,
    #[value(name = "F")]
    F,
    #[value(name = "basis")]
    Basis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct RelationSelection(Vec<RelationKind>);

fn parse_relations(s: &str) -> Result<RelationSelection, String> {
    if s == "all" {
        return Ok(RelationSelection(RelationKind::ALL.to_vec()));
    }
    s.parse::<u8>()
        .ok()
        .and_then(RelationKind::from_number)
        .map(|k| RelationSelection(vec![k]))
        .ok_or_else(|| format!("expected all, 1, 2, 3 or 4, got {s:?}"))
}

enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

#[derive(Serialize)]
struct CheckDoc {
    n: usize,
    k_class: bool,
    failing_edges: Vec<(usize, usize)>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Check) => EXIT_FAIL,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn context(n: &NArg) -> Result<QuadricContext, Failure> {
    Ok(QuadricContext::build(n.n as usize)?)
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    let result = match path {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => writeln!(out, "{text}").map_err(|e| e.to_string()),
    };
    result.map_err(Failure::Usage)
}

fn read_map(ctx: &QuadricContext, path: &PathBuf) -> Result<VertexMap, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(format::vertex_map_from_json(ctx, &text)?)
}

fn require<T: Copy>(value: Option<T>, flag: &str, class: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--class {class} requires --{flag}")))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let pretty = cli.pretty;
    match &cli.command {
        Command::Graph { n, out: path } => {
            let ctx = context(n)?;
            emit(out, path.as_ref(), &format::emit_graph(ctx.graph(), pretty))
        }
        Command::Gen {
            n,
            class,
            vertex,
            subset,
            out: path,
        } => {
            let ctx = context(n)?;
            let subset = subset.as_deref();
            let text = match class {
                ClassName::M | ClassName::Minv => {
                    let name = if *class == ClassName::M { "M" } else { "Minv" };
                    let v = require(*vertex, "vertex", name)?;
                    let f = quadric::make_m(&ctx, v, *class == ClassName::Minv)?;
                    format::emit_vertex_map(ctx.n(), &f, pretty)
                }
                ClassName::Delta => {
                    let members = subset
                        .ok_or_else(|| Failure::Usage("--class Delta requires --subset".into()))?;
                    let p = AdmissibleSubset::new(&ctx, members.iter().copied())?;
                    format::emit_vertex_map(ctx.n(), &quadric::make_delta(&ctx, &p), pretty)
                }
                ClassName::F => {
                    let members = subset
                        .ok_or_else(|| Failure::Usage("--class F requires --subset".into()))?;
                    format::emit_vertex_map(ctx.n(), &quadric::make_f(&ctx, members)?, pretty)
                }
                ClassName::X => format::emit_vertex_map(ctx.n(), &quadric::make_x(&ctx), pretty),
                ClassName::Basis => format::emit_basis(ctx.n(), &CanonicalBasis::new(&ctx), pretty),
            };
            emit(out, path.as_ref(), &text)
        }
        Command::Check { n, input } => {
            let ctx = context(n)?;
            let f = read_map(&ctx, input)?;
            let report = gkm::is_k_class(ctx.graph(), &f)?;
            let doc = CheckDoc {
                n: ctx.n(),
                k_class: report.is_k_class(),
                failing_edges: report.failing_edges.clone(),
            };
            emit(out, None, &format::render(&doc, pretty))?;
            if report.is_k_class() {
                Ok(())
            } else {
                let _ = writeln!(
                    err,
                    "not a K-class: failing edges {:?}",
                    report.failing_edges
                );
                Err(Failure::Check)
            }
        }
        Command::Verify {
            n,
            relations: selection,
            family_bound,
            seed,
        } => {
            let ctx = context(n)?;
            let table = GeneratorTable::new(&ctx);
            let report = relations::verify_all(
                &table,
                &VerifyOptions {
                    family_size_bound: *family_bound,
                    sample_seed: *seed,
                    kinds: selection.0.clone(),
                    ..VerifyOptions::default()
                },
            );
            emit(out, None, &format::render(&report, pretty))?;
            if report.all_pass() {
                Ok(())
            } else {
                let _ = writeln!(err, "{} relation checks failed", report.summary.fail);
                Err(Failure::Check)
            }
        }
        Command::Decompose {
            n,
            input,
            out: path,
        } => {
            let ctx = context(n)?;
            let f = read_map(&ctx, input)?;
            let report = gkm::is_k_class(ctx.graph(), &f)?;
            if !report.is_k_class() {
                let _ = writeln!(
                    err,
                    "not a K-class: failing edges {:?}",
                    report.failing_edges
                );
                return Err(Failure::Check);
            }
            let d = CanonicalBasis::new(&ctx).decompose(&f)?;
            emit(
                out,
                path.as_ref(),
                &format::emit_decomposition(ctx.n(), &d, pretty),
            )
        }
        Command::Selfcheck {
            max_n,
            trials,
            seed,
        } => {
            let report = selfcheck::run(&SelfcheckOptions {
                max_n: *max_n as usize,
                trials: *trials,
                seed: *seed,
                ..SelfcheckOptions::default()
            })?;
            emit(out, None, &format::render(&report, pretty))?;
            for line in report.failure_lines() {
                let _ = writeln!(err, "{line}");
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}
