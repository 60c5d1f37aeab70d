//! Command-line front end: validate, scaffold, oracle, query and axioms.
//!
//! [`run`] takes the argument vector and two sinks so that tests can drive
//! the whole tool in-process. Exit codes: 0 success, 1 violations found,
//! 2 unreadable or malformed input, 3 usage errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gfoart_core::folk::{parse_pattern, query, Binding};
use gfoart_core::kb::KnowledgeBase;
use gfoart_core::modelgen::{
    find_model, parse_facts, scaffold_artifact, ModelSearchResult, ScaffoldOptions, MAX_BOUND,
};
use gfoart_core::turtle::{parse, serialize};
use gfoart_core::vocab::{
    axiom_catalog_with, check_with, explain, parse_profiles, resolve_predicate, CatalogOptions,
    Profile, Verbosity,
};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gfoart", version, about = "Validate and explore GFO artifact knowledge bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a Turtle file against the axiom catalog.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        catalog: CatalogArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also print each violated axiom's formula.
        #[arg(short, long, conflicts_with = "quiet")]
        verbose: bool,
        /// Print only the summary line.
        #[arg(short, long)]
        quiet: bool,
    },
    /// Write a compliant knowledge base for one artifact of kind KIND.
    Scaffold {
        kind: String,
        /// Add requirements with their specifying audience.
        #[arg(long)]
        requirements: bool,
        /// Add material-object facts for the space profile.
        #[arg(long)]
        space: bool,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a finite model of the selected axioms.
    Oracle {
        #[command(flatten)]
        catalog: CatalogArgs,
        /// Ground facts the model must contain, e.g. 'Artifact(x1)'.
        #[arg(long = "require")]
        require: Vec<String>,
        #[arg(long, env = "GFOART_MAX_SIZE", default_value_t = MAX_BOUND,
              value_parser = clap::value_parser!(u8).range(0..=MAX_BOUND as i64).map(usize::from))]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the bindings of a conjunctive pattern such as 'isInstanceOf(?x, ?k)'.
    Query {
        file: PathBuf,
        pattern: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the axiom catalog with citations.
    Axioms {
        #[command(flatten)]
        catalog: CatalogArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Comma-separated profiles, or `all`.
    #[arg(long, default_value = "artifact,requirements,constitution", value_parser = parse_profiles)]
    pub profile: BTreeSet<Profile>,
    /// Require a unique defining feature set and add the intendToBuildSpec implication.
    #[arg(long)]
    pub strict: bool,
}

impl CatalogArgs {
    fn options(&self) -> CatalogOptions {
        CatalogOptions { strict: self.strict }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

fn input(message: impl ToString) -> Failure {
    Failure { code: EXIT_INPUT, message: message.to_string() }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(input)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { file, catalog, format, verbose, quiet } => {
            let kb = load(&file, err)?;
            let report = check_with(&kb, &catalog.profile, catalog.options()).map_err(input)?;
            match format {
                Format::Json => {
                    let text = serde_json::to_string_pretty(&report.to_json()).map_err(input)?;
                    emit(out, &format!("{text}\n"))?;
                }
                Format::Text => {
                    let verbosity = match (verbose, quiet) {
                        (true, _) => Verbosity::Full,
                        (_, true) => Verbosity::Quiet,
                        _ => Verbosity::Normal,
                    };
                    let mut text = explain(&report, verbosity);
                    if !text.ends_with('\n') {
                        text.push('\n');
                    }
                    emit(out, &text)?;
                }
            }
            Ok(if report.is_empty() { EXIT_OK } else { EXIT_VIOLATIONS })
        }
        Command::Scaffold { kind, requirements, space, output } => {
            let options = ScaffoldOptions { with_requirements: requirements, with_space: space };
            let kb = scaffold_artifact(&kind, options).map_err(usage)?;
            let text = serialize(&kb);
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| input(format!("{}: {e}", path.display())))?,
                None => emit(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Oracle { catalog, require, max_size, format } => {
            let mut must = Vec::new();
            for r in &require {
                let facts = parse_facts(r).map_err(|e| usage(format!("--require {r:?}: {e}")))?;
                for mut f in facts {
                    f.predicate = canonical_predicate(&f.predicate);
                    must.push(f);
                }
            }
            let axioms = axiom_catalog_with(&catalog.profile, catalog.options());
            let result = find_model(&axioms, max_size, &must).map_err(usage)?;
            emit(out, &render_model(&result, format))?;
            Ok(EXIT_OK)
        }
        Command::Query { file, pattern, format } => {
            let mut atoms = parse_pattern(&pattern).map_err(usage)?;
            for a in &mut atoms {
                a.predicate = canonical_predicate(&a.predicate);
            }
            let kb = load(&file, err)?;
            let answers = query(&kb, &atoms).map_err(usage)?;
            emit(out, &render_bindings(&answers, format))?;
            Ok(EXIT_OK)
        }
        Command::Axioms { catalog, format } => {
            let axioms = axiom_catalog_with(&catalog.profile, catalog.options());
            let text = match format {
                Format::Text => axioms
                    .iter()
                    .map(|a| format!("{}\t{}\t{}\n", a.id, a.citation, a.formula))
                    .collect(),
                Format::Json => {
                    let rows: Vec<_> = axioms
                        .iter()
                        .map(|a| {
                            json!({
                                "axiom": a.id,
                                "profile": a.profile.name(),
                                "section": a.citation.section,
                                "quote": a.citation.quote,
                                "formula": a.formula.to_string(),
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&rows).map_err(input)?)
                }
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
    }
}

/// Accepts both the relation names of the ontology and their Turtle
/// spellings.
fn canonical_predicate(name: &str) -> String {
    resolve_predicate(name).map_or_else(|| name.to_string(), str::to_string)
}

fn load(path: &Path, err: &mut dyn Write) -> Result<KnowledgeBase, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|diagnostics| {
        for d in &diagnostics {
            let _ = writeln!(err, "{}:{d}", path.display());
        }
        input(format!("{}: {} problem(s)", path.display(), diagnostics.len()))
    })
}

fn binding_map(b: &Binding) -> BTreeMap<String, String> {
    b.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn render_bindings(answers: &[Binding], format: Format) -> String {
    match format {
        Format::Text => answers.iter().map(|b| format!("{b}\n")).collect(),
        Format::Json => {
            let rows: Vec<_> = answers.iter().map(binding_map).collect();
            format!("{}\n", serde_json::to_string_pretty(&rows).expect("string maps serialize"))
        }
    }
}

fn render_model(r: &ModelSearchResult, format: Format) -> String {
    let witness = r.witness.as_ref().map(serialize);
    match format {
        Format::Text => {
            let mut s = format!(
                "verdict: {}\nbound: {}\nmodels_enumerated: {}\n",
                r.verdict, r.bound, r.models_enumerated
            );
            if let Some(w) = witness {
                s.push('\n');
                s.push_str(&w);
            }
            s
        }
        Format::Json => {
            let v = json!({
                "verdict": r.verdict.to_string(),
                "bound": r.bound,
                "witness": witness,
                "models_enumerated": r.models_enumerated,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("values serialize"))
        }
    }
}
