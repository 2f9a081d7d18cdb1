use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermitian_cli::{
    analyze_spec, audit_targets, batch, exit_status, load_catalog, load_file, summary_line, CliError, Report,
    StructureFile, EXIT_ERROR,
};
use hermitian_core::catalog;

#[derive(Parser)]
#[command(name = "hermitian", version, about = "Exact analysis of left-invariant almost Hermitian structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one structure and print its report.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity audit on structures and on random structures over their algebras.
    Audit {
        #[command(flatten)]
        source: Source,
        /// Number of random structures, spread over the selected algebras.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Inspect the built-in structures.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Analyse every .json structure file in a directory.
    Batch {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory receiving one report per input file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        report: Format,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List the built-in structures.
    List,
    /// Print a built-in structure as a structure file.
    Show { name: String },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Structure file.
    file: Option<PathBuf>,
    /// Built-in structure name, or `all` where accepted.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl Format {
    fn render(self, report: &Report) -> String {
        match self {
            Format::Json => report.to_json() + "\n",
            Format::Text => report.to_text(),
        }
    }

    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "txt",
        }
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze { source, report, out } => {
            let spec = match (&source.file, &source.catalog) {
                (Some(path), _) => load_file(path)?,
                (_, Some(name)) => load_catalog(name)?,
                _ => unreachable!("clap requires a source"),
            };
            let r = analyze_spec(&spec)?;
            let text = report.render(&r);
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(exit_status([&Ok(r)]))
        }
        Command::Audit { source, samples, seed } => {
            let targets = match (&source.file, source.catalog.as_deref()) {
                (Some(path), _) => vec![load_file(path)?],
                (_, Some("all")) => catalog::all(),
                (_, Some(name)) => vec![load_catalog(name)?],
                _ => unreachable!("clap requires a source"),
            };
            let results = audit_targets(&targets, samples, seed);
            for r in &results {
                match r {
                    Ok(report) => {
                        println!("{}", summary_line(report));
                        for f in &report.audit.failures {
                            println!("  {}: {}", f.id, f.statement);
                        }
                    }
                    Err(e) => println!("ERROR {e}"),
                }
            }
            let failed = results.iter().filter(|r| !matches!(r, Ok(x) if x.audit.failed == 0)).count();
            println!("{} structures audited, {failed} with failures or errors", results.len());
            Ok(exit_status(&results))
        }
        Command::Catalog { command: CatalogCommand::List } => {
            for spec in catalog::all() {
                println!("{:<22} {}", spec.name, spec.description);
            }
            Ok(0)
        }
        Command::Catalog { command: CatalogCommand::Show { name } } => {
            println!("{}", StructureFile::from_spec(&load_catalog(&name)?).to_json());
            Ok(0)
        }
        Command::Batch { dir, jobs, out, report } => {
            let entries = batch(&dir, jobs.max(1))?;
            if let Some(out) = &out {
                fs::create_dir_all(out).map_err(|source| CliError::Io { path: out.clone(), source })?;
            }
            for e in &entries {
                match &e.result {
                    Ok(r) => {
                        println!("{}: {}", e.path.display(), summary_line(r));
                        if let Some(out) = &out {
                            let stem = e.path.file_stem().unwrap_or_default().to_string_lossy();
                            write(&out.join(format!("{stem}.{}", report.extension())), &report.render(r))?;
                        }
                    }
                    Err(err) => println!("{}: ERROR {err}", e.path.display()),
                }
            }
            Ok(exit_status(entries.iter().map(|e| &e.result)))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
