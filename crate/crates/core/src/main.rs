use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use parsym::cli::{self, exit, Numbering, OutputFormat};
use parsym::parabolic::parse_node_list;
use parsym::realform::Catalog;
use parsym::Error;

#[derive(Parser)]
#[command(name = "parsym", version, about = "Generalized symmetries of homogeneous parabolic geometries")]
struct Args {
    /// Read Ξ in the numbering of the published classification tables.
    #[arg(long, global = true)]
    paper_numbering: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Grading of a complex type or real form.
    Grade {
        target: String,
        #[arg(long)]
        xi: String,
    },
    /// Harmonic curvature components and admissible symmetries.
    Classify {
        form: String,
        #[arg(long)]
        xi: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Full classification sweep over the catalog.
    Tables {
        #[arg(long, default_value_t = 8)]
        rank: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the golden tables in this directory.
        #[arg(long)]
        diff: Option<PathBuf>,
    },
    /// Deform the flat model by one or more curvature components.
    Deform {
        target: String,
        #[arg(long)]
        xi: String,
        #[arg(long)]
        comp: String,
        /// Further components to insert alongside `--comp`.
        #[arg(long)]
        also: Vec<String>,
        /// Include order-2 actions that are not inner.
        #[arg(long)]
        outer: bool,
    },
}

fn nodes(s: &str, numbering: Numbering) -> parsym::Result<Vec<usize>> {
    let one_based: Vec<usize> = parse_node_list(s)?.into_iter().map(|i| i + 1).collect();
    Ok(numbering.to_bourbaki(&one_based))
}

fn run(args: Args) -> parsym::Result<i32> {
    let numbering = if args.paper_numbering { Numbering::Paper } else { Numbering::Bourbaki };
    let catalog = Catalog::load()?;
    match args.command {
        Command::Grade { target, xi } => {
            print!("{}", cli::grade_report(&catalog, &target, &nodes(&xi, numbering)?)?);
        }
        Command::Classify { form, xi, format } => {
            let f = match format {
                Format::Table => OutputFormat::Table,
                Format::Structured => OutputFormat::Structured,
            };
            print!("{}", cli::classify_report(&catalog, &form, &nodes(&xi, numbering)?, f)?);
        }
        Command::Tables { rank, out, diff } => {
            if rank > 8 {
                return Err(Error::Parse(format!("rank bound {rank} exceeds 8")));
            }
            if let Some(path) = out {
                let doc = cli::write_tables(&catalog, rank, numbering, &path)?;
                eprintln!("wrote {} rows to {}", doc.rows.len(), path.display());
            } else if diff.is_none() {
                print!("{}", cli::sweep(&catalog, rank, numbering)?.render());
            }
            if let Some(dir) = diff {
                let report = cli::diff_golden(&catalog, &dir, rank)?;
                for key in &report.resolved {
                    eprintln!("note: known mismatch T{}#{} now agrees", key.0, key.1);
                }
                for line in &report.unexpected {
                    println!("MISMATCH {line}");
                }
                println!("checked {} rows, {} unexpected mismatches", report.rows_checked, report.unexpected.len());
                if !report.is_clean() {
                    return Ok(exit::DIFF);
                }
            }
        }
        Command::Deform { target, xi, comp, also, outer } => {
            let comps: Vec<String> = std::iter::once(comp).chain(also).collect();
            print!("{}", cli::deform_report(&catalog, &target, &nodes(&xi, numbering)?, &comps, outer)?);
        }
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            return ExitCode::from(code as u8);
        }
    };
    let code = match run(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            cli::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
