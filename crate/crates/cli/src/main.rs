use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sigma_lab_cli::commands::{self, Outcome};
use sigma_lab_cli::{CliError, SuiteConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "sigma-lab", version, about = "Partial Mal'tsev and protomodularity checks on finite algebras")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate algebra, hom, point and extension documents.
    Validate {
        files: Vec<PathBuf>,
        /// Print the canonical serialization instead of a summary.
        #[arg(long)]
        canonical: bool,
    },
    /// Test the points in a file for membership in a class.
    ClassifyPoint {
        #[arg(long)]
        class: String,
        pointfile: PathBuf,
    },
    /// List the reflexive relations on an algebra.
    Relations {
        algebrafile: PathBuf,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        equivalence: bool,
    },
    /// Compute the connector of two relations.
    Connector {
        x: PathBuf,
        #[arg(long = "R")]
        r: PathBuf,
        #[arg(long = "S")]
        s: PathBuf,
    },
    /// Compute the centralizer of an equivalence relation.
    Centralizer {
        x: PathBuf,
        #[arg(long = "S")]
        s: PathBuf,
        #[arg(long)]
        sigma: String,
    },
    /// Mal'tsev squares, transitivity and permutability over a catalog.
    MaltsevAudit {
        #[arg(long, default_value = "mon")]
        kind: String,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Σ-special members of a catalog.
    Core {
        #[arg(long, default_value = "mon")]
        kind: String,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Baer sum of two extensions.
    Baer {
        #[arg(long)]
        ext1: PathBuf,
        #[arg(long)]
        ext2: PathBuf,
    },
    /// Ext table with Baer sums.
    ExtTable {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        fiber: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Run the verification suite.
    Suite {
        /// JSON suite configuration; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        max_order: Option<usize>,
        /// Comma-separated module list; empty selects none.
        #[arg(long)]
        modules: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Validate { files, canonical } => commands::validate(&files, canonical),
        Command::ClassifyPoint { class, pointfile } => commands::classify_point(&class, &pointfile),
        Command::Relations {
            algebrafile,
            sigma,
            symmetric,
            equivalence,
        } => commands::relations(&algebrafile, sigma.as_deref(), symmetric, equivalence),
        Command::Connector { x, r, s } => commands::connector_cmd(&x, &r, &s),
        Command::Centralizer { x, s, sigma } => commands::centralizer_cmd(&x, &s, &sigma),
        Command::MaltsevAudit {
            kind,
            sigma,
            max_order,
            jobs,
        } => commands::maltsev_audit(&kind, sigma.as_deref(), max_order, jobs),
        Command::Core { kind, sigma, max_order } => commands::core(&kind, sigma.as_deref(), max_order),
        Command::Baer { ext1, ext2 } => commands::baer(&ext1, &ext2),
        Command::ExtTable { base, fiber, max_order } => commands::ext_table_cmd(&base, &fiber, max_order),
        Command::Suite {
            config,
            kind,
            sigma,
            max_order,
            modules,
            jobs,
            samples,
            seed,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    SuiteConfig::from_json(&text)?
                }
                None => SuiteConfig::default(),
            };
            cfg.kind = kind.or(cfg.kind);
            cfg.sigma = sigma.or(cfg.sigma);
            cfg.max_order = max_order.unwrap_or(cfg.max_order);
            if let Some(m) = modules {
                cfg.modules = Some(m.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect());
            }
            cfg.jobs = jobs.unwrap_or(cfg.jobs);
            cfg.samples = samples.unwrap_or(cfg.samples);
            cfg.seed = seed.unwrap_or(cfg.seed);
            commands::suite(cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (format, out) = (cli.format, cli.out.clone());
    match run(cli) {
        Ok(outcome) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&outcome.json).expect("values serialize") + "\n",
                Format::Text => outcome.text.clone(),
            };
            print!("{body}");
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &body) {
                    eprintln!("{}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("sigma-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
