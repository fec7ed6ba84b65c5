//! Command-line front end.
//!
//! Exit codes: 0 success, 1 negative result, 2 usage or input error,
//! 3 undecided verdict.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quiverforge_core::membership::{Certificate, ClassId, ScanSource};
use quiverforge_core::search::{SearchBudget, Verdict};
use quiverforge_core::{MutationSequence, Quiver, VertexId};

use crate::ops::{self, parse, render, BudgetDoc, CertificateDoc, OpError, QuiverDoc};

pub const DEFAULT_PORT: u16 = 7878;

#[derive(Debug, Parser)]
#[command(name = "quiverforge", version, about = "Quiver mutation and membership certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutate a quiver at the given vertices, left to right.
    Mutate {
        /// Quiver JSON file, or `-` for stdin.
        file: PathBuf,
        /// Vertex to mutate at; repeat for a sequence.
        #[arg(short = 'k', value_name = "VERTEX")]
        vertex: Vec<u32>,
        /// Comma-separated mutation sequence, applied after any `-k`.
        #[arg(short = 'w', value_delimiter = ',', value_name = "SEQ")]
        sequence: Vec<u32>,
    },
    /// Sources, sinks, cycle vertices and covering pairs.
    Analyze { file: PathBuf },
    /// Canonical form and the relabelling that produces it.
    Canon { file: PathBuf },
    /// Explore the mutation class up to isomorphism.
    Search {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search for a membership certificate.
    Certify {
        file: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: ClassId,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a certificate against a quiver.
    Checkcert {
        quiver: PathBuf,
        cert: PathBuf,
        /// Class to check; defaults to the class recorded in `certify`
        /// output, else every class is tried.
        #[arg(long, value_parser = parse_class)]
        class: Option<ClassId>,
    },
    /// Turn a certificate for one class into one for another.
    Transform {
        quiver: PathBuf,
        cert: PathBuf,
        #[arg(long, value_parser = parse_class)]
        to: ClassId,
        #[arg(long, value_parser = parse_class)]
        from: Option<ClassId>,
    },
    /// Look for Banff quivers without a Louise certificate.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        max_mult: u32,
        /// Every quiver up to isomorphism instead of a random sample.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "QUIVERFORGE_PORT", default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub max_classes: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub max_entry: Option<u64>,
    #[arg(long)]
    pub max_ms: Option<u64>,
}

impl BudgetArgs {
    pub fn build(&self) -> Result<SearchBudget, OpError> {
        let mut b = BudgetDoc::default();
        if let Some(v) = self.max_classes {
            b.max_iso_classes = v;
        }
        if let Some(v) = self.max_depth {
            b.max_depth = v;
        }
        if let Some(v) = self.max_entry {
            b.max_abs_entry = v;
        }
        if let Some(v) = self.max_ms {
            b.max_millis = v;
        }
        b.build()
    }
}

fn parse_class(s: &str) -> Result<ClassId, String> {
    s.parse().map_err(|e: quiverforge_core::membership::UnknownClass| e.to_string())
}

/// What a command printed and how it should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn new(stdout: String, code: u8) -> Self {
        Outcome { stdout, code }
    }
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;

fn verdict_code<T>(v: &Verdict<T>) -> u8 {
    match v {
        Verdict::Certified { .. } => EXIT_OK,
        Verdict::RefutedExhaustive => EXIT_NEGATIVE,
        Verdict::Unknown { .. } => EXIT_UNKNOWN,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// A quiver or certificate that could not be read.
    #[error("{0}")]
    Input(OpError),
    #[error(transparent)]
    Op(#[from] OpError),
}

impl CliError {
    /// Malformed input is a usage error; a well-formed input that fails a
    /// check is a negative result.
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Input(_) | CliError::Op(OpError::Malformed(_)) => EXIT_USAGE,
            CliError::Op(OpError::Invalid(_)) => EXIT_NEGATIVE,
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn read_quiver(path: &PathBuf) -> Result<Quiver, CliError> {
    parse::<QuiverDoc>(&read_input(path)?).and_then(|d| d.build()).map_err(CliError::Input)
}

fn read_certificate(path: &PathBuf) -> Result<(Option<ClassId>, Certificate), CliError> {
    parse::<CertificateDoc>(&read_input(path)?).and_then(CertificateDoc::into_parts).map_err(CliError::Input)
}

/// Run a parsed command other than `serve`.
pub fn run(command: &Command) -> Result<Outcome, CliError> {
    Ok(match command {
        Command::Mutate { file, vertex, sequence } => {
            let q = read_quiver(file)?;
            let steps: MutationSequence = vertex.iter().chain(sequence).map(|&v| VertexId::new(v)).collect();
            Outcome::new(render(&ops::mutate(&q, &steps).map_err(CliError::Input)?), EXIT_OK)
        }
        Command::Analyze { file } => Outcome::new(render(&ops::analyze_quiver(&read_quiver(file)?)), EXIT_OK),
        Command::Canon { file } => Outcome::new(render(&ops::canon(&read_quiver(file)?)), EXIT_OK),
        Command::Search { file, budget } => {
            let q = read_quiver(file)?;
            Outcome::new(render(&ops::search(&q, &budget.build().map_err(CliError::Input)?)?), EXIT_OK)
        }
        Command::Certify { file, class, budget } => {
            let q = read_quiver(file)?;
            let out = ops::certify(&q, *class, &budget.build().map_err(CliError::Input)?)?;
            Outcome::new(render(&out), verdict_code(&out.verdict))
        }
        Command::Checkcert { quiver, cert, class } => {
            let q = read_quiver(quiver)?;
            let (recorded, cert) = read_certificate(cert)?;
            let result = match class.or(recorded) {
                Some(c) => ops::checkcert(&q, &cert, c),
                None => {
                    let all: Vec<_> = ClassId::ALL.into_iter().map(|c| ops::checkcert(&q, &cert, c)).collect();
                    match all.iter().find(|r| r.valid) {
                        Some(r) => r.clone(),
                        None => all[0].clone(),
                    }
                }
            };
            let code = if result.valid { EXIT_OK } else { EXIT_NEGATIVE };
            Outcome::new(render(&result), code)
        }
        Command::Transform { quiver, cert, to, from } => {
            let q = read_quiver(quiver)?;
            let (recorded, cert) = read_certificate(cert)?;
            Outcome::new(render(&ops::transform(&q, &cert, from.or(recorded), *to)?), EXIT_OK)
        }
        Command::Scan { n, seed, count, max_mult, exhaustive, budget } => {
            let source = if *exhaustive {
                ScanSource::Exhaustive { n: *n, max_mult: *max_mult }
            } else {
                ScanSource::Sample { n: *n, max_mult: *max_mult, count: *count, seed: *seed }
            };
            let report = ops::scan(&source, &budget.build().map_err(CliError::Input)?)?;
            let code = if report.candidates.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
            Outcome::new(render(&report), code)
        }
        Command::Serve { .. } => unreachable!("serve is handled by main"),
    })
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if let Command::Serve { port, host } = cli.command {
        return match crate::http::serve((host, port).into()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        };
    }
    match run(&cli.command) {
        Ok(out) => {
            println!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
