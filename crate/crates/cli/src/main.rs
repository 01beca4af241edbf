use clap::{Parser, Subcommand, ValueEnum};
use fqg::error::Error;
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "fqg", version, about = "Finite quantum groups: axioms, duals, idempotent states, hypergroups and Poisson states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Presentation file (JSON).
    #[arg(long, global = true, conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    /// Built-in quantum group such as c:Z4 or g:S3.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the quantum group (or hypergroup) axioms.
    Verify,
    /// Irreducible corepresentations and orthogonality relations.
    Irreps,
    /// Enumerate idempotent states.
    Idempotents,
    /// Hypergroups of idempotent states.
    Hypergroup(Selection),
    /// Duality between the hypergroup of an idempotent and the compressed dual.
    Duality(Selection),
    /// Decompose a generator as r(v - φ).
    PoissonDecompose {
        #[command(flatten)]
        selection: Selection,
        /// Generator covector file; a random generator is drawn when omitted.
        #[arg(long)]
        generator: Option<PathBuf>,
    },
    /// Search for roots of a state and extract a Poisson generator.
    DivisibleCheck {
        /// State covector file.
        #[arg(long)]
        state: PathBuf,
        /// Root order; defaults to lcm(1..dim).
        #[arg(long)]
        root_order: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Root-chain battery on sampled Poisson states and non-divisible states.
    Suite {
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct Selection {
    /// Index into the enumerated idempotent states.
    #[arg(long)]
    pub idempotent_index: Option<usize>,
    /// Idempotent state covector file.
    #[arg(long, conflicts_with = "idempotent_index")]
    pub phi: Option<PathBuf>,
}

/// Result of a command before rendering.
pub struct Outcome {
    pub pass: bool,
    pub body: Map<String, Value>,
    pub lines: Vec<String>,
}

pub enum Failure {
    Input(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Malformed(_) | Error::Dimension(_) | Error::TooLarge(_) => Failure::Input(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify => "verify",
        Command::Irreps => "irreps",
        Command::Idempotents => "idempotents",
        Command::Hypergroup(_) => "hypergroup",
        Command::Duality(_) => "duality",
        Command::PoissonDecompose { .. } => "poisson-decompose",
        Command::DivisibleCheck { .. } => "divisible-check",
        Command::Suite { .. } => "suite",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let source = match (&cli.input, &cli.builtin) {
        (Some(p), _) => p.display().to_string(),
        (None, Some(b)) => b.clone(),
        (None, None) => String::new(),
    };
    let mut head = Map::new();
    head.insert("schema".into(), json!("fqg/1"));
    head.insert("command".into(), json!(name));
    head.insert("source".into(), json!(source));
    let (code, pass, body, lines) = if !(cli.tol > 0.0) {
        (2, false, error_body("input", "tolerance must be positive"), vec!["error: tolerance must be positive".into()])
    } else {
        match commands::run(&cli) {
            Ok(o) => (if o.pass { 0 } else { 1 }, o.pass, o.body, o.lines),
            Err(Failure::Input(msg)) => (2, false, error_body("input", &msg), vec![format!("input error: {msg}")]),
            Err(Failure::Math(msg)) => (1, false, error_body("math", &msg), vec![format!("failure: {msg}")]),
        }
    };
    match cli.output {
        OutputFormat::Json => {
            head.insert("pass".into(), json!(pass));
            head.extend(body);
            println!("{}", serde_json::to_string_pretty(&Value::Object(head)).expect("serializable"));
        }
        OutputFormat::Table => {
            println!("{name} {source}");
            for l in lines {
                println!("{l}");
            }
            println!("{}", if pass { "PASS" } else { "FAIL" });
        }
    }
    ExitCode::from(code)
}

fn error_body(kind: &str, msg: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("error".into(), json!({"kind": kind, "message": msg}));
    m
}
