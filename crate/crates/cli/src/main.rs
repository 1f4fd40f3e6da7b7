use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jem_cli::commands::{self, CliError, CliResult, Outcome, QueryKind, RefuteMode};
use jem_cli::document::{formula_lines, load_document, ModelDocument};
use jem_core::syntax::{parse_formula, Formula};
use jem_core::Limits;

/// Model checker and search tools for justification logic models.
///
/// Exit codes: 0 holds/pass, 1 fails/refuted, 2 input error, 3 resource limit.
#[derive(Parser)]
#[command(name = "jem", version)]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum distinct abstract atoms in an entailment check.
    #[arg(long, global = true, env = "JEM_ATOM_LIMIT", default_value_t = Limits::default().atoms)]
    atom_limit: usize,
    /// Maximum candidates a bounded search may visit.
    #[arg(long, global = true, env = "JEM_SEARCH_LIMIT", default_value_t = Limits::default().search)]
    search_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula in a model document.
    Eval {
        model: PathBuf,
        formula: String,
        /// World to evaluate at, for multi-world documents.
        #[arg(long)]
        world: Option<String>,
    },
    /// Check closure, the constant specification and JEM conditions.
    Check {
        model: PathBuf,
        /// Term depth (and specification nesting) explored by the checks.
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Look for a J- derivation of a goal from hypotheses.
    Derive {
        /// File with one hypothesis per line.
        hyps: PathBuf,
        goal: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Search for a countermodel; prints it as a model document.
    Refute {
        goal: String,
        /// Maximum number of members of a finite term value.
        #[arg(long, default_value_t = 3)]
        padding: usize,
        /// Any basic model, not necessarily closed under application.
        #[arg(long, conflicts_with = "sharp_injective")]
        classical: bool,
        /// Hypotheses file for --classical.
        #[arg(long, requires = "classical")]
        hyps: Option<PathBuf>,
        /// Sample random sharp injective models instead of searching.
        #[arg(long)]
        sharp_injective: bool,
        #[arg(long, default_value_t = 1000, requires = "sharp_injective")]
        samples: usize,
        #[arg(long, default_value_t = 0, requires = "sharp_injective")]
        seed: u64,
    },
    /// Report on the true, justified, believed but unknown B.
    Russell,
    /// Extract a Kripke model from a multi-world document.
    Kripke { model: PathBuf },
    /// Epistemic queries against a JEM document.
    Query {
        #[arg(value_enum)]
        kind: Kind,
        model: PathBuf,
        formula: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        world: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Believed,
    Known,
    Modal,
}

fn formula(text: &str) -> CliResult<Formula> {
    parse_formula(text).map_err(|e| CliError::Input(format!("in `{text}`: {e}")))
}

fn document(path: &Path) -> CliResult<ModelDocument> {
    load_document(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn hypotheses(path: &Path) -> CliResult<Vec<Formula>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    formula_lines(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let limits = Limits { atoms: cli.atom_limit, search: cli.search_limit };
    match &cli.command {
        Command::Eval { model, formula: f, world } => {
            commands::eval(&document(model)?, world.as_deref(), &formula(f)?)
        }
        Command::Check { model, depth } => commands::check(&document(model)?, *depth, &limits),
        Command::Derive { hyps, goal, depth } => {
            commands::derive(&hypotheses(hyps)?, &formula(goal)?, *depth, &limits)
        }
        Command::Refute { goal, padding, classical, hyps, sharp_injective, samples, seed } => {
            let mode = if *sharp_injective {
                RefuteMode::SharpInjective { samples: *samples, seed: *seed }
            } else if *classical {
                let hyps = hyps.as_deref().map(hypotheses).transpose()?.unwrap_or_default();
                RefuteMode::Classical { hyps }
            } else {
                RefuteMode::JMinus { padding: *padding }
            };
            commands::refute(&formula(goal)?, &mode, &limits)
        }
        Command::Russell => Ok(commands::russell()),
        Command::Kripke { model } => commands::kripke(&document(model)?),
        Command::Query { kind, model, formula: f, depth, world } => {
            let kind = match kind {
                Kind::Believed => QueryKind::Believed,
                Kind::Known => QueryKind::Known,
                Kind::Modal => QueryKind::Modal,
            };
            commands::query(kind, &document(model)?, world.as_deref(), &formula(f)?, *depth, &limits)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&outcome.json).expect("serializable"));
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            if cli.json {
                let v = serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() });
                println!("{v}");
            }
            eprintln!("jem: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
