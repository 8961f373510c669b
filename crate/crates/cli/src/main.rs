mod commands;
mod error;
mod params;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;
use run::Format;

#[derive(Parser)]
#[command(name = "lsaw", version, about = "Build, evaluate and trace semantic spaces")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
pub struct Common {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct CorpusInput {
    /// Manifest of `path<TAB>category<TAB>level` lines.
    #[arg(long, group = "source")]
    pub manifest: Option<PathBuf>,
    /// Tokenized paragraph records written by `build` or `stratify`.
    #[arg(long, group = "source")]
    pub records: Option<PathBuf>,
    #[command(flatten)]
    pub tokenize: TokenizeArgs,
    /// Token to lemma table.
    #[arg(long)]
    pub lemma_map: Option<PathBuf>,
    /// none, verbs-only or all.
    #[arg(long)]
    pub lemma_mode: Option<String>,
}

#[derive(Args)]
pub struct TokenizeArgs {
    /// keep, split or strip.
    #[arg(long)]
    pub apostrophe: Option<String>,
    /// keep or split.
    #[arg(long)]
    pub hyphen: Option<String>,
}

#[derive(Args)]
pub struct SvdArgs {
    /// Number of retained dimensions.
    #[arg(long)]
    pub k: Option<usize>,
    /// auto, dense or randomized.
    #[arg(long)]
    pub solver: Option<String>,
    /// sigma or none.
    #[arg(long)]
    pub scaling: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a corpus and build a semantic space.
    Build {
        #[command(flatten)]
        corpus: CorpusInput,
        #[command(flatten)]
        svd: SvdArgs,
        /// Minimum total occurrences of a kept term.
        #[arg(long)]
        min_count: Option<u64>,
        /// Common-word list; paragraphs are stratified before building.
        #[arg(long)]
        words: Option<PathBuf>,
    },
    /// Query a saved space.
    Query {
        /// Space file written by `build`.
        #[arg(long)]
        space: PathBuf,
        #[command(subcommand)]
        query: commands::Query,
    },
    /// Run a behavioral protocol against a saved space.
    Eval {
        /// Space file written by `build`.
        #[arg(long)]
        space: PathBuf,
        #[command(subcommand)]
        protocol: commands::Protocol,
    },
    /// Score readability and order paragraphs by level.
    Stratify {
        #[command(flatten)]
        corpus: CorpusInput,
        /// Common-word list, one word per line.
        #[arg(long)]
        words: PathBuf,
    },
    /// Replay corpus growth and attribute similarity gains.
    Trace {
        #[command(flatten)]
        corpus: CorpusInput,
        #[command(flatten)]
        svd: SvdArgs,
        /// Word pairs, one `x<TAB>y` per line.
        #[arg(long)]
        pairs: PathBuf,
        /// Paragraphs already in the space before tracing starts.
        #[arg(long)]
        start: Option<usize>,
        /// Last paragraph traced; defaults to the corpus length.
        #[arg(long)]
        end: Option<usize>,
        /// exact or stride:N.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        checkpoint_every: Option<usize>,
    },
    /// Simulate comprehension of a proposition list.
    Comprehend {
        /// Space file written by `build`.
        #[arg(long)]
        space: PathBuf,
        /// One `pred(arg,...)` per line.
        #[arg(long)]
        propositions: PathBuf,
        #[command(flatten)]
        ci: commands::CiArgs,
    },
    /// Write a small example bundle of corpora and datasets.
    Synth,
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    let c = &cli.common;
    match cli.command {
        Command::Build { corpus, svd, min_count, words } => commands::build(c, &corpus, &svd, min_count, words.as_deref()),
        Command::Query { space, query } => commands::query(c, &space, &query),
        Command::Eval { space, protocol } => commands::eval(c, &space, &protocol),
        Command::Stratify { corpus, words } => commands::stratify(c, &corpus, &words),
        Command::Trace { corpus, svd, pairs, start, end, mode, checkpoint, checkpoint_every } => commands::trace(
            c,
            &corpus,
            &svd,
            &commands::TraceArgs { pairs, start, end, mode, checkpoint, checkpoint_every },
        ),
        Command::Comprehend { space, propositions, ci } => commands::comprehend(c, &space, &propositions, &ci),
        Command::Synth => commands::synth(c),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
