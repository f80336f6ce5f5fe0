use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

/// Prints an informational line to stdout, ignoring write failures. The
/// declared output files are the contract; losing the pipe (say, to `head`)
/// must not abort the run before they are written.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// Like [`say!`] for stderr, used for timing lines so stdout stays
/// byte-deterministic.
macro_rules! note {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stderr(), $($arg)*);
    }};
}

use embedlm::{
    build_cooccurrence, evaluate, export_distribution, export_embeddings, load_checkpoint,
    make_windows, save_checkpoint, split, tokenize, tokenize_file_to_vectors, train, train_glove,
    EmbeddingTable, GloveConfig, OovStore, TokenVectorSequence, TrainingConfig, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(
    name = "embedlm",
    version,
    about = "Next-word prediction in word-embedding space: tokenize a corpus, \
             train embeddings, train a GRU to predict the next word's vector, \
             and score it against a random baseline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize a text file and attach an embedding vector to every token.
    ///
    /// Tokens missing from the vector file get deterministic random vectors,
    /// recorded in the extra-vocabulary file so later runs reuse them.
    Tokenize(TokenizeArgs),
    /// Train embedding vectors on a corpus and write them as a vector file.
    TrainGlove(TrainGloveArgs),
    /// Train the recurrent predictor on a tokenized sequence and evaluate it
    /// on the held-out tail.
    RunExperiment(RunExperimentArgs),
    /// Re-evaluate a saved checkpoint on the held-out tail of a sequence.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct TokenizeArgs {
    /// Vector file providing the vocabulary embeddings.
    #[arg(long, value_name = "FILE")]
    glove_vectors: PathBuf,
    /// Text file to tokenize.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Where to write the token-vector sequence.
    #[arg(long, value_name = "FILE")]
    tokenized_file: PathBuf,
    /// Persistent store for invented out-of-vocabulary vectors.
    #[arg(long, value_name = "FILE")]
    extra_vocab: PathBuf,
    /// Seed for inventing out-of-vocabulary vectors.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Keep the corpus case instead of lowercasing tokens.
    #[arg(long)]
    keep_case: bool,
}

#[derive(Args)]
struct TrainGloveArgs {
    /// Text corpus to train on.
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Where to write the trained vector file.
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
    /// Embedding dimension.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    /// Training epochs.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    epochs: u64,
    #[arg(long, default_value_t = 0.05)]
    learning_rate: f64,
    /// Co-occurrence cap in the loss weighting.
    #[arg(long, default_value_t = 100.0)]
    x_max: f64,
    /// Exponent in the loss weighting.
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    /// Co-occurrence window, in tokens.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    window: u64,
    /// Count each co-occurrence as 1 instead of 1/distance.
    #[arg(long)]
    no_distance_weighting: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Keep the corpus case instead of lowercasing tokens.
    #[arg(long)]
    keep_case: bool,
}

#[derive(Args)]
struct RunExperimentArgs {
    /// Token-vector sequence produced by `tokenize`.
    #[arg(long, value_name = "FILE")]
    tokenized_file: PathBuf,
    /// Where to write per-example distances; a `.summary` sibling is written
    /// next to it.
    #[arg(long, value_name = "FILE")]
    eval_csv: PathBuf,
    /// Where to save the trained model.
    #[arg(long, value_name = "FILE")]
    checkpoint: PathBuf,
    /// Context window: how many preceding tokens predict the next one.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    window: u64,
    /// Hidden state size.
    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
    hidden_size: u64,
    /// Training epochs.
    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
    epochs: u64,
    /// Dropout rate on the final hidden state during training.
    #[arg(long, default_value_t = 0.8)]
    dropout: f64,
    /// Fraction of the sequence used for training; the rest is the test set.
    #[arg(long, default_value_t = 0.7)]
    split: f64,
    #[arg(long, default_value_t = 0.001)]
    learning_rate: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Token-vector sequence produced by `tokenize`.
    #[arg(long, value_name = "FILE")]
    tokenized_file: PathBuf,
    /// Checkpoint produced by `run-experiment`; the context window is read
    /// from it.
    #[arg(long, value_name = "FILE")]
    checkpoint: PathBuf,
    /// Where to write per-example distances; a `.summary` sibling is written
    /// next to it.
    #[arg(long, value_name = "FILE")]
    eval_csv: PathBuf,
    /// Fraction of the sequence that was used for training.
    #[arg(long, default_value_t = 0.7)]
    split: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        note!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Tokenize(args) => cmd_tokenize(args),
        Command::TrainGlove(args) => cmd_train_glove(args),
        Command::RunExperiment(args) => cmd_run_experiment(args),
        Command::Evaluate(args) => cmd_evaluate(args),
    }
}

/// Fail before any expensive work if an output can not be created.
fn check_output_path(path: &Path) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() && !parent.is_dir() {
            anyhow::bail!(
                "output directory {} does not exist (for {})",
                parent.display(),
                path.display()
            );
        }
    }
    Ok(())
}

fn cmd_tokenize(args: TokenizeArgs) -> anyhow::Result<()> {
    check_output_path(&args.tokenized_file)?;
    check_output_path(&args.extra_vocab)?;
    let table = EmbeddingTable::parse_file(&args.glove_vectors)
        .context("reading the vector file")?;
    let mut oov = OovStore::load(&args.extra_vocab, table.dimension())
        .context("reading the extra-vocabulary file")?;
    let outcome = tokenize_file_to_vectors(
        &table,
        &mut oov,
        &args.input,
        Some(&args.tokenized_file),
        args.seed,
        !args.keep_case,
    )?;
    say!("tokens {}", outcome.sequence.len());
    say!("new_oov {}", outcome.new_oov);
    say!("wrote {}", args.tokenized_file.display());
    say!("wrote {}", args.extra_vocab.display());
    Ok(())
}

fn cmd_train_glove(args: TrainGloveArgs) -> anyhow::Result<()> {
    check_output_path(&args.output)?;
    let text = std::fs::read_to_string(&args.corpus)
        .with_context(|| format!("reading corpus {}", args.corpus.display()))?;
    let tokens = tokenize(&text, !args.keep_case);
    let counts = build_cooccurrence(&tokens, args.window as usize, !args.no_distance_weighting)?;
    say!("tokens {}", tokens.len());
    say!("vocabulary {}", counts.vocab_size());
    say!("pairs {}", counts.num_pairs());

    let config = GloveConfig {
        dimension: args.dim as usize,
        epochs: args.epochs as usize,
        learning_rate: args.learning_rate,
        x_max: args.x_max,
        alpha: args.alpha,
        seed: args.seed,
    };
    let started = Instant::now();
    let (model, history) = train_glove(&counts, &config)?;
    note!("training took {:.1}s", started.elapsed().as_secs_f64());
    say!("initial loss {}", history[0]);
    for (i, loss) in history.iter().enumerate().skip(1) {
        say!("epoch {i} loss {loss}");
    }
    let table = export_embeddings(&model, &counts)?;
    table.write_file(&args.output)?;
    say!("wrote {}", args.output.display());
    Ok(())
}

fn cmd_run_experiment(args: RunExperimentArgs) -> anyhow::Result<()> {
    check_output_path(&args.eval_csv)?;
    check_output_path(&args.checkpoint)?;
    let seq = TokenVectorSequence::read_file(&args.tokenized_file)
        .context("reading the tokenized sequence")?;
    let (train_seq, test_seq) = split(&seq, args.split)?;
    let window = args.window as usize;
    let train_data = make_windows(&train_seq, window)?;
    let test_data = make_windows(&test_seq, window)?;
    say!("train tokens {}", train_seq.len());
    say!("test tokens {}", test_seq.len());
    say!("train examples {}", train_data.len());
    say!("test examples {}", test_data.len());
    if train_data.is_empty() {
        anyhow::bail!(
            "training split has {} tokens, need more than the window ({window})",
            train_seq.len()
        );
    }
    if test_data.is_empty() {
        anyhow::bail!(
            "test split has {} tokens, need more than the window ({window})",
            test_seq.len()
        );
    }

    let config = TrainingConfig {
        epochs: args.epochs as usize,
        hidden: args.hidden_size as usize,
        window,
        dropout_rate: args.dropout,
        learning_rate: args.learning_rate,
        seed: args.seed,
        ..TrainingConfig::new(0)
    };
    let started = Instant::now();
    let (params, history) = train(&train_data, &config)?;
    note!("training took {:.1}s", started.elapsed().as_secs_f64());
    for (i, loss) in history.iter().enumerate() {
        say!("epoch {} loss {}", i + 1, loss);
    }
    save_checkpoint(&params, window, &args.checkpoint)?;
    say!("wrote {}", args.checkpoint.display());

    let vocab = seq.vocabulary().context("collecting the vocabulary")?;
    let started = Instant::now();
    let dist = evaluate(&params, &test_data, &vocab, args.seed)?;
    note!("evaluation took {:.1}s", started.elapsed().as_secs_f64());
    report_distribution(&dist, &args.eval_csv)
}

fn cmd_evaluate(args: EvaluateArgs) -> anyhow::Result<()> {
    check_output_path(&args.eval_csv)?;
    let checkpoint = load_checkpoint(&args.checkpoint).context("reading the checkpoint")?;
    let seq = TokenVectorSequence::read_file(&args.tokenized_file)
        .context("reading the tokenized sequence")?;
    let (_, test_seq) = split(&seq, args.split)?;
    let test_data = make_windows(&test_seq, checkpoint.window)?;
    say!("test tokens {}", test_seq.len());
    say!("test examples {}", test_data.len());
    if test_data.is_empty() {
        anyhow::bail!(
            "test split has {} tokens, need more than the window ({})",
            test_seq.len(),
            checkpoint.window
        );
    }
    let vocab = seq.vocabulary().context("collecting the vocabulary")?;
    let dist = evaluate(&checkpoint.params, &test_data, &vocab, args.seed)?;
    report_distribution(&dist, &args.eval_csv)
}

fn report_distribution(
    dist: &embedlm::ErrorDistribution,
    csv_path: &Path,
) -> anyhow::Result<()> {
    let summary_path = export_distribution(dist, csv_path)?;
    say!("evaluated {} examples (skipped {})", dist.len(), dist.skipped.len());
    let model = dist.model_stats()?;
    let random = dist.random_stats()?;
    say!("model mean distance {}", model.mean);
    say!("random mean distance {}", random.mean);
    say!("wrote {}", csv_path.display());
    say!("wrote {}", summary_path.display());
    Ok(())
}
