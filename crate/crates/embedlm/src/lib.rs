//! Next-word language modeling in word-embedding space.
//!
//! The pipeline: tokenize a text corpus, attach an embedding vector to every
//! token (from a vector file, a self-trained embedding model, or a
//! persistent store of invented out-of-vocabulary vectors), slide a fixed
//! context window over the resulting sequence, train a GRU to regress the
//! next word's vector, and score predictions by cosine distance against a
//! random-vocabulary-word baseline.
//!
//! Everything is deterministic: all randomness flows from explicit `u64`
//! seeds through ChaCha8 streams, collections iterate in insertion or sorted
//! order, and every file format round-trips floats bit for bit. Running the
//! same experiment twice, in one process or two, produces identical bytes.

pub mod dataset;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod glove;
pub mod gru;
pub mod linalg;
pub mod tokenizer;

pub use dataset::{make_windows, split, WindowExample, WindowedDataset};
pub use embedding::{lookup_or_create, oov_key, EmbeddingTable, OovStore, Provenance};
pub use error::{Error, ParseErrorKind, Result};
pub use eval::{
    cosine_distance, evaluate, export_distribution, random_baseline_prediction,
    ErrorDistribution, Histogram, SummaryStats,
};
pub use glove::{
    build_cooccurrence, export_embeddings, glove_gradients, glove_loss, train_glove, weight_f,
    weight_total, CooccurrenceCounts, GloveConfig, GloveModel,
};
pub use gru::{
    backward, forward, gru_step, load_checkpoint, mse_loss, predict, read_checkpoint,
    rmsprop_update, save_checkpoint, train, write_checkpoint, Checkpoint, ForwardTrace,
    GruParameters, Mode, OptimizerState, TrainingConfig,
};
pub use linalg::{dot, sigmoid, Matrix};
pub use tokenizer::{
    tokenize, tokenize_file_to_vectors, tokenize_text, TokenVectorSequence, TokenizeOutcome,
};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 42;
