//! Embedding training on co-occurrence counts, in the GloVe formulation.
//!
//! The corpus is reduced to a sparse symmetric count matrix X, where X_ij
//! accumulates, for every co-occurrence of words i and j within a fixed
//! window, either 1 or 1/d for distance d. The model holds a word vector,
//! a context vector, and two biases per vocabulary word, fit by minimizing
//!
//! J = sum over stored pairs of f(X_ij) (w_i·w~_j + b_i + b~_j − ln X_ij)²
//!
//! with f(x) = (x/x_max)^alpha for x < x_max and 1 otherwise, using
//! per-parameter AdaGrad on one pair at a time.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{EmbeddingTable, Provenance};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Sparse co-occurrence counts over a vocabulary in first-appearance order.
///
/// Storage is symmetric: every event adds to both (i, j) and (j, i), so
/// `count(i, j) == count(j, i)` always, and a word co-occurring with itself
/// receives both directed events. Pairs iterate in sorted key order.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceCounts {
    vocab: Vec<String>,
    index: HashMap<String, usize>,
    counts: BTreeMap<(u32, u32), f64>,
    window: usize,
    distance_weighted: bool,
}

impl CooccurrenceCounts {
    /// Assemble counts directly, mainly for tests and small experiments.
    /// Pairs are (word index, context index, count); symmetry is not imposed
    /// here, callers that want it supply both directions.
    pub fn from_pairs(
        vocab: Vec<String>,
        pairs: &[(usize, usize, f64)],
        window: usize,
        distance_weighted: bool,
    ) -> Result<Self> {
        if vocab.is_empty() {
            return Err(Error::InvalidInput("empty vocabulary".to_string()));
        }
        let mut index = HashMap::new();
        for (i, token) in vocab.iter().enumerate() {
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(Error::InvalidInput(format!("bad vocabulary token {token:?}")));
            }
            if index.insert(token.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate vocabulary token {token:?}"
                )));
            }
        }
        let mut counts = BTreeMap::new();
        for &(i, j, x) in pairs {
            if i >= vocab.len() || j >= vocab.len() {
                return Err(Error::InvalidInput(format!(
                    "pair ({i}, {j}) outside vocabulary of {}",
                    vocab.len()
                )));
            }
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "count for pair ({i}, {j}) must be positive and finite, got {x}"
                )));
            }
            if counts.insert((i as u32, j as u32), x).is_some() {
                return Err(Error::InvalidInput(format!("pair ({i}, {j}) given twice")));
            }
        }
        Ok(CooccurrenceCounts {
            vocab,
            index,
            counts,
            window,
            distance_weighted,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn token_index(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn distance_weighted(&self) -> bool {
        self.distance_weighted
    }

    /// Number of stored (directed) pairs.
    pub fn num_pairs(&self) -> usize {
        self.counts.len()
    }

    /// The count for (i, j), zero if the pair never co-occurred.
    pub fn count(&self, i: usize, j: usize) -> f64 {
        self.counts
            .get(&(i as u32, j as u32))
            .copied()
            .unwrap_or(0.0)
    }

    /// Stored pairs in sorted key order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.counts
            .iter()
            .map(|(&(i, j), &x)| (i as usize, j as usize, x))
    }
}

/// Scan `tokens` with a forward window of `window` positions and accumulate
/// symmetric co-occurrence counts. With `distance_weighted`, an occurrence
/// at distance d contributes 1/d instead of 1.
pub fn build_cooccurrence(
    tokens: &[String],
    window: usize,
    distance_weighted: bool,
) -> Result<CooccurrenceCounts> {
    if window == 0 {
        return Err(Error::InvalidInput(
            "co-occurrence window must be at least 1".to_string(),
        ));
    }
    if tokens.is_empty() {
        return Err(Error::InvalidInput("no tokens to count".to_string()));
    }
    let mut vocab: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let ids: Vec<u32> = tokens
        .iter()
        .map(|t| {
            let next = vocab.len();
            *index.entry(t.clone()).or_insert_with(|| {
                vocab.push(t.clone());
                next
            }) as u32
        })
        .collect();
    if vocab.len() > u32::MAX as usize {
        return Err(Error::InvalidInput("vocabulary too large".to_string()));
    }
    let mut counts: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for p in 0..ids.len() {
        let end = (p + window).min(ids.len() - 1);
        for q in (p + 1)..=end {
            let w = if distance_weighted {
                1.0 / (q - p) as f64
            } else {
                1.0
            };
            let (i, j) = (ids[p], ids[q]);
            *counts.entry((i, j)).or_insert(0.0) += w;
            *counts.entry((j, i)).or_insert(0.0) += w;
        }
    }
    Ok(CooccurrenceCounts {
        vocab,
        index,
        counts,
        window,
        distance_weighted,
    })
}

/// The loss weighting: (x/x_max)^alpha below the cap, 1 at and above it.
pub fn weight_f(x: f64, x_max: f64, alpha: f64) -> f64 {
    if x < x_max {
        (x / x_max).powf(alpha)
    } else {
        1.0
    }
}

/// Hyperparameters for embedding training.
#[derive(Debug, Clone)]
pub struct GloveConfig {
    pub dimension: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub x_max: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl GloveConfig {
    pub fn new(dimension: usize, epochs: usize) -> Self {
        GloveConfig {
            dimension,
            epochs,
            learning_rate: 0.05,
            x_max: 100.0,
            alpha: 0.75,
            seed: crate::DEFAULT_SEED,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidInput(
                "embedding dimension must be at least 1".to_string(),
            ));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if !(self.x_max > 0.0 && self.x_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "x_max must be positive and finite, got {}",
                self.x_max
            )));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "alpha must be non-negative and finite, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Word vectors, context vectors, and the two bias sets. Also serves as the
/// gradient accumulator, since gradients share the parameter shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct GloveModel {
    dimension: usize,
    pub word_vectors: Matrix,
    pub context_vectors: Matrix,
    pub word_biases: Vec<f64>,
    pub context_biases: Vec<f64>,
}

impl GloveModel {
    pub fn zeros(vocab_size: usize, dimension: usize) -> Self {
        GloveModel {
            dimension,
            word_vectors: Matrix::zeros(vocab_size, dimension),
            context_vectors: Matrix::zeros(vocab_size, dimension),
            word_biases: vec![0.0; vocab_size],
            context_biases: vec![0.0; vocab_size],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vocab_size(&self) -> usize {
        self.word_biases.len()
    }

    /// All parameters as named flat slices, in a fixed order.
    pub fn tensors_mut(&mut self) -> [(&'static str, &mut [f64]); 4] {
        [
            ("word_vectors", self.word_vectors.as_mut_slice()),
            ("context_vectors", self.context_vectors.as_mut_slice()),
            ("word_biases", self.word_biases.as_mut_slice()),
            ("context_biases", self.context_biases.as_mut_slice()),
        ]
    }

    fn check_shape(&self, counts: &CooccurrenceCounts) -> Result<()> {
        if self.vocab_size() != counts.vocab_size() {
            return Err(Error::DimensionMismatch {
                context: "model vocabulary vs counts vocabulary".to_string(),
                expected: counts.vocab_size(),
                got: self.vocab_size(),
            });
        }
        Ok(())
    }
}

/// The objective J summed over the stored pairs.
pub fn glove_loss(
    model: &GloveModel,
    counts: &CooccurrenceCounts,
    config: &GloveConfig,
) -> Result<f64> {
    model.check_shape(counts)?;
    let mut total = 0.0;
    for (i, j, x) in counts.pairs() {
        let e = residual(model, i, j, x);
        total += weight_f(x, config.x_max, config.alpha) * e * e;
    }
    Ok(total)
}

/// Sum of f(X_ij) over stored pairs, the normalizer for a weighted mean of
/// squared residuals.
pub fn weight_total(counts: &CooccurrenceCounts, config: &GloveConfig) -> f64 {
    counts
        .pairs()
        .map(|(_, _, x)| weight_f(x, config.x_max, config.alpha))
        .sum()
}

fn residual(model: &GloveModel, i: usize, j: usize, x: f64) -> f64 {
    crate::linalg::dot(model.word_vectors.row(i), model.context_vectors.row(j))
        + model.word_biases[i]
        + model.context_biases[j]
        - x.ln()
}

/// Analytic gradient of [`glove_loss`] with respect to every parameter,
/// returned in a model-shaped container.
pub fn glove_gradients(
    model: &GloveModel,
    counts: &CooccurrenceCounts,
    config: &GloveConfig,
) -> Result<GloveModel> {
    model.check_shape(counts)?;
    let mut grads = GloveModel::zeros(model.vocab_size(), model.dimension());
    for (i, j, x) in counts.pairs() {
        let e = residual(model, i, j, x);
        let c = 2.0 * weight_f(x, config.x_max, config.alpha) * e;
        let w_i = model.word_vectors.row(i);
        let ctx_j = model.context_vectors.row(j);
        for d in 0..model.dimension() {
            grads.word_vectors[(i, d)] += c * ctx_j[d];
            grads.context_vectors[(j, d)] += c * w_i[d];
        }
        grads.word_biases[i] += c;
        grads.context_biases[j] += c;
    }
    Ok(grads)
}

/// Fit a model to `counts`.
///
/// Parameters initialize uniformly in [-0.5/D, 0.5/D), filling word vectors,
/// context vectors, word biases, then context biases from one seeded stream.
/// Each epoch visits every stored pair once in a freshly shuffled order
/// (same stream) and applies AdaGrad to the parameters that pair touches:
/// the squared gradient accumulates, then the parameter moves by
/// lr · g / sqrt(acc + 1e-8).
///
/// Returns the model and the loss history: J before training, then J after
/// each epoch, `epochs + 1` entries in all.
pub fn train_glove(
    counts: &CooccurrenceCounts,
    config: &GloveConfig,
) -> Result<(GloveModel, Vec<f64>)> {
    config.validate()?;
    if counts.num_pairs() == 0 {
        return Err(Error::InvalidInput(
            "no co-occurrence pairs to train on".to_string(),
        ));
    }
    const ADAGRAD_EPS: f64 = 1e-8;
    let vocab = counts.vocab_size();
    let dim = config.dimension;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = GloveModel::zeros(vocab, dim);
    let scale = 1.0 / dim as f64;
    for (_, slice) in model.tensors_mut() {
        for p in slice.iter_mut() {
            *p = (rng.gen::<f64>() - 0.5) * scale;
        }
    }
    let mut acc = GloveModel::zeros(vocab, dim);

    let mut order: Vec<(usize, usize, f64)> = counts.pairs().collect();
    let mut history = Vec::with_capacity(config.epochs + 1);
    history.push(glove_loss(&model, counts, config)?);

    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &(i, j, x) in &order {
            let e = residual(&model, i, j, x);
            let c = 2.0 * weight_f(x, config.x_max, config.alpha) * e;
            for d in 0..dim {
                let gw = c * model.context_vectors[(j, d)];
                let gc = c * model.word_vectors[(i, d)];
                acc.word_vectors[(i, d)] += gw * gw;
                model.word_vectors[(i, d)] -=
                    config.learning_rate * gw / (acc.word_vectors[(i, d)] + ADAGRAD_EPS).sqrt();
                acc.context_vectors[(j, d)] += gc * gc;
                model.context_vectors[(j, d)] -=
                    config.learning_rate * gc / (acc.context_vectors[(j, d)] + ADAGRAD_EPS).sqrt();
            }
            acc.word_biases[i] += c * c;
            model.word_biases[i] -=
                config.learning_rate * c / (acc.word_biases[i] + ADAGRAD_EPS).sqrt();
            acc.context_biases[j] += c * c;
            model.context_biases[j] -=
                config.learning_rate * c / (acc.context_biases[j] + ADAGRAD_EPS).sqrt();
        }
        history.push(glove_loss(&model, counts, config)?);
    }
    Ok((model, history))
}

/// A table mapping each vocabulary word to w_i + w~_i, the conventional
/// combined embedding.
pub fn export_embeddings(
    model: &GloveModel,
    counts: &CooccurrenceCounts,
) -> Result<EmbeddingTable> {
    model.check_shape(counts)?;
    let mut table = EmbeddingTable::new(model.dimension(), Provenance::Trained)?;
    for (i, token) in counts.vocab().iter().enumerate() {
        let combined: Vec<f64> = model
            .word_vectors
            .row(i)
            .iter()
            .zip(model.context_vectors.row(i))
            .map(|(a, b)| a + b)
            .collect();
        table.insert(token, combined)?;
    }
    Ok(table)
}
