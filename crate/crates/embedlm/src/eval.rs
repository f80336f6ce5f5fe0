//! Model evaluation in embedding space.
//!
//! The quality measure is the cosine distance 1 − x·y / (‖x‖‖y‖) between the
//! predicted vector and the true next-word vector, compared against a
//! baseline that predicts the vector of a uniformly random vocabulary word.
//! Results export as a CSV of per-example distances plus a sibling summary
//! file with aggregate statistics and a histogram.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::WindowedDataset;
use crate::embedding::EmbeddingTable;
use crate::error::{Error, Result};
use crate::gru::{predict, GruParameters};

/// Cosine distance, 1 − cos(x, y), in [0, 2].
///
/// Both vectors are pre-scaled by their largest magnitude so the norms can
/// neither overflow nor underflow, and the cosine is clamped to [−1, 1]
/// before subtracting, so rounding can not push the result out of range.
/// A zero vector has no direction and is an error.
pub fn cosine_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            context: "cosine distance".to_string(),
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::InvalidInput(
            "cosine distance of zero-length vectors".to_string(),
        ));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "cosine distance of non-finite vectors".to_string(),
        ));
    }
    let mx = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let my = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if mx == 0.0 {
        return Err(Error::ZeroNorm("first vector"));
    }
    if my == 0.0 {
        return Err(Error::ZeroNorm("second vector"));
    }
    let mut dot = 0.0;
    let mut nx = 0.0;
    let mut ny = 0.0;
    for (a, b) in x.iter().zip(y) {
        let a = a / mx;
        let b = b / my;
        dot += a * b;
        nx += a * a;
        ny += b * b;
    }
    let cos = (dot / (nx.sqrt() * ny.sqrt())).clamp(-1.0, 1.0);
    Ok(1.0 - cos)
}

/// The baseline: the vector of a vocabulary word drawn uniformly at random,
/// in the table's insertion order.
pub fn random_baseline_prediction(
    vocab: &EmbeddingTable,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    if vocab.is_empty() {
        return Err(Error::InvalidInput(
            "cannot draw a baseline from an empty vocabulary".to_string(),
        ));
    }
    let i = rng.gen_range(0..vocab.len());
    Ok(vocab.entry_at(i).1.to_vec())
}

/// Mean, median, and population standard deviation of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
}

impl SummaryStats {
    pub fn compute(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput(
                "no values to summarize".to_string(),
            ));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        };
        Ok(SummaryStats {
            mean,
            median,
            stddev: variance.sqrt(),
        })
    }
}

/// Counts of model and baseline distances over 50 equal bins spanning
/// [0, 2], the full cosine-distance range. A distance of exactly 2 lands in
/// the last bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub model_counts: Vec<usize>,
    pub random_counts: Vec<usize>,
}

pub const HISTOGRAM_BINS: usize = 50;
const HISTOGRAM_BIN_WIDTH: f64 = 0.04;

/// Paired per-example distances from one evaluation run, with the indices
/// of examples that had to be skipped (a zero-norm vector on either side
/// leaves the distance undefined).
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorDistribution {
    pub example_indices: Vec<usize>,
    pub model_distances: Vec<f64>,
    pub random_distances: Vec<f64>,
    pub skipped: Vec<usize>,
}

impl ErrorDistribution {
    pub fn len(&self) -> usize {
        self.model_distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.model_distances.is_empty()
    }

    pub fn model_stats(&self) -> Result<SummaryStats> {
        SummaryStats::compute(&self.model_distances)
    }

    pub fn random_stats(&self) -> Result<SummaryStats> {
        SummaryStats::compute(&self.random_distances)
    }

    pub fn histogram(&self) -> Histogram {
        let bin = |d: f64| ((d / HISTOGRAM_BIN_WIDTH) as usize).min(HISTOGRAM_BINS - 1);
        let mut model_counts = vec![0; HISTOGRAM_BINS];
        let mut random_counts = vec![0; HISTOGRAM_BINS];
        for &d in &self.model_distances {
            model_counts[bin(d)] += 1;
        }
        for &d in &self.random_distances {
            random_counts[bin(d)] += 1;
        }
        Histogram {
            edges: (0..=HISTOGRAM_BINS)
                .map(|k| k as f64 * HISTOGRAM_BIN_WIDTH)
                .collect(),
            model_counts,
            random_counts,
        }
    }
}

/// Run the model over every test example and pair each model distance with
/// a baseline distance.
///
/// Examples with a zero-norm target are skipped before the baseline rng is
/// touched, so the k-th draw always belongs to the k-th example with a
/// usable target regardless of how many were skipped earlier. The rare
/// degenerate prediction (zero-norm model output or baseline pick) is also
/// skipped, after the draw.
pub fn evaluate(
    params: &GruParameters,
    test: &WindowedDataset,
    vocab: &EmbeddingTable,
    seed: u64,
) -> Result<ErrorDistribution> {
    if test.dimension() != params.input_dim {
        return Err(Error::DimensionMismatch {
            context: "test examples vs model input".to_string(),
            expected: params.input_dim,
            got: test.dimension(),
        });
    }
    if vocab.dimension() != params.input_dim {
        return Err(Error::DimensionMismatch {
            context: "vocabulary vs model input".to_string(),
            expected: params.input_dim,
            got: vocab.dimension(),
        });
    }
    if test.is_empty() {
        return Err(Error::InvalidInput(
            "no test examples; the test split must be longer than the window".to_string(),
        ));
    }
    if vocab.is_empty() {
        return Err(Error::InvalidInput("empty vocabulary".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dist = ErrorDistribution {
        example_indices: Vec::new(),
        model_distances: Vec::new(),
        random_distances: Vec::new(),
        skipped: Vec::new(),
    };
    for (idx, ex) in test.examples().iter().enumerate() {
        if ex.target.iter().all(|&v| v == 0.0) {
            dist.skipped.push(idx);
            continue;
        }
        let random = random_baseline_prediction(vocab, &mut rng)?;
        let prediction = predict(params, &ex.inputs);
        match (
            cosine_distance(&prediction, &ex.target),
            cosine_distance(&random, &ex.target),
        ) {
            (Ok(dm), Ok(dr)) => {
                dist.example_indices.push(idx);
                dist.model_distances.push(dm);
                dist.random_distances.push(dr);
            }
            _ => dist.skipped.push(idx),
        }
    }
    Ok(dist)
}

/// Write the distribution as `index,model_distance,random_distance` CSV
/// rows (shortest round-trip floats) and a `<csv_path>.summary` sibling
/// with counts, aggregate statistics, and the histogram. Returns the
/// summary path.
pub fn export_distribution(dist: &ErrorDistribution, csv_path: &Path) -> Result<PathBuf> {
    if dist.is_empty() {
        return Err(Error::InvalidInput(
            "no evaluated examples to export".to_string(),
        ));
    }
    let file = File::create(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let mut w = BufWriter::new(file);
    let io_err = |e| Error::io(csv_path, e);
    writeln!(w, "index,model_distance,random_distance").map_err(io_err)?;
    for k in 0..dist.len() {
        writeln!(
            w,
            "{},{},{}",
            dist.example_indices[k], dist.model_distances[k], dist.random_distances[k]
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;

    let mut summary_os = csv_path.as_os_str().to_os_string();
    summary_os.push(".summary");
    let summary_path = PathBuf::from(summary_os);
    let model = dist.model_stats()?;
    let random = dist.random_stats()?;
    let hist = dist.histogram();
    let file = File::create(&summary_path).map_err(|e| Error::io(&summary_path, e))?;
    let mut w = BufWriter::new(file);
    let io_err = |e| Error::io(&summary_path, e);
    writeln!(w, "examples {}", dist.len()).map_err(io_err)?;
    writeln!(w, "skipped {}", dist.skipped.len()).map_err(io_err)?;
    writeln!(w, "model_mean {}", model.mean).map_err(io_err)?;
    writeln!(w, "model_median {}", model.median).map_err(io_err)?;
    writeln!(w, "model_stddev {}", model.stddev).map_err(io_err)?;
    writeln!(w, "random_mean {}", random.mean).map_err(io_err)?;
    writeln!(w, "random_median {}", random.median).map_err(io_err)?;
    writeln!(w, "random_stddev {}", random.stddev).map_err(io_err)?;
    writeln!(w, "histogram bin_start bin_end model_count random_count").map_err(io_err)?;
    for b in 0..HISTOGRAM_BINS {
        writeln!(
            w,
            "{:.2} {:.2} {} {}",
            hist.edges[b],
            hist.edges[b + 1],
            hist.model_counts[b],
            hist.random_counts[b]
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    Ok(summary_path)
}
