//! Turning a token-vector sequence into supervised training data.
//!
//! The split is contiguous, not shuffled: the first ⌊N·fraction⌋ items are
//! the training prefix and the rest are the test suffix, preserving corpus
//! order on both sides. Examples are built by sliding a fixed-size window
//! one position at a time: the window's vectors are the input sequence and
//! the vector immediately after it is the target.

use crate::error::{Error, Result};
use crate::tokenizer::TokenVectorSequence;

/// One many-to-one example: `inputs` in corpus order, then the next vector.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowExample {
    pub inputs: Vec<Vec<f64>>,
    pub target: Vec<f64>,
    /// Corpus token of the target, for reporting.
    pub target_token: String,
}

/// All window examples drawn from one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedDataset {
    window: usize,
    dimension: usize,
    examples: Vec<WindowExample>,
}

impl WindowedDataset {
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn examples(&self) -> &[WindowExample] {
        &self.examples
    }
}

/// Split `seq` at ⌊N·fraction⌋ into contiguous (train, test) halves.
/// `fraction` must lie in (0, 1]; with 1.0 the test side is empty.
pub fn split(
    seq: &TokenVectorSequence,
    fraction: f64,
) -> Result<(TokenVectorSequence, TokenVectorSequence)> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("cannot split an empty sequence".to_string()));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "split fraction must be in (0, 1], got {fraction}"
        )));
    }
    let cut = ((seq.len() as f64) * fraction).floor() as usize;
    let mut train = TokenVectorSequence::new(seq.dimension())?;
    let mut test = TokenVectorSequence::new(seq.dimension())?;
    for i in 0..seq.len() {
        let (token, vector) = seq.item(i);
        if i < cut {
            train.push(token, vector.to_vec())?;
        } else {
            test.push(token, vector.to_vec())?;
        }
    }
    Ok((train, test))
}

/// Slide a window of `window` vectors over `seq`; each position yields the
/// window as inputs and the following vector as target. A sequence of N
/// items yields max(0, N − window) examples.
pub fn make_windows(seq: &TokenVectorSequence, window: usize) -> Result<WindowedDataset> {
    if window == 0 {
        return Err(Error::InvalidInput("window size must be at least 1".to_string()));
    }
    let n = seq.len();
    let count = n.saturating_sub(window);
    let mut examples = Vec::with_capacity(count);
    for start in 0..count {
        let inputs: Vec<Vec<f64>> = (start..start + window)
            .map(|i| seq.item(i).1.to_vec())
            .collect();
        let (target_token, target) = seq.item(start + window);
        examples.push(WindowExample {
            inputs,
            target: target.to_vec(),
            target_token: target_token.to_string(),
        });
    }
    Ok(WindowedDataset {
        window,
        dimension: seq.dimension(),
        examples,
    })
}
