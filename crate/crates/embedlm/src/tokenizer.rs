//! Corpus tokenization and the tokenized-sequence file format.
//!
//! Tokenization splits on whitespace, then splits each chunk into maximal
//! runs of alphanumeric characters (words) and runs of everything else
//! (punctuation), so `"end."` becomes `["end", "."]` and `"don't"` becomes
//! `["don", "'", "t"]`. Tokens are lowercased unless case is kept.
//!
//! A tokenized sequence pairs each corpus token, in order, with its vector.
//! Its file format is the same record-per-line layout as a vector file,
//! except tokens may repeat.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::embedding::{
    lookup_or_create, read_records, write_record, EmbeddingTable, OovStore, Provenance,
};
use crate::error::{Error, ParseErrorKind, Result};

/// Split `text` into word and punctuation tokens. No token is empty or
/// contains whitespace, and for ASCII input the concatenation of the tokens
/// equals the input with its whitespace removed.
pub fn tokenize(text: &str, lowercase: bool) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let mut run = String::new();
        let mut run_is_word = false;
        for ch in chunk.chars() {
            let is_word = ch.is_alphanumeric();
            if !run.is_empty() && is_word != run_is_word {
                tokens.push(std::mem::take(&mut run));
            }
            run_is_word = is_word;
            if lowercase {
                run.extend(ch.to_lowercase());
            } else {
                run.push(ch);
            }
        }
        if !run.is_empty() {
            tokens.push(run);
        }
    }
    tokens
}

/// Tokenize with the default lowercasing behavior.
pub fn tokenize_text(text: &str) -> Vec<String> {
    tokenize(text, true)
}

/// A corpus as an ordered list of (token, vector) pairs, all vectors sharing
/// one dimension. Unlike an [`EmbeddingTable`], tokens repeat freely.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenVectorSequence {
    dimension: usize,
    items: Vec<(String, Vec<f64>)>,
    source_path: Option<PathBuf>,
}

impl TokenVectorSequence {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput(
                "sequence dimension must be at least 1".to_string(),
            ));
        }
        Ok(TokenVectorSequence {
            dimension,
            items: Vec::new(),
            source_path: None,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn source_path(&self) -> Option<&Path> {
        self.source_path.as_deref()
    }

    /// The i-th (token, vector) pair in corpus order.
    pub fn item(&self, i: usize) -> (&str, &[f64]) {
        let (token, vector) = &self.items[i];
        (token, vector)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.items.iter().map(|(t, v)| (t.as_str(), v.as_slice()))
    }

    pub fn push(&mut self, token: &str, vector: Vec<f64>) -> Result<()> {
        if token.is_empty() {
            return Err(Error::InvalidInput("empty token".to_string()));
        }
        if token.chars().any(char::is_whitespace) {
            return Err(Error::InvalidInput(format!(
                "token {token:?} contains whitespace"
            )));
        }
        if vector.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                context: format!("vector for token {token:?}"),
                expected: self.dimension,
                got: vector.len(),
            });
        }
        if vector.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "vector for token {token:?} has a non-finite component"
            )));
        }
        self.items.push((token.to_string(), vector));
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut seq = Self::parse_reader(BufReader::new(file), &path.display().to_string())?;
        seq.source_path = Some(path.to_path_buf());
        Ok(seq)
    }

    pub fn parse_reader(reader: impl BufRead, origin: &str) -> Result<Self> {
        let records = read_records(reader, origin)?;
        let mut seq: Option<TokenVectorSequence> = None;
        for ((token, vector), _line_no) in records {
            let seq = seq.get_or_insert_with(|| TokenVectorSequence {
                dimension: vector.len(),
                items: Vec::new(),
                source_path: None,
            });
            seq.items.push((token, vector));
        }
        seq.ok_or_else(|| Error::parse(origin, 1, ParseErrorKind::NoRecords))
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidInput(
                "refusing to write an empty sequence: the result would not parse back".to_string(),
            ));
        }
        for (token, vector) in self.iter() {
            write_record(w, token, vector).map_err(|e| Error::io("<writer>", e))?;
        }
        Ok(())
    }

    /// Collapse the sequence to its unique tokens, keeping first-appearance
    /// order. Repeated tokens must repeat their vector bit for bit;
    /// a token seen twice with different vectors is an error.
    pub fn vocabulary(&self) -> Result<EmbeddingTable> {
        let mut table = EmbeddingTable::new(self.dimension, Provenance::Merged)?;
        for (token, vector) in self.iter() {
            match table.get(token) {
                None => table.insert(token, vector.to_vec())?,
                Some(existing) => {
                    let same = existing.len() == vector.len()
                        && existing
                            .iter()
                            .zip(vector)
                            .all(|(a, b)| a.to_bits() == b.to_bits());
                    if !same {
                        return Err(Error::InvalidInput(format!(
                            "token {token:?} appears with two different vectors"
                        )));
                    }
                }
            }
        }
        Ok(table)
    }
}

/// What a tokenize-and-resolve pass produced.
pub struct TokenizeOutcome {
    pub sequence: TokenVectorSequence,
    /// Tokens newly added to the out-of-vocabulary store by this pass.
    pub new_oov: usize,
}

/// Tokenize the text file at `input_path`, resolve every token against
/// `table` (inventing vectors through `oov` as needed), optionally write the
/// sequence to `output_path`, and persist any new out-of-vocabulary entries.
pub fn tokenize_file_to_vectors(
    table: &EmbeddingTable,
    oov: &mut OovStore,
    input_path: &Path,
    output_path: Option<&Path>,
    seed: u64,
    lowercase: bool,
) -> Result<TokenizeOutcome> {
    let text = std::fs::read_to_string(input_path).map_err(|e| Error::io(input_path, e))?;
    let tokens = tokenize(&text, lowercase);
    if tokens.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no tokens in {}",
            input_path.display()
        )));
    }
    oov.validate_disjoint(table)?;
    let before = oov.len();
    let mut sequence = TokenVectorSequence::new(table.dimension())?;
    for token in &tokens {
        let vector = lookup_or_create(table, oov, token, seed);
        sequence.push(token, vector)?;
    }
    let new_oov = oov.len() - before;
    oov.persist_new()?;
    if let Some(path) = output_path {
        sequence.write_file(path)?;
    }
    Ok(TokenizeOutcome { sequence, new_oov })
}
