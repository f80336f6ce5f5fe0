//! Word-vector tables in the plain text vector format, plus the persistent
//! out-of-vocabulary store.
//!
//! The file format is one record per line: a token followed by its vector
//! components, all separated by exactly one ASCII space, LF-terminated.
//! Tokens contain no whitespace; components are decimal reals. The dimension
//! is inferred from the first record and every later record must match it.
//! Writing uses Rust's shortest round-trip float formatting, so
//! parse(write(table)) reproduces every value bit for bit.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, ParseErrorKind, Result};

/// Where a table's vectors came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Parsed from a vector file.
    Loaded,
    /// Produced by the embedding trainer.
    Trained,
    /// Assembled from other sources (e.g. the unique tokens of a sequence).
    Merged,
}

/// An ordered token → vector mapping with a fixed dimension.
///
/// Iteration order is insertion order. Tokens are unique, contain no
/// whitespace, and every vector has exactly `dimension` finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    tokens: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
    source: Provenance,
}

impl EmbeddingTable {
    pub fn new(dimension: usize, source: Provenance) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput(
                "embedding dimension must be at least 1".to_string(),
            ));
        }
        Ok(EmbeddingTable {
            dimension,
            tokens: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
            source,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn source(&self) -> Provenance {
        self.source
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.vectors[i].as_slice())
    }

    /// The i-th entry in insertion order.
    pub fn entry_at(&self, i: usize) -> (&str, &[f64]) {
        (&self.tokens[i], &self.vectors[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.tokens
            .iter()
            .map(String::as_str)
            .zip(self.vectors.iter().map(Vec::as_slice))
    }

    pub fn insert(&mut self, token: &str, vector: Vec<f64>) -> Result<()> {
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
        if self.index.contains_key(token) {
            return Err(Error::InvalidInput(format!("duplicate token {token:?}")));
        }
        self.index.insert(token.to_string(), self.tokens.len());
        self.tokens.push(token.to_string());
        self.vectors.push(vector);
        Ok(())
    }

    /// Parse a vector file. The dimension comes from the first record;
    /// duplicate tokens, ragged records, and non-finite components are
    /// rejected with their line number.
    pub fn parse_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut table = Self::parse_reader(BufReader::new(file), &path.display().to_string())?;
        table.source = Provenance::Loaded;
        Ok(table)
    }

    pub fn parse_reader(reader: impl BufRead, origin: &str) -> Result<Self> {
        let mut table: Option<EmbeddingTable> = None;
        for (record, line_no) in read_records(reader, origin)? {
            let (token, vector) = record;
            let table = match table.as_mut() {
                Some(t) => t,
                None => {
                    table = Some(EmbeddingTable {
                        dimension: vector.len(),
                        tokens: Vec::new(),
                        vectors: Vec::new(),
                        index: HashMap::new(),
                        source: Provenance::Loaded,
                    });
                    table.as_mut().unwrap()
                }
            };
            if vector.len() != table.dimension {
                return Err(Error::parse(
                    origin,
                    line_no,
                    ParseErrorKind::ComponentCount {
                        expected: table.dimension,
                        got: vector.len(),
                    },
                ));
            }
            if table.index.contains_key(&token) {
                return Err(Error::parse(
                    origin,
                    line_no,
                    ParseErrorKind::DuplicateToken { token },
                ));
            }
            table.index.insert(token.clone(), table.tokens.len());
            table.tokens.push(token);
            table.vectors.push(vector);
        }
        table.ok_or_else(|| Error::parse(origin, 1, ParseErrorKind::NoRecords))
    }

    /// Write in the same line format `parse_file` accepts. Writing an empty
    /// table is an error: the output could never be parsed back.
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
                "refusing to write an empty table: the result would not parse back".to_string(),
            ));
        }
        for (token, vector) in self.iter() {
            write_record(w, token, vector).map_err(|e| Error::io("<writer>", e))?;
        }
        Ok(())
    }
}

/// Persistent store of vectors invented for tokens the main table lacks.
///
/// Entries keep insertion order; a token queried twice yields the identical
/// vector, within one run and across runs that share the seed and the
/// backing file.
#[derive(Debug, Clone)]
pub struct OovStore {
    dimension: usize,
    tokens: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
    backing_path: Option<PathBuf>,
    /// Entries `[0, persisted)` are already on disk.
    persisted: usize,
}

impl OovStore {
    /// Store without a backing file, for in-memory pipelines.
    pub fn in_memory(dimension: usize) -> Self {
        OovStore {
            dimension,
            tokens: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
            backing_path: None,
            persisted: 0,
        }
    }

    /// Load the store from `path`. A missing or zero-length file is an empty
    /// store; anything else must parse as a vector file of the expected
    /// dimension.
    pub fn load(path: &Path, dimension: usize) -> Result<Self> {
        let mut store = Self::in_memory(dimension);
        store.backing_path = Some(path.to_path_buf());
        match std::fs::metadata(path) {
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(store),
            Err(e) => return Err(Error::io(path, e)),
            Ok(m) if m.len() == 0 => return Ok(store),
            Ok(_) => {}
        }
        let table = EmbeddingTable::parse_file(path)?;
        if table.dimension() != dimension {
            return Err(Error::DimensionMismatch {
                context: format!("out-of-vocabulary file {}", path.display()),
                expected: dimension,
                got: table.dimension(),
            });
        }
        store.index = table.index;
        store.tokens = table.tokens;
        store.vectors = table.vectors;
        store.persisted = store.tokens.len();
        Ok(store)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.vectors[i].as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.tokens
            .iter()
            .map(String::as_str)
            .zip(self.vectors.iter().map(Vec::as_slice))
    }

    /// Number of entries not yet written to the backing file.
    pub fn pending(&self) -> usize {
        self.tokens.len() - self.persisted
    }

    /// The store must not shadow tokens the main table already covers.
    pub fn validate_disjoint(&self, table: &EmbeddingTable) -> Result<()> {
        for token in &self.tokens {
            if table.contains(token) {
                return Err(Error::InvalidInput(format!(
                    "out-of-vocabulary store and vector table both define token {token:?}"
                )));
            }
        }
        Ok(())
    }

    /// Append entries added since the last load/persist to the backing file,
    /// creating it if needed. Existing file contents are left untouched.
    pub fn persist_new(&mut self) -> Result<usize> {
        let path = self.backing_path.clone().ok_or_else(|| {
            Error::InvalidInput("out-of-vocabulary store has no backing file".to_string())
        })?;
        let added = self.tokens.len() - self.persisted;
        if added == 0 {
            return Ok(0);
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        let mut w = BufWriter::new(file);
        for i in self.persisted..self.tokens.len() {
            write_record(&mut w, &self.tokens[i], &self.vectors[i])
                .map_err(|e| Error::io(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        self.persisted = self.tokens.len();
        Ok(added)
    }

    fn insert_new(&mut self, token: &str, vector: Vec<f64>) {
        debug_assert!(!self.index.contains_key(token));
        debug_assert_eq!(vector.len(), self.dimension);
        self.index.insert(token.to_string(), self.tokens.len());
        self.tokens.push(token.to_string());
        self.vectors.push(vector);
    }
}

/// Key for the generator behind an out-of-vocabulary vector: FNV-1a (64-bit)
/// over the seed's little-endian bytes followed by the token's UTF-8 bytes.
/// This keeps invented vectors stable across runs and platforms.
pub fn oov_key(seed: u64, token: &str) -> u64 {
    const OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET_BASIS;
    for b in seed.to_le_bytes().into_iter().chain(token.bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

fn random_oov_vector(dimension: usize, seed: u64, token: &str) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(oov_key(seed, token));
    (0..dimension).map(|_| rng.gen::<f64>() - 0.5).collect()
}

/// Resolve a token to a vector: the table wins, then the store, and only
/// then is a fresh vector invented (components uniform in [-0.5, 0.5)) and
/// recorded in the store.
///
/// The result is a pure function of (table, store, token, seed).
pub fn lookup_or_create(
    table: &EmbeddingTable,
    oov: &mut OovStore,
    token: &str,
    seed: u64,
) -> Vec<f64> {
    assert_eq!(
        table.dimension(),
        oov.dimension(),
        "table and out-of-vocabulary store must share a dimension"
    );
    if let Some(v) = table.get(token) {
        return v.to_vec();
    }
    if let Some(v) = oov.get(token) {
        return v.to_vec();
    }
    let v = random_oov_vector(table.dimension(), seed, token);
    oov.insert_new(token, v.clone());
    v
}

/// A parsed `(token, vector)` record paired with its 1-based line number.
pub(crate) type NumberedRecord = ((String, Vec<f64>), usize);

/// Iterate the records of a vector-format file, with 1-based line numbers.
/// Shared by the table parser and the tokenized-sequence parser; uniqueness
/// is the caller's concern.
pub(crate) fn read_records(reader: impl BufRead, origin: &str) -> Result<Vec<NumberedRecord>> {
    let mut out = Vec::new();
    let mut expected: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        let record = parse_record(&line, expected)
            .map_err(|kind| Error::parse(origin, line_no, kind))?;
        expected = Some(record.1.len());
        out.push((record, line_no));
    }
    Ok(out)
}

/// Parse one `token c1 c2 … cD` line. `expected` is the dimension fixed by
/// the first record, if any.
pub(crate) fn parse_record(
    line: &str,
    expected: Option<usize>,
) -> std::result::Result<(String, Vec<f64>), ParseErrorKind> {
    let mut fields = line.split(' ');
    let token = fields.next().unwrap_or("");
    if token.is_empty() {
        return Err(ParseErrorKind::EmptyToken);
    }
    if token.chars().any(char::is_whitespace) {
        return Err(ParseErrorKind::TokenWhitespace);
    }
    let mut vector = Vec::new();
    for field in fields {
        let value: f64 = field
            .parse()
            .map_err(|_| ParseErrorKind::InvalidNumber {
                text: field.to_string(),
            })?;
        if !value.is_finite() {
            return Err(ParseErrorKind::NonFinite {
                text: field.to_string(),
            });
        }
        vector.push(value);
    }
    match expected {
        None if vector.is_empty() => Err(ParseErrorKind::NoComponents),
        Some(d) if vector.len() != d => Err(ParseErrorKind::ComponentCount {
            expected: d,
            got: vector.len(),
        }),
        _ => Ok((token.to_string(), vector)),
    }
}

/// Write one record line. Components use Rust's shortest round-trip decimal
/// form, so reloading reproduces the exact bits.
pub(crate) fn write_record(
    w: &mut impl Write,
    token: &str,
    vector: &[f64],
) -> std::io::Result<()> {
    w.write_all(token.as_bytes())?;
    for c in vector {
        write!(w, " {c}")?;
    }
    w.write_all(b"\n")
}
