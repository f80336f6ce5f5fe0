//! A gated recurrent unit regressor trained with backpropagation through
//! time, plus its optimizer and on-disk checkpoint format.
//!
//! The cell follows the standard equations
//!
//! z_t = σ(W_z x_t + U_z h_{t−1} + b_z)
//! r_t = σ(W_r x_t + U_r h_{t−1} + b_r)
//! h~_t = tanh(W_h x_t + U_h (r_t ⊙ h_{t−1}) + b_h)
//! h_t = (1 − z_t) ⊙ h_{t−1} + z_t ⊙ h~_t
//!
//! with h_0 = 0. A linear layer maps the final hidden state to a vector the
//! size of the input embedding; training minimizes mean squared error
//! against the target embedding. During training, inverted dropout is
//! applied to the final hidden state only: each component is zeroed with
//! probability `dropout_rate` and survivors are scaled by 1/(1 − rate), so
//! inference uses the weights unchanged.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::WindowedDataset;
use crate::error::{Error, ParseErrorKind, Result};
use crate::linalg::{sigmoid, Matrix};

/// All weights of the recurrent cell and the output layer. Also serves as
/// the gradient and optimizer-cache container, since those share the
/// parameter shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct GruParameters {
    pub input_dim: usize,
    pub hidden: usize,
    pub w_update: Matrix,
    pub u_update: Matrix,
    pub b_update: Vec<f64>,
    pub w_reset: Matrix,
    pub u_reset: Matrix,
    pub b_reset: Vec<f64>,
    pub w_cand: Matrix,
    pub u_cand: Matrix,
    pub b_cand: Vec<f64>,
    pub w_out: Matrix,
    pub b_out: Vec<f64>,
}

impl GruParameters {
    pub fn zeros(input_dim: usize, hidden: usize) -> Self {
        GruParameters {
            input_dim,
            hidden,
            w_update: Matrix::zeros(hidden, input_dim),
            u_update: Matrix::zeros(hidden, hidden),
            b_update: vec![0.0; hidden],
            w_reset: Matrix::zeros(hidden, input_dim),
            u_reset: Matrix::zeros(hidden, hidden),
            b_reset: vec![0.0; hidden],
            w_cand: Matrix::zeros(hidden, input_dim),
            u_cand: Matrix::zeros(hidden, hidden),
            b_cand: vec![0.0; hidden],
            w_out: Matrix::zeros(input_dim, hidden),
            b_out: vec![0.0; input_dim],
        }
    }

    /// Weight matrices drawn uniformly from [−1/√H, 1/√H) in tensor order;
    /// biases start at zero.
    pub fn init(input_dim: usize, hidden: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut p = Self::zeros(input_dim, hidden);
        let scale = 2.0 / (hidden as f64).sqrt();
        for m in [
            &mut p.w_update,
            &mut p.u_update,
            &mut p.w_reset,
            &mut p.u_reset,
            &mut p.w_cand,
            &mut p.u_cand,
            &mut p.w_out,
        ] {
            for v in m.as_mut_slice() {
                *v = (rng.gen::<f64>() - 0.5) * scale;
            }
        }
        p
    }

    /// Parameter tensors as named flat slices, in the fixed order the
    /// checkpoint format uses.
    pub fn tensors(&self) -> [(&'static str, &[f64]); 11] {
        [
            ("w_update", self.w_update.as_slice()),
            ("u_update", self.u_update.as_slice()),
            ("b_update", &self.b_update),
            ("w_reset", self.w_reset.as_slice()),
            ("u_reset", self.u_reset.as_slice()),
            ("b_reset", &self.b_reset),
            ("w_cand", self.w_cand.as_slice()),
            ("u_cand", self.u_cand.as_slice()),
            ("b_cand", &self.b_cand),
            ("w_out", self.w_out.as_slice()),
            ("b_out", &self.b_out),
        ]
    }

    pub fn tensors_mut(&mut self) -> [(&'static str, &mut [f64]); 11] {
        [
            ("w_update", self.w_update.as_mut_slice()),
            ("u_update", self.u_update.as_mut_slice()),
            ("b_update", &mut self.b_update),
            ("w_reset", self.w_reset.as_mut_slice()),
            ("u_reset", self.u_reset.as_mut_slice()),
            ("b_reset", &mut self.b_reset),
            ("w_cand", self.w_cand.as_mut_slice()),
            ("u_cand", self.u_cand.as_mut_slice()),
            ("b_cand", &mut self.b_cand),
            ("w_out", self.w_out.as_mut_slice()),
            ("b_out", &mut self.b_out),
        ]
    }

    /// (name, rows, cols) for each tensor; bias vectors are 1 × len rows.
    fn tensor_shapes(input_dim: usize, hidden: usize) -> [(&'static str, usize, usize); 11] {
        [
            ("w_update", hidden, input_dim),
            ("u_update", hidden, hidden),
            ("b_update", 1, hidden),
            ("w_reset", hidden, input_dim),
            ("u_reset", hidden, hidden),
            ("b_reset", 1, hidden),
            ("w_cand", hidden, input_dim),
            ("u_cand", hidden, hidden),
            ("b_cand", 1, hidden),
            ("w_out", input_dim, hidden),
            ("b_out", 1, input_dim),
        ]
    }
}

/// Gate activations for one step. Shapes are programmer contract, enforced
/// with asserts rather than `Result`.
fn gates(params: &GruParameters, x: &[f64], h_prev: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    assert_eq!(x.len(), params.input_dim, "input width");
    assert_eq!(h_prev.len(), params.hidden, "hidden width");
    let h = params.hidden;

    let mut a_z = params.w_update.matvec(x);
    let uz = params.u_update.matvec(h_prev);
    let mut a_r = params.w_reset.matvec(x);
    let ur = params.u_reset.matvec(h_prev);
    for k in 0..h {
        a_z[k] = sigmoid(a_z[k] + uz[k] + params.b_update[k]);
        a_r[k] = sigmoid(a_r[k] + ur[k] + params.b_reset[k]);
    }
    let (z, r) = (a_z, a_r);

    let rh: Vec<f64> = r.iter().zip(h_prev).map(|(a, b)| a * b).collect();
    let mut a_c = params.w_cand.matvec(x);
    let uc = params.u_cand.matvec(&rh);
    for k in 0..h {
        a_c[k] = (a_c[k] + uc[k] + params.b_cand[k]).tanh();
    }
    (z, r, a_c)
}

/// One recurrence step: the next hidden state given an input vector.
pub fn gru_step(params: &GruParameters, x: &[f64], h_prev: &[f64]) -> Vec<f64> {
    let (z, _, c) = gates(params, x, h_prev);
    (0..params.hidden)
        .map(|k| (1.0 - z[k]) * h_prev[k] + z[k] * c[k])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Infer,
}

/// Everything the backward pass needs from a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub inputs: Vec<Vec<f64>>,
    /// h_0 through h_T, so one longer than `inputs`.
    pub hidden: Vec<Vec<f64>>,
    pub updates: Vec<Vec<f64>>,
    pub resets: Vec<Vec<f64>>,
    pub candidates: Vec<Vec<f64>>,
    /// Inverted-dropout mask on the final hidden state: each entry is 0 or
    /// 1/(1 − rate); all ones when dropout is off.
    pub mask: Vec<f64>,
    pub dropped_hidden: Vec<f64>,
    pub prediction: Vec<f64>,
}

/// Run the cell over `inputs` and the output layer over the (masked) final
/// hidden state. In `Mode::Train` with a positive rate an rng must be
/// supplied for the mask; with rate 0 or in `Mode::Infer` the rng is never
/// touched, so dropout-free runs draw nothing from the stream.
pub fn forward(
    params: &GruParameters,
    inputs: &[Vec<f64>],
    dropout_rate: f64,
    mode: Mode,
    rng: Option<&mut ChaCha8Rng>,
) -> (Vec<f64>, ForwardTrace) {
    assert!(
        (0.0..1.0).contains(&dropout_rate),
        "dropout rate must be in [0, 1), got {dropout_rate}"
    );
    let h_dim = params.hidden;
    let steps = inputs.len();
    let mut hidden = Vec::with_capacity(steps + 1);
    hidden.push(vec![0.0; h_dim]);
    let mut updates = Vec::with_capacity(steps);
    let mut resets = Vec::with_capacity(steps);
    let mut candidates = Vec::with_capacity(steps);
    for x in inputs {
        let h_prev = hidden.last().unwrap();
        let (z, r, c) = gates(params, x, h_prev);
        let h: Vec<f64> = (0..h_dim)
            .map(|k| (1.0 - z[k]) * h_prev[k] + z[k] * c[k])
            .collect();
        updates.push(z);
        resets.push(r);
        candidates.push(c);
        hidden.push(h);
    }

    let mask: Vec<f64> = if mode == Mode::Train && dropout_rate > 0.0 {
        let rng = rng.expect("training with dropout requires an rng");
        let keep_scale = 1.0 / (1.0 - dropout_rate);
        (0..h_dim)
            .map(|_| {
                if rng.gen::<f64>() < dropout_rate {
                    0.0
                } else {
                    keep_scale
                }
            })
            .collect()
    } else {
        vec![1.0; h_dim]
    };

    let dropped_hidden: Vec<f64> = hidden
        .last()
        .unwrap()
        .iter()
        .zip(&mask)
        .map(|(h, m)| h * m)
        .collect();
    let mut prediction = params.w_out.matvec(&dropped_hidden);
    for (p, b) in prediction.iter_mut().zip(&params.b_out) {
        *p += b;
    }
    let trace = ForwardTrace {
        inputs: inputs.to_vec(),
        hidden,
        updates,
        resets,
        candidates,
        mask,
        dropped_hidden,
        prediction: prediction.clone(),
    };
    (prediction, trace)
}

/// Mean squared error, (1/D) Σ (p_k − t_k)².
pub fn mse_loss(prediction: &[f64], target: &[f64]) -> f64 {
    assert_eq!(prediction.len(), target.len(), "loss widths");
    assert!(!prediction.is_empty());
    let d = prediction.len() as f64;
    prediction
        .iter()
        .zip(target)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / d
}

/// Backpropagation through time for one example; returns gradients of the
/// mean squared error in a parameter-shaped container. The dropout mask in
/// the trace is honored, so gradients match the loss that was evaluated.
pub fn backward(params: &GruParameters, trace: &ForwardTrace, target: &[f64]) -> GruParameters {
    let d = params.input_dim;
    let h_dim = params.hidden;
    assert_eq!(target.len(), d, "target width");
    let steps = trace.inputs.len();
    assert_eq!(trace.hidden.len(), steps + 1, "trace length");

    let mut grads = GruParameters::zeros(d, h_dim);
    let g_y: Vec<f64> = trace
        .prediction
        .iter()
        .zip(target)
        .map(|(p, t)| 2.0 / d as f64 * (p - t))
        .collect();
    grads.w_out.add_outer(&g_y, &trace.dropped_hidden);
    for (b, g) in grads.b_out.iter_mut().zip(&g_y) {
        *b += g;
    }
    let mut dh: Vec<f64> = params
        .w_out
        .tr_matvec(&g_y)
        .iter()
        .zip(&trace.mask)
        .map(|(v, m)| v * m)
        .collect();

    for t in (0..steps).rev() {
        let x = &trace.inputs[t];
        let h_prev = &trace.hidden[t];
        let z = &trace.updates[t];
        let r = &trace.resets[t];
        let c = &trace.candidates[t];

        let mut da_c = vec![0.0; h_dim];
        let mut da_z = vec![0.0; h_dim];
        let mut dh_prev = vec![0.0; h_dim];
        for k in 0..h_dim {
            let dc = dh[k] * z[k];
            da_c[k] = dc * (1.0 - c[k] * c[k]);
            let dz = dh[k] * (c[k] - h_prev[k]);
            da_z[k] = dz * z[k] * (1.0 - z[k]);
            dh_prev[k] = dh[k] * (1.0 - z[k]);
        }

        let rh: Vec<f64> = r.iter().zip(h_prev).map(|(a, b)| a * b).collect();
        grads.w_cand.add_outer(&da_c, x);
        grads.u_cand.add_outer(&da_c, &rh);
        let d_rh = params.u_cand.tr_matvec(&da_c);
        let mut da_r = vec![0.0; h_dim];
        for k in 0..h_dim {
            grads.b_cand[k] += da_c[k];
            let dr = d_rh[k] * h_prev[k];
            da_r[k] = dr * r[k] * (1.0 - r[k]);
            dh_prev[k] += d_rh[k] * r[k];
        }

        grads.w_update.add_outer(&da_z, x);
        grads.u_update.add_outer(&da_z, h_prev);
        grads.w_reset.add_outer(&da_r, x);
        grads.u_reset.add_outer(&da_r, h_prev);
        let uz = params.u_update.tr_matvec(&da_z);
        let ur = params.u_reset.tr_matvec(&da_r);
        for k in 0..h_dim {
            grads.b_update[k] += da_z[k];
            grads.b_reset[k] += da_r[k];
            dh_prev[k] += uz[k] + ur[k];
        }
        dh = dh_prev;
    }
    grads
}

/// Root-mean-square gradient cache for rmsprop.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    cache: GruParameters,
    decay: f64,
    epsilon: f64,
}

impl OptimizerState {
    pub fn new(input_dim: usize, hidden: usize, decay: f64, epsilon: f64) -> Self {
        OptimizerState {
            cache: GruParameters::zeros(input_dim, hidden),
            decay,
            epsilon,
        }
    }
}

/// One rmsprop step: cache ← ρ·cache + (1−ρ)·g², then
/// θ ← θ − lr·g / (√cache + ε). The ε sits outside the square root.
pub fn rmsprop_update(
    params: &mut GruParameters,
    grads: &GruParameters,
    state: &mut OptimizerState,
    learning_rate: f64,
) {
    assert_eq!(params.input_dim, grads.input_dim);
    assert_eq!(params.hidden, grads.hidden);
    let decay = state.decay;
    let epsilon = state.epsilon;
    let p_t = params.tensors_mut();
    let g_t = grads.tensors();
    let c_t = state.cache.tensors_mut();
    for i in 0..p_t.len() {
        let p = &mut *p_t[i].1;
        let g = g_t[i].1;
        let c = &mut *c_t[i].1;
        for k in 0..g.len() {
            c[k] = decay * c[k] + (1.0 - decay) * g[k] * g[k];
            p[k] -= learning_rate * g[k] / (c[k].sqrt() + epsilon);
        }
    }
}

/// Hyperparameters for the recurrent predictor.
#[derive(Debug, Clone)]
pub struct TrainingConfig {
    pub epochs: usize,
    pub hidden: usize,
    pub window: usize,
    pub dropout_rate: f64,
    pub learning_rate: f64,
    pub decay: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl TrainingConfig {
    pub fn new(epochs: usize) -> Self {
        TrainingConfig {
            epochs,
            hidden: 300,
            window: 10,
            dropout_rate: 0.8,
            learning_rate: 0.001,
            decay: 0.9,
            epsilon: 1e-8,
            seed: crate::DEFAULT_SEED,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.hidden == 0 {
            return Err(Error::InvalidInput("hidden size must be at least 1".to_string()));
        }
        if self.window == 0 {
            return Err(Error::InvalidInput("window size must be at least 1".to_string()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::InvalidInput(format!(
                "dropout rate must be in [0, 1), got {}",
                self.dropout_rate
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.decay) {
            return Err(Error::InvalidInput(format!(
                "rmsprop decay must be in [0, 1), got {}",
                self.decay
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Train on the examples in sequence order, one rmsprop update per example.
///
/// A single seeded stream drives initialization and then the dropout masks,
/// so a (dataset, config) pair fixes every byte of the result. Returns the
/// parameters and the per-epoch mean training loss, where each example's
/// loss is measured just before its update.
pub fn train(
    dataset: &WindowedDataset,
    config: &TrainingConfig,
) -> Result<(GruParameters, Vec<f64>)> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(Error::InvalidInput(
            "no training examples; the sequence must be longer than the window".to_string(),
        ));
    }
    if dataset.window() != config.window {
        return Err(Error::InvalidInput(format!(
            "dataset was built with window {} but the configuration says {}",
            dataset.window(),
            config.window
        )));
    }
    let dim = dataset.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = GruParameters::init(dim, config.hidden, &mut rng);
    let mut opt = OptimizerState::new(dim, config.hidden, config.decay, config.epsilon);
    let mut history = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        let mut total = 0.0;
        for ex in dataset.examples() {
            let (prediction, trace) = forward(
                &params,
                &ex.inputs,
                config.dropout_rate,
                Mode::Train,
                Some(&mut rng),
            );
            total += mse_loss(&prediction, &ex.target);
            let grads = backward(&params, &trace, &ex.target);
            rmsprop_update(&mut params, &grads, &mut opt, config.learning_rate);
        }
        history.push(total / dataset.len() as f64);
    }
    Ok((params, history))
}

/// Inference: no dropout, no rng.
pub fn predict(params: &GruParameters, inputs: &[Vec<f64>]) -> Vec<f64> {
    forward(params, inputs, 0.0, Mode::Infer, None).0
}

/// A trained model plus the window it expects, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub params: GruParameters,
    pub window: usize,
}

const CHECKPOINT_MAGIC: &str = "embedlm-gru-checkpoint v1";

/// Write the checkpoint text format: a magic line, the three header fields,
/// each tensor as a `tensor <name> <rows> <cols>` line followed by its rows,
/// and a closing `end`. Floats use shortest round-trip formatting, so load
/// restores the exact bits.
pub fn write_checkpoint(
    params: &GruParameters,
    window: usize,
    w: &mut impl Write,
) -> Result<()> {
    if window == 0 {
        return Err(Error::InvalidInput("window size must be at least 1".to_string()));
    }
    let io_err = |e| Error::io("<writer>", e);
    writeln!(w, "{CHECKPOINT_MAGIC}").map_err(io_err)?;
    writeln!(w, "input_dim {}", params.input_dim).map_err(io_err)?;
    writeln!(w, "hidden {}", params.hidden).map_err(io_err)?;
    writeln!(w, "window {window}").map_err(io_err)?;
    let shapes = GruParameters::tensor_shapes(params.input_dim, params.hidden);
    for ((name, rows, cols), (tname, data)) in shapes.into_iter().zip(params.tensors()) {
        debug_assert_eq!(name, tname);
        writeln!(w, "tensor {name} {rows} {cols}").map_err(io_err)?;
        for row in 0..rows {
            let mut line = String::new();
            for col in 0..cols {
                if col > 0 {
                    line.push(' ');
                }
                line.push_str(&data[row * cols + col].to_string());
            }
            writeln!(w, "{line}").map_err(io_err)?;
        }
    }
    writeln!(w, "end").map_err(io_err)
}

pub fn save_checkpoint(params: &GruParameters, window: usize, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_checkpoint(params, window, &mut w).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    w.flush().map_err(|e| Error::io(path, e))
}

struct LineSource<R> {
    lines: std::io::Lines<R>,
    origin: String,
    line_no: usize,
}

impl<R: BufRead> LineSource<R> {
    fn next(&mut self) -> Result<Option<String>> {
        match self.lines.next() {
            None => Ok(None),
            Some(Err(e)) => Err(Error::io(&self.origin, e)),
            Some(Ok(line)) => {
                self.line_no += 1;
                Ok(Some(line))
            }
        }
    }

    fn expect(&mut self, what: &str) -> Result<String> {
        self.next()?.ok_or_else(|| {
            Error::parse(
                &self.origin,
                self.line_no + 1,
                ParseErrorKind::Malformed(format!("unexpected end of file, expected {what}")),
            )
        })
    }

    fn malformed(&self, message: String) -> Error {
        Error::parse(&self.origin, self.line_no, ParseErrorKind::Malformed(message))
    }
}

fn parse_header_field<R: BufRead>(src: &mut LineSource<R>, key: &str) -> Result<usize> {
    let line = src.expect(&format!("`{key} <n>`"))?;
    let mut parts = line.split(' ');
    let (k, v) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
    if k != key || parts.next().is_some() {
        return Err(src.malformed(format!("expected `{key} <n>`, got {line:?}")));
    }
    let n: usize = v
        .parse()
        .map_err(|_| src.malformed(format!("bad value for {key}: {v:?}")))?;
    if n == 0 {
        return Err(src.malformed(format!("{key} must be at least 1")));
    }
    Ok(n)
}

/// Parse the checkpoint format, rejecting anything that deviates from what
/// [`write_checkpoint`] emits: wrong magic, tensors out of order or of the
/// wrong shape, non-finite values, missing `end`, or trailing data.
pub fn read_checkpoint(reader: impl BufRead, origin: &str) -> Result<Checkpoint> {
    let mut src = LineSource {
        lines: reader.lines(),
        origin: origin.to_string(),
        line_no: 0,
    };
    let magic = src.expect("the format magic")?;
    if magic != CHECKPOINT_MAGIC {
        return Err(src.malformed(format!(
            "not a checkpoint: expected {CHECKPOINT_MAGIC:?}, got {magic:?}"
        )));
    }
    let input_dim = parse_header_field(&mut src, "input_dim")?;
    let hidden = parse_header_field(&mut src, "hidden")?;
    let window = parse_header_field(&mut src, "window")?;

    let mut params = GruParameters::zeros(input_dim, hidden);
    let shapes = GruParameters::tensor_shapes(input_dim, hidden);
    for (i, (name, rows, cols)) in shapes.into_iter().enumerate() {
        let header = src.expect(&format!("`tensor {name} {rows} {cols}`"))?;
        let expected = format!("tensor {name} {rows} {cols}");
        if header != expected {
            return Err(src.malformed(format!("expected {expected:?}, got {header:?}")));
        }
        for row in 0..rows {
            let line = src.expect(&format!("row {row} of {name}"))?;
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != cols {
                return Err(src.malformed(format!(
                    "row {row} of {name} has {} values, expected {cols}",
                    fields.len()
                )));
            }
            for (col, field) in fields.iter().enumerate() {
                let value: f64 = field.parse().map_err(|_| {
                    Error::parse(
                        origin,
                        src.line_no,
                        ParseErrorKind::InvalidNumber { text: field.to_string() },
                    )
                })?;
                if !value.is_finite() {
                    return Err(Error::parse(
                        origin,
                        src.line_no,
                        ParseErrorKind::NonFinite { text: field.to_string() },
                    ));
                }
                params.tensors_mut()[i].1[row * cols + col] = value;
            }
        }
    }
    let end = src.expect("`end`")?;
    if end != "end" {
        return Err(src.malformed(format!("expected `end`, got {end:?}")));
    }
    if src.next()?.is_some() {
        return Err(src.malformed("trailing data after `end`".to_string()));
    }
    Ok(Checkpoint { params, window })
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_checkpoint(BufReader::new(file), &path.display().to_string())
}
