//! End-to-end tests of the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

fn embedlm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_embedlm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("failed to spawn the binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_vectors(path: &Path) {
    std::fs::write(
        path,
        "the 0.1 0.2 0.3\ncat 0.4 0.5 0.6\nsat 0.7 0.8 0.9\non -0.1 -0.2 -0.3\nmat 0.2 0.4 0.1\n",
    )
    .unwrap();
}

#[test]
fn tokenize_writes_sequence_and_extra_vocab() {
    let dir = tempfile::tempdir().unwrap();
    write_vectors(&dir.path().join("vectors.txt"));
    std::fs::write(dir.path().join("corpus.txt"), "The cat sat on the mat.\n").unwrap();

    let out = embedlm(
        &[
            "tokenize",
            "--glove-vectors",
            "vectors.txt",
            "--input",
            "corpus.txt",
            "--tokenized-file",
            "tokens.txt",
            "--extra-vocab",
            "extra.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("tokens 7"), "{text}"); // the cat sat on the mat .
    assert!(text.contains("new_oov 1"), "{text}"); // the period

    let seq = std::fs::read_to_string(dir.path().join("tokens.txt")).unwrap();
    assert_eq!(seq.lines().count(), 7);
    assert!(seq.starts_with("the 0.1 0.2 0.3\n"));
    let extra = std::fs::read_to_string(dir.path().join("extra.txt")).unwrap();
    assert!(extra.starts_with(". "));
    assert_eq!(extra.lines().count(), 1);
}

#[test]
fn tokenize_is_idempotent_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write_vectors(&dir.path().join("vectors.txt"));
    std::fs::write(dir.path().join("corpus.txt"), "unseen words! more unseen words?\n").unwrap();
    let args = [
        "tokenize",
        "--glove-vectors",
        "vectors.txt",
        "--input",
        "corpus.txt",
        "--tokenized-file",
        "tokens.txt",
        "--extra-vocab",
        "extra.txt",
    ];
    let first = embedlm(&args, dir.path());
    assert!(first.status.success(), "stderr: {}", stderr(&first));
    let tokens_1 = std::fs::read(dir.path().join("tokens.txt")).unwrap();
    let extra_1 = std::fs::read(dir.path().join("extra.txt")).unwrap();

    let second = embedlm(&args, dir.path());
    assert!(second.status.success());
    assert!(stdout(&second).contains("new_oov 0"));
    assert_eq!(std::fs::read(dir.path().join("tokens.txt")).unwrap(), tokens_1);
    assert_eq!(std::fs::read(dir.path().join("extra.txt")).unwrap(), extra_1);
}

#[test]
fn missing_input_fails_and_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    write_vectors(&dir.path().join("vectors.txt"));
    let out = embedlm(
        &[
            "tokenize",
            "--glove-vectors",
            "vectors.txt",
            "--input",
            "no-such-corpus.txt",
            "--tokenized-file",
            "tokens.txt",
            "--extra-vocab",
            "extra.txt",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no-such-corpus.txt"), "{}", stderr(&out));
}

#[test]
fn malformed_vector_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("vectors.txt"), "a 1.0 2.0\nb 3.0\n").unwrap();
    std::fs::write(dir.path().join("corpus.txt"), "a b\n").unwrap();
    let out = embedlm(
        &[
            "tokenize",
            "--glove-vectors",
            "vectors.txt",
            "--input",
            "corpus.txt",
            "--tokenized-file",
            "tokens.txt",
            "--extra-vocab",
            "extra.txt",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("vectors.txt:2"), "{err}");
    assert!(err.contains("components"), "{err}");
}

#[test]
fn zero_epochs_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = embedlm(
        &[
            "run-experiment",
            "--tokenized-file",
            "t.txt",
            "--eval-csv",
            "e.csv",
            "--checkpoint",
            "m.ckpt",
            "--epochs",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("epochs"));
}

#[test]
fn experiment_rejects_sequence_shorter_than_window() {
    let dir = tempfile::tempdir().unwrap();
    // 5 tokens at window 10: both splits are too short.
    let mut seq = String::new();
    for i in 0..5 {
        seq.push_str(&format!("t{i} 1.0 {i}.0\n"));
    }
    std::fs::write(dir.path().join("tokens.txt"), seq).unwrap();
    let out = embedlm(
        &[
            "run-experiment",
            "--tokenized-file",
            "tokens.txt",
            "--eval-csv",
            "eval.csv",
            "--checkpoint",
            "model.ckpt",
            "--epochs",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("window"), "{}", stderr(&out));
}

#[test]
fn missing_output_directory_fails_before_training() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tokens.txt"), "a 1.0\nb 2.0\n").unwrap();
    let out = embedlm(
        &[
            "run-experiment",
            "--tokenized-file",
            "tokens.txt",
            "--eval-csv",
            "no-such-dir/eval.csv",
            "--checkpoint",
            "model.ckpt",
            "--epochs",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no-such-dir"), "{}", stderr(&out));
}

fn seeded_sequence(dir: &Path) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let mut text = String::new();
    for i in 0..30 {
        let word = i % 7;
        text.push_str(&format!(
            "w{word} {} {} {}\n",
            rng.gen::<f64>() - 0.5,
            rng.gen::<f64>() - 0.5,
            rng.gen::<f64>() - 0.5,
        ));
    }
    // Repeated tokens must repeat their vectors; rebuild consistently.
    let mut by_token: std::collections::HashMap<String, String> = Default::default();
    let mut fixed = String::new();
    for line in text.lines() {
        let token = line.split(' ').next().unwrap().to_string();
        let entry = by_token.entry(token).or_insert_with(|| line.to_string());
        fixed.push_str(entry);
        fixed.push('\n');
    }
    std::fs::write(dir.join("tokens.txt"), fixed).unwrap();
}

#[test]
fn experiment_then_evaluate_reproduces_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    seeded_sequence(dir.path());
    let out = embedlm(
        &[
            "run-experiment",
            "--tokenized-file",
            "tokens.txt",
            "--eval-csv",
            "eval.csv",
            "--checkpoint",
            "model.ckpt",
            "--window",
            "3",
            "--hidden-size",
            "4",
            "--epochs",
            "3",
            "--seed",
            "11",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("epoch 1 loss "), "{text}");
    assert!(text.contains("epoch 3 loss "), "{text}");
    assert!(text.contains("wrote model.ckpt"), "{text}");
    assert!(dir.path().join("eval.csv.summary").is_file());
    let csv_1 = std::fs::read(dir.path().join("eval.csv")).unwrap();
    let summary_1 = std::fs::read(dir.path().join("eval.csv.summary")).unwrap();

    // Re-evaluating the saved checkpoint with the same seed and split must
    // reproduce the evaluation byte for byte.
    std::fs::remove_file(dir.path().join("eval.csv")).unwrap();
    let out = embedlm(
        &[
            "evaluate",
            "--tokenized-file",
            "tokens.txt",
            "--checkpoint",
            "model.ckpt",
            "--eval-csv",
            "eval.csv",
            "--seed",
            "11",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(std::fs::read(dir.path().join("eval.csv")).unwrap(), csv_1);
    assert_eq!(
        std::fs::read(dir.path().join("eval.csv.summary")).unwrap(),
        summary_1
    );
}

#[test]
fn experiment_stdout_and_artifacts_are_deterministic() {
    let run = |dir: &Path| -> (String, Vec<u8>, Vec<u8>) {
        seeded_sequence(dir);
        let out = embedlm(
            &[
                "run-experiment",
                "--tokenized-file",
                "tokens.txt",
                "--eval-csv",
                "eval.csv",
                "--checkpoint",
                "model.ckpt",
                "--window",
                "3",
                "--hidden-size",
                "4",
                "--epochs",
                "2",
            ],
            dir,
        );
        assert!(out.status.success(), "stderr: {}", stderr(&out));
        (
            stdout(&out),
            std::fs::read(dir.join("eval.csv")).unwrap(),
            std::fs::read(dir.join("model.ckpt")).unwrap(),
        )
    };
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let (stdout_a, csv_a, ckpt_a) = run(dir_a.path());
    let (stdout_b, csv_b, ckpt_b) = run(dir_b.path());
    // Timing goes to stderr, so stdout compares byte for byte.
    assert_eq!(stdout_a, stdout_b);
    assert_eq!(csv_a, csv_b);
    assert_eq!(ckpt_a, ckpt_b);
}

#[test]
fn train_glove_writes_a_parsable_vector_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("corpus.txt"),
        "the sun rises in the east. the sun sets in the west.\n\
         every morning the sun rises, and every evening the sun sets.\n",
    )
    .unwrap();
    let args = [
        "train-glove",
        "--corpus",
        "corpus.txt",
        "--output",
        "vectors.txt",
        "--dim",
        "4",
        "--epochs",
        "10",
        "--window",
        "4",
    ];
    let out = embedlm(&args, dir.path());
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("initial loss "), "{text}");
    assert!(text.contains("epoch 10 loss "), "{text}");
    let bytes_1 = std::fs::read(dir.path().join("vectors.txt")).unwrap();

    // The vector file parses and covers exactly the corpus vocabulary.
    let table = embedlm::EmbeddingTable::parse_file(&dir.path().join("vectors.txt")).unwrap();
    assert_eq!(table.dimension(), 4);
    let corpus = std::fs::read_to_string(dir.path().join("corpus.txt")).unwrap();
    let tokens = embedlm::tokenize_text(&corpus);
    let unique: std::collections::HashSet<&str> = tokens.iter().map(|s| s.as_str()).collect();
    assert_eq!(table.len(), unique.len());
    for token in unique {
        assert!(table.contains(token), "missing {token}");
    }

    // Same invocation, same bytes.
    let out = embedlm(&args, dir.path());
    assert!(out.status.success());
    assert_eq!(std::fs::read(dir.path().join("vectors.txt")).unwrap(), bytes_1);
}
