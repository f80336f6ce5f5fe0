//! Randomized invariant checks for the file formats and the numeric
//! primitives.

use proptest::prelude::*;

use embedlm::{
    build_cooccurrence, cosine_distance, lookup_or_create, make_windows, read_checkpoint, split,
    tokenize, tokenize_text, weight_f, EmbeddingTable, GruParameters, OovStore, Provenance,
    TokenVectorSequence,
};

fn finite_f64() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

fn token_strategy() -> impl Strategy<Value = String> {
    "[a-z0-9\\.,;!?']{1,10}"
}

proptest! {
    #[test]
    fn embedding_table_round_trips_bitwise(
        tokens in prop::collection::hash_set("[a-z]{1,8}", 1..16),
        dim in 1usize..5,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut table = EmbeddingTable::new(dim, Provenance::Trained).unwrap();
        for token in tokens {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * 2e3 - 1e3).collect();
            table.insert(&token, v).unwrap();
        }
        let mut buf = Vec::new();
        table.write_to(&mut buf).unwrap();
        let reparsed = EmbeddingTable::parse_reader(buf.as_slice(), "<memory>").unwrap();
        prop_assert_eq!(reparsed.len(), table.len());
        for ((t1, v1), (t2, v2)) in table.iter().zip(reparsed.iter()) {
            prop_assert_eq!(t1, t2);
            for (a, b) in v1.iter().zip(v2) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn extreme_floats_round_trip(value in finite_f64()) {
        let mut table = EmbeddingTable::new(1, Provenance::Trained).unwrap();
        table.insert("t", vec![value]).unwrap();
        let mut buf = Vec::new();
        table.write_to(&mut buf).unwrap();
        let reparsed = EmbeddingTable::parse_reader(buf.as_slice(), "<memory>").unwrap();
        prop_assert_eq!(reparsed.get("t").unwrap()[0].to_bits(), value.to_bits());
    }

    #[test]
    fn sequence_round_trips_with_repeats(
        tokens in prop::collection::vec(token_strategy(), 1..30),
        dim in 1usize..4,
    ) {
        let mut seq = TokenVectorSequence::new(dim).unwrap();
        for (i, token) in tokens.iter().enumerate() {
            let v: Vec<f64> = (0..dim).map(|d| (i * dim + d) as f64 * 0.25 - 2.0).collect();
            seq.push(token, v).unwrap();
        }
        let mut buf = Vec::new();
        seq.write_to(&mut buf).unwrap();
        prop_assert_eq!(
            String::from_utf8(buf.clone()).unwrap().lines().count(),
            seq.len()
        );
        let reparsed = TokenVectorSequence::parse_reader(buf.as_slice(), "<memory>").unwrap();
        prop_assert_eq!(&reparsed, &seq);
    }

    #[test]
    fn tokenizer_emits_clean_tokens(text in ".*") {
        for token in tokenize_text(&text) {
            prop_assert!(!token.is_empty());
            prop_assert!(!token.chars().any(char::is_whitespace), "{token:?}");
        }
    }

    #[test]
    fn tokenizer_preserves_nonwhitespace_content(text in ".*") {
        // With case kept, the concatenated tokens are exactly the input
        // minus its whitespace.
        let rebuilt: String = tokenize(&text, false).concat();
        let stripped: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(rebuilt, stripped);
    }

    #[test]
    fn tokenizer_groups_are_uniform(text in ".*") {
        // Every token is all word characters or all non-word characters.
        for token in tokenize(&text, false) {
            let word_chars = token.chars().filter(|c| c.is_alphanumeric()).count();
            prop_assert!(word_chars == 0 || word_chars == token.chars().count(), "{token:?}");
        }
    }

    #[test]
    fn cosine_distance_properties(
        x in prop::collection::vec(-1000.0f64..1000.0, 1..8),
        y_seed in prop::collection::vec(-1000.0f64..1000.0, 1..8),
        scale in 0.001f64..1000.0,
    ) {
        let y: Vec<f64> = x.iter().zip(y_seed.iter().cycle()).map(|(_, b)| *b).collect();
        prop_assume!(x.iter().any(|v| v.abs() > 1e-6));
        prop_assume!(y.iter().any(|v| v.abs() > 1e-6));
        let d = cosine_distance(&x, &y).unwrap();
        prop_assert!((0.0..=2.0).contains(&d), "{d}");
        // Symmetry.
        let d_rev = cosine_distance(&y, &x).unwrap();
        prop_assert!((d - d_rev).abs() < 1e-12);
        // Invariance under positive scaling.
        let scaled: Vec<f64> = x.iter().map(|v| v * scale).collect();
        let d_scaled = cosine_distance(&scaled, &y).unwrap();
        prop_assert!((d - d_scaled).abs() < 1e-9, "{d} vs {d_scaled}");
        // Self-distance is zero.
        let d_self = cosine_distance(&x, &x).unwrap();
        prop_assert!(d_self.abs() < 1e-12, "{d_self}");
    }

    #[test]
    fn split_preserves_order_and_sizes(
        n in 1usize..40,
        fraction in 0.01f64..=1.0,
    ) {
        let mut seq = TokenVectorSequence::new(1).unwrap();
        for i in 0..n {
            seq.push(&format!("t{i}"), vec![i as f64]).unwrap();
        }
        let (train, test) = split(&seq, fraction).unwrap();
        prop_assert_eq!(train.len() + test.len(), n);
        prop_assert_eq!(train.len(), ((n as f64) * fraction).floor() as usize);
        for i in 0..n {
            let (token, vector) = if i < train.len() {
                train.item(i)
            } else {
                test.item(i - train.len())
            };
            prop_assert_eq!(token, format!("t{i}"));
            prop_assert_eq!(vector[0], i as f64);
        }
    }

    #[test]
    fn window_count_formula(n in 0usize..40, window in 1usize..12) {
        let mut seq = TokenVectorSequence::new(1).unwrap();
        for i in 0..n {
            seq.push("t", vec![i as f64]).unwrap();
        }
        if n == 0 {
            return Ok(());
        }
        let data = make_windows(&seq, window).unwrap();
        prop_assert_eq!(data.len(), n.saturating_sub(window));
        for ex in data.examples() {
            prop_assert_eq!(ex.inputs.len(), window);
        }
    }

    #[test]
    fn weight_function_is_monotone_and_bounded(
        a in 0.001f64..200.0,
        b in 0.001f64..200.0,
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let f_lo = weight_f(lo, 100.0, 0.75);
        let f_hi = weight_f(hi, 100.0, 0.75);
        prop_assert!(f_lo <= f_hi);
        prop_assert!((0.0..=1.0).contains(&f_lo));
        prop_assert!((0.0..=1.0).contains(&f_hi));
    }

    #[test]
    fn cooccurrence_totals_match_window_size(
        ids in prop::collection::vec(0usize..6, 2..30),
        window in 1usize..8,
    ) {
        // Unweighted counts over all pairs sum to twice the number of
        // in-window position pairs.
        let tokens: Vec<String> = ids.iter().map(|i| format!("w{i}")).collect();
        let counts = build_cooccurrence(&tokens, window, false).unwrap();
        let total: f64 = counts.pairs().map(|(_, _, x)| x).sum();
        let n = tokens.len();
        let expected: usize = (0..n).map(|p| ((p + window).min(n - 1)) - p).sum();
        prop_assert_eq!(total, (2 * expected) as f64);
        for (i, j, x) in counts.pairs() {
            prop_assert_eq!(x, counts.count(j, i));
        }
    }

    #[test]
    fn oov_vectors_are_deterministic_and_bounded(
        token in "[a-zA-Z0-9]{1,12}",
        seed in any::<u64>(),
        dim in 1usize..6,
    ) {
        let table = EmbeddingTable::new(dim, Provenance::Loaded).unwrap();
        let mut store_a = OovStore::in_memory(dim);
        let mut store_b = OovStore::in_memory(dim);
        let a = lookup_or_create(&table, &mut store_a, &token, seed);
        let b = lookup_or_create(&table, &mut store_b, &token, seed);
        prop_assert_eq!(a.len(), dim);
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
            prop_assert!((-0.5..0.5).contains(x));
        }
    }

    #[test]
    fn checkpoint_round_trips_bitwise(
        dim in 1usize..4,
        hidden in 1usize..4,
        window in 1usize..15,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut params = GruParameters::init(dim, hidden, &mut rng);
        for (_, t) in params.tensors_mut() {
            for v in t.iter_mut() {
                *v = rng.gen::<f64>() * 2.0 - 1.0;
            }
        }
        let mut buf = Vec::new();
        embedlm::write_checkpoint(&params, window, &mut buf).unwrap();
        let loaded = read_checkpoint(buf.as_slice(), "<memory>").unwrap();
        prop_assert_eq!(loaded.window, window);
        prop_assert_eq!(&loaded.params, &params);
        for ((_, a), (_, b)) in params.tensors().into_iter().zip(loaded.params.tensors()) {
            for (x, y) in a.iter().zip(b) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
