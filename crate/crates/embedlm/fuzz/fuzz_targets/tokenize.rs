//! Fuzzes the tokenizer: no panics, no empty or mixed-class tokens, and in
//! case-preserving mode the tokens concatenate back to the input minus its
//! whitespace.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = embedlm::tokenize(text, true);
    let tokens = embedlm::tokenize(text, false);
    for token in &tokens {
        assert!(!token.is_empty());
        assert!(!token.chars().any(char::is_whitespace));
        let word = token.chars().next().unwrap().is_alphanumeric();
        assert!(
            token.chars().all(|c| c.is_alphanumeric() == word),
            "mixed-class token {token:?}"
        );
    }
    let rebuilt: String = tokens.concat();
    let stripped: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    assert_eq!(rebuilt, stripped);
});
