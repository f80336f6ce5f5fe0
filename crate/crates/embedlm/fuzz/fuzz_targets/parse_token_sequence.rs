//! Fuzzes the tokenized-corpus parser, which accepts repeated tokens.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(seq) = embedlm::TokenVectorSequence::parse_reader(data, "<fuzz>") else {
        return;
    };
    let mut buf = Vec::new();
    seq.write_to(&mut buf).expect("writing a parsed sequence");
    let again =
        embedlm::TokenVectorSequence::parse_reader(buf.as_slice(), "<fuzz>").expect("reparse");
    assert_eq!(seq.len(), again.len());
    assert_eq!(seq.dimension(), again.dimension());
    for ((t1, v1), (t2, v2)) in seq.iter().zip(again.iter()) {
        assert_eq!(t1, t2);
        for (a, b) in v1.iter().zip(v2) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
});
