//! Fuzzes the vector-table parser: anything it accepts must survive a
//! write/reparse cycle bitwise, and anything else must fail cleanly.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(table) = embedlm::EmbeddingTable::parse_reader(data, "<fuzz>") else {
        return;
    };
    let mut buf = Vec::new();
    table.write_to(&mut buf).expect("writing a parsed table");
    let again =
        embedlm::EmbeddingTable::parse_reader(buf.as_slice(), "<fuzz>").expect("reparse failed");
    assert_eq!(table.len(), again.len());
    assert_eq!(table.dimension(), again.dimension());
    for ((t1, v1), (t2, v2)) in table.iter().zip(again.iter()) {
        assert_eq!(t1, t2);
        assert_eq!(v1.len(), v2.len());
        for (a, b) in v1.iter().zip(v2) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
});
