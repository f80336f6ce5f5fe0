//! Fuzzes the checkpoint reader: accepted inputs must round-trip through
//! the writer bitwise.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(ckpt) = embedlm::read_checkpoint(data, "<fuzz>") else {
        return;
    };
    let mut buf = Vec::new();
    embedlm::write_checkpoint(&ckpt.params, ckpt.window, &mut buf)
        .expect("writing a parsed checkpoint");
    let again = embedlm::read_checkpoint(buf.as_slice(), "<fuzz>").expect("reparse failed");
    assert_eq!(ckpt.window, again.window);
    let a = ckpt.params.tensors();
    let b = again.params.tensors();
    assert_eq!(a.len(), b.len());
    for ((n1, t1), (n2, t2)) in a.iter().zip(b.iter()) {
        assert_eq!(n1, n2);
        assert_eq!(t1.len(), t2.len());
        for (x, y) in t1.iter().zip(t2.iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
});
