#![no_main]

use libfuzzer_sys::fuzz_target;
use mdmorse::complex::{close, SimplicialComplex};
use mdmorse::io::parse_complex_file;

/// Closing a simplex lists all 2^n of its faces.
const MAX_VERTICES: usize = 10;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((labels, simplices)) = parse_complex_file(text) else { return };
    if simplices.iter().any(|s| s.vertices().len() > MAX_VERTICES) {
        return;
    }
    let k = SimplicialComplex::new(close(simplices)).expect("a closure is a complex");
    for c in 0..k.len() {
        let _ = labels.name(k.simplex(c));
    }
});
