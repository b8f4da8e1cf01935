#![no_main]

//! Input: a complex file, a line `---`, then a collapse script. Parsed steps
//! are applied to the closed complex.

use libfuzzer_sys::fuzz_target;
use mdmorse::complex::{close, SimplicialComplex};
use mdmorse::io::{parse_collapse_script, parse_complex_file};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (head, script) = text.split_once("\n---\n").unwrap_or(("", text));
    let Ok((labels, simplices)) = parse_complex_file(head) else { return };
    if simplices.iter().any(|s| s.vertices().len() > 10) {
        return;
    }
    let Ok(steps) = parse_collapse_script(script, &labels) else { return };
    let mut k = SimplicialComplex::new(close(simplices)).expect("a closure is a complex");
    for (face, cofacet) in &steps {
        match k.elementary_collapse(face, cofacet) {
            Ok(next) => k = next,
            Err(_) => return,
        }
    }
});
