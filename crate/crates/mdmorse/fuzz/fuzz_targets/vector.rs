#![no_main]

use libfuzzer_sys::fuzz_target;
use mdmorse::io::{parse_rational, parse_vector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_rational(text);
    if let Ok(v) = parse_vector(text) {
        let again = parse_vector(&v.strings().join(",")).expect("printed vectors parse");
        assert_eq!(v, again);
    }
});
