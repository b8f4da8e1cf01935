#![no_main]

//! Full load path: format detection, complex construction, validation and
//! the gradient field.

use libfuzzer_sys::fuzz_target;
use mdmorse::cli::parse_input;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(mut bundle) = parse_input(text) else { return };
    if let Some(f) = bundle.function.as_mut() {
        if f.validate().is_valid() {
            let v = f.gradient().expect("valid functions have a gradient");
            assert!(v.is_acyclic());
        }
    }
});
