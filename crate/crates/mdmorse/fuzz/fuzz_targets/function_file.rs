#![no_main]

use libfuzzer_sys::fuzz_target;
use mdmorse::io::parse_function_file;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_function_file(text) {
        assert!(file.entries.iter().all(|(_, v)| v.arity() == file.arity));
    }
});
