#![no_main]

use libfuzzer_sys::fuzz_target;
use mdmorse::io::parse_field_file;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_field_file(text) {
        let _ = file.simplices();
    }
});
