#![no_main]

//! Input: a complex file, a line `---`, then a simplex list resolved against
//! the complex file's labels.

use libfuzzer_sys::fuzz_target;
use mdmorse::io::{parse_complex_file, parse_simplex_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (head, list) = text.split_once("\n---\n").unwrap_or(("", text));
    let Ok((labels, _)) = parse_complex_file(head) else { return };
    let _ = parse_simplex_list(list, &labels);
});
