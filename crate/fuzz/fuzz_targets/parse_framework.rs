#![no_main]

use flexcert::format::{parse_framework, write_framework};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = parse_framework(text) {
        let again = parse_framework(&write_framework(&file)).expect("written framework parses");
        assert_eq!(file, again);
    }
});
