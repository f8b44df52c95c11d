#![no_main]

use flexcert::format::{parse_system, write_system};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = parse_system(text) {
        // Accepted input must survive a write/read cycle unchanged.
        let again = parse_system(&write_system(&file)).expect("written system parses");
        assert_eq!(file, again);
        let _ = file.quadratic();
    }
});
