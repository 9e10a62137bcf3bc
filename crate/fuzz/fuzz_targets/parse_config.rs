#![no_main]

use libfuzzer_sys::fuzz_target;
use spinsync_cli::parse_config;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_config(text) {
            spec.validate().expect("parsed specs are valid");
        }
    }
});
