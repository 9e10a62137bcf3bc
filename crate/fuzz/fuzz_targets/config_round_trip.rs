#![no_main]

use libfuzzer_sys::fuzz_target;
use spinsync_cli::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = parse_config(text) else { return };
    let printed = spec.to_string();
    let again = parse_config(&printed).unwrap_or_else(|e| panic!("reparse failed: {e}\n{printed}"));
    assert_eq!(again, spec);
    assert_eq!(again.to_string(), printed);
});
