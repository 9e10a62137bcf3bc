#![no_main]

use libfuzzer_sys::fuzz_target;
use spinsync_cli::Quantity;

fuzz_target!(|data: &[u8]| {
    let Ok(name) = std::str::from_utf8(data) else { return };
    if let Ok(q) = name.parse::<Quantity>() {
        assert_eq!(q.to_string().parse::<Quantity>(), Ok(q));
        let _ = q.check(3);
        assert!(!q.columns().is_empty());
    }
});
