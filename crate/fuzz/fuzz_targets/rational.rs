#![no_main]

use bgg_core::rational::{display_q, parse_q};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_q(s) {
        assert_eq!(parse_q(&display_q(&x)).unwrap(), x);
    }
});
