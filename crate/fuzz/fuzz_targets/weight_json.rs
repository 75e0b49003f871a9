#![no_main]

use bgg_core::rootdata::Weight;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = Weight::from_json(s) {
        assert_eq!(Weight::from_json(&w.to_json()).unwrap(), w);
    }
});
