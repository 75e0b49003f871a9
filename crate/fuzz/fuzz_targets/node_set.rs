#![no_main]

use bgg_core::rootdata::NodeSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(n) = NodeSet::parse(s) {
        assert_eq!(NodeSet::parse(&n.render()).unwrap(), n);
    }
});
