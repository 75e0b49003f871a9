#![no_main]

use bgg_core::parabolic::PairSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = PairSpec::parse(s) {
        assert_eq!(PairSpec::parse(&p.render()).unwrap(), p);
    }
});
