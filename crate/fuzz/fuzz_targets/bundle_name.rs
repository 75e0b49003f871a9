#![no_main]

use bgg_core::pathgeom::BundleName;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(b) = BundleName::parse(s) {
        assert_eq!(BundleName::from_weight(&b.to_weight()).unwrap(), b);
        assert_eq!(BundleName::parse(&b.to_string()).unwrap(), b);
    }
});
