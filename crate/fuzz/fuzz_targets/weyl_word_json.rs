#![no_main]

use bgg_core::rootdata::WeylWord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&rank, rest)) = data.split_first() else { return };
    let rank = 1 + usize::from(rank % 8);
    let Ok(s) = std::str::from_utf8(rest) else { return };
    if let Ok(w) = WeylWord::from_json(rank, s) {
        assert_eq!(w.word.len(), w.to_perm(rank).length());
    }
});
