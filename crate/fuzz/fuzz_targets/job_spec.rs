#![no_main]

use bgg_cli::JobSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(job) = JobSpec::parse(s) {
        let line = job.to_string();
        assert_eq!(JobSpec::parse(&line).unwrap(), job, "{line}");
    }
});
