#![no_main]

use libfuzzer_sys::fuzz_target;
use selfsim::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = RunConfig::from_json(text) {
        assert_eq!(RunConfig::from_json(&config.to_json()).expect("round trip"), config);
    }
});
