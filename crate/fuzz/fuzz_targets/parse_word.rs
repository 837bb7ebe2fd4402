#![no_main]

use libfuzzer_sys::fuzz_target;
use selfsim_core::grig::GroupWord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = text.parse::<GroupWord>() {
        let again: GroupWord = w.to_string().parse().expect("display parses");
        assert_eq!(again, w);
    }
});
