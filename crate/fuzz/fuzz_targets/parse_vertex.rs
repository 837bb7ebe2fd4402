#![no_main]

use libfuzzer_sys::fuzz_target;
use selfsim_core::grig::Vertex;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = text.parse::<Vertex>() {
        assert_eq!(v.to_string().parse::<Vertex>().expect("display parses"), v);
    }
});
