#![no_main]

use libfuzzer_sys::fuzz_target;
use selfsim_core::hecke::AlgebraElement;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = AlgebraElement::from_json(text);
});
