#![no_main]

use libfuzzer_sys::fuzz_target;
use selfsim_core::grig::BoundaryPoint;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = text.parse::<BoundaryPoint>() {
        // the display form is canonical
        let again: BoundaryPoint = p.to_string().parse().expect("display parses");
        assert_eq!(again, p);
        assert_eq!(again.to_string(), p.to_string());
    }
});
