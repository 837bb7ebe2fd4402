#![no_main]

use libfuzzer_sys::fuzz_target;
use selfsim_core::schreier::MarkedGraph;

fuzz_target!(|data: &[u8]| {
    let _ = MarkedGraph::read_csv(data);
});
