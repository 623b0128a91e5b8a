#![no_main]

use kcb::harness::verify_trace_text;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = verify_trace_text(text);
    }
});
