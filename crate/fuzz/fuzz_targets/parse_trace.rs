#![no_main]

use kcb::MatchupTrace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(trace) = MatchupTrace::parse(text) {
        // anything accepted must re-serialize to something accepted again
        let again = MatchupTrace::parse(&trace.to_jsonl()).expect("re-parse");
        assert_eq!(again.to_jsonl(), trace.to_jsonl());
    }
});
