#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = std::str::from_utf8(data) {
        // superpose bodies are resolved through the reader hook so the
        // fuzzer also reaches the JSON layer without touching the fs
        let _ = chordscope::recipes::parse_state_with_reader(spec, &|body| {
            Ok(body.to_string())
        });
    }
});
