#![no_main]

use libfuzzer_sys::fuzz_target;
use std::io::BufReader;

fuzz_target!(|data: &[u8]| {
    let _ = chordscope::io::read_field(&mut BufReader::new(data));
});
