#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = std::str::from_utf8(data) {
        if let Ok(recipe) = chordscope::recipes::parse_curve_with_reader(spec, &|body| {
            Ok(body.to_string())
        }) {
            // building the curve exercises the spline/convexity paths
            let _ = recipe.build();
        }
    }
});
