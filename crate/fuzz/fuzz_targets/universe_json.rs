#![no_main]

use libfuzzer_sys::fuzz_target;
use relattice::json::{universe_from_json, universe_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(u) = universe_from_json(text) {
        let emitted = universe_to_json(&u);
        let back = universe_from_json(&emitted).expect("emitted universe parses");
        assert_eq!(back, u);
    }
});
