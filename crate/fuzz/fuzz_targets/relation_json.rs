#![no_main]

use libfuzzer_sys::fuzz_target;
use relattice::json::{relation_from_json, relation_to_json};
use relattice::Universe;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let u = Universe::new([("x", vec!["1", "2", "3"]), ("y", vec!["a", "b"]), ("z", vec!["p"])])
        .expect("fixed universe");
    if let Ok(r) = relation_from_json(&u, text) {
        let emitted = relation_to_json(&r);
        assert_eq!(relation_from_json(&u, &emitted).expect("emitted relation parses"), r);
    }
});
