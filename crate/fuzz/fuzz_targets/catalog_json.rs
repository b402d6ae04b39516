#![no_main]

use libfuzzer_sys::fuzz_target;
use relattice::json::{catalog_from_json, catalog_to_json};
use relattice::Universe;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let u = Universe::new([("x", vec!["1", "2"]), ("y", vec!["a", "b"])]).expect("fixed universe");
    if let Ok(c) = catalog_from_json(&u, text) {
        let emitted = catalog_to_json(&c);
        assert_eq!(catalog_from_json(&u, &emitted).expect("emitted catalog parses"), c);
    }
});
