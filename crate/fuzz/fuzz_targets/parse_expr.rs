#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = relattice::parse(text) {
        // Canonical text must parse back to the same tree.
        let canonical = e.to_string();
        let again = relattice::parse(&canonical).expect("canonical text parses");
        assert_eq!(again, e);
    }
});
