#![no_main]

use libfuzzer_sys::fuzz_target;
use meshprune::ComplexMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = ComplexMatrix::from_json(text) {
        let json = m.to_json().expect("accepted matrices serialize");
        assert_eq!(ComplexMatrix::from_json(&json).expect("re-parse"), m);
    }
});
