#![no_main]

use libfuzzer_sys::fuzz_target;
use meshprune::MeshPlan;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(plan) = MeshPlan::from_json(text) {
        // anything accepted must survive a round trip unchanged
        let again = MeshPlan::from_json(&plan.to_json()).expect("re-parse of serialized plan");
        assert_eq!(plan, again);
    }
});
