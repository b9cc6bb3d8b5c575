#![no_main]

use libfuzzer_sys::fuzz_target;
use meshprune::pruning::{read_sweep_csv, thresholds, write_sweep_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(rows) = read_sweep_csv(data) else {
        return;
    };
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows).expect("write accepted rows");
    assert_eq!(read_sweep_csv(buf.as_slice()).expect("re-read"), rows);
    // threshold extraction may reject the table but must not panic
    let _ = thresholds(&rows);
});
