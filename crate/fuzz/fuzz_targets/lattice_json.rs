#![no_main]

use libfuzzer_sys::fuzz_target;
use torsionlab::lattice::Lattice;

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) {
        // cap the precision a record may request
        if v["digits"].as_u64().is_some_and(|d| d > 1000) {
            return;
        }
        let _ = Lattice::from_json(&v);
    }
});
