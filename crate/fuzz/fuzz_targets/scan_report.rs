#![no_main]

use libfuzzer_sys::fuzz_target;
use torsionlab::experiments::{lambda_from_desc, ScanReport};

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<ScanReport>(data) {
        let _ = r.to_csv();
        for row in &r.rows {
            if row["lambda"]["minpoly"].as_str().is_some_and(|m| m.len() <= 32) {
                let _ = lambda_from_desc(&row["lambda"]);
            }
        }
    }
});
