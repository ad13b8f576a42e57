#![no_main]

use libfuzzer_sys::fuzz_target;
use torsionlab::elliptic::parse_curve_point;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok((e, Some(p))) = parse_curve_point(s) {
            assert!(e.contains(&p));
        }
    }
});
