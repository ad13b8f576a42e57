#![no_main]

use libfuzzer_sys::fuzz_target;
use torsionlab::exactalg::parse_poly;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = parse_poly(s) {
            // printing and reparsing gives the same polynomial
            let again = parse_poly(&p.to_string()).expect("printed polynomial parses");
            assert!(again.equals(&p));
        }
    }
});
