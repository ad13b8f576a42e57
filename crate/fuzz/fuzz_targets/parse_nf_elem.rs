#![no_main]

use libfuzzer_sys::fuzz_target;
use torsionlab::exactalg::parse::{detect_var, parse_nf_elem, parse_poly_in};
use torsionlab::exactalg::Field;

fn modulus_degree(m: &str) -> Option<i64> {
    let var = detect_var(m).ok()??;
    parse_poly_in(m, &Field::Rational, &var, &[]).ok().map(|p| p.deg())
}

fuzz_target!(|data: &[u8]| {
    // first byte picks the root; keep inputs small, field construction factors
    if let Some((&root, rest)) = data.split_first() {
        if rest.len() > 64 {
            return;
        }
        if let Ok(s) = std::str::from_utf8(rest) {
            // factoring cost grows quickly with the modulus degree
            if let Some((m, _)) = s.split_once(':') {
                if modulus_degree(m).is_some_and(|d| d > 16) {
                    return;
                }
            }
            let _ = parse_nf_elem(s, (root % 8) as usize);
        }
    }
});
