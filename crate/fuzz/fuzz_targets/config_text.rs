#![no_main]

use libfuzzer_sys::fuzz_target;
use torsionlab_cli::config::Config;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let mut c = Config::default();
        if c.apply_text(s).is_ok() {
            let _ = c.validate();
        }
    }
});
