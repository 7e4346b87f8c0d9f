#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(q) = calogero::text::parse_rational(text) {
            assert_eq!(calogero::text::parse_rational(&q.to_string()).unwrap(), q);
        }
    }
});
