#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        for rank in [2, 7] {
            if let Ok(w) = calogero::text::parse_weight(text, rank) {
                assert_eq!(w.labels().len(), rank);
            }
        }
    }
});
