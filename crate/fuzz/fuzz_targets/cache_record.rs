#![no_main]
use std::sync::OnceLock;

use calogero::{AlgebraId, Engine};
use calogero_cli::cache::CacheRecord;
use libfuzzer_sys::fuzz_target;

fn engine() -> &'static Engine {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    ENGINE.get_or_init(|| Engine::for_algebra("A2".parse::<AlgebraId>().unwrap()).unwrap())
}

fuzz_target!(|data: &[u8]| {
    if let Ok(record) = CacheRecord::decode(data) {
        let _ = record.to_entry(engine());
    }
});
