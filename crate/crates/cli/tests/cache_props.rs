use calogero::{AlgebraId, DominantWeight, Engine};
use calogero_cli::cache::{CacheRecord, Entry};
use proptest::prelude::*;

fn a2() -> Engine {
    Engine::for_algebra("A2".parse::<AlgebraId>().unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_kind_round_trips(a in 0i32..4, b in 0i32..4) {
        let e = a2();
        let w = DominantWeight::from_labels(&[a, b]).unwrap();
        let entries = [
            Entry::Character((*e.character(&w).unwrap()).clone()),
            Entry::CharZ(w.clone(), (*e.char_to_z(&w).unwrap()).clone()),
            Entry::MonomialZ(w.clone(), (*e.monomial_to_z(&w).unwrap()).clone()),
            Entry::Jacobi((*e.jacobi(&w).unwrap()).clone()),
        ];
        let fresh = a2();
        for entry in &entries {
            let record = CacheRecord::from_entry(e.root_system().algebra(), entry);
            let decoded = CacheRecord::decode(&record.encode()).unwrap();
            prop_assert_eq!(&decoded, &record);
            let rebuilt = decoded.to_entry(&fresh).unwrap();
            prop_assert_eq!(format!("{rebuilt:?}"), format!("{entry:?}"));
        }
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
        if let Ok(record) = CacheRecord::decode(&bytes) {
            let _ = record.to_entry(&a2());
        }
    }
}
