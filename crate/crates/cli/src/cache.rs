//! Persistent per-record JSON cache.
//!
//! Layout: `<dir>/<algebra>/<kind>/<labels joined by '_'>.json`. Each file is
//! one [`CacheRecord`] whose payload carries a SHA-256 checksum over its
//! canonical serialization. Records are written to a temporary file in the
//! same directory and renamed into place, so readers never see a partial
//! record. Records that fail to decode, fail their checksum, or carry another
//! schema version are ignored and recomputed.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use calogero::text::parse_kappa_rational;
use calogero::{
    AlgebraId, Coefficient, DominantCharacter, DominantWeight, Engine, JacobiPolynomial, Monomial,
    MonomialCombination, Style, ZPolynomial,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Inputs larger than this are rejected before parsing.
const MAX_RECORD_BYTES: usize = 64 << 20;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("schema version {found} (expected {SCHEMA_VERSION})")]
    Schema { found: u32 },
    #[error("checksum mismatch")]
    Checksum,
    #[error("record is for {found}, not {expected}")]
    WrongAlgebra { expected: AlgebraId, found: String },
    #[error(transparent)]
    Library(#[from] calogero::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

type Result<T> = std::result::Result<T, CacheError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Multiplicities,
    CharZ,
    MonomialZ,
    Jacobi,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Multiplicities, Kind::CharZ, Kind::MonomialZ, Kind::Jacobi];

    fn dir_name(self) -> &'static str {
        match self {
            Kind::Multiplicities => "multiplicities",
            Kind::CharZ => "char_z",
            Kind::MonomialZ => "monomial_z",
            Kind::Jacobi => "jacobi",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheRecord {
    pub schema_version: u32,
    pub algebra: String,
    pub kind: Kind,
    pub key: Vec<i32>,
    pub payload: Value,
    pub sha256: String,
}

/// A decoded record, ready to seed an engine.
#[derive(Debug)]
pub enum Entry {
    Character(DominantCharacter),
    CharZ(DominantWeight, ZPolynomial<BigInt>),
    MonomialZ(DominantWeight, ZPolynomial<BigInt>),
    Jacobi(JacobiPolynomial),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightTerm {
    w: Vec<i32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZTerm {
    e: Vec<u16>,
    c: String,
}

fn checksum(payload: &Value) -> String {
    // serde_json maps are ordered, so this serialization is canonical.
    let canonical = serde_json::to_vec(payload).expect("JSON values always serialize");
    hex::encode(Sha256::digest(&canonical))
}

fn malformed(e: impl std::fmt::Display) -> CacheError {
    CacheError::Malformed(e.to_string())
}

fn integer(text: &str) -> Result<BigInt> {
    if text.len() > 10_000 {
        return Err(malformed("integer literal too long"));
    }
    text.parse().map_err(|_| malformed(format!("bad integer {text:?}")))
}

fn z_payload(p: &ZPolynomial<BigInt>) -> Value {
    let terms: Vec<ZTerm> = p
        .terms()
        .map(|(m, c)| ZTerm {
            e: m.exponents().to_vec(),
            c: c.to_string(),
        })
        .collect();
    serde_json::to_value(terms).expect("terms serialize")
}

fn z_from_payload(payload: &Value, rank: usize) -> Result<ZPolynomial<BigInt>> {
    let terms: Vec<ZTerm> = serde_json::from_value(payload.clone()).map_err(malformed)?;
    let mut p = ZPolynomial::zero(rank);
    for t in terms {
        if t.e.len() != rank {
            return Err(malformed("exponent vector has the wrong length"));
        }
        if t.e.iter().map(|&x| x as u32).sum::<u32>() > 64 {
            return Err(malformed("exponent too large"));
        }
        p.add_term(Monomial::from_exponents(&t.e), integer(&t.c)?);
    }
    Ok(p)
}

fn weight(labels: &[i32], rank: usize) -> Result<DominantWeight> {
    if labels.len() != rank {
        return Err(malformed("weight has the wrong rank"));
    }
    if labels.iter().any(|&m| !(0..=64).contains(&m)) {
        return Err(malformed("weight label out of range"));
    }
    Ok(DominantWeight::from_labels(labels)?)
}

impl CacheRecord {
    fn new(algebra: AlgebraId, kind: Kind, key: &DominantWeight, payload: Value) -> Self {
        CacheRecord {
            schema_version: SCHEMA_VERSION,
            algebra: algebra.to_string(),
            kind,
            key: key.labels().to_vec(),
            sha256: checksum(&payload),
            payload,
        }
    }

    pub fn from_entry(algebra: AlgebraId, entry: &Entry) -> Self {
        match entry {
            Entry::Character(ch) => {
                let terms: Vec<WeightTerm> = ch
                    .multiplicities()
                    .iter()
                    .map(|(w, m)| WeightTerm {
                        w: w.labels().to_vec(),
                        c: m.to_string(),
                    })
                    .collect();
                let payload = serde_json::to_value(terms).expect("terms serialize");
                Self::new(algebra, Kind::Multiplicities, ch.highest(), payload)
            }
            Entry::CharZ(w, p) => Self::new(algebra, Kind::CharZ, w, z_payload(p)),
            Entry::MonomialZ(w, p) => Self::new(algebra, Kind::MonomialZ, w, z_payload(p)),
            Entry::Jacobi(p) => {
                let terms: Vec<WeightTerm> = p
                    .coeffs()
                    .terms()
                    .map(|(w, c)| WeightTerm {
                        w: w.labels().to_vec(),
                        c: c.render(Style::Explicit).signed(),
                    })
                    .collect();
                let payload = serde_json::to_value(terms).expect("terms serialize");
                Self::new(algebra, Kind::Jacobi, p.m(), payload)
            }
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("records serialize");
        out.push(b'\n');
        out
    }

    /// Parses and validates the envelope (size, schema version, checksum).
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() > MAX_RECORD_BYTES {
            return Err(malformed("record too large"));
        }
        let record: CacheRecord = serde_json::from_slice(bytes).map_err(malformed)?;
        if record.schema_version != SCHEMA_VERSION {
            return Err(CacheError::Schema {
                found: record.schema_version,
            });
        }
        if record.sha256 != checksum(&record.payload) {
            return Err(CacheError::Checksum);
        }
        Ok(record)
    }

    /// Rebuilds the cached object, re-checking its structural invariants.
    pub fn to_entry(&self, engine: &Engine) -> Result<Entry> {
        let rs = engine.root_system();
        if self.algebra != rs.algebra().to_string() {
            return Err(CacheError::WrongAlgebra {
                expected: rs.algebra(),
                found: self.algebra.clone(),
            });
        }
        let rank = rs.rank();
        let key = weight(&self.key, rank)?;
        Ok(match self.kind {
            Kind::Multiplicities => {
                let terms: Vec<WeightTerm> = serde_json::from_value(self.payload.clone()).map_err(malformed)?;
                let mut mult = BTreeMap::new();
                for t in terms {
                    mult.insert(weight(&t.w, rank)?, integer(&t.c)?);
                }
                Entry::Character(DominantCharacter::from_parts(rs, key, mult)?)
            }
            Kind::CharZ => Entry::CharZ(key, z_from_payload(&self.payload, rank)?),
            Kind::MonomialZ => Entry::MonomialZ(key, z_from_payload(&self.payload, rank)?),
            Kind::Jacobi => {
                let terms: Vec<WeightTerm> = serde_json::from_value(self.payload.clone()).map_err(malformed)?;
                let mut coeffs = MonomialCombination::zero(rank);
                for t in terms {
                    let w = weight(&t.w, rank)?;
                    if !rs.dominates(&key, &w) && w != key {
                        return Err(malformed("Jacobi term outside the dominance cone"));
                    }
                    coeffs.add_term(w, parse_kappa_rational(&t.c)?);
                }
                Entry::Jacobi(JacobiPolynomial::from_parts(engine, key, coeffs)?)
            }
        })
    }
}

/// A cache directory for one algebra.
pub struct Store {
    root: PathBuf,
    algebra: AlgebraId,
    present: HashSet<(Kind, Vec<i32>)>,
}

impl Store {
    pub fn open(dir: &Path, algebra: AlgebraId) -> Result<Self> {
        let root = dir.join(algebra.to_string());
        for kind in Kind::ALL {
            fs::create_dir_all(root.join(kind.dir_name()))?;
        }
        Ok(Store {
            root,
            algebra,
            present: HashSet::new(),
        })
    }

    fn path(&self, kind: Kind, key: &[i32]) -> PathBuf {
        let name: Vec<String> = key.iter().map(i32::to_string).collect();
        self.root.join(kind.dir_name()).join(format!("{}.json", name.join("_")))
    }

    /// Seeds `engine` with every valid record; returns (loaded, skipped).
    /// Characters and z-forms are loaded before Jacobi polynomials, whose
    /// reconstruction uses them.
    pub fn load_into(&mut self, engine: &Engine) -> Result<(usize, usize)> {
        let (mut loaded, mut skipped) = (0, 0);
        for kind in Kind::ALL {
            let mut paths: Vec<PathBuf> = fs::read_dir(self.root.join(kind.dir_name()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            for path in paths {
                let outcome = fs::read(&path)
                    .map_err(CacheError::from)
                    .and_then(|bytes| CacheRecord::decode(&bytes))
                    .and_then(|r| {
                        if r.kind != kind || self.path(kind, &r.key) != path {
                            return Err(malformed("record stored under the wrong name"));
                        }
                        Ok((r.to_entry(engine)?, r.key))
                    });
                match outcome {
                    Ok((entry, key)) => {
                        seed(engine, entry);
                        self.present.insert((kind, key));
                        loaded += 1;
                    }
                    Err(e) => {
                        log::warn!("ignoring cache record {}: {e}", path.display());
                        skipped += 1;
                    }
                }
            }
        }
        Ok((loaded, skipped))
    }

    /// Writes every computed object not yet on disk; returns the count.
    pub fn save_from(&mut self, engine: &Engine) -> Result<usize> {
        let mut entries: Vec<Entry> = Vec::new();
        entries.extend(engine.computed_characters().iter().map(|c| Entry::Character((**c).clone())));
        entries.extend(engine.computed_char_z().into_iter().map(|(w, p)| Entry::CharZ(w, (*p).clone())));
        entries.extend(engine.computed_monomial_z().into_iter().map(|(w, p)| Entry::MonomialZ(w, (*p).clone())));
        entries.extend(engine.computed_jacobi().iter().map(|p| Entry::Jacobi((**p).clone())));
        let mut written = 0;
        for entry in entries {
            let record = CacheRecord::from_entry(self.algebra, &entry);
            let id = (record.kind, record.key.clone());
            if self.present.contains(&id) {
                continue;
            }
            let path = self.path(record.kind, &record.key);
            let dir = path.parent().expect("record paths have a parent");
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(&record.encode())?;
            tmp.persist(&path).map_err(|e| e.error)?;
            self.present.insert(id);
            written += 1;
        }
        Ok(written)
    }
}

fn seed(engine: &Engine, entry: Entry) {
    match entry {
        Entry::Character(c) => engine.seed_character(c),
        Entry::CharZ(w, p) => engine.seed_char_z(w, p),
        Entry::MonomialZ(w, p) => engine.seed_monomial_z(w, p),
        Entry::Jacobi(p) => engine.seed_jacobi(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Engine {
        Engine::for_algebra("A2".parse().unwrap()).unwrap()
    }

    #[test]
    fn records_round_trip() {
        let e = a2();
        let w = DominantWeight::from_labels(&[1, 1]).unwrap();
        let entries = [
            Entry::Character((*e.character(&w).unwrap()).clone()),
            Entry::CharZ(w.clone(), (*e.char_to_z(&w).unwrap()).clone()),
            Entry::MonomialZ(w.clone(), (*e.monomial_to_z(&w).unwrap()).clone()),
            Entry::Jacobi((*e.jacobi(&w).unwrap()).clone()),
        ];
        for entry in &entries {
            let record = CacheRecord::from_entry(e.root_system().algebra(), entry);
            let back = CacheRecord::decode(&record.encode()).unwrap();
            assert_eq!(back, record);
            let rebuilt = back.to_entry(&e).unwrap();
            assert_eq!(format!("{rebuilt:?}"), format!("{entry:?}"));
        }
    }

    #[test]
    fn tampering_is_detected() {
        let e = a2();
        let w = DominantWeight::from_labels(&[2, 0]).unwrap();
        let record = CacheRecord::from_entry(
            e.root_system().algebra(),
            &Entry::MonomialZ(w.clone(), (*e.monomial_to_z(&w).unwrap()).clone()),
        );
        let text = String::from_utf8(record.encode()).unwrap();
        let tampered = text.replacen("\"c\": \"1\"", "\"c\": \"2\"", 1);
        assert_ne!(tampered, text);
        assert!(matches!(CacheRecord::decode(tampered.as_bytes()), Err(CacheError::Checksum)));
        let old = text.replace("\"schema_version\": 1", "\"schema_version\": 0");
        assert!(matches!(CacheRecord::decode(old.as_bytes()), Err(CacheError::Schema { found: 0 })));
        assert!(CacheRecord::decode(b"{").is_err());
    }

    #[test]
    fn wrong_algebra_is_rejected() {
        let e = a2();
        let w = DominantWeight::from_labels(&[1, 0]).unwrap();
        let record = CacheRecord::from_entry(
            e.root_system().algebra(),
            &Entry::CharZ(w.clone(), (*e.char_to_z(&w).unwrap()).clone()),
        );
        let a3 = Engine::for_algebra("A3".parse().unwrap()).unwrap();
        assert!(matches!(record.to_entry(&a3), Err(CacheError::WrongAlgebra { .. })));
    }

    #[test]
    fn store_saves_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        let algebra: AlgebraId = "A2".parse().unwrap();
        let e = a2();
        let w = DominantWeight::from_labels(&[2, 1]).unwrap();
        let p = e.jacobi(&w).unwrap();
        let mut store = Store::open(dir.path(), algebra).unwrap();
        assert!(store.save_from(&e).unwrap() > 0);
        assert_eq!(store.save_from(&e).unwrap(), 0);

        let fresh = a2();
        let mut store = Store::open(dir.path(), algebra).unwrap();
        let (loaded, skipped) = store.load_into(&fresh).unwrap();
        assert!(loaded > 0);
        assert_eq!(skipped, 0);
        assert_eq!(fresh.computed_jacobi().len(), e.computed_jacobi().len());
        assert_eq!(*fresh.jacobi(&w).unwrap(), *p);
    }
}
