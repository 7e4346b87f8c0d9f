//! A root system together with concurrent memo tables for everything that
//! is expensive and reused: characters, basis conversions, the operator's
//! action on orbit sums, Jacobi polynomials and orbit-sum products.
//!
//! Every table is an idempotent cache: a value may be computed twice by
//! racing threads, but whichever copy lands first is kept, so all readers
//! see one consistent result. Locks are never held while computing.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use parking_lot::RwLock;

use crate::characters::{DecompositionSeries, DominantCharacter, MonomialCombination};
use crate::coeffring::{KappaRational, Monomial, ZPolynomial};
use crate::error::Result;
use crate::jacobi::JacobiPolynomial;
use crate::operator::CSOperator;
use crate::rootsystem::{AlgebraId, DominantWeight, RootSystem};

pub(crate) struct Memo<K, V> {
    map: RwLock<HashMap<K, Arc<V>>>,
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    fn new() -> Self {
        Memo {
            map: RwLock::new(HashMap::new()),
        }
    }

    pub(crate) fn get(&self, k: &K) -> Option<Arc<V>> {
        self.map.read().get(k).cloned()
    }

    /// Inserts unless present; returns the value that ends up stored.
    pub(crate) fn insert(&self, k: K, v: V) -> Arc<V> {
        self.map.write().entry(k).or_insert_with(|| Arc::new(v)).clone()
    }

    pub(crate) fn get_or_try(&self, k: &K, f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        if let Some(v) = self.get(k) {
            return Ok(v);
        }
        let v = f()?;
        Ok(self.insert(k.clone(), v))
    }

    fn snapshot(&self) -> Vec<(K, Arc<V>)> {
        self.map.read().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

pub struct Engine {
    pub(crate) rs: RootSystem,
    pub(crate) characters: Memo<DominantWeight, DominantCharacter>,
    pub(crate) decompositions: Memo<(DominantWeight, DominantWeight), DecompositionSeries>,
    pub(crate) char_z: Memo<DominantWeight, ZPolynomial<BigInt>>,
    pub(crate) monomial_z: Memo<DominantWeight, ZPolynomial<BigInt>>,
    pub(crate) z_monomials: Memo<Monomial, MonomialCombination<BigInt>>,
    pub(crate) orbit_products: Memo<(DominantWeight, DominantWeight), MonomialCombination<BigInt>>,
    pub(crate) actions: Memo<DominantWeight, MonomialCombination<KappaRational>>,
    pub(crate) jacobi: Memo<DominantWeight, JacobiPolynomial>,
    pub(crate) operator: Memo<(), CSOperator>,
}

impl Engine {
    pub fn new(rs: RootSystem) -> Self {
        Engine {
            rs,
            characters: Memo::new(),
            decompositions: Memo::new(),
            char_z: Memo::new(),
            monomial_z: Memo::new(),
            z_monomials: Memo::new(),
            orbit_products: Memo::new(),
            actions: Memo::new(),
            jacobi: Memo::new(),
            operator: Memo::new(),
        }
    }

    pub fn for_algebra(algebra: AlgebraId) -> Result<Self> {
        Ok(Self::new(RootSystem::build(algebra)?))
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    // Hooks for persistent caches: seed values computed elsewhere and list
    // what has been computed so far.

    pub fn seed_character(&self, c: DominantCharacter) {
        self.characters.insert(c.highest().clone(), c);
    }

    pub fn seed_char_z(&self, w: DominantWeight, p: ZPolynomial<BigInt>) {
        self.char_z.insert(w, p);
    }

    pub fn seed_monomial_z(&self, w: DominantWeight, p: ZPolynomial<BigInt>) {
        self.monomial_z.insert(w, p);
    }

    pub fn seed_jacobi(&self, p: JacobiPolynomial) {
        self.jacobi.insert(p.m().clone(), p);
    }

    pub fn computed_characters(&self) -> Vec<Arc<DominantCharacter>> {
        self.characters.snapshot().into_iter().map(|(_, v)| v).collect()
    }

    pub fn computed_char_z(&self) -> Vec<(DominantWeight, Arc<ZPolynomial<BigInt>>)> {
        self.char_z.snapshot()
    }

    pub fn computed_monomial_z(&self) -> Vec<(DominantWeight, Arc<ZPolynomial<BigInt>>)> {
        self.monomial_z.snapshot()
    }

    pub fn computed_decompositions(&self) -> Vec<Arc<DecompositionSeries>> {
        self.decompositions.snapshot().into_iter().map(|(_, v)| v).collect()
    }

    pub fn computed_jacobi(&self) -> Vec<Arc<JacobiPolynomial>> {
        self.jacobi.snapshot().into_iter().map(|(_, v)| v).collect()
    }
}
