//! Reproduction of the published E7 tables and the structural checks that
//! back them, as a suite of numbered criteria.
//!
//! The tables are embedded verbatim from `data/e7/`. Each block starts with a
//! header line `[kind key…]` followed by either one polynomial expression
//! (possibly wrapped over several lines) or `weight value` rows.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::Mutex;

use crate::characters::MonomialCombination;
use crate::coeffring::{KappaPoly, KappaRational, ZPolynomial};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::jacobi::lift;
use crate::rootsystem::{AlgebraId, DominantWeight, Family};
use crate::text::{parse_expression, parse_kappa_rational, parse_weight};
use crate::weights_up_to_order;

const FUNDAMENTAL_CHARACTERS: &str = include_str!("../data/e7/e7_fundamental_characters.txt");
const FIRST_ORDER_MONOMIALS: &str = include_str!("../data/e7/e7_first_order_monomials.txt");
const OPERATOR_B: &str = include_str!("../data/e7/e7_operator_b.txt");
const SECOND_ORDER_MONOMIALS: &str = include_str!("../data/e7/e7_second_order_monomials.txt");
const SECOND_ORDER_CHARACTERS: &str = include_str!("../data/e7/e7_second_order_characters.txt");
const FIRST_ORDER_JACOBI: &str = include_str!("../data/e7/e7_first_order_jacobi.txt");
const SECOND_ORDER_JACOBI: &str = include_str!("../data/e7/e7_second_order_jacobi.txt");
const GENERALIZED_CG: &str = include_str!("../data/e7/e7_generalized_cg.txt");

/// A numbered acceptance criterion with its time budget.
#[derive(Clone, Copy, Debug)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub budget: Duration,
}

const fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, title: "first-order inversion (E7)", budget: minutes(1) },
    Criterion { id: 2, title: "operator b-lists (E7)", budget: minutes(5) },
    Criterion { id: 3, title: "second-order monomials (E7)", budget: minutes(15) },
    Criterion { id: 4, title: "second-order characters (E7)", budget: minutes(30) },
    Criterion { id: 5, title: "first-order Jacobi polynomials (E7)", budget: minutes(5) },
    Criterion { id: 6, title: "second-order Jacobi polynomials (E7)", budget: minutes(30) },
    Criterion { id: 7, title: "generalized Clebsch-Gordan series (E7)", budget: minutes(30) },
    Criterion { id: 8, title: "route equivalence (E7, order <= 2)", budget: minutes(30) },
    Criterion { id: 9, title: "eigen-residuals", budget: minutes(30) },
    Criterion { id: 10, title: "specialization endpoints", budget: minutes(30) },
    Criterion { id: 11, title: "low-rank oracles (A1, A2, A3)", budget: minutes(1) },
    Criterion { id: 12, title: "dimension sum rules", budget: minutes(30) },
];

/// Algebras exercised by the all-algebra criteria.
pub fn sample_algebras() -> Vec<AlgebraId> {
    [(Family::A, 1), (Family::A, 2), (Family::A, 3), (Family::A, 4), (Family::D, 4), (Family::D, 5), (Family::E, 6), (Family::E, 7)]
        .into_iter()
        .map(|(f, r)| AlgebraId { family: f, rank: r })
        .collect()
}

/// The outcome of one criterion.
#[derive(Clone, Debug)]
pub struct Report {
    pub criterion: Criterion,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    pub fn over_budget(&self) -> bool {
        self.elapsed > self.criterion.budget
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && !self.over_budget()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {}: {} ({} checks, {:.1}s of {}s)",
            self.criterion.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.criterion.title,
            self.checks,
            self.elapsed.as_secs_f64(),
            self.criterion.budget.as_secs()
        )?;
        if self.over_budget() {
            write!(f, " [over budget]")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, what: impl fmt::Display, outcome: Result<bool>) {
        self.checks += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(format!("{what}: mismatch")),
            Err(e) => self.failures.push(format!("{what}: {e}")),
        }
    }
}

struct Block {
    kind: String,
    keys: Vec<String>,
    lines: Vec<String>,
}

impl Block {
    fn expression(&self) -> String {
        self.lines.join(" ")
    }

    fn rows(&self) -> impl Iterator<Item = Result<(&str, &str)>> {
        self.lines.iter().map(|l| {
            l.trim()
                .split_once(char::is_whitespace)
                .map(|(w, v)| (w, v.trim()))
                .ok_or_else(|| Error::parse(0, format!("malformed row {l:?}")))
        })
    }
}

fn blocks(text: &str) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let mut parts = header.split_whitespace().map(String::from);
            out.push(Block {
                kind: parts.next().unwrap_or_default(),
                keys: parts.collect(),
                lines: Vec::new(),
            });
        } else if let Some(b) = out.last_mut() {
            b.lines.push(line.to_string());
        }
    }
    out
}

fn dominant(text: &str, rank: usize) -> Result<DominantWeight> {
    DominantWeight::new(parse_weight(text, rank)?)
}

fn key(b: &Block, i: usize, rank: usize) -> Result<DominantWeight> {
    let k = b.keys.get(i).ok_or_else(|| Error::parse(0, format!("block [{}] lacks a key", b.kind)))?;
    dominant(k, rank)
}

fn mult_table(b: &Block, rank: usize) -> Result<BTreeMap<DominantWeight, BigInt>> {
    b.rows()
        .map(|row| {
            let (w, n) = row?;
            let n: BigInt = n.parse().map_err(|_| Error::parse(0, format!("bad multiplicity {n:?}")))?;
            Ok((dominant(w, rank)?, n))
        })
        .collect()
}

fn positive_denominators<'a>(coeffs: impl IntoIterator<Item = &'a KappaRational>) -> bool {
    coeffs.into_iter().all(KappaRational::denominator_has_positive_linear_factors)
}

/// Runs the criteria against shared engines, so later criteria reuse the
/// results of earlier ones.
pub struct Verifier {
    engines: Mutex<BTreeMap<AlgebraId, Arc<Engine>>>,
}

impl Default for Verifier {
    fn default() -> Self {
        Self::new()
    }
}

impl Verifier {
    pub fn new() -> Self {
        Verifier {
            engines: Mutex::new(BTreeMap::new()),
        }
    }

    /// Uses `engine` (e.g. one seeded from a persistent cache) for its algebra.
    pub fn with_engine(engine: Arc<Engine>) -> Self {
        let v = Self::new();
        v.engines.lock().insert(engine.root_system().algebra(), engine);
        v
    }

    pub fn engine(&self, algebra: AlgebraId) -> Result<Arc<Engine>> {
        if let Some(e) = self.engines.lock().get(&algebra) {
            return Ok(e.clone());
        }
        let e = Arc::new(Engine::for_algebra(algebra)?);
        Ok(self.engines.lock().entry(algebra).or_insert(e).clone())
    }

    fn e7(&self) -> Result<Arc<Engine>> {
        self.engine(AlgebraId::e7())
    }

    pub fn run_all(&self) -> Vec<Report> {
        CRITERIA.iter().map(|c| self.run_criterion(c)).collect()
    }

    /// Runs one criterion; `None` for an unknown id.
    pub fn run(&self, id: u8) -> Option<Report> {
        CRITERIA.iter().find(|c| c.id == id).map(|c| self.run_criterion(c))
    }

    fn run_criterion(&self, c: &Criterion) -> Report {
        let start = Instant::now();
        let mut t = Tally::default();
        let outcome = match c.id {
            1 => self.first_order_inversion(&mut t),
            2 => self.operator_b_lists(&mut t),
            3 => self.second_order_monomials(&mut t),
            4 => self.second_order_characters(&mut t),
            5 => self.jacobi_table(&mut t, FIRST_ORDER_JACOBI),
            6 => self.jacobi_table(&mut t, SECOND_ORDER_JACOBI),
            7 => self.generalized_cg(&mut t),
            8 => self.route_equivalence(&mut t),
            9 => self.eigen_residuals(&mut t),
            10 => self.specialization_endpoints(&mut t),
            11 => self.low_rank_oracles(&mut t),
            12 => self.sum_rules(&mut t),
            _ => Ok(()),
        };
        if let Err(e) = outcome {
            t.failures.push(format!("aborted: {e}"));
        }
        Report {
            criterion: *c,
            checks: t.checks,
            failures: t.failures,
            elapsed: start.elapsed(),
        }
    }

    fn first_order_inversion(&self, t: &mut Tally) -> Result<()> {
        let e = self.e7()?;
        for b in blocks(FIRST_ORDER_MONOMIALS) {
            let what = format!("M {}", b.keys.join(" "));
            t.check(&what, (|| {
                let w = key(&b, 0, 7)?;
                Ok(lift(&*e.monomial_to_z(&w)?) == parse_expression(&b.expression(), 7)?)
            })());
        }
        for b in blocks(FUNDAMENTAL_CHARACTERS) {
            let what = format!("z expansion {}", b.keys.join(" "));
            t.check(&what, (|| {
                let w = key(&b, 0, 7)?;
                let table = mult_table(&b, 7)?;
                let i = w.labels().iter().position(|&m| m == 1).unwrap_or(0);
                let z = e.z_to_monomials(&ZPolynomial::<BigInt>::variable(7, i + 1))?;
                let expected = MonomialCombination::from_map(7, table.clone());
                Ok(z == expected && e.character(&w)?.multiplicities() == &table)
            })());
        }
        Ok(())
    }

    fn operator_b_lists(&self, t: &mut Tally) -> Result<()> {
        let e = self.e7()?;
        let op = e.operator()?;
        for b in blocks(OPERATOR_B) {
            let what = format!("b {}", b.keys.join(" "));
            t.check(&what, (|| {
                let j: usize = b.keys[0].parse().map_err(|_| Error::parse(0, "bad index"))?;
                let printed = parse_expression(&b.expression(), 7)?;
                let parts = printed
                    .kappa_components()
                    .ok_or_else(|| Error::invariant("printed b-list is not polynomial in κ"))?;
                let zero = ZPolynomial::zero(7);
                let split_ok = parts.len() <= 2
                    && parts.first().unwrap_or(&zero) == op.b0(j)
                    && parts.get(1).unwrap_or(&zero) == op.b1(j);
                Ok(split_ok && op.b(j) == &printed)
            })());
        }
        t.check("a symmetric", Ok(symmetric(&op)));
        Ok(())
    }

    fn second_order_monomials(&self, t: &mut Tally) -> Result<()> {
        let e = self.e7()?;
        for b in blocks(SECOND_ORDER_MONOMIALS) {
            let what = format!("M {}", b.keys.join(" "));
            t.check(&what, (|| {
                let w = key(&b, 0, 7)?;
                Ok(lift(&*e.monomial_to_z(&w)?) == parse_expression(&b.expression(), 7)?)
            })());
        }
        Ok(())
    }

    fn second_order_characters(&self, t: &mut Tally) -> Result<()> {
        let e = self.e7()?;
        for b in blocks(SECOND_ORDER_CHARACTERS) {
            let what = format!("chi {}", b.keys.join(" "));
            t.check(&what, (|| {
                let w = key(&b, 0, 7)?;
                Ok(e.character(&w)?.multiplicities() == &mult_table(&b, 7)?)
            })());
        }
        Ok(())
    }

    fn jacobi_table(&self, t: &mut Tally, table: &str) -> Result<()> {
        let e = self.e7()?;
        for b in blocks(table) {
            let what = format!("P {}", b.keys.join(" "));
            t.check(&what, (|| {
                let w = key(&b, 0, 7)?;
                let p = e.jacobi(&w)?;
                Ok(p.zform() == &parse_expression(&b.expression(), 7)?)
            })());
            t.check(format!("{what} denominators"), (|| {
                let p = e.jacobi(&key(&b, 0, 7)?)?;
                Ok(positive_denominators(p.coeffs().terms().map(|(_, c)| c)))
            })());
        }
        Ok(())
    }

    fn generalized_cg(&self, t: &mut Tally) -> Result<()> {
        let e = self.e7()?;
        for b in blocks(GENERALIZED_CG) {
            let what = format!("cg {}", b.keys.join(" x "));
            t.check(&what, (|| {
                let (x, y) = (key(&b, 0, 7)?, key(&b, 1, 7)?);
                let series = e.generalized_cg(&x, &y)?;
                let printed = b
                    .rows()
                    .map(|row| {
                        let (w, c) = row?;
                        Ok((dominant(w, 7)?, parse_kappa_rational(c)?))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let computed: BTreeMap<_, _> = series.terms.iter().cloned().collect();
                Ok(computed == printed)
            })());
            t.check(format!("{what} support and κ=1"), (|| {
                let (x, y) = (key(&b, 0, 7)?, key(&b, 1, 7)?);
                let series = e.generalized_cg(&x, &y)?;
                let classical = e.clebsch_gordan(&x, &y)?;
                let at_one: BTreeMap<_, _> = series.specialize(&BigRational::one())?.into_iter().collect();
                let expected: BTreeMap<_, _> = classical
                    .terms
                    .iter()
                    .map(|(w, n)| (w.clone(), BigRational::from_integer(n.clone())))
                    .collect();
                Ok(at_one == expected && positive_denominators(series.terms.iter().map(|(_, c)| c)))
            })());
        }
        Ok(())
    }

    fn route_equivalence(&self, t: &mut Tally) -> Result<()> {
        route_equivalence_on(&*self.e7()?, 2, t)
    }

    fn eigen_residuals(&self, t: &mut Tally) -> Result<()> {
        let e7 = self.e7()?;
        for w in weights_up_to_order(7, 2) {
            t.check(format!("solve P {w}"), e7.jacobi(&w).map(|_| true));
        }
        let engines: Vec<Arc<Engine>> = self.engines.lock().values().cloned().collect();
        for e in engines {
            let op = e.operator()?;
            let algebra = e.root_system().algebra();
            for p in e.computed_jacobi() {
                t.check(format!("{algebra} P {}", p.m()), (|| {
                    let eps = e.eigenvalue(p.m())?.to_kappa();
                    Ok(op.apply(p.zform())?.sub(&p.zform().scale(&eps))?.is_zero())
                })());
            }
        }
        Ok(())
    }

    fn specialization_endpoints(&self, t: &mut Tally) -> Result<()> {
        for algebra in sample_algebras() {
            let e = self.engine(algebra)?;
            let r = e.rank();
            for w in weights_up_to_order(r, 2) {
                t.check(format!("{algebra} P {w}"), (|| {
                    let p = e.jacobi(&w)?;
                    let at_one = p.specialize(&BigRational::one())?;
                    let at_zero = p.specialize(&BigRational::zero())?;
                    let chi = e.char_to_z(&w)?.map_coefficients(|n| BigRational::from_integer(n.clone()));
                    let m = e.monomial_to_z(&w)?.map_coefficients(|n| BigRational::from_integer(n.clone()));
                    Ok(at_one == chi && at_zero == m)
                })());
            }
        }
        Ok(())
    }

    fn low_rank_oracles(&self, t: &mut Tally) -> Result<()> {
        let a1 = self.engine(AlgebraId::new(Family::A, 1)?)?;
        let recurrence = gegenbauer(8)?;
        for (n, p) in recurrence.iter().enumerate() {
            t.check(format!("A1 P {n}"), (|| {
                Ok(a1.jacobi(&DominantWeight::from_labels(&[n as i32])?)?.zform() == p)
            })());
        }
        for rank in [2, 3] {
            let e = self.engine(AlgebraId::new(Family::A, rank)?)?;
            route_equivalence_on(&e, 2, t)?;
            for w in weights_up_to_order(rank, 2) {
                t.check(format!("{} round trip {w}", e.root_system().algebra()), (|| {
                    let m = e.monomial_to_z(&w)?;
                    let chi = e.char_to_z(&w)?;
                    let ch = e.character(&w)?;
                    Ok(e.z_to_monomials(&m)? == MonomialCombination::single(w.clone(), BigInt::one())
                        && e.z_to_monomials(&chi)? == ch.to_combination()
                        && ch.dimension(e.root_system()) == e.root_system().weyl_dimension(&w))
                })());
            }
        }
        Ok(())
    }

    fn sum_rules(&self, t: &mut Tally) -> Result<()> {
        let e7 = self.e7()?;
        for w in weights_up_to_order(7, 2) {
            t.check(format!("character {w}"), e7.character(&w).map(|_| true));
        }
        for i in 1..=7 {
            for j in i..=7 {
                let (a, b) = (DominantWeight::fundamental(7, i), DominantWeight::fundamental(7, j));
                t.check(format!("decompose {a} x {b}"), e7.clebsch_gordan(&a, &b).map(|_| true));
            }
        }
        let engines: Vec<Arc<Engine>> = self.engines.lock().values().cloned().collect();
        for e in engines {
            let rs = e.root_system();
            let algebra = rs.algebra();
            for ch in e.computed_characters() {
                let h = ch.highest();
                t.check(format!("{algebra} dim {h}"), Ok(ch.dimension(rs) == rs.weyl_dimension(h)));
            }
            for s in e.computed_decompositions() {
                let lhs = rs.weyl_dimension(&s.a) * rs.weyl_dimension(&s.b);
                t.check(format!("{algebra} dim {} x {}", s.a, s.b), Ok(s.dimension(rs) == lhs));
            }
        }
        Ok(())
    }
}

fn symmetric(op: &crate::operator::CSOperator) -> bool {
    let r = op.rank();
    (1..=r).all(|j| (1..=r).all(|k| op.a(j, k) == op.a(k, j)))
}

/// `z_to_monomials(Δ M_λ(z)) = Δ M_λ` for every weight up to `order`.
fn route_equivalence_on(e: &Engine, order: i32, t: &mut Tally) -> Result<()> {
    let op = e.operator()?;
    let algebra = e.root_system().algebra();
    t.check(format!("{algebra} a symmetric"), Ok(symmetric(&op)));
    for w in weights_up_to_order(e.rank(), order) {
        t.check(format!("{algebra} route {w}"), (|| {
            let image = op.apply(&lift(&*e.monomial_to_z(&w)?))?;
            Ok(e.z_to_monomials(&image)? == *e.act_on_monomial(&w)?)
        })());
    }
    Ok(())
}

/// Monic ultraspherical polynomials in `z = 2 cos q` from the three-term
/// recurrence `p_{n+1} = z p_n − γ_n p_{n−1}`,
/// `γ_n = n (n + 2κ − 1) / ((n + κ)(n + κ − 1))`.
fn gegenbauer(degree: usize) -> Result<Vec<ZPolynomial<KappaRational>>> {
    let z = ZPolynomial::<KappaRational>::variable(1, 1);
    let mut out = vec![ZPolynomial::one(1), z.clone()];
    for n in 1..degree as i64 {
        let gamma = KappaRational::new(
            KappaPoly::from_i64s(&[n * (n - 1), 2 * n]),
            &KappaPoly::from_i64s(&[n, 1]) * &KappaPoly::from_i64s(&[n - 1, 1]),
        )?;
        let k = n as usize;
        let next = z.mul(&out[k])?.sub(&out[k - 1].scale(&gamma))?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        let expected = [
            (FUNDAMENTAL_CHARACTERS, 7),
            (FIRST_ORDER_MONOMIALS, 7),
            (OPERATOR_B, 7),
            (SECOND_ORDER_MONOMIALS, 28),
            (SECOND_ORDER_CHARACTERS, 28),
            (FIRST_ORDER_JACOBI, 7),
            (SECOND_ORDER_JACOBI, 15),
            (GENERALIZED_CG, 15),
        ];
        for (text, n) in expected {
            let bs = blocks(text);
            assert_eq!(bs.len(), n);
            for b in &bs {
                assert!(!b.lines.is_empty(), "[{} {}]", b.kind, b.keys.join(" "));
                if b.kind != "b" {
                    key(b, 0, 7).unwrap();
                }
            }
        }
    }

    #[test]
    fn a1_criterion_passes() {
        let v = Verifier::new();
        let report = v.run(11).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert!(report.checks > 9);
    }

    #[test]
    fn unknown_criterion() {
        assert!(Verifier::new().run(13).is_none());
    }
}
