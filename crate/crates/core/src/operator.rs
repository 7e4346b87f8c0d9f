//! The gauge-transformed Calogero-Sutherland operator Δ^κ.
//!
//! Two routes are implemented. The primary one acts directly on orbit sums:
//! for a positive root α and a weight μ with `n = (μ, α) > 0`, the identity
//! `cot x (e^{inx} − e^{−inx}) = i (e^{inx} + e^{−inx} + 2 Σ_{k=1}^{n−1} e^{i(n−2k)x})`
//! shows that the first-order part sends the pair `{μ, μ − nα}` to
//! `2κn` on each endpoint and `4κn` on every interior point `μ − kα`.
//! The Laplacian contributes `2(μ, μ)`.
//!
//! The second route writes Δ^κ in the coordinates `z_i = χ_{λ_i}` as
//! `Σ a_jk ∂_j ∂_k + Σ (b⁰_j + κ b¹_j) ∂_j`; its coefficients are synthesized
//! from the first route and checked, not assumed, to have the expected shape.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use rustc_hash::FxHashMap as HashMap;

use crate::characters::MonomialCombination;
use crate::coeffring::{Coefficient, KappaPoly, KappaRational, Monomial, ZPolynomial};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::rootsystem::{DominantWeight, Root, Weight};

/// Sums the first-order contributions of every (root, orbit element) pair
/// with `n = (μ, α) > 0`, keyed by `K`; `step(k, d)` moves a key by `−α`.
fn accumulate<K, D>(
    orbit: &[Weight],
    roots: &[Root],
    key: impl Fn(&Weight) -> K + Sync,
    delta: impl Fn(&Root) -> D + Sync,
    step: impl Fn(K, &D) -> K + Sync,
) -> HashMap<K, i64>
where
    K: std::hash::Hash + Eq + Clone + Send,
    D: Sync,
{
    let fold = |mut acc: HashMap<K, i64>, root: &Root| {
        let d = delta(root);
        for mu in orbit {
            let n = root.pair(mu);
            if n <= 0 {
                continue;
            }
            let n = n as i64;
            let mut k = key(mu);
            *acc.entry(k.clone()).or_insert(0) += 2 * n;
            for _ in 1..n {
                k = step(k, &d);
                *acc.entry(k.clone()).or_insert(0) += 4 * n;
            }
            k = step(k, &d);
            *acc.entry(k).or_insert(0) += 2 * n;
        }
        acc
    };
    let merge = |a: HashMap<K, i64>, b: HashMap<K, i64>| {
        let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        for (k, v) in small {
            *big.entry(k).or_insert(0) += v;
        }
        big
    };
    roots
        .par_iter()
        .fold(HashMap::default, fold)
        .reduce(HashMap::default, merge)
}

// Weights of rank ≤ 8 with small labels packed one byte per label (offset
// 128). Adding a packed delta moves every byte independently as long as no
// label leaves the range, which the caller guarantees.
fn pack(w: &Weight) -> u64 {
    w.labels()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &m)| acc | (((m + 128) as u64) << (8 * i)))
}

fn pack_delta(w: &Weight) -> i64 {
    w.labels()
        .iter()
        .enumerate()
        .fold(0i64, |acc, (i, &m)| acc + ((m as i64) << (8 * i)))
}

fn unpack(k: u64, rank: usize) -> Weight {
    let labels: Vec<i32> = (0..rank).map(|i| ((k >> (8 * i)) & 0xff) as i32 - 128).collect();
    Weight::new(&labels)
}

/// `ε_m(κ) = 2(m, m) + 4κ(m, ρ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenvalue {
    pub m: DominantWeight,
    pub constant: BigRational,
    pub linear: BigRational,
}

impl Eigenvalue {
    pub fn to_kappa(&self) -> KappaRational {
        KappaRational::from_rational(&self.constant)
            .add_ref(&KappaRational::kappa().mul_ref(&KappaRational::from_rational(&self.linear)))
    }

    pub fn at(&self, kappa: &BigRational) -> BigRational {
        &self.constant + &self.linear * kappa
    }
}

/// Δ^κ in z-coordinates: `Σ_{j,k} a_jk ∂_j∂_k + Σ_j (b⁰_j + κ b¹_j) ∂_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CSOperator {
    rank: usize,
    a: Vec<Vec<ZPolynomial<BigRational>>>,
    b0: Vec<ZPolynomial<BigRational>>,
    b1: Vec<ZPolynomial<BigRational>>,
    lifted_a: Vec<Vec<ZPolynomial<KappaRational>>>,
    lifted_b: Vec<ZPolynomial<KappaRational>>,
}

impl CSOperator {
    pub fn new(
        a: Vec<Vec<ZPolynomial<BigRational>>>,
        b0: Vec<ZPolynomial<BigRational>>,
        b1: Vec<ZPolynomial<BigRational>>,
    ) -> Result<Self> {
        let rank = b0.len();
        if b1.len() != rank || a.len() != rank || a.iter().any(|row| row.len() != rank) {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: b1.len(),
            });
        }
        for j in 0..rank {
            for k in 0..j {
                if a[j][k] != a[k][j] {
                    return Err(Error::invariant(format!("a[{}][{}] is not symmetric", j + 1, k + 1)));
                }
            }
        }
        let lifted_a = a.iter().map(|row| row.iter().map(|p| p.to_kappa()).collect()).collect();
        let kappa = ZPolynomial::constant(rank, KappaRational::kappa());
        let lifted_b = b0
            .iter()
            .zip(&b1)
            .map(|(p0, p1)| p0.to_kappa().add(&p1.to_kappa().mul(&kappa)?))
            .collect::<Result<_>>()?;
        Ok(CSOperator {
            rank,
            a,
            b0,
            b1,
            lifted_a,
            lifted_b,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `a_jk`, with indices counted from 1.
    pub fn a(&self, j: usize, k: usize) -> &ZPolynomial<BigRational> {
        &self.a[j - 1][k - 1]
    }

    pub fn b0(&self, j: usize) -> &ZPolynomial<BigRational> {
        &self.b0[j - 1]
    }

    pub fn b1(&self, j: usize) -> &ZPolynomial<BigRational> {
        &self.b1[j - 1]
    }

    /// `b⁰_j + κ b¹_j`.
    pub fn b(&self, j: usize) -> &ZPolynomial<KappaRational> {
        &self.lifted_b[j - 1]
    }

    pub fn apply(&self, p: &ZPolynomial<KappaRational>) -> Result<ZPolynomial<KappaRational>> {
        if p.nvars() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: p.nvars(),
            });
        }
        let mut out = ZPolynomial::zero(self.rank);
        for j in 0..self.rank {
            let dj = p.derivative(j + 1);
            if dj.is_zero() {
                continue;
            }
            out = out.add(&self.lifted_b[j].mul(&dj)?)?;
            for k in 0..self.rank {
                let djk = dj.derivative(k + 1);
                if !djk.is_zero() {
                    out = out.add(&self.lifted_a[j][k].mul(&djk)?)?;
                }
            }
        }
        Ok(out)
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

impl Engine {
    pub fn eigenvalue(&self, m: &DominantWeight) -> Result<Eigenvalue> {
        self.rs.check_rank(m)?;
        let d = BigInt::from(self.rs.inner_product_scale());
        let mm = self.rs.scaled_inner_product(m, m);
        let mr = self.rs.scaled_inner_product(m, self.rs.rho());
        Ok(Eigenvalue {
            m: m.clone(),
            constant: BigRational::new(BigInt::from(2 * mm), d.clone()),
            linear: BigRational::new(BigInt::from(4 * mr), d),
        })
    }

    /// `Δ^κ M_λ = ε_λ(κ) M_λ + κ Σ_{μ<λ} c_{λμ} M_μ`, computed on the full
    /// orbit and re-collected onto dominant representatives. Every orbit
    /// element must receive the same coefficient.
    pub fn act_on_monomial(&self, lambda: &DominantWeight) -> Result<Arc<MonomialCombination<KappaRational>>> {
        self.rs.check_rank(lambda)?;
        self.actions.get_or_try(lambda, || self.compute_action(lambda))
    }

    fn compute_action(&self, lambda: &DominantWeight) -> Result<MonomialCombination<KappaRational>> {
        let rs = &self.rs;
        let orbit = rs.orbit(lambda);
        let bound = orbit
            .iter()
            .flat_map(|w| w.labels().iter().map(|m| m.unsigned_abs()))
            .max()
            .unwrap_or(0);
        // Every string point lies between two orbit elements, so the orbit
        // bounds all labels that can occur.
        let total: Vec<(Weight, i64)> = if rs.rank() <= 8 && bound < 100 {
            let r = rs.rank();
            accumulate(
                &orbit,
                rs.positive_roots(),
                pack,
                |root| -(pack_delta(&root.weight)),
                |k, d| k.wrapping_add(*d as u64),
            )
            .into_iter()
            .map(|(k, v)| (unpack(k, r), v))
            .collect()
        } else {
            accumulate(
                &orbit,
                rs.positive_roots(),
                |w| w.clone(),
                |root| root.weight.clone(),
                |k, d| &k - d,
            )
            .into_iter()
            .collect()
        };

        // (value, number of orbit elements seen) per dominant representative.
        let mut collected: HashMap<Weight, (i64, u128)> = HashMap::default();
        for (w, v) in total {
            if v == 0 {
                continue;
            }
            let mut d = w;
            rs.make_dominant(&mut d);
            let entry = collected.entry(d.clone()).or_insert((v, 0));
            if entry.0 != v {
                return Err(Error::invariant(format!(
                    "Δ M_{lambda}: coefficient is not constant on the orbit of {d}"
                )));
            }
            entry.1 += 1;
        }

        let mut out = MonomialCombination::zero(rs.rank());
        let eps = self.eigenvalue(lambda)?;
        out.add_term(lambda.clone(), KappaRational::from_rational(&eps.constant));
        for (d, (v, count)) in collected {
            let d = DominantWeight::new_unchecked(d);
            if count != rs.orbit_size(&d) {
                return Err(Error::invariant(format!(
                    "Δ M_{lambda}: only {count} of {} orbit elements of {d} received a coefficient",
                    rs.orbit_size(&d)
                )));
            }
            if v < 0 || !rs.dominates(lambda, &d) {
                return Err(Error::invariant(format!("Δ M_{lambda}: unexpected term {v} κ M_{d}")));
            }
            let c = KappaRational::from_poly(KappaPoly::new(vec![BigInt::from(0), BigInt::from(v)]));
            out.add_term(d, c);
        }
        if out.coefficient(lambda) != eps.to_kappa() {
            return Err(Error::invariant(format!("Δ M_{lambda}: diagonal term differs from ε")));
        }
        Ok(out)
    }

    /// Δ^κ applied to a combination of orbit sums.
    pub fn act<C: Coefficient>(&self, f: &MonomialCombination<C>, lift: impl Fn(&C) -> KappaRational) -> Result<MonomialCombination<KappaRational>> {
        let weights: Vec<&DominantWeight> = f.terms().map(|(w, _)| w).collect();
        weights
            .par_iter()
            .map(|w| self.act_on_monomial(w).map(|_| ()))
            .collect::<Result<()>>()?;
        let mut out = MonomialCombination::zero(self.rank());
        for (w, c) in f.terms() {
            out.add_scaled(&*self.act_on_monomial(w)?, &lift(c));
        }
        Ok(out)
    }

    /// Δ^κ of a polynomial in z, computed through the orbit-sum basis.
    fn act_on_z_monomial(&self, e: &Monomial) -> Result<ZPolynomial<KappaRational>> {
        let m = self.z_monomial(e)?;
        let image = self.act(&m, KappaRational::from_bigint)?;
        self.monomials_to_z(&image)
    }

    /// The z-coordinate form of Δ^κ (memoized).
    pub fn operator(&self) -> Result<Arc<CSOperator>> {
        self.operator.get_or_try(&(), || self.build_z_operator())
    }

    fn build_z_operator(&self) -> Result<CSOperator> {
        let r = self.rank();
        let unit = |j: usize| {
            let mut e = vec![0u16; r];
            e[j] += 1;
            e
        };

        let b: Vec<(ZPolynomial<BigRational>, ZPolynomial<BigRational>)> = (0..r)
            .into_par_iter()
            .map(|j| {
                let image = self.act_on_z_monomial(&Monomial::from_exponents(&unit(j)))?;
                let parts = image
                    .kappa_components()
                    .filter(|p| p.len() <= 2)
                    .ok_or_else(|| Error::invariant(format!("Δ z_{} is not linear in κ", j + 1)))?;
                let mut it = parts.into_iter();
                let b0 = it.next().unwrap_or_else(|| ZPolynomial::zero(r));
                let b1 = it.next().unwrap_or_else(|| ZPolynomial::zero(r));
                Ok((b0, b1))
            })
            .collect::<Result<_>>()?;
        let kappa = ZPolynomial::constant(r, KappaRational::kappa());
        let lifted_b: Vec<ZPolynomial<KappaRational>> = b
            .iter()
            .map(|(b0, b1)| b0.to_kappa().add(&b1.to_kappa().mul(&kappa)?))
            .collect::<Result<_>>()?;

        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|j| (j..r).map(move |k| (j, k))).collect();
        let entries: Vec<((usize, usize), ZPolynomial<BigRational>)> = pairs
            .into_par_iter()
            .map(|(j, k)| {
                let mut e = unit(j);
                e[k] += 1;
                let image = self.act_on_z_monomial(&Monomial::from_exponents(&e))?;
                let zj = ZPolynomial::variable(r, j + 1);
                let zk = ZPolynomial::variable(r, k + 1);
                let rest = image
                    .sub(&zj.mul(&lifted_b[k])?)?
                    .sub(&zk.mul(&lifted_b[j])?)?
                    .scale(&KappaRational::from_rational(&half()));
                let parts = rest
                    .kappa_components()
                    .filter(|p| p.len() <= 1)
                    .ok_or_else(|| Error::invariant(format!("a_{}{} depends on κ", j + 1, k + 1)))?;
                Ok(((j, k), parts.into_iter().next().unwrap_or_else(|| ZPolynomial::zero(r))))
            })
            .collect::<Result<_>>()?;

        let mut a = vec![vec![ZPolynomial::zero(r); r]; r];
        for ((j, k), p) in entries {
            a[k][j] = p.clone();
            a[j][k] = p;
        }
        let (b0, b1) = b.into_iter().unzip();
        CSOperator::new(a, b0, b1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{AlgebraId, Family, RootSystem};
    use crate::text::parse_expression;

    fn e7() -> Engine {
        Engine::for_algebra(AlgebraId::e7()).unwrap()
    }

    fn kr(num: &[i64]) -> KappaRational {
        KappaRational::from_poly(KappaPoly::from_i64s(num))
    }

    #[test]
    fn e7_first_order_actions() {
        let e = e7();
        let zero = DominantWeight::zero(7);
        assert!(e.act_on_monomial(&zero).unwrap().is_empty());
        let l1 = DominantWeight::fundamental(7, 1);
        let act = e.act_on_monomial(&l1).unwrap();
        assert_eq!(act.len(), 2);
        assert_eq!(act.coefficient(&l1), kr(&[4, 68]));
        assert_eq!(act.coefficient(&zero), kr(&[0, 504]));
        let l7 = DominantWeight::fundamental(7, 7);
        assert_eq!(e.act_on_monomial(&l7).unwrap().coefficient(&l7), kr(&[3, 54]));
        assert_eq!(e.eigenvalue(&l1).unwrap().at(&BigRational::from_integer(1.into())), BigRational::from_integer(72.into()));
        assert_eq!(e.eigenvalue(&zero).unwrap().to_kappa(), KappaRational::zero_elem());
    }

    #[test]
    fn packed_keys_agree_with_weight_keys() {
        for alg in ["A3", "D4", "E6"] {
            let rs = RootSystem::build(alg.parse().unwrap()).unwrap();
            let r = rs.rank();
            let mut labels = vec![0; r];
            labels[0] = 2;
            labels[r - 1] = 1;
            let orbit = rs.orbit(&DominantWeight::from_labels(&labels).unwrap());
            let packed: HashMap<Weight, i64> = accumulate(
                &orbit,
                rs.positive_roots(),
                pack,
                |root| -(pack_delta(&root.weight)),
                |k, d| k.wrapping_add(*d as u64),
            )
            .into_iter()
            .map(|(k, v)| (unpack(k, r), v))
            .collect();
            let plain = accumulate(&orbit, rs.positive_roots(), |w| w.clone(), |root| root.weight.clone(), |k, d| &k - d);
            assert_eq!(packed, plain, "{alg}");
        }
    }

    #[test]
    fn a1_operator_is_the_gegenbauer_one() {
        // For A1 with z = e^{iq} + e^{-iq}: a = z² − 4, b⁰ = z, b¹ = 2z.
        let e = Engine::for_algebra(AlgebraId::new(Family::A, 1).unwrap()).unwrap();
        let op = e.operator().unwrap();
        let q = |s: &str| parse_expression(s, 1).unwrap().substitute_kappa(&BigRational::from_integer(0.into())).unwrap();
        assert_eq!(op.a(1, 1), &q("z1^2 - 4"));
        assert_eq!(op.b0(1), &q("z1"));
        assert_eq!(op.b1(1), &q("2 z1"));
    }

    #[test]
    fn apply_matches_b_list_and_kills_constants() {
        let e = e7();
        let op = e.operator().unwrap();
        let z1 = ZPolynomial::variable(7, 1);
        assert_eq!(op.apply(&z1).unwrap(), parse_expression("-28 + 4 z1 + k (28 + 68 z1)", 7).unwrap());
        assert!(op.apply(&ZPolynomial::one(7)).unwrap().is_zero());
        let m1 = parse_expression("z1 - 7", 7).unwrap();
        assert_eq!(
            op.apply(&m1).unwrap(),
            parse_expression("(4 + 68 k) (z1 - 7) + 504 k", 7).unwrap()
        );
        for j in 1..=7 {
            for k in 1..=7 {
                assert_eq!(op.a(j, k), op.a(k, j));
            }
        }
    }
}
