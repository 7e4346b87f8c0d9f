//! Weight multiplicities, characters in the orbit-sum basis, products of
//! Weyl-invariant functions and the classical Clebsch-Gordan series.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::coeffring::{Coefficient, Style};
use crate::error::{Error, Result};
use crate::rootsystem::{DominantWeight, RootSystem, Weight};

/// A finite linear combination `Σ c_λ M_λ` of orbit sums.
#[derive(Clone, PartialEq, Debug)]
pub struct MonomialCombination<C> {
    rank: usize,
    terms: BTreeMap<DominantWeight, C>,
}

impl<C: Coefficient> MonomialCombination<C> {
    pub fn zero(rank: usize) -> Self {
        MonomialCombination {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(weight: DominantWeight, c: C) -> Self {
        let mut out = Self::zero(weight.rank());
        out.add_term(weight, c);
        out
    }

    /// Builds a combination from a coefficient map, dropping zero entries.
    pub fn from_map(rank: usize, terms: BTreeMap<DominantWeight, C>) -> Self {
        let mut out = Self::zero(rank);
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DominantWeight, &C)> {
        self.terms.iter()
    }

    pub fn get(&self, w: &DominantWeight) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn coefficient(&self, w: &DominantWeight) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero_elem)
    }

    pub fn add_term(&mut self, w: DominantWeight, c: C) {
        if c.is_zero_elem() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero_elem() {
                    o.remove();
                }
            }
        }
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &Self, k: &C) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.mul_ref(k));
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.rank);
        out.add_scaled(self, k);
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> MonomialCombination<D> {
        let mut out = MonomialCombination::zero(self.rank);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// The terms from the top of a dominance-compatible order: weights that
    /// are not dominated by any other weight of the support.
    pub fn maximal_weights(&self, rs: &RootSystem) -> Vec<DominantWeight> {
        let keys: Vec<&DominantWeight> = self.terms.keys().collect();
        keys.iter()
            .filter(|w| !keys.iter().any(|v| v != *w && rs.dominates(v, w)))
            .map(|w| (*w).clone())
            .collect()
    }

    /// Renders with terms in descending lexicographic label order.
    pub fn render(&self, style: Style) -> String {
        self.render_terms(self.terms.iter().rev().collect(), style)
    }

    /// Renders with terms in a descending dominance-compatible order.
    pub fn render_ordered(&self, rs: &RootSystem, style: Style) -> String {
        let mut terms: Vec<(&DominantWeight, &C)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            rs.scaled_height(b.0)
                .cmp(&rs.scaled_height(a.0))
                .then_with(|| b.0.cmp(a.0))
        });
        self.render_terms(terms, style)
    }

    fn render_terms(&self, terms: Vec<(&DominantWeight, &C)>, style: Style) -> String {
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (w, c) in terms {
            let r = c.render(style);
            if out.is_empty() {
                if r.negative {
                    out.push('-');
                }
            } else {
                out.push_str(if r.negative { " - " } else { " + " });
            }
            if !r.unit {
                out.push_str(&r.body);
                out.push_str(style.times());
            }
            out.push_str(&format!("M({})", weight_label(w)));
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for MonomialCombination<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Text))
    }
}

/// Concatenated-digit form when possible, comma form otherwise.
pub fn weight_label(w: &Weight) -> String {
    w.compact().unwrap_or_else(|| w.to_string())
}

/// The character of an irreducible representation as `Σ mult(μ) M_μ` over
/// dominant weights.
#[derive(Clone, PartialEq, Debug)]
pub struct DominantCharacter {
    highest: DominantWeight,
    mult: BTreeMap<DominantWeight, BigInt>,
}

impl DominantCharacter {
    pub fn highest(&self) -> &DominantWeight {
        &self.highest
    }

    pub fn multiplicities(&self) -> &BTreeMap<DominantWeight, BigInt> {
        &self.mult
    }

    pub fn multiplicity(&self, w: &DominantWeight) -> BigInt {
        self.mult.get(w).cloned().unwrap_or_default()
    }

    /// Rebuilds a character from stored multiplicities, checking the
    /// structural invariants (leading multiplicity 1, positive entries,
    /// support below the highest weight).
    pub fn from_parts(
        rs: &RootSystem,
        highest: DominantWeight,
        mult: BTreeMap<DominantWeight, BigInt>,
    ) -> Result<Self> {
        rs.check_rank(&highest)?;
        if mult.get(&highest).map(|m| m.is_one()) != Some(true) {
            return Err(Error::invariant("highest weight must have multiplicity 1"));
        }
        for (w, m) in &mult {
            rs.check_rank(w)?;
            if !m.is_positive() || !rs.dominates(&highest, w) {
                return Err(Error::invariant(format!("invalid multiplicity entry at {w}")));
            }
        }
        Ok(DominantCharacter { highest, mult })
    }

    pub fn to_combination(&self) -> MonomialCombination<BigInt> {
        MonomialCombination {
            rank: self.highest.rank(),
            terms: self.mult.clone(),
        }
    }

    /// `Σ mult(μ) · |W μ|`, which must equal the Weyl dimension.
    pub fn dimension(&self, rs: &RootSystem) -> BigInt {
        self.mult
            .iter()
            .map(|(w, m)| m * BigInt::from(rs.orbit_size(w)))
            .sum()
    }

    /// Multiplicities in descending dominance order, in the `M(…):n` row format.
    pub fn render_row(&self, rs: &RootSystem) -> String {
        rs.dominant_weights_below(&self.highest)
            .iter()
            .filter_map(|w| self.mult.get(w).map(|m| format!("M({}):{m}", weight_label(w))))
            .collect::<Vec<_>>()
            .join("  ")
    }
}

/// `χ_a · χ_b = Σ N(μ) χ_μ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionSeries {
    pub a: DominantWeight,
    pub b: DominantWeight,
    pub terms: BTreeMap<DominantWeight, BigInt>,
}

impl DecompositionSeries {
    pub fn dimension(&self, rs: &RootSystem) -> BigInt {
        self.terms.iter().map(|(w, n)| n * rs.weyl_dimension(w)).sum()
    }
}

/// Freudenthal's recursion on the dominant chamber.
///
/// With integer-scaled inner products `⟨u,v⟩ = D·(u,v)`:
/// `(⟨λ+ρ,λ+ρ⟩ − ⟨μ+ρ,μ+ρ⟩) m(μ) = 2D Σ_{α>0} Σ_{k≥1} m(μ+kα) (μ+kα, α)`.
/// Multiplicities of non-dominant weights are read off their dominant
/// representative; a root string is abandoned as soon as it leaves the
/// weight diagram, which is legitimate because weight strings are unbroken.
pub fn freudenthal(rs: &RootSystem, lambda: &DominantWeight) -> Result<DominantCharacter> {
    rs.check_rank(lambda)?;
    let order = rs.dominant_weights_below(lambda);
    let rho = rs.rho().as_weight();
    let d = BigInt::from(rs.inner_product_scale());
    let top = {
        let s = lambda.as_weight() + rho;
        rs.scaled_inner_product(&s, &s)
    };
    let index: HashSet<&Weight> = order.iter().map(|w| w.as_weight()).collect();
    let mut mult: HashMap<Weight, BigInt> = HashMap::with_capacity(order.len());
    mult.insert(lambda.as_weight().clone(), BigInt::one());

    for mu in order.iter().skip(1) {
        let mut sum = BigInt::zero();
        for root in rs.positive_roots() {
            let base = root.pair(mu);
            let mut v = mu.as_weight().clone();
            for k in 1.. {
                v = &v + &root.weight;
                let mut rep = v.clone();
                rs.make_dominant(&mut rep);
                if !index.contains(&rep) {
                    break;
                }
                let m = mult
                    .get(&rep)
                    .ok_or_else(|| Error::invariant(format!("multiplicity of {rep} needed before it was computed")))?;
                sum += m * BigInt::from(base + 2 * k);
            }
        }
        let s = mu.as_weight() + rho;
        let diff = top - rs.scaled_inner_product(&s, &s);
        if diff <= 0 {
            return Err(Error::invariant(format!("non-positive Freudenthal denominator at {mu}")));
        }
        let num = sum * BigInt::from(2) * &d;
        let diff = BigInt::from(diff);
        if !(&num % &diff).is_zero() {
            return Err(Error::invariant(format!("non-integral multiplicity at {mu}")));
        }
        let m = num / diff;
        if !m.is_positive() {
            return Err(Error::invariant(format!("non-positive multiplicity at {mu}")));
        }
        mult.insert(mu.as_weight().clone(), m);
    }

    let mult = mult
        .into_iter()
        .map(|(w, m)| (DominantWeight::new_unchecked(w), m))
        .collect();
    Ok(DominantCharacter {
        highest: lambda.clone(),
        mult,
    })
}

/// All dominant weights below some sum `a + b` of support elements.
fn product_candidates<C: Coefficient>(
    rs: &RootSystem,
    f: &MonomialCombination<C>,
    g: &MonomialCombination<C>,
) -> Vec<DominantWeight> {
    let fa = f.maximal_weights(rs);
    let gb = g.maximal_weights(rs);
    let mut tops: Vec<Weight> = Vec::new();
    for a in &fa {
        for b in &gb {
            tops.push(a.as_weight() + b.as_weight());
        }
    }
    tops.sort();
    tops.dedup();
    let maximal: Vec<&Weight> = tops
        .iter()
        .filter(|w| !tops.iter().any(|v| v != *w && rs.dominates(v, w)))
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for top in maximal {
        for w in rs.dominant_weights_below(&DominantWeight::new_unchecked(top.clone())) {
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
    }
    out
}

/// Product of two Weyl-invariant functions in the orbit-sum basis.
///
/// The coefficient of `M_ν` in `f·g` is `Σ_y g(y) f(dom(ν − y))`, summed over
/// the full (non-dominant) support of `g`. The factor with the smaller full
/// support is expanded.
pub fn product<C: Coefficient>(
    rs: &RootSystem,
    f: &MonomialCombination<C>,
    g: &MonomialCombination<C>,
) -> Result<MonomialCombination<C>> {
    if f.rank != rs.rank() || g.rank != rs.rank() {
        return Err(Error::DimensionMismatch {
            expected: rs.rank(),
            found: if f.rank != rs.rank() { f.rank } else { g.rank },
        });
    }
    if f.is_empty() || g.is_empty() {
        return Ok(MonomialCombination::zero(rs.rank()));
    }
    let full = |h: &MonomialCombination<C>| -> u128 { h.terms.keys().map(|w| rs.orbit_size(w)).sum() };
    let (small, big) = if full(f) <= full(g) { (f, g) } else { (g, f) };
    let expanded: Vec<(Weight, &C)> = small
        .terms
        .iter()
        .flat_map(|(w, c)| rs.orbit(w).into_iter().map(move |y| (y, c)))
        .collect();
    let lookup: HashMap<&Weight, &C> = big.terms.iter().map(|(w, c)| (w.as_weight(), c)).collect();
    let candidates = product_candidates(rs, f, g);

    let coeffs: Vec<(DominantWeight, C)> = candidates
        .into_par_iter()
        .filter_map(|nu| {
            let mut acc = C::zero_elem();
            for (y, c) in &expanded {
                let mut x = nu.as_weight() - y;
                rs.make_dominant(&mut x);
                if let Some(fc) = lookup.get(&x) {
                    acc.add_assign_ref(&c.mul_ref(fc));
                }
            }
            (!acc.is_zero_elem()).then_some((nu, acc))
        })
        .collect();
    let mut out = MonomialCombination::zero(rs.rank());
    for (w, c) in coeffs {
        out.add_term(w, c);
    }
    Ok(out)
}

/// `χ_1 · χ_2` in the orbit-sum basis.
pub fn char_product(
    rs: &RootSystem,
    c1: &DominantCharacter,
    c2: &DominantCharacter,
) -> Result<MonomialCombination<BigInt>> {
    product(rs, &c1.to_combination(), &c2.to_combination())
}

/// Peels `χ_a·χ_b` into irreducible characters from the top of the
/// dominance order, using `character` to supply `χ_μ`.
pub fn clebsch_gordan_with(
    rs: &RootSystem,
    a: &DominantWeight,
    b: &DominantWeight,
    mut character: impl FnMut(&DominantWeight) -> Result<Arc<DominantCharacter>>,
) -> Result<DecompositionSeries> {
    let ca = character(a)?;
    let cb = character(b)?;
    let mut rest = char_product(rs, &ca, &cb)?;
    let top = DominantWeight::new_unchecked(a.as_weight() + b.as_weight());
    let mut terms = BTreeMap::new();
    for mu in rs.dominant_weights_below(&top) {
        let n = rest.coefficient(&mu);
        if n.is_zero() {
            continue;
        }
        if n.is_negative() {
            return Err(Error::invariant(format!(
                "negative Clebsch-Gordan coefficient {n} at {mu} in {a} ⊗ {b}"
            )));
        }
        let chi = character(&mu)?;
        rest.add_scaled(&chi.to_combination(), &-&n);
        terms.insert(mu, n);
    }
    if !rest.is_empty() {
        return Err(Error::invariant(format!("non-zero remainder after peeling {a} ⊗ {b}")));
    }
    Ok(DecompositionSeries {
        a: a.clone(),
        b: b.clone(),
        terms,
    })
}

/// Classical Clebsch-Gordan series, computing characters as needed.
pub fn clebsch_gordan(rs: &RootSystem, a: &DominantWeight, b: &DominantWeight) -> Result<DecompositionSeries> {
    clebsch_gordan_with(rs, a, b, |w| freudenthal(rs, w).map(Arc::new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{AlgebraId, Family};

    fn e7() -> RootSystem {
        RootSystem::build(AlgebraId::e7()).unwrap()
    }

    fn dw(labels: &[i32]) -> DominantWeight {
        DominantWeight::from_labels(labels).unwrap()
    }

    fn lam(rank: usize, i: usize) -> DominantWeight {
        DominantWeight::fundamental(rank, i)
    }

    #[test]
    fn e7_multiplicities() {
        let rs = e7();
        let adj = freudenthal(&rs, &lam(7, 1)).unwrap();
        assert_eq!(adj.multiplicity(&DominantWeight::zero(7)), BigInt::from(7));
        assert_eq!(adj.render_row(&rs), "M(1000000):1  M(0000000):7");
        let two = freudenthal(&rs, &dw(&[2, 0, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(two.multiplicity(&lam(7, 1)), BigInt::from(17));
        for i in 1..=7 {
            let c = freudenthal(&rs, &lam(7, i)).unwrap();
            assert_eq!(c.multiplicity(&lam(7, i)), BigInt::one());
            assert_eq!(c.dimension(&rs), rs.weyl_dimension(&lam(7, i)));
        }
    }

    /// Weight multiplicities of sl(n) irreps from semistandard tableaux:
    /// the multiplicity of a weight is the number of SSYT of shape λ whose
    /// content gives that weight.
    fn sl_brute_force(n: usize, labels: &[i32]) -> HashMap<Weight, i64> {
        let mut shape = vec![0usize; n];
        for i in (0..n - 1).rev() {
            shape[i] = shape[i + 1] + labels[i] as usize;
        }
        let cells: Vec<(usize, usize)> = (0..n)
            .flat_map(|r| (0..shape[r]).map(move |c| (r, c)))
            .collect();
        let mut out = HashMap::new();
        let mut fill = vec![vec![0usize; shape.first().copied().unwrap_or(0)]; n];
        fn rec(
            idx: usize,
            cells: &[(usize, usize)],
            fill: &mut Vec<Vec<usize>>,
            n: usize,
            out: &mut HashMap<Weight, i64>,
        ) {
            if idx == cells.len() {
                let mut content = vec![0i32; n];
                for &(r, c) in cells {
                    content[fill[r][c]] += 1;
                }
                // ε_i − ε_{i+1} pairing gives the Dynkin label.
                let w: Vec<i32> = (0..n - 1).map(|i| content[i] - content[i + 1]).collect();
                *out.entry(Weight::new(&w)).or_insert(0) += 1;
                return;
            }
            let (r, c) = cells[idx];
            let lo = if c > 0 { fill[r][c - 1] } else { 0 };
            let lo = if r > 0 { lo.max(fill[r - 1][c] + 1) } else { lo };
            for v in lo..n {
                fill[r][c] = v;
                rec(idx + 1, cells, fill, n, out);
            }
        }
        rec(0, &cells, &mut fill, n, &mut out);
        out
    }

    #[test]
    fn freudenthal_matches_tableaux_for_a1_a2_a3() {
        for (rank, max) in [(1usize, 6i32), (2, 3), (3, 2)] {
            let rs = RootSystem::build(AlgebraId::new(Family::A, rank).unwrap()).unwrap();
            let mut labels = vec![0i32; rank];
            loop {
                let lambda = DominantWeight::from_labels(&labels).unwrap();
                let ch = freudenthal(&rs, &lambda).unwrap();
                let brute = sl_brute_force(rank + 1, &labels);
                for (w, m) in &brute {
                    if w.is_dominant() {
                        assert_eq!(ch.multiplicity(&DominantWeight::new(w.clone()).unwrap()), BigInt::from(*m), "{lambda} at {w}");
                    }
                }
                assert_eq!(ch.multiplicities().len(), brute.keys().filter(|w| w.is_dominant()).count());
                let mut i = 0;
                while i < rank && labels[i] == max {
                    labels[i] = 0;
                    i += 1;
                }
                if i == rank {
                    break;
                }
                labels[i] += 1;
            }
        }
    }

    #[test]
    fn product_with_trivial_is_identity() {
        let rs = e7();
        let c = freudenthal(&rs, &lam(7, 6)).unwrap();
        let one = freudenthal(&rs, &DominantWeight::zero(7)).unwrap();
        assert_eq!(char_product(&rs, &c, &one).unwrap(), c.to_combination());
    }

    #[test]
    fn fifty_six_squared() {
        let rs = e7();
        let c = freudenthal(&rs, &lam(7, 7)).unwrap();
        let p = char_product(&rs, &c, &c).unwrap();
        assert_eq!(p.coefficient(&DominantWeight::zero(7)), BigInt::from(56));
        assert_eq!(p.coefficient(&dw(&[0, 0, 0, 0, 0, 0, 2])), BigInt::one());

        let cg = clebsch_gordan(&rs, &lam(7, 7), &lam(7, 7)).unwrap();
        let expect: BTreeMap<DominantWeight, BigInt> = [
            (dw(&[0, 0, 0, 0, 0, 0, 2]), 1),
            (lam(7, 6), 1),
            (lam(7, 1), 1),
            (DominantWeight::zero(7), 1),
        ]
        .into_iter()
        .map(|(w, n)| (w, BigInt::from(n)))
        .collect();
        assert_eq!(cg.terms, expect);
        assert_eq!(cg.dimension(&rs), BigInt::from(56 * 56));
    }

    #[test]
    fn adjoint_squared() {
        let rs = e7();
        let cg = clebsch_gordan(&rs, &lam(7, 1), &lam(7, 1)).unwrap();
        let support: Vec<_> = cg.terms.keys().cloned().collect();
        let mut expect = vec![
            dw(&[2, 0, 0, 0, 0, 0, 0]),
            lam(7, 3),
            lam(7, 6),
            lam(7, 1),
            DominantWeight::zero(7),
        ];
        expect.sort();
        assert_eq!(support, expect);
        assert_eq!(cg.dimension(&rs), BigInt::from(133 * 133));
    }

    #[test]
    fn clebsch_gordan_is_symmetric_and_has_unit() {
        let rs = e7();
        let a = lam(7, 2);
        let b = lam(7, 7);
        let ab = clebsch_gordan(&rs, &a, &b).unwrap();
        let ba = clebsch_gordan(&rs, &b, &a).unwrap();
        assert_eq!(ab.terms, ba.terms);
        let unit = clebsch_gordan(&rs, &DominantWeight::zero(7), &b).unwrap();
        assert_eq!(unit.terms.into_iter().collect::<Vec<_>>(), vec![(b, BigInt::one())]);
    }

    #[test]
    fn rendering() {
        let rs = e7();
        let c = freudenthal(&rs, &lam(7, 1)).unwrap().to_combination();
        assert_eq!(c.to_string(), "M(1000000) + 7 M(0000000)");
    }
}
