//! Cartan data, weight-lattice geometry and Weyl orbits for the simply-laced
//! families A_n, D_n, E6 and E7.
//!
//! Weights are stored by their Dynkin labels (coordinates in the basis of
//! fundamental weights). The invariant form is normalized so that every root
//! has squared length 2; with that convention `(λ_i, α_j) = δ_ij` and the
//! Gram matrix of the fundamental weights is the inverse Cartan matrix.
//!
//! Node numbering follows Bourbaki. For E7 this puts the adjoint
//! representation at λ_1 (dimension 133) and the minuscule 56 at λ_7.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Deref, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Labels = SmallVec<[i32; 8]>;

/// An element of the weight lattice, in Dynkin labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Weight(Labels);

impl Weight {
    pub fn new(labels: &[i32]) -> Self {
        Weight(Labels::from_slice(labels))
    }

    pub fn zero(rank: usize) -> Self {
        Weight(smallvec::smallvec![0; rank])
    }

    /// The fundamental weight λ_i, with `i` counted from 1.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.0[i - 1] = 1;
        w
    }

    pub fn labels(&self) -> &[i32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&m| m >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    /// Sum of the labels. For dominant weights this is the "order" used to
    /// group first- and second-order eigenfunctions.
    pub fn order(&self) -> i64 {
        self.0.iter().map(|&m| m as i64).sum()
    }

    /// Concatenated-digit form (`0000002`), available only when every label
    /// is a single non-negative digit.
    pub fn compact(&self) -> Option<String> {
        if self.0.iter().all(|&m| (0..=9).contains(&m)) {
            Some(self.0.iter().map(|m| m.to_string()).collect())
        } else {
            None
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// A weight with non-negative Dynkin labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DominantWeight(Weight);

impl DominantWeight {
    pub fn new(weight: Weight) -> Result<Self> {
        if weight.is_dominant() {
            Ok(DominantWeight(weight))
        } else {
            Err(Error::NotDominant(weight.to_string()))
        }
    }

    pub fn from_labels(labels: &[i32]) -> Result<Self> {
        Self::new(Weight::new(labels))
    }

    pub fn zero(rank: usize) -> Self {
        DominantWeight(Weight::zero(rank))
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        DominantWeight(Weight::fundamental(rank, i))
    }

    pub fn as_weight(&self) -> &Weight {
        &self.0
    }

    pub fn into_weight(self) -> Weight {
        self.0
    }

    pub(crate) fn new_unchecked(weight: Weight) -> Self {
        debug_assert!(weight.is_dominant());
        DominantWeight(weight)
    }
}

impl Deref for DominantWeight {
    type Target = Weight;
    fn deref(&self) -> &Weight {
        &self.0
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
}

/// A simply-laced simple Lie algebra, identified by family and rank.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct AlgebraId {
    pub family: Family,
    pub rank: usize,
}

impl AlgebraId {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 3,
            Family::E => rank == 6 || rank == 7,
        };
        if ok {
            Ok(AlgebraId { family, rank })
        } else {
            Err(Error::UnsupportedAlgebra(format!("{family:?}{rank}")))
        }
    }

    pub fn e7() -> Self {
        AlgebraId {
            family: Family::E,
            rank: 7,
        }
    }

    /// The standard Cartan matrix, Bourbaki numbering.
    pub fn cartan_matrix(&self) -> Vec<Vec<i32>> {
        let r = self.rank;
        let mut a = vec![vec![0; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i - 1][j - 1] = -1;
            a[j - 1][i - 1] = -1;
        };
        match self.family {
            Family::A => (1..r).for_each(|i| link(i, i + 1)),
            Family::D => {
                (1..r - 1).for_each(|i| link(i, i + 1));
                link(r - 2, r);
            }
            Family::E => {
                link(1, 3);
                (3..r).for_each(|i| link(i, i + 1));
                link(2, 4);
            }
        }
        a
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for AlgebraId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(Error::UnsupportedAlgebra(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnsupportedAlgebra(s.to_string()))?;
        AlgebraId::new(family, rank)
    }
}

/// A positive root, kept both in simple-root coordinates and in Dynkin labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub simple: Labels,
    pub weight: Weight,
    pub height: i32,
}

impl Root {
    /// `(w, α)`, which for simply-laced systems is `Σ w_i c_i`.
    #[inline]
    pub fn pair(&self, w: &Weight) -> i32 {
        w.0.iter().zip(&self.simple).map(|(m, c)| m * c).sum()
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    algebra: AlgebraId,
    cartan: Vec<Vec<i32>>,
    positive_roots: Vec<Root>,
    /// `inverse_scale · A⁻¹`, an integer matrix.
    inverse_scaled: Vec<Vec<i64>>,
    inverse_scale: i64,
    rho: DominantWeight,
    weyl_order: u128,
}

impl RootSystem {
    pub fn build(algebra: AlgebraId) -> Result<Self> {
        let algebra = AlgebraId::new(algebra.family, algebra.rank)?;
        let cartan = algebra.cartan_matrix();
        let r = algebra.rank;
        let (inverse_scaled, inverse_scale) = scaled_inverse(&cartan);

        let positive_roots = positive_roots(&cartan);

        let rho = DominantWeight(Weight(smallvec::smallvec![1; r]));
        let rs = RootSystem {
            algebra,
            cartan,
            positive_roots,
            inverse_scaled,
            inverse_scale,
            rho,
            weyl_order: 0,
        };
        let weyl_order = rs.parabolic_order(|_| true);
        Ok(RootSystem { weyl_order, ..rs })
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn rho(&self) -> &DominantWeight {
        &self.rho
    }

    pub fn weyl_group_order(&self) -> u128 {
        self.weyl_order
    }

    /// The simple root α_i (1-based) in Dynkin labels: row i of the Cartan matrix.
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::new(&self.cartan[i - 1])
    }

    /// Gram matrix `(λ_i, λ_j)` of the fundamental weights.
    pub fn gram(&self) -> Vec<Vec<BigRational>> {
        let d = BigInt::from(self.inverse_scale);
        self.inverse_scaled
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| BigRational::new(BigInt::from(x), d.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: w.rank(),
            })
        }
    }

    pub fn inner_product(&self, u: &Weight, v: &Weight) -> Result<BigRational> {
        self.check_rank(u)?;
        self.check_rank(v)?;
        Ok(BigRational::new(
            BigInt::from(self.scaled_inner_product(u, v)),
            BigInt::from(self.inverse_scale),
        ))
    }

    /// `inner_product_scale() · (u, v)`, always an integer.
    pub fn scaled_inner_product(&self, u: &Weight, v: &Weight) -> i64 {
        let mut acc = 0i64;
        for (i, &ui) in u.0.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            let row = &self.inverse_scaled[i];
            let s: i64 = v.0.iter().zip(row).map(|(&vj, &g)| vj as i64 * g).sum();
            acc += ui as i64 * s;
        }
        acc
    }

    pub fn inner_product_scale(&self) -> i64 {
        self.inverse_scale
    }

    /// Simple-root coordinates of `w`, if `w` lies in the root lattice.
    pub fn simple_coordinates(&self, w: &Weight) -> Option<Vec<i64>> {
        let d = self.inverse_scale;
        let mut out = Vec::with_capacity(self.rank());
        for row in &self.inverse_scaled {
            let s: i64 = row.iter().zip(&w.0).map(|(&g, &m)| g * m as i64).sum();
            if s % d != 0 {
                return None;
            }
            out.push(s / d);
        }
        Some(out)
    }

    /// `D · (ρ∨-height)` of a weight, i.e. the sum of its simple-root
    /// coordinates scaled to an integer. Strictly monotone along dominance.
    pub fn scaled_height(&self, w: &Weight) -> i64 {
        self.inverse_scaled
            .iter()
            .map(|row| row.iter().zip(&w.0).map(|(&g, &m)| g * m as i64).sum::<i64>())
            .sum()
    }

    /// Dominance order: `hi − lo` is a non-negative integer combination of simple roots.
    pub fn dominates(&self, hi: &Weight, lo: &Weight) -> bool {
        self.simple_coordinates(&(hi - lo))
            .is_some_and(|c| c.iter().all(|&x| x >= 0))
    }

    #[inline]
    pub fn reflect_simple(&self, w: &mut Weight, i: usize) {
        let m = w.0[i];
        if m != 0 {
            for (x, a) in w.0.iter_mut().zip(&self.cartan[i]) {
                *x -= m * a;
            }
        }
    }

    /// `s_α(w) = w − (w, α) α`.
    pub fn reflect(&self, w: &Weight, root: &Root) -> Weight {
        let n = root.pair(w);
        Weight(w.0.iter().zip(&root.weight.0).map(|(x, a)| x - n * a).collect())
    }

    /// The dominant element of `W·w`, with the parity (±1) of the number of
    /// simple reflections used to reach it.
    pub fn dominant_representative(&self, w: &Weight) -> (DominantWeight, i8) {
        let mut w = w.clone();
        let mut parity = 1i8;
        while let Some(i) = w.0.iter().position(|&m| m < 0) {
            self.reflect_simple(&mut w, i);
            parity = -parity;
        }
        (DominantWeight(w), parity)
    }

    /// In-place variant of [`Self::dominant_representative`] without parity.
    #[inline]
    pub fn make_dominant(&self, w: &mut Weight) {
        while let Some(i) = w.0.iter().position(|&m| m < 0) {
            self.reflect_simple(w, i);
        }
    }

    /// The Weyl orbit of a dominant weight, sorted.
    ///
    /// Every orbit element is reachable from the dominant one through simple
    /// reflections that strictly lower the weight, so the walk only applies
    /// `s_i` where the current label `m_i` is positive.
    pub fn orbit(&self, lambda: &DominantWeight) -> Vec<Weight> {
        let mut seen: rustc_hash::FxHashSet<Weight> = Default::default();
        let mut frontier = vec![lambda.0.clone()];
        seen.insert(lambda.0.clone());
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for i in 0..self.rank() {
                    if w.0[i] > 0 {
                        let mut v = w.clone();
                        self.reflect_simple(&mut v, i);
                        if seen.insert(v.clone()) {
                            next.push(v);
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Weight> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// `|W| / |W_J|` for the parabolic subgroup stabilizing `lambda`.
    pub fn orbit_size(&self, lambda: &DominantWeight) -> u128 {
        self.weyl_order / self.parabolic_order(|root| root.pair(lambda) == 0)
    }

    /// Order of the reflection subgroup generated by the positive roots
    /// selected by `keep`, via `∏ (ht α + 1) / ht α` over those roots.
    /// `keep` must select a parabolic subsystem.
    fn parabolic_order(&self, keep: impl Fn(&Root) -> bool) -> u128 {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for root in self.positive_roots.iter().filter(|r| keep(r)) {
            num *= root.height + 1;
            den *= root.height;
        }
        let (q, rem) = num.div_rem(&den);
        debug_assert!(rem.is_zero());
        u128::try_from(q).expect("Weyl group order overflows u128")
    }

    /// All dominant `μ ≤ λ`, in a topological order of the dominance
    /// relation (λ first). Ties in height are broken by descending labels.
    pub fn dominant_weights_below(&self, lambda: &DominantWeight) -> Vec<DominantWeight> {
        let mut depth: HashMap<Weight, i32> = HashMap::new();
        depth.insert(lambda.0.clone(), 0);
        let mut queue = VecDeque::from([lambda.0.clone()]);
        while let Some(mu) = queue.pop_front() {
            let h = depth[&mu];
            for root in &self.positive_roots {
                let nu = &mu - &root.weight;
                if nu.is_dominant() && !depth.contains_key(&nu) {
                    depth.insert(nu.clone(), h + root.height);
                    queue.push_back(nu);
                }
            }
        }
        let mut out: Vec<(i32, Weight)> = depth.into_iter().map(|(w, h)| (h, w)).collect();
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        out.into_iter().map(|(_, w)| DominantWeight(w)).collect()
    }

    /// Weyl dimension formula `∏_{α>0} (λ+ρ, α) / (ρ, α)`.
    pub fn weyl_dimension(&self, lambda: &DominantWeight) -> BigInt {
        let shifted = &lambda.0 + &self.rho.0;
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for root in &self.positive_roots {
            num *= root.pair(&shifted);
            den *= root.height;
        }
        num / den
    }

    /// Parses a weight in comma form (`2,0,0,0,0,0,0`) or, when there is no
    /// comma and the string has exactly `rank` digits, concatenated form.
    pub fn parse_weight(&self, text: &str) -> Result<Weight> {
        crate::text::parse_weight(text, self.rank())
    }

    pub fn parse_dominant(&self, text: &str) -> Result<DominantWeight> {
        DominantWeight::new(self.parse_weight(text)?)
    }
}

fn positive_roots(cartan: &[Vec<i32>]) -> Vec<Root> {
    let r = cartan.len();
    let simple_pair = |c: &Labels, i: usize| -> i32 { (0..r).map(|j| c[j] * cartan[j][i]).sum() };
    let mut all: HashSet<Labels> = HashSet::new();
    let mut level: Vec<Labels> = (0..r)
        .map(|i| {
            let mut c: Labels = smallvec::smallvec![0; r];
            c[i] = 1;
            c
        })
        .collect();
    all.extend(level.iter().cloned());
    let mut roots = level.clone();
    while !level.is_empty() {
        let mut next = Vec::new();
        for beta in &level {
            for i in 0..r {
                // p = how far the α_i-string extends downward from β
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - simple_pair(beta, i);
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if all.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        level = next;
    }
    roots
        .into_iter()
        .map(|c| {
            let weight = Weight((0..r).map(|i| simple_pair(&c, i)).collect());
            let height = c.iter().sum();
            Root {
                simple: c,
                weight,
                height,
            }
        })
        .collect()
}

/// Returns `(D·A⁻¹, D)` with `D` the least positive integer making the
/// scaled inverse integral.
fn scaled_inverse(a: &[Vec<i32>]) -> (Vec<Vec<i64>>, i64) {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i64>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Ratio<i64>> = a[i].iter().map(|&x| Ratio::from_integer(x as i64)).collect();
            row.extend((0..n).map(|j| Ratio::from_integer((i == j) as i64)));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).expect("singular Cartan matrix");
        m.swap(col, pivot);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    let inv: Vec<Vec<Ratio<i64>>> = m.into_iter().map(|row| row[n..].to_vec()).collect();
    let d = inv
        .iter()
        .flatten()
        .fold(1i64, |acc, x| acc.lcm(x.denom()));
    let scaled = inv
        .iter()
        .map(|row| row.iter().map(|x| (x * d).to_integer()).collect())
        .collect();
    (scaled, d.abs())
}
