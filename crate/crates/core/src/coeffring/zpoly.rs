use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use smallvec::SmallVec;

use super::{Coefficient, KappaRational, Style};
use crate::error::{Error, Result};

/// An exponent vector over z_1..z_r, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(smallvec::smallvec![0; nvars])
    }

    pub fn variable(nvars: usize, j: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[j] = 1;
        m
    }

    pub fn from_exponents(e: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn render(&self, style: Style) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                if e == 1 {
                    format!("z{}", j + 1)
                } else {
                    format!("z{}^{e}", j + 1)
                }
            })
            .collect();
        parts.join(style.times())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial in z_1..z_r with coefficients in `C`. Zero terms are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Debug)]
pub struct ZPolynomial<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> ZPolynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        ZPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one_elem())
    }

    /// The coordinate z_j, with `j` counted from 1.
    pub fn variable(nvars: usize, j: usize) -> Self {
        Self::term(Monomial::variable(nvars, j - 1), C::one_elem())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero_elem)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero_elem() {
            return;
        }
        match self.terms.entry(m) {
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

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg_ref());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero_elem() {
            return Self::zero(self.nvars);
        }
        ZPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul_ref(k)))
                .filter(|(_, c)| !c.is_zero_elem())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        ZPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    /// ∂/∂z_j, with `j` counted from 1.
    pub fn derivative(&self, j: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[j - 1];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[j - 1] -= 1;
                out.add_term(m2, c.mul_ref(&C::from_i64(e as i64)));
            }
        }
        out
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> ZPolynomial<D> {
        let mut out = ZPolynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coefficients<D: Coefficient>(
        &self,
        f: impl Fn(&C) -> Result<D>,
    ) -> Result<ZPolynomial<D>> {
        let mut out = ZPolynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Renders terms in descending graded-lex order.
    pub fn render(&self, style: Style) -> String {
        render_terms(self.terms.iter().rev(), style)
    }

    /// Renders terms by descending `key`, ties in descending graded-lex order.
    pub fn render_by_key<K: Ord>(&self, style: Style, key: impl Fn(&Monomial) -> K) -> String {
        let mut terms: Vec<(&Monomial, &C)> = self.terms.iter().rev().collect();
        terms.sort_by_cached_key(|(m, _)| std::cmp::Reverse(key(m)));
        render_terms(terms.into_iter(), style)
    }
}

fn render_terms<'a, C: Coefficient>(terms: impl Iterator<Item = (&'a Monomial, &'a C)>, style: Style) -> String {
    let mut out = String::new();
    for (m, c) in terms {
        let r = c.render(style);
        if out.is_empty() {
            if r.negative {
                out.push('-');
            }
        } else {
            out.push_str(if r.negative { " - " } else { " + " });
        }
        let mono = m.render(style);
        match (mono.is_empty(), r.unit) {
            (true, _) => out.push_str(&r.body),
            (false, true) => out.push_str(&mono),
            (false, false) => {
                out.push_str(&r.body);
                out.push_str(style.times());
                out.push_str(&mono);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl ZPolynomial<BigRational> {
    pub fn to_kappa(&self) -> ZPolynomial<KappaRational> {
        self.map_coefficients(KappaRational::from_rational)
    }
}

impl ZPolynomial<KappaRational> {
    /// Substitutes a rational value for κ, failing at poles.
    pub fn substitute_kappa(&self, kappa: &BigRational) -> Result<ZPolynomial<BigRational>> {
        self.try_map_coefficients(|c| c.eval(kappa))
    }

    /// Splits `p = p_0 + κ p_1 + κ² p_2 + …` when every coefficient is a
    /// polynomial in κ; `None` otherwise.
    pub fn kappa_components(&self) -> Option<Vec<ZPolynomial<BigRational>>> {
        let mut parts: Vec<ZPolynomial<BigRational>> = Vec::new();
        for (m, c) in &self.terms {
            let coeffs = c.polynomial_coefficients()?;
            for (d, q) in coeffs.into_iter().enumerate() {
                while parts.len() <= d {
                    parts.push(ZPolynomial::zero(self.nvars));
                }
                parts[d].add_term(m.clone(), q);
            }
        }
        Some(parts)
    }
}

impl<C: Coefficient> fmt::Display for ZPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::KappaPoly;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type QPoly = ZPolynomial<BigRational>;

    fn z(j: usize) -> QPoly {
        QPoly::variable(7, j)
    }

    fn c(n: i64) -> QPoly {
        QPoly::constant(7, BigRational::from_integer(n.into()))
    }

    #[test]
    fn arithmetic_and_rendering() {
        let p = z(7).mul(&z(7)).unwrap().sub(&z(6).scale(&BigRational::from_integer(2.into()))).unwrap().sub(&c(2)).unwrap();
        assert_eq!(p.to_string(), "z7^2 - 2 z6 - 2");
        assert_eq!(p.render(Style::Explicit), "z7^2 - 2*z6 - 2");
        assert_eq!(p.derivative(7).to_string(), "2 z7");
        assert!(p.sub(&p).unwrap().is_zero());
        assert_eq!(QPoly::zero(7).to_string(), "0");
    }

    #[test]
    fn kappa_free_polynomials_are_unchanged_by_substitution() {
        let p = z(7).pow(2).sub(&z(6).scale(&BigRational::from_integer(2.into()))).unwrap().sub(&c(2)).unwrap();
        for k in [0, 1, 5] {
            let v = BigRational::from_integer(k.into());
            assert_eq!(p.to_kappa().substitute_kappa(&v).unwrap(), p);
        }
    }

    #[test]
    fn substitution_reports_pole() {
        let coeff = KappaRational::new(KappaPoly::from_i64s(&[2]), KappaPoly::from_i64s(&[1, 1])).unwrap();
        let p = ZPolynomial::constant(1, coeff);
        let err = p.substitute_kappa(&BigRational::from_integer(BigInt::from(-1))).unwrap_err();
        assert!(matches!(err, Error::Pole { .. }));
    }

    #[test]
    fn dimension_mismatch() {
        let a = QPoly::variable(2, 1);
        let b = QPoly::variable(3, 1);
        assert!(a.add(&b).is_err());
    }

    fn poly_strategy() -> impl Strategy<Value = ZPolynomial<KappaRational>> {
        let coeff = (prop::collection::vec(-3i64..=3, 0..3), prop::collection::vec(-3i64..=3, 1..3))
            .prop_filter_map("zero denominator", |(n, d)| {
                KappaRational::new(KappaPoly::from_i64s(&n), KappaPoly::from_i64s(&d)).ok()
            });
        let term = (prop::collection::vec(0u16..3, 3), coeff);
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            ZPolynomial::from_terms(3, ts.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn substitution_commutes_with_products(a in poly_strategy(), b in poly_strategy(), k in 0i64..4) {
            let v = BigRational::from_integer(k.into());
            if let (Ok(sa), Ok(sb)) = (a.substitute_kappa(&v), b.substitute_kappa(&v)) {
                prop_assert_eq!(a.mul(&b).unwrap().substitute_kappa(&v).unwrap(), sa.mul(&sb).unwrap());
            }
        }
    }
}
