//! Conversions between polynomials in the fundamental characters
//! `z_i = χ_{λ_i}` and the orbit-sum and character bases.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::characters::{self, DecompositionSeries, DominantCharacter, MonomialCombination};
use crate::coeffring::{Coefficient, Monomial, ZPolynomial};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::rootsystem::DominantWeight;

impl Engine {
    pub fn character(&self, lambda: &DominantWeight) -> Result<Arc<DominantCharacter>> {
        self.rs.check_rank(lambda)?;
        self.characters
            .get_or_try(lambda, || characters::freudenthal(&self.rs, lambda))
    }

    pub fn clebsch_gordan(&self, a: &DominantWeight, b: &DominantWeight) -> Result<Arc<DecompositionSeries>> {
        self.rs.check_rank(a)?;
        self.rs.check_rank(b)?;
        let key = (a.clone(), b.clone());
        self.decompositions.get_or_try(&key, || {
            characters::clebsch_gordan_with(&self.rs, a, b, |w| self.character(w))
        })
    }

    /// `M_x · M_y` in the orbit-sum basis (integer structure constants).
    pub fn orbit_product(&self, x: &DominantWeight, y: &DominantWeight) -> Result<Arc<MonomialCombination<BigInt>>> {
        let key = if x <= y {
            (x.clone(), y.clone())
        } else {
            (y.clone(), x.clone())
        };
        self.orbit_products.get_or_try(&key, || {
            characters::product(
                &self.rs,
                &MonomialCombination::single(key.0.clone(), BigInt::one()),
                &MonomialCombination::single(key.1.clone(), BigInt::one()),
            )
        })
    }

    /// `χ_μ` as a polynomial in `z_1..z_r`, via
    /// `χ_μ = χ_{μ−λ_i} z_i − Σ_{ν≠μ} N(ν) χ_ν` with `i` the first non-zero label.
    pub fn char_to_z(&self, mu: &DominantWeight) -> Result<Arc<ZPolynomial<BigInt>>> {
        self.rs.check_rank(mu)?;
        if let Some(p) = self.char_z.get(mu) {
            return Ok(p);
        }
        let r = self.rank();
        let value = match mu.labels().iter().position(|&m| m > 0) {
            None => ZPolynomial::one(r),
            Some(i) => {
                let fundamental = DominantWeight::fundamental(r, i + 1);
                let rest = DominantWeight::new_unchecked(mu.as_weight() - fundamental.as_weight());
                let series = self.clebsch_gordan(&rest, &fundamental)?;
                if series.terms.get(mu) != Some(&BigInt::one()) {
                    return Err(Error::invariant(format!("{mu} does not occur once in its own peel product")));
                }
                let mut p = self.char_to_z(&rest)?.mul(&ZPolynomial::variable(r, i + 1))?;
                for (nu, n) in &series.terms {
                    if nu != mu {
                        p = p.sub(&self.char_to_z(nu)?.scale(n))?;
                    }
                }
                p
            }
        };
        Ok(self.char_z.insert(mu.clone(), value))
    }

    /// `M_λ = χ_λ − Σ_{μ<λ} mult_λ(μ) M_μ` as a polynomial in `z`.
    pub fn monomial_to_z(&self, lambda: &DominantWeight) -> Result<Arc<ZPolynomial<BigInt>>> {
        self.rs.check_rank(lambda)?;
        if let Some(p) = self.monomial_z.get(lambda) {
            return Ok(p);
        }
        let ch = self.character(lambda)?;
        let mut p = (*self.char_to_z(lambda)?).clone();
        for (mu, m) in ch.multiplicities() {
            if mu != lambda {
                p = p.sub(&self.monomial_to_z(mu)?.scale(m))?;
            }
        }
        Ok(self.monomial_z.insert(lambda.clone(), p))
    }

    /// The orbit-sum expansion of the z-monomial with exponents `e`.
    pub fn z_monomial(&self, e: &Monomial) -> Result<Arc<MonomialCombination<BigInt>>> {
        let r = self.rank();
        if e.exponents().len() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: e.exponents().len(),
            });
        }
        if let Some(v) = self.z_monomials.get(e) {
            return Ok(v);
        }
        let value = match e.exponents().iter().position(|&x| x > 0) {
            None => MonomialCombination::single(DominantWeight::zero(r), BigInt::one()),
            Some(i) => {
                let mut lower = e.exponents().to_vec();
                lower[i] -= 1;
                let lower = self.z_monomial(&Monomial::from_exponents(&lower))?;
                let chi = self.character(&DominantWeight::fundamental(r, i + 1))?;
                characters::product(&self.rs, &lower, &chi.to_combination())?
            }
        };
        Ok(self.z_monomials.insert(e.clone(), value))
    }

    /// Renders a polynomial in `z` with its terms ordered by the height of
    /// the weight `Σ e_i λ_i` of each monomial (highest first), so the
    /// leading monomial of an orbit sum or character comes first.
    pub fn render_z<C: Coefficient>(&self, p: &ZPolynomial<C>, style: crate::Style) -> String {
        p.render_by_key(style, |m| {
            let w: Vec<i32> = m.exponents().iter().map(|&e| e as i32).collect();
            let w = crate::Weight::new(&w);
            self.rs.scaled_height(&w)
        })
    }

    /// Expands a polynomial in `z` in the orbit-sum basis.
    pub fn z_to_monomials<C: Coefficient>(&self, p: &ZPolynomial<C>) -> Result<MonomialCombination<C>> {
        if p.nvars() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: p.nvars(),
            });
        }
        let mut out = MonomialCombination::zero(self.rank());
        for (e, c) in p.terms() {
            let expansion = self.z_monomial(e)?;
            for (w, n) in expansion.terms() {
                out.add_term(w.clone(), c.mul_ref(&C::from_bigint(n)));
            }
        }
        Ok(out)
    }

    /// `Σ c_λ M_λ(z)` for a combination of orbit sums.
    pub fn monomials_to_z<C: Coefficient>(&self, f: &MonomialCombination<C>) -> Result<ZPolynomial<C>> {
        let mut out = ZPolynomial::zero(self.rank());
        for (w, c) in f.terms() {
            let m = self.monomial_to_z(w)?;
            for (e, n) in m.terms() {
                out.add_term(e.clone(), c.mul_ref(&C::from_bigint(n)));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::KappaRational;
    use crate::rootsystem::{AlgebraId, Family, RootSystem};
    use crate::text::parse_expression;

    fn e7() -> Engine {
        Engine::for_algebra(AlgebraId::e7()).unwrap()
    }

    fn lam(i: usize) -> DominantWeight {
        DominantWeight::fundamental(7, i)
    }

    fn zp(text: &str) -> ZPolynomial<BigInt> {
        parse_expression(text, 7)
            .unwrap()
            .map_coefficients(|c: &KappaRational| c.as_rational().unwrap().to_integer())
    }

    #[test]
    fn fundamental_characters_are_coordinates() {
        let e = e7();
        for i in 1..=7 {
            assert_eq!(*e.char_to_z(&lam(i)).unwrap(), ZPolynomial::variable(7, i));
        }
        assert_eq!(*e.char_to_z(&DominantWeight::zero(7)).unwrap(), ZPolynomial::one(7));
    }

    #[test]
    fn e7_small_conversions() {
        let e = e7();
        let two7 = DominantWeight::from_labels(&[0, 0, 0, 0, 0, 0, 2]).unwrap();
        assert_eq!(*e.char_to_z(&two7).unwrap(), zp("z7^2 - z6 - z1 - 1"));
        assert_eq!(*e.monomial_to_z(&two7).unwrap(), zp("z7^2 - 2 z6 - 2"));
        assert_eq!(*e.monomial_to_z(&lam(1)).unwrap(), zp("z1 - 7"));
        assert_eq!(
            *e.monomial_to_z(&lam(4)).unwrap(),
            zp("z4 - 4 z1 z6 + 9 z2 z7 + 9 z1^2 + 9 z7^2 - 14 z3 - 39 z6 - 22 z1 - 18")
        );
        assert_eq!(
            e.render_z(&*e.monomial_to_z(&lam(4)).unwrap(), crate::Style::Text),
            "z4 - 4 z1 z6 + 9 z2 z7 + 9 z1^2 - 14 z3 + 9 z7^2 - 39 z6 - 22 z1 - 18"
        );
        let z5 = e.z_to_monomials(&ZPolynomial::<BigInt>::variable(7, 5)).unwrap();
        assert_eq!(z5.render_ordered(e.root_system(), crate::Style::Text), "M(0000100) + 5 M(1000001) + 21 M(0100000) + 71 M(0000001)");
    }

    #[test]
    fn round_trips_to_second_order_on_small_algebras() {
        for algebra in [
            AlgebraId::new(Family::A, 1).unwrap(),
            AlgebraId::new(Family::A, 2).unwrap(),
            AlgebraId::new(Family::A, 3).unwrap(),
            AlgebraId::new(Family::D, 4).unwrap(),
        ] {
            let e = Engine::new(RootSystem::build(algebra).unwrap());
            let r = e.rank();
            for lambda in crate::weights_up_to_order(r, 2) {
                let m = e.monomial_to_z(&lambda).unwrap();
                let back = e.z_to_monomials(&m).unwrap();
                assert_eq!(back, MonomialCombination::single(lambda.clone(), BigInt::one()), "{algebra} {lambda}");
                let chi = e.z_to_monomials(&e.char_to_z(&lambda).unwrap()).unwrap();
                assert_eq!(chi, e.character(&lambda).unwrap().to_combination());
                // Triangularity: z^λ occurs with coefficient 1 and every other
                // z-monomial has weight Σ e_i λ_i strictly below λ.
                let top: Vec<u16> = lambda.labels().iter().map(|&x| x as u16).collect();
                assert_eq!(m.coefficient(&Monomial::from_exponents(&top)), BigInt::one());
                for (mono, _) in m.terms() {
                    let w: Vec<i32> = mono.exponents().iter().map(|&x| x as i32).collect();
                    let w = crate::Weight::new(&w);
                    assert!(w == *lambda.as_weight() || e.root_system().dominates(&lambda, &w));
                }
            }
        }
    }
}
