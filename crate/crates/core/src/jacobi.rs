//! Jacobi polynomials P^κ_m of the root system (eigenfunctions of Δ^κ with
//! leading term M_m) and their generalized Clebsch-Gordan series.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::characters::{weight_label, MonomialCombination};
use crate::coeffring::{Coefficient, KappaRational, Style, ZPolynomial};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::rootsystem::DominantWeight;

/// `P^κ_m = M_m + Σ_{μ<m} c_μ(κ) M_μ`, monic in the orbit-sum basis.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiPolynomial {
    m: DominantWeight,
    coeffs: MonomialCombination<KappaRational>,
    zform: ZPolynomial<KappaRational>,
}

impl JacobiPolynomial {
    /// Reassembles a polynomial from stored parts (e.g. a cache record),
    /// checking that it is monic and consistent.
    pub fn from_parts(
        engine: &Engine,
        m: DominantWeight,
        coeffs: MonomialCombination<KappaRational>,
    ) -> Result<Self> {
        if coeffs.coefficient(&m) != KappaRational::one_elem() {
            return Err(Error::invariant(format!("P_{m} is not monic")));
        }
        let zform = engine.monomials_to_z(&coeffs)?;
        Ok(JacobiPolynomial { m, coeffs, zform })
    }

    pub fn m(&self) -> &DominantWeight {
        &self.m
    }

    pub fn coeffs(&self) -> &MonomialCombination<KappaRational> {
        &self.coeffs
    }

    pub fn zform(&self) -> &ZPolynomial<KappaRational> {
        &self.zform
    }

    /// `P^{κ0}_m` for a rational coupling, refusing poles.
    pub fn specialize(&self, kappa: &BigRational) -> Result<ZPolynomial<BigRational>> {
        self.zform.substitute_kappa(kappa)
    }
}

/// `P_a · P_b = Σ c_μ(κ) P_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedCGSeries {
    pub a: DominantWeight,
    pub b: DominantWeight,
    /// In descending dominance order.
    pub terms: Vec<(DominantWeight, KappaRational)>,
}

impl GeneralizedCGSeries {
    pub fn coefficient(&self, w: &DominantWeight) -> Option<&KappaRational> {
        self.terms.iter().find(|(v, _)| v == w).map(|(_, c)| c)
    }

    pub fn specialize(&self, kappa: &BigRational) -> Result<BTreeMap<DominantWeight, BigRational>> {
        self.terms
            .iter()
            .map(|(w, c)| Ok((w.clone(), c.eval(kappa)?)))
            .collect()
    }

    pub fn render(&self, style: Style) -> String {
        let mut out = String::new();
        for (w, c) in &self.terms {
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
            out.push_str(&format!("P({})", weight_label(w)));
        }
        out
    }
}

impl Engine {
    /// Solves `Δ^κ P = ε_m P` triangularly: for μ below m in topological
    /// order, `c_μ = Σ_{ν>μ} c_ν t_{νμ} / (ε_m − ε_μ)`.
    pub fn jacobi(&self, m: &DominantWeight) -> Result<Arc<JacobiPolynomial>> {
        self.rs.check_rank(m)?;
        self.jacobi.get_or_try(m, || self.solve(m))
    }

    fn solve(&self, m: &DominantWeight) -> Result<JacobiPolynomial> {
        let order = self.rs.dominant_weights_below(m);
        order
            .par_iter()
            .map(|w| self.act_on_monomial(w).map(|_| ()))
            .collect::<Result<()>>()?;
        let eps_m = self.eigenvalue(m)?.to_kappa();
        let mut coeffs = MonomialCombination::zero(self.rank());
        coeffs.add_term(m.clone(), KappaRational::one_elem());
        let mut solved: Vec<(Arc<MonomialCombination<KappaRational>>, KappaRational)> =
            vec![(self.act_on_monomial(m)?, KappaRational::one_elem())];
        for mu in order.iter().skip(1) {
            let mut num = KappaRational::zero_elem();
            for (action, c) in &solved {
                if let Some(t) = action.get(mu) {
                    num.add_assign_ref(&c.mul_ref(t));
                }
            }
            if num.is_zero() {
                continue;
            }
            let gap = eps_m.sub_ref(&self.eigenvalue(mu)?.to_kappa());
            if gap.is_zero() {
                return Err(Error::invariant(format!("ε_{m} = ε_{mu} identically")));
            }
            let c = num.div(&gap)?;
            solved.push((self.act_on_monomial(mu)?, c.clone()));
            coeffs.add_term(mu.clone(), c);
        }
        let zform = self.monomials_to_z(&coeffs)?;
        Ok(JacobiPolynomial {
            m: m.clone(),
            coeffs,
            zform,
        })
    }

    /// Expands `P_a · P_b` in orbit sums and peels off `P_μ` from the top of
    /// the dominance order.
    pub fn generalized_cg(&self, a: &DominantWeight, b: &DominantWeight) -> Result<GeneralizedCGSeries> {
        let pa = self.jacobi(a)?;
        let pb = self.jacobi(b)?;
        let pairs: Vec<(&DominantWeight, &KappaRational, &DominantWeight, &KappaRational)> = pa
            .coeffs
            .terms()
            .flat_map(|(x, cx)| pb.coeffs.terms().map(move |(y, cy)| (x, cx, y, cy)))
            .collect();
        pairs
            .par_iter()
            .map(|(x, _, y, _)| self.orbit_product(x, y).map(|_| ()))
            .collect::<Result<()>>()?;
        let mut rest = MonomialCombination::zero(self.rank());
        for (x, cx, y, cy) in pairs {
            let k = cx.mul_ref(cy);
            for (w, n) in self.orbit_product(x, y)?.terms() {
                rest.add_term(w.clone(), k.mul_ref(&KappaRational::from_bigint(n)));
            }
        }

        let top = DominantWeight::new_unchecked(a.as_weight() + b.as_weight());
        let below = self.rs.dominant_weights_below(&top);
        below
            .par_iter()
            .filter(|w| rest.get(w).is_some())
            .map(|w| self.jacobi(w).map(|_| ()))
            .collect::<Result<()>>()?;
        let mut terms = Vec::new();
        for mu in below {
            let c = rest.coefficient(&mu);
            if c.is_zero() {
                continue;
            }
            let p = self.jacobi(&mu)?;
            rest.add_scaled(&p.coeffs, &c.neg_ref());
            terms.push((mu, c));
        }
        if !rest.is_empty() {
            return Err(Error::invariant(format!("non-zero remainder after peeling P_{a} · P_{b}")));
        }
        Ok(GeneralizedCGSeries {
            a: a.clone(),
            b: b.clone(),
            terms,
        })
    }
}

/// Lifts an integer polynomial to Q(κ) coefficients.
pub fn lift(p: &ZPolynomial<BigInt>) -> ZPolynomial<KappaRational> {
    p.map_coefficients(KappaRational::from_bigint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::KappaPoly;
    use crate::rootsystem::{AlgebraId, Family};
    use crate::text::{parse_expression, parse_kappa_rational};

    fn e7() -> Engine {
        Engine::for_algebra(AlgebraId::e7()).unwrap()
    }

    fn dw(labels: &[i32]) -> DominantWeight {
        DominantWeight::from_labels(labels).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn e7_first_examples() {
        let e = e7();
        let p7 = e.jacobi(&dw(&[0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(p7.zform().to_string(), "z7");
        assert_eq!(p7.specialize(&q(1, 2)).unwrap(), ZPolynomial::variable(7, 7));
        let p1 = e.jacobi(&dw(&[1, 0, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(p1.zform(), &parse_expression("z1 + 7 (-1 + k)/(1 + 17 k)", 7).unwrap());
        let p77 = e.jacobi(&dw(&[0, 0, 0, 0, 0, 0, 2])).unwrap();
        assert_eq!(
            p77.zform(),
            &parse_expression(
                "z7^2 - 2 z6/(1+k) - 12 k z1/((1+k)(1+5k)) - 2 (1 + 59 k^2)/((1+k)(1+5k)(1+9k))",
                7
            )
            .unwrap()
        );
        assert_eq!(p77.specialize(&q(0, 1)).unwrap(), parse_expression("z7^2 - 2 z6 - 2", 7).unwrap().substitute_kappa(&q(0, 1)).unwrap());
    }

    #[test]
    fn e7_generalized_cg_examples() {
        let e = e7();
        let l7 = dw(&[0, 0, 0, 0, 0, 0, 1]);
        let series = e.generalized_cg(&l7, &l7).unwrap();
        let expect = [
            (dw(&[0, 0, 0, 0, 0, 0, 2]), "1"),
            (dw(&[0, 0, 0, 0, 0, 1, 0]), "2/(1 + k)"),
            (dw(&[1, 0, 0, 0, 0, 0, 0]), "12 (1 + 4 k)/((1 + 5 k) (1 + 9 k))"),
            (DominantWeight::zero(7), "56 (1 + 4 k) (1 + 8 k)/((1 + 9 k) (1 + 13 k) (1 + 17 k))"),
        ];
        assert_eq!(series.terms.len(), expect.len());
        for (w, c) in expect {
            assert_eq!(series.coefficient(&w), Some(&parse_kappa_rational(c).unwrap()), "{w}");
        }
        let unit = e.generalized_cg(&DominantWeight::zero(7), &l7).unwrap();
        assert_eq!(unit.terms, vec![(l7, KappaRational::one_elem())]);
    }

    /// Monic Gegenbauer recurrence in `z = 2 cos q`:
    /// `p_{n+1} = z p_n − γ_n p_{n−1}` with
    /// `γ_n = n (n + 2κ − 1) / ((n + κ)(n + κ − 1))`.
    fn gegenbauer(n_max: usize) -> Vec<ZPolynomial<KappaRational>> {
        let z = ZPolynomial::<KappaRational>::variable(1, 1);
        let mut out = vec![ZPolynomial::one(1), z.clone()];
        for n in 1..n_max {
            let n_ = n as i64;
            let num = KappaPoly::from_i64s(&[n_ * (n_ - 1), 2 * n_]);
            let den = &KappaPoly::from_i64s(&[n_, 1]) * &KappaPoly::from_i64s(&[n_ - 1, 1]);
            let gamma = KappaRational::new(num, den).unwrap();
            let next = z.mul(&out[n]).unwrap().sub(&out[n - 1].scale(&gamma)).unwrap();
            out.push(next);
        }
        out
    }

    #[test]
    fn a1_matches_gegenbauer_recurrence() {
        let e = Engine::for_algebra(AlgebraId::new(Family::A, 1).unwrap()).unwrap();
        let expected = gegenbauer(8);
        for (n, p) in expected.iter().enumerate() {
            let got = e.jacobi(&dw(&[n as i32])).unwrap();
            assert_eq!(got.zform(), p, "degree {n}");
        }
    }
}
