use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rendered, Style};
use crate::error::{Error, Result};

/// A polynomial in κ with integer coefficients, stored densely by ascending
/// degree with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct KappaPoly {
    coeffs: Vec<BigInt>,
}

impl KappaPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        KappaPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate κ.
    pub fn kappa() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> BigInt {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Non-negative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::default();
        }
        KappaPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Exact division of every coefficient by `k`.
    fn div_scalar(&self, k: &BigInt) -> Self {
        if k.is_one() {
            return self.clone();
        }
        KappaPoly {
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Pseudo-remainder `lc(b)^k · self mod b`.
    fn pseudo_rem(&self, b: &KappaPoly) -> KappaPoly {
        let db = b.degree().expect("pseudo-division by zero");
        let lb = b.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let lr = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        KappaPoly::new(r)
    }

    /// `self / d` when the quotient has integer coefficients and the
    /// division is exact.
    pub fn exact_div(&self, d: &KappaPoly) -> Option<KappaPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::default());
        }
        let ld = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for shift in (0..q.len()).rev() {
            let top = &r[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(ld);
            if !rem.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &qc * dc;
            }
            q[shift] = qc;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(KappaPoly::new(q))
        } else {
            None
        }
    }

    /// Greatest common divisor over Q[κ], returned primitive with positive
    /// leading coefficient. Uses the primitive polynomial remainder sequence.
    pub fn gcd(a: &KappaPoly, b: &KappaPoly) -> KappaPoly {
        if a.is_zero() {
            return b.primitive();
        }
        if b.is_zero() {
            return a.primitive();
        }
        let (mut a, mut b) = if a.degree() >= b.degree() {
            (a.primitive(), b.primitive())
        } else {
            (b.primitive(), a.primitive())
        };
        loop {
            if b.degree() == Some(0) {
                return KappaPoly::constant(<BigInt as One>::one());
            }
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b;
            }
            a = b;
            b = r.primitive();
        }
    }

    /// Splits off linear factors `(a + bκ)` with `b > 0`, `gcd(a, b) = 1`.
    ///
    /// Returns the signed content, the linear factors with multiplicities
    /// sorted by `(b, a)`, and the remaining primitive cofactor. Factoring is
    /// only attempted when the constant and leading coefficients are small
    /// enough for trial division; otherwise the cofactor is the whole
    /// primitive part.
    pub fn factor_linear(&self) -> (BigInt, Vec<(KappaPoly, u32)>, KappaPoly) {
        if self.is_zero() {
            return (BigInt::zero(), vec![], KappaPoly::constant(<BigInt as One>::one()));
        }
        let mut content = self.content();
        if self.leading().unwrap().is_negative() {
            content = -content;
        }
        let mut rest = self.div_scalar(&content);
        let mut factors: Vec<(KappaPoly, u32)> = Vec::new();

        let zeros = rest.coeffs.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            rest = KappaPoly::new(rest.coeffs[zeros..].to_vec());
            factors.push((KappaPoly::kappa(), zeros as u32));
        }

        const LIMIT: u64 = 1 << 40;
        let small = |x: &BigInt| x.abs().to_u64().is_some_and(|v| v <= LIMIT);
        'search: while rest.degree().unwrap_or(0) >= 1 {
            let a0 = rest.coeffs[0].clone();
            let lead = rest.leading().unwrap().clone();
            if !small(&a0) || !small(&lead) {
                break;
            }
            let adivs = divisors(a0.abs().to_u64().unwrap());
            let bdivs = divisors(lead.abs().to_u64().unwrap());
            for &b in &bdivs {
                for &a in &adivs {
                    for a in [-(a as i64), a as i64] {
                        if a.gcd(&(b as i64)) != 1 {
                            continue;
                        }
                        let f = KappaPoly::from_i64s(&[a, b as i64]);
                        if let Some(q) = rest.exact_div(&f) {
                            rest = q;
                            match factors.iter_mut().find(|(g, _)| *g == f) {
                                Some((_, e)) => *e += 1,
                                None => factors.push((f, 1)),
                            }
                            continue 'search;
                        }
                    }
                }
            }
            break;
        }
        factors.sort_by_key(|(f, _)| (f.coeff(1), f.coeff(0)));
        (content, factors, rest)
    }

    /// Renders the polynomial in ascending degree, e.g. `-1 + 17 κ`.
    pub fn render_plain(&self, style: Style) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let k = style.kappa();
        let mut out = String::new();
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let var = match d {
                0 => String::new(),
                1 => k.to_string(),
                _ => format!("{k}^{d}"),
            };
            if d == 0 {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&var);
            } else {
                out.push_str(&format!("{a}{}{var}", style.times()));
            }
        }
        out
    }

    /// Factored rendering of the magnitude: content, linear factors, cofactor.
    /// Returns `(negative, factors, is_unit)`.
    fn render_factors(&self, style: Style) -> (bool, Vec<String>, bool) {
        let (content, factors, rest) = self.factor_linear();
        let mut parts: Vec<String> = Vec::new();
        let mag = content.abs();
        for (f, e) in &factors {
            let base = if *f == KappaPoly::kappa() {
                style.kappa().to_string()
            } else {
                format!("({})", f.render_plain(style))
            };
            parts.push(if *e == 1 { base } else { format!("{base}^{e}") });
        }
        if !rest.is_one() {
            parts.push(format!("({})", rest.render_plain(style)));
        }
        let unit = parts.is_empty() && mag.is_one();
        if !mag.is_one() || parts.is_empty() {
            parts.insert(0, mag.to_string());
        }
        (content.is_negative(), parts, unit)
    }

    fn render_factored(&self, style: Style) -> (bool, String, bool) {
        let (negative, parts, unit) = self.render_factors(style);
        (negative, parts.join(style.times()), unit)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl Add<&KappaPoly> for &KappaPoly {
    type Output = KappaPoly;
    fn add(self, rhs: &KappaPoly) -> KappaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        KappaPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&KappaPoly> for &KappaPoly {
    type Output = KappaPoly;
    fn sub(self, rhs: &KappaPoly) -> KappaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        KappaPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&KappaPoly> for &KappaPoly {
    type Output = KappaPoly;
    fn mul(self, rhs: &KappaPoly) -> KappaPoly {
        if self.is_zero() || rhs.is_zero() {
            return KappaPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        KappaPoly::new(out)
    }
}

impl Neg for &KappaPoly {
    type Output = KappaPoly;
    fn neg(self) -> KappaPoly {
        KappaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for KappaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_plain(Style::Text))
    }
}

impl super::Coefficient for KappaPoly {
    fn zero_elem() -> Self {
        KappaPoly::default()
    }
    fn one_elem() -> Self {
        KappaPoly::constant(<BigInt as One>::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_bigint(n: &BigInt) -> Self {
        KappaPoly::constant(n.clone())
    }
    fn render(&self, style: Style) -> Rendered {
        let (negative, body, unit) = self.render_factored(style);
        Rendered { negative, body, unit }
    }
}

/// An element of Q(κ) in canonical form: `num / den` with
/// `gcd(num, den) = 1` over Q[κ], no common integer content, and a positive
/// leading coefficient in `den`. Canonical form makes `==` decide equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KappaRational {
    num: KappaPoly,
    den: KappaPoly,
}

impl Default for KappaRational {
    fn default() -> Self {
        Self::from_poly(KappaPoly::default())
    }
}

impl KappaRational {
    pub fn new(num: KappaPoly, den: KappaPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = KappaPoly::gcd(&num, &den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        } else {
            (num, den)
        };
        Ok(Self::fix_content(num, den))
    }

    /// Removes the common integer content and normalizes the sign; the
    /// caller guarantees `num` and `den` are coprime over Q[κ].
    fn fix_content(num: KappaPoly, den: KappaPoly) -> Self {
        if num.is_zero() {
            return KappaRational {
                num,
                den: KappaPoly::constant(<BigInt as One>::one()),
            };
        }
        let mut c = num.content().gcd(&den.content());
        if den.leading().unwrap().is_negative() {
            c = -c;
        }
        KappaRational {
            num: num.div_scalar(&c),
            den: den.div_scalar(&c),
        }
    }

    pub fn from_poly(p: KappaPoly) -> Self {
        KappaRational {
            num: p,
            den: KappaPoly::constant(<BigInt as One>::one()),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        KappaRational {
            num: KappaPoly::constant(q.numer().clone()),
            den: KappaPoly::constant(q.denom().clone()),
        }
    }

    pub fn kappa() -> Self {
        Self::from_poly(KappaPoly::kappa())
    }

    pub fn num(&self) -> &KappaPoly {
        &self.num
    }

    pub fn den(&self) -> &KappaPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some` when the value does not depend on κ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0) {
            Some(BigRational::new(self.num.coeff(0), self.den.coeff(0)))
        } else {
            None
        }
    }

    /// Coefficients in κ (ascending), when the value is a polynomial in κ.
    pub fn polynomial_coefficients(&self) -> Option<Vec<BigRational>> {
        if self.den.degree() != Some(0) {
            return None;
        }
        let d = self.den.coeff(0);
        Some(
            self.num
                .coeffs()
                .iter()
                .map(|c| BigRational::new(c.clone(), d.clone()))
                .collect(),
        )
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::fix_content(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(super::Coefficient::mul_ref(self, &other.inv()?))
    }

    /// Evaluates at a rational κ, refusing poles.
    pub fn eval(&self, kappa: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(kappa);
        if d.is_zero() {
            let factor = KappaPoly::new(vec![-kappa.numer().clone(), kappa.denom().clone()]);
            return Err(Error::Pole {
                value: kappa.to_string(),
                denominator: self.den.render_factored(Style::Text).1,
                factor: format!("({})", factor.render_plain(Style::Text)),
            });
        }
        Ok(self.num.eval(kappa) / d)
    }

    /// Every linear factor of the denominator has positive coefficients
    /// (poles only at negative κ), and any nonlinear cofactor is constant.
    pub fn denominator_has_positive_linear_factors(&self) -> bool {
        let (content, factors, rest) = self.den.factor_linear();
        content.is_positive()
            && rest.degree() == Some(0)
            && factors
                .iter()
                .all(|(f, _)| f.coeff(0).is_positive() && f.coeff(1).is_positive())
    }
}

impl fmt::Display for KappaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = super::Coefficient::render(self, Style::Text);
        if r.negative {
            f.write_str("-")?;
        }
        f.write_str(&r.body)
    }
}

impl super::Coefficient for KappaRational {
    fn zero_elem() -> Self {
        Self::default()
    }

    fn one_elem() -> Self {
        Self::from_poly(KappaPoly::constant(<BigInt as One>::one()))
    }

    fn is_zero_elem(&self) -> bool {
        self.num.is_zero()
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return KappaRational {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        if self.den == other.den {
            let num = &self.num + &other.num;
            return KappaRational::new(num, self.den.clone()).unwrap();
        }
        if self.den.degree() == Some(0) && other.den.degree() == Some(0) {
            let num = &self.num.scale(&other.den.coeffs[0]) + &other.num.scale(&self.den.coeffs[0]);
            let den = &self.den * &other.den;
            return Self::fix_content(num, den);
        }
        let g = KappaPoly::gcd(&self.den, &other.den);
        if g.degree() == Some(0) {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            let den = &self.den * &other.den;
            return Self::fix_content(num, den);
        }
        let b1 = self.den.exact_div(&g).unwrap();
        let d1 = other.den.exact_div(&g).unwrap();
        let num = &(&self.num * &d1) + &(&other.num * &b1);
        let h = KappaPoly::gcd(&num, &g);
        let (num, g) = if h.degree().unwrap_or(0) > 0 {
            (num.exact_div(&h).unwrap(), g.exact_div(&h).unwrap())
        } else {
            (num, g)
        };
        let den = &(&g * &b1) * &d1;
        Self::fix_content(num, den)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero_elem();
        }
        if self.den.is_one() && other.den.is_one() {
            return KappaRational {
                num: &self.num * &other.num,
                den: self.den.clone(),
            };
        }
        let cross = |n: &KappaPoly, d: &KappaPoly| -> (KappaPoly, KappaPoly) {
            if d.degree() == Some(0) || n.degree() == Some(0) {
                return (n.clone(), d.clone());
            }
            let g = KappaPoly::gcd(n, d);
            if g.degree() == Some(0) {
                (n.clone(), d.clone())
            } else {
                (n.exact_div(&g).unwrap(), d.exact_div(&g).unwrap())
            }
        };
        let (n1, d2) = cross(&self.num, &other.den);
        let (n2, d1) = cross(&other.num, &self.den);
        Self::fix_content(&n1 * &n2, &d1 * &d2)
    }

    fn neg_ref(&self) -> Self {
        KappaRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn from_bigint(n: &BigInt) -> Self {
        Self::from_poly(KappaPoly::constant(n.clone()))
    }

    fn render(&self, style: Style) -> Rendered {
        let (negative, num, unit) = self.num.render_factored(style);
        if self.den.is_one() {
            return Rendered {
                negative,
                body: num,
                unit,
            };
        }
        let (_, parts, _) = self.den.render_factors(style);
        let den = if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            format!("({})", parts.join(style.times()))
        };
        Rendered {
            negative,
            body: format!("{num}/{den}"),
            unit: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Coefficient;
    use proptest::prelude::*;

    fn kp(c: &[i64]) -> KappaPoly {
        KappaPoly::from_i64s(c)
    }

    fn kr(n: &[i64], d: &[i64]) -> KappaRational {
        KappaRational::new(kp(n), kp(d)).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gcd_of_products() {
        let a = &kp(&[1, 17]) * &kp(&[-1, 1]);
        let b = &kp(&[1, 17]) * &kp(&[2, 3]);
        assert_eq!(KappaPoly::gcd(&a.scale(&6.into()), &b.scale(&(-4).into())), kp(&[1, 17]));
        assert_eq!(KappaPoly::gcd(&kp(&[1, 1]), &kp(&[2, 1])), kp(&[1]));
    }

    #[test]
    fn cancellation() {
        let x = kr(&[-1, 1], &[1, 17]);
        let y = x.mul_ref(&KappaRational::from_poly(kp(&[1, 17])));
        assert_eq!(y, KappaRational::from_poly(kp(&[-1, 1])));
        let two = kr(&[2], &[1, 1]);
        assert!(two.add_ref(&kr(&[-2], &[1, 1])).is_zero());
    }

    #[test]
    fn canonical_form_normalizes_sign_and_content() {
        let a = kr(&[14, -14], &[-2, -34]);
        assert_eq!(a.num(), &kp(&[-7, 7]));
        assert_eq!(a.den(), &kp(&[1, 17]));
        assert!(KappaRational::new(kp(&[1]), kp(&[])).is_err());
        assert!(KappaRational::zero_elem().inv().is_err());
    }

    #[test]
    fn evaluation_and_poles() {
        let a = kr(&[-7, 7], &[1, 17]);
        assert!(a.eval(&q(1, 1)).unwrap().is_zero());
        let b = kr(&[2], &[1, 1]);
        match b.eval(&q(-1, 1)) {
            Err(Error::Pole { factor, .. }) => assert_eq!(factor, "(1 + κ)"),
            other => panic!("expected pole, got {other:?}"),
        }
        assert_eq!(b.eval(&q(1, 2)).unwrap(), q(4, 3));
    }

    #[test]
    fn factored_rendering() {
        let a = kr(&[-7, 7], &[1, 17]);
        assert_eq!(a.to_string(), "7 (-1 + κ)/(1 + 17 κ)");
        let den = &(&kp(&[1, 1]) * &kp(&[1, 5])) * &kp(&[1, 9]);
        let b = KappaRational::new(kp(&[-2, 0, -118]), den).unwrap();
        assert_eq!(b.to_string(), "-2 (1 + 59 κ^2)/((1 + κ) (1 + 5 κ) (1 + 9 κ))");
        let c = KappaRational::new(&kp(&[0, 28]) * &kp(&[-1, 1]), &kp(&[1, 4]) * &kp(&[1, 4])).unwrap();
        assert_eq!(c.to_string(), "28 (-1 + κ) κ/(1 + 4 κ)^2");
        assert_eq!(c.render(Style::Explicit).body, "28*(-1 + k)*k/(1 + 4*k)^2");
    }

    fn small_poly() -> impl Strategy<Value = KappaPoly> {
        prop::collection::vec(-6i64..=6, 0..4).prop_map(|c| kp(&c))
    }

    fn small_rational() -> impl Strategy<Value = KappaRational> {
        (small_poly(), small_poly())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| KappaRational::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
            prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
            prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
            prop_assert!(a.sub_ref(&a).is_zero());
            if !b.is_zero() {
                prop_assert_eq!(a.div(&b).unwrap().mul_ref(&b), a.clone());
            }
        }

        #[test]
        fn canonical_form_is_unique(a in small_rational(), s in 1i64..5, p in small_poly()) {
            prop_assume!(!p.is_zero());
            let scaled = KappaRational::new(&a.num().scale(&s.into()) * &p, &a.den().scale(&s.into()) * &p).unwrap();
            prop_assert_eq!(scaled, a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in small_rational(), b in small_rational(), n in 0i64..7, d in 1i64..4) {
            let x = q(n, d);
            if let (Ok(va), Ok(vb)) = (a.eval(&x), b.eval(&x)) {
                prop_assert_eq!(a.mul_ref(&b).eval(&x).unwrap(), &va * &vb);
                prop_assert_eq!(a.add_ref(&b).eval(&x).unwrap(), va + vb);
            }
        }

        #[test]
        fn factoring_reconstructs(p in small_poly(), f in small_poly()) {
            let poly = &p * &f;
            prop_assume!(!poly.is_zero());
            let (content, factors, rest) = poly.factor_linear();
            let mut acc = rest.scale(&content);
            for (g, e) in &factors {
                for _ in 0..*e {
                    acc = &acc * g;
                }
            }
            prop_assert_eq!(acc, poly);
        }
    }
}
