//! Exact coefficient arithmetic: big rationals, the polynomial ring Z[κ],
//! the field Q(κ), and sparse polynomials in z_1..z_r over any of them.

mod kappa;
mod zpoly;

pub use kappa::{KappaPoly, KappaRational};
pub use zpoly::{Monomial, ZPolynomial};

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// How coefficients and polynomials are rendered as text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// Human-readable, implicit multiplication, `κ` for the coupling.
    Text,
    /// Explicit `*` and `^`, ASCII `k` for the coupling. Parses back with
    /// [`crate::text::parse_expression`] and in Mathematica/Maple.
    Explicit,
}

impl Style {
    pub fn kappa(self) -> &'static str {
        match self {
            Style::Text => "κ",
            Style::Explicit => "k",
        }
    }

    pub fn times(self) -> &'static str {
        match self {
            Style::Text => " ",
            Style::Explicit => "*",
        }
    }
}

/// A coefficient rendered for embedding into a larger expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub negative: bool,
    /// Magnitude, already safe to juxtapose with a following factor.
    pub body: String,
    /// The magnitude is exactly one.
    pub unit: bool,
}

impl Rendered {
    /// The value as a standalone expression, sign included.
    pub fn signed(&self) -> String {
        if self.negative {
            format!("-{}", self.body)
        } else {
            self.body.clone()
        }
    }
}

/// Ring operations shared by every coefficient domain used in the crate.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn render(&self, style: Style) -> Rendered;

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self = self.sub_ref(other);
    }

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }
}

impl Coefficient for BigInt {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
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
        n.clone()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn render(&self, _style: Style) -> Rendered {
        Rendered {
            negative: self.is_negative(),
            body: self.abs().to_string(),
            unit: self.abs().is_one(),
        }
    }
}

impl Coefficient for BigRational {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
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
        BigRational::from_integer(n.clone())
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn render(&self, style: Style) -> Rendered {
        let a = self.abs();
        let body = if a.is_integer() {
            a.numer().to_string()
        } else {
            match style {
                Style::Text => format!("{}/{}", a.numer(), a.denom()),
                Style::Explicit => format!("({}/{})", a.numer(), a.denom()),
            }
        };
        Rendered {
            negative: self.is_negative(),
            body,
            unit: a.is_one(),
        }
    }
}
