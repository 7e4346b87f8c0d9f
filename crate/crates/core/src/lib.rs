//! Exact eigenfunctions of the trigonometric Calogero-Sutherland operator
//! for simply-laced root systems.
//!
//! Everything is computed in exact arithmetic: integer weight multiplicities,
//! polynomials over Q, and κ-parametric polynomials over the field Q(κ).
//! [`Engine`] bundles a root system with the memo tables that the
//! higher-level computations share.

pub mod characters;
pub mod coeffring;
pub mod engine;
pub mod error;
pub mod jacobi;
pub mod operator;
pub mod rootsystem;
pub mod text;
pub mod verify;
pub mod zbasis;

pub use characters::{DecompositionSeries, DominantCharacter, MonomialCombination};
pub use coeffring::{Coefficient, KappaPoly, KappaRational, Monomial, Style, ZPolynomial};
pub use engine::Engine;
pub use error::{Error, Result};
pub use jacobi::{GeneralizedCGSeries, JacobiPolynomial};
pub use operator::{CSOperator, Eigenvalue};
pub use rootsystem::{AlgebraId, DominantWeight, Family, Root, RootSystem, Weight};

/// All dominant weights of rank `rank` whose labels sum to at most `order`,
/// sorted by order and then descending labels.
pub fn weights_up_to_order(rank: usize, order: i32) -> Vec<DominantWeight> {
    fn rec(prefix: &mut Vec<i32>, rank: usize, left: i32, out: &mut Vec<DominantWeight>) {
        if prefix.len() == rank {
            out.push(DominantWeight::from_labels(prefix).unwrap());
            return;
        }
        for m in (0..=left).rev() {
            prefix.push(m);
            rec(prefix, rank, left - m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), rank, order, &mut out);
    out.sort_by_key(|w| w.order());
    out
}
