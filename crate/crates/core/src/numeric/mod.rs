//! Exact rational scalars, vectors, and dense matrices.
//!
//! Every quantity in the library is a [`Rational`]; nothing is ever rounded.

mod extended;
mod linalg;
mod matrix;
mod rational;

pub use extended::Extended;
pub use linalg::{canonical_bases, in_span, rref, solve_linear, Bases, LinearSolve, Rref};
pub use matrix::RMatrix;
pub use rational::{format_rational, int, parse_point, parse_rational, rat, Rational};

/// Inner product of two equal-length vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::from_integer(0.into()); n]
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(s: &Rational, a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| s * x).collect()
}

pub fn neg(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

/// `a + s * b`
pub fn axpy(a: &[Rational], s: &Rational, b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    use num_traits::Zero;
    a.iter().all(Zero::is_zero)
}

/// Sum of `coeffs[i] * vectors[i]`, in dimension `n`.
pub fn combine(n: usize, coeffs: &[Rational], vectors: &[Vec<Rational>]) -> Vec<Rational> {
    let mut out = zeros(n);
    for (c, v) in coeffs.iter().zip(vectors) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}
