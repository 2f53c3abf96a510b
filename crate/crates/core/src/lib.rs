//! Exact computer algebra for contraction algebras of 3-fold flops.
//!
//! The crate provides noncommutative Groebner bases over the rationals,
//! finite-dimensional quotient algebras with symbolic coefficients, a
//! parametric isomorphism test for local algebras, a commutative kernel
//! (Buchberger, Mora, Milnor and Tjurina numbers), matrix factorization
//! checks and Toda's dimension formula for Gopakumar-Vafa invariants.

pub mod commalg;
pub mod corpus;
pub mod error;
pub mod files;
pub mod findim;
pub mod freealg;
pub mod gvinv;
pub mod isotest;
pub mod linalg;
pub mod matfac;
pub mod ncgb;
pub mod parse;

pub use error::{Error, Result};

/// Exact rational numbers used for every coefficient.
pub type Q = num_rational::BigRational;
