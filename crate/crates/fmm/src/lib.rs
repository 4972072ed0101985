//! Bilinear matrix-multiplication schemes with exact machine verification.
//!
//! A bilinear scheme computes `C = A * B` as `r` products of linear forms in
//! the entries of `A` times linear forms in the entries of `B`, recombined
//! linearly; `r` is the scheme's rank. This crate stores such schemes with
//! coefficients that are Laurent polynomials in a free parameter `L`, proves
//! them correct either symbolically (Brent equations) or exhaustively (the
//! standard-basis oracle), composes them into larger schemes, and applies
//! them recursively to real matrix products over exact coefficient rings.
//!
//! The centerpiece of the built-in catalog is a 5x5x5 scheme using 99
//! bilinear products, together with the classical sub-algorithms it is
//! related to (Strassen, Winograd, Laderman, Hopcroft-Kerr ranks).

pub mod catalog;
pub mod compose;
pub mod matrix;
pub mod ring;
pub mod scheme;
pub mod trilinear;

pub use compose::{compose, multiplication_count, recursive_multiply, RecursionPlan};
pub use matrix::Matrix;
pub use ring::{instantiate, LaurentCoeff, Ring, RingError, RingKind, RingSpec};
pub use scheme::{BilinearScheme, FmmaSignature, SchemeError};
