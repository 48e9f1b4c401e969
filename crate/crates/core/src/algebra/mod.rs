//! Exact arithmetic substrate: rationals, polynomials, determinants,
//! modular arithmetic and interpolation.

pub mod interp;
pub mod matrix;
pub mod modular;
pub mod multipoly;
pub mod rational;
pub mod unipoly;

pub use interp::{evaluation_points, interpolate};
pub use matrix::{det_exact, det_exact_with, permutation_sign, RationalMatrix};
pub use modular::{crt_reconstruct, crt_reconstruct_bounded, det_mod, ModMatrix, PrimeSet};
pub use multipoly::MultiPoly;
pub use rational::{rat_arith, RatOp, Rational};
pub use unipoly::UniPoly;
