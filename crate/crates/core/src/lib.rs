//! Exact linear algebra over `Z` and `Z[X]` by specialization and lifting.
//!
//! Integer problems are solved with a p-adic decomposition plus rational
//! recovery. Polynomial problems are specialized at small integer places,
//! solved over `Z`, and lifted back coefficient by coefficient. On top of
//! that sits a pipeline computing primitive Gram matrices of W-graph
//! representations of Iwahori-Hecke algebras with equal parameters.

pub mod arith;
pub mod cli;
pub mod factor;
pub mod gram;
pub mod hecke;
pub mod integer_linear;
pub mod poly;
pub mod poly_matrix;
pub mod poly_recovery;
pub mod polyring_linear;
pub mod rational_recovery;
pub mod rep_engine;

pub use integer_linear::{
    int_exponent, int_inverse, int_nullspace_rank1, padic_decompose, IntMatrix, Membership,
    SpanDecomposition,
};
pub use poly::{IntPoly, LaurentPoly, Palindromy, RatPoly};
pub use poly_matrix::{PolyMatrix, SparsePolyMatrix};
pub use rational_recovery::{gauss_reduce, recover_rational, LatticeBasis2, Residue};
