//! Exact-arithmetic library for the truncated Butcher group.
//!
//! Rooted trees up to a truncation order carry the whole structure: the group
//! product sums over ordered subtrees, the inverse over edge partitions, the
//! Lie bracket over nontrivial splittings, and the exponential, logarithm and
//! right product integral solve a strictly lower-triangular linear system
//! exactly. The symplectic subgroup and its tangent space come with
//! membership tests, and Runge–Kutta tableaus enter through their elementary
//! weights.
//!
//! Coefficients default to arbitrary-precision rationals, so every identity
//! in the crate is checked with exact equality; `f64` coefficients exist for
//! finite-difference cross-checks.
//!
//! ```
//! use butcher::{exp, log, GroupElement, LieElement, Rational, Tree};
//!
//! let leaf: Tree = "[]".parse().unwrap();
//! let a = LieElement::<Rational>::delta(4, &leaf).unwrap();
//! let ea = exp(&a);
//! assert_eq!(ea.coeff(&"[[]]".parse().unwrap()).unwrap(), &Rational::new(1.into(), 2.into()));
//! assert_eq!(log(&ea), a);
//! ```

pub mod bruteforce;
pub mod expflow;
pub mod group;
pub mod io;
pub mod lie;
pub mod poly;
pub mod rk;
pub mod scalar;
pub mod selftest;
pub mod symplectic;
pub mod table;
pub mod tree;

pub use expflow::{evolve, exp, exp_curve, log, right_translation_derivative, PolyCurve, SolutionCurve};
pub use group::{GroupElement, LieElement, OrderMismatch};
pub use lie::{bilinear_b, bracket, star};
pub use poly::Poly;
pub use rk::RkTableau;
pub use scalar::{parse_rational, Rational, Scalar};
pub use symplectic::{
    is_symplectic, is_tangent_symplectic, symplectic_defect, tangent_defect,
    tangent_symplectic_basis,
};
pub use table::TreeTable;
pub use tree::{
    enumerate_trees, ordered_subtrees, partitions, splittings, DecompositionTerm, Forest,
    Splitting, Tree,
};
