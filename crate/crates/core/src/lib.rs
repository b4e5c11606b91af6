//! Combinatorial and geometric verification of the order-one invariant
//! calculus for immersed surfaces in 3-space.
//!
//! * [`abelian`]: Smith/Hermite normal forms and finitely generated abelian groups.
//! * [`symbols`]: the CE symbol alphabet, formal sums and unordered configurations.
//! * [`relations`]: relation families, the truncated universal group and membership checks.
//! * [`geometry`]: exact rational analysis of the quintuple-point bifurcation.

pub mod abelian;
pub mod geometry;
pub mod relations;
pub mod seed;
pub mod symbols;

pub use abelian::{GroupElement, GroupSpec, IntMatrix};
pub use symbols::{Configuration, DegreeWindow, Family, FormalSum, Symbol};
