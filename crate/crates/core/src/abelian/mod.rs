//! Exact integer matrices and finitely generated abelian groups.

mod group;
mod io;
mod matrix;
mod normal_form;

pub use group::{
    enumerate_homs, hom_group, presentation_quotient, torsion_two_subgroup, GroupElement, GroupError,
    GroupSpec, Homomorphism, Quotient,
};
pub use io::{MatrixIoError, RelationMatrix};
pub use matrix::IntMatrix;
pub use normal_form::{hermite_normal_form, row_span_contains, row_spans_equal, smith_normal_form, Smith};
