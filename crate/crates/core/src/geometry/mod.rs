//! Exact rational geometry of five planes through a point.

mod diagram;
mod quintuple;
mod rational;
mod simplex;

use thiserror::Error;

pub use diagram::{
    bifurcation_diagram, ccw_cmp, classify_diagram, halfline_profiles, oracle_disagreements, qq_relation_check,
    qq_relation_check_with, ArrowSense, BifurcationDiagram, Crossing, DiagramClass, HalfLine, LineProfile,
    PositiveSide, QqCheck, Tip, WalkOptions,
};
pub use quintuple::{
    in_kernel, left_kernel_u, random_quintuple, random_quintuple_with_budget, KernelBasis, PlaneQuintuple,
    QuintupleJson, RationalText, REJECTION_BUDGET,
};
pub use rational::{det3, int, null_space, parse_rational, rat, sign, solve, Rational, RationalVec};
pub use simplex::{
    face_count_oracle, half_space_region_bounded, lemma1_interior_check, random_lemma1_input, Lemma1Error, Simplex,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("normal {index} has dimension {got}, expected {expected}")]
    WrongDimension { index: usize, expected: usize, got: usize },
    #[error("normals {0:?} are linearly dependent")]
    DependentNormals([usize; 3]),
    #[error("coordinate vector {0} projects to zero in the kernel")]
    ProjectionVanishes(usize),
    #[error("lambda_{j} vanishes on the line where lambda_{k} = 0")]
    VanishingLambda { k: usize, j: usize },
    #[error("sample point is not in the left kernel")]
    NotInKernel,
    #[error("the four planes do not bound a simplex")]
    DegeneratePlanes,
    #[error("bound must be at least 1, got {0}")]
    BadBound(i64),
    #[error("no valid sample after {attempts} attempts")]
    RejectionBudgetExhausted { attempts: usize },
    #[error("{0}")]
    Input(String),
}

/// Normals (1,0,0), (0,1,0), (0,0,1), (1,1,1), (1,2,3) at degree 0.
pub fn example_quintuple() -> PlaneQuintuple {
    let n = |v: &[i64]| RationalVec::from_ints(v);
    PlaneQuintuple::new([n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[1, 1, 1]), n(&[1, 2, 3])], 0)
        .expect("example is in general position")
}
