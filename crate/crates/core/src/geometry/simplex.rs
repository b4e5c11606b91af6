//! Explicit simplices cut out by four planes `x · n_j = c_j`.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::quintuple::{in_kernel, random_vec3, PlaneQuintuple};
use super::rational::{det3, int, sign, solve, Rational, RationalVec};
use super::GeometryError;

/// The bounded cell of four planes in general position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    normals: [RationalVec; 4],
    offsets: [Rational; 4],
    /// `vertices[i]` lies on every plane except plane `i`.
    vertices: [RationalVec; 4],
    /// Side of plane `j` holding the interior: sign of `x · n_j - c_j`.
    interior_side: [i8; 4],
}

impl Simplex {
    pub fn from_planes(normals: [RationalVec; 4], offsets: [Rational; 4]) -> Result<Self, GeometryError> {
        let mut vertices = Vec::with_capacity(4);
        for skip in 0..4 {
            let others: Vec<usize> = (0..4).filter(|&j| j != skip).collect();
            let m = others.iter().map(|&j| normals[j].0.clone()).collect();
            let rhs = others.iter().map(|&j| offsets[j].clone()).collect();
            let v = solve(m, rhs).ok_or(GeometryError::DegeneratePlanes)?;
            vertices.push(RationalVec(v));
        }
        let vertices: [RationalVec; 4] = vertices.try_into().expect("four vertices");
        // A vertex on its opposite plane means all four planes are concurrent.
        for i in 0..4 {
            if (vertices[i].dot(&normals[i]) - &offsets[i]).is_zero() {
                return Err(GeometryError::DegeneratePlanes);
            }
        }
        let centroid = vertices.iter().skip(1).fold(vertices[0].clone(), |acc, v| acc.add(v)).scale(&Rational::new(1.into(), 4.into()));
        let mut interior_side = [0i8; 4];
        for j in 0..4 {
            let s = sign(&(centroid.dot(&normals[j]) - &offsets[j]));
            // containment: the opposite vertex sits strictly on the interior side
            let sv = sign(&(vertices[j].dot(&normals[j]) - &offsets[j]));
            if s == 0 || s != sv {
                return Err(GeometryError::DegeneratePlanes);
            }
            interior_side[j] = s;
        }
        Ok(Simplex { normals, offsets, vertices, interior_side })
    }

    pub fn vertices(&self) -> &[RationalVec; 4] {
        &self.vertices
    }

    /// Faces whose plane has the simplex on the side `x · n_j < c_j`.
    pub fn faces_on_negative_side(&self) -> usize {
        self.interior_side.iter().filter(|&&s| s < 0).count()
    }

    /// Barycentric coordinates of `x` with respect to the vertices.
    pub fn barycentric(&self, x: &RationalVec) -> Vec<Rational> {
        let mut m: Vec<Vec<Rational>> = (0..3).map(|i| self.vertices.iter().map(|v| v[i].clone()).collect()).collect();
        m.push(vec![int(1); 4]);
        let mut rhs = x.0.clone();
        rhs.push(int(1));
        solve(m, rhs).expect("vertices of a nondegenerate simplex are affinely independent")
    }

    /// Strictly inside: all barycentric coordinates positive.
    pub fn contains_in_interior(&self, x: &RationalVec) -> bool {
        self.barycentric(x).iter().all(Signed::is_positive)
    }

    pub fn offsets(&self) -> &[Rational; 4] {
        &self.offsets
    }

    pub fn normals(&self) -> &[RationalVec; 4] {
        &self.normals
    }
}

/// Whether `{x : x · v_k <= μ_k for all k}` is bounded, which for four
/// vectors in 3-space happens iff they positively span: the one-dimensional
/// dependency `Σ c_k v_k = 0` has all `c_k` of one strict sign.
pub fn half_space_region_bounded(v: &[RationalVec; 4]) -> bool {
    let c = [
        det3(&v[1], &v[2], &v[3]),
        -det3(&v[0], &v[2], &v[3]),
        det3(&v[0], &v[1], &v[3]),
        -det3(&v[0], &v[1], &v[2]),
    ];
    let signs: Vec<i8> = c.iter().map(sign).collect();
    signs.iter().all(|&s| s == 1) || signs.iter().all(|&s| s == -1)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Lemma1Error {
    #[error("vectors do not sum to zero")]
    SumNonzero,
    #[error("vectors {0:?} are linearly dependent")]
    DependentTriple([usize; 3]),
    #[error("offset {0} is not positive")]
    NonPositiveOffset(usize),
}

/// For `v_1 + ... + v_4 = 0` with every three independent and all `μ_k > 0`,
/// decides whether the origin lies in the interior of the simplex cut out by
/// the planes `x · v_k = μ_k`: the region `x · v_k <= μ_k` must be bounded,
/// the explicit simplex must lie on the `<=` side of every plane, and the
/// origin must have positive barycentric coordinates.
pub fn lemma1_interior_check(v: &[RationalVec; 4], mu: &[Rational; 4]) -> Result<bool, Lemma1Error> {
    let sum = v.iter().skip(1).fold(v[0].clone(), |acc, x| acc.add(x));
    if !sum.is_zero() {
        return Err(Lemma1Error::SumNonzero);
    }
    for t in (0..4).combinations(3) {
        if det3(&v[t[0]], &v[t[1]], &v[t[2]]).is_zero() {
            return Err(Lemma1Error::DependentTriple([t[0], t[1], t[2]]));
        }
    }
    if let Some(k) = mu.iter().position(|m| !m.is_positive()) {
        return Err(Lemma1Error::NonPositiveOffset(k));
    }
    if !half_space_region_bounded(v) {
        return Ok(false);
    }
    let Ok(simplex) = Simplex::from_planes(v.clone(), mu.clone()) else {
        return Ok(false);
    };
    let origin = RationalVec::zeros(3);
    let strictly_feasible = (0..4).all(|k| (origin.dot(&v[k]) - &mu[k]).is_negative());
    Ok(strictly_feasible && simplex.faces_on_negative_side() == 4 && simplex.contains_in_interior(&origin))
}

/// Random precondition-satisfying input: three random vectors, the fourth
/// their negated sum, resampled until every triple is independent.
pub fn random_lemma1_input(seed: u64, bound: i64) -> Result<([RationalVec; 4], [Rational; 4]), GeometryError> {
    if bound < 1 {
        return Err(GeometryError::BadBound(bound));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..super::quintuple::REJECTION_BUDGET {
        let a = random_vec3(&mut rng, bound);
        let b = random_vec3(&mut rng, bound);
        let c = random_vec3(&mut rng, bound);
        let d = a.add(&b).add(&c).neg();
        let v = [a, b, c, d];
        if (0..4).combinations(3).any(|t| det3(&v[t[0]], &v[t[1]], &v[t[2]]).is_zero()) {
            continue;
        }
        let mu = std::array::from_fn(|_| {
            Rational::new(rng.gen_range(1..=bound).into(), rng.gen_range(1..=bound).into())
        });
        return Ok((v, mu));
    }
    Err(GeometryError::RejectionBudgetExhausted { attempts: super::quintuple::REJECTION_BUDGET })
}

/// Counts, by building the simplex of the planes `x · u_j = λ_j` (`j != k`)
/// explicitly, how many of its faces have it on their non-preferred side.
/// `sample` must lie in the left kernel `U`.
pub fn face_count_oracle(q: &PlaneQuintuple, k: usize, sample: &RationalVec) -> Result<usize, GeometryError> {
    if k >= 5 {
        return Err(GeometryError::Input(format!("plane index {k} out of range")));
    }
    if !in_kernel(q, sample) {
        return Err(GeometryError::NotInKernel);
    }
    let idx: Vec<usize> = (0..5).filter(|&j| j != k).collect();
    let normals: [RationalVec; 4] = std::array::from_fn(|i| q.normals()[idx[i]].clone());
    let offsets: [Rational; 4] = std::array::from_fn(|i| sample[idx[i]].clone());
    Ok(Simplex::from_planes(normals, offsets)?.faces_on_negative_side())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::rat;
    use proptest::prelude::*;

    fn n(v: &[i64]) -> RationalVec {
        RationalVec::from_ints(v)
    }

    #[test]
    fn unit_planes_and_far_plane() {
        let s = Simplex::from_planes(
            [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[1, 1, 1])],
            [int(1), int(1), int(1), int(-1)],
        )
        .unwrap();
        assert_eq!(s.vertices()[3], n(&[1, 1, 1]));
        assert_eq!(s.vertices()[0], n(&[-3, 1, 1]));
        assert_eq!(s.faces_on_negative_side(), 3);
        assert!(s.contains_in_interior(&RationalVec::zeros(3)));
        // as inequalities x,y,z <= 1 and x+y+z <= -1 the region is unbounded
        assert!(!half_space_region_bounded(&[n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[1, 1, 1])]));
        // flipping the last plane's normal gives the bounded simplex
        assert!(half_space_region_bounded(&[n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[-1, -1, -1])]));
    }

    #[test]
    fn concurrent_planes_are_degenerate() {
        let r = Simplex::from_planes(
            [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[1, 1, 1])],
            [int(0), int(0), int(0), int(0)],
        );
        assert_eq!(r, Err(GeometryError::DegeneratePlanes));
    }

    #[test]
    fn lemma1_fixed_inputs() {
        let v = [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[-1, -1, -1])];
        assert_eq!(lemma1_interior_check(&v, &[int(1), int(1), int(1), int(1)]), Ok(true));
        assert_eq!(lemma1_interior_check(&v, &[int(1), int(2), int(3), rat(1, 2)]), Ok(true));
    }

    #[test]
    fn lemma1_precondition_errors() {
        let bad_sum = [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[-1, -1, 0])];
        assert_eq!(lemma1_interior_check(&bad_sum, &[int(1), int(1), int(1), int(1)]), Err(Lemma1Error::SumNonzero));
        assert!(!half_space_region_bounded(&bad_sum));

        let dependent = [n(&[1, 0, 0]), n(&[-1, 0, 0]), n(&[0, 1, 0]), n(&[0, -1, 0])];
        assert_eq!(
            lemma1_interior_check(&dependent, &[int(1), int(1), int(1), int(1)]),
            Err(Lemma1Error::DependentTriple([0, 1, 2]))
        );

        let v = [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[-1, -1, -1])];
        assert_eq!(
            lemma1_interior_check(&v, &[int(1), int(0), int(1), int(1)]),
            Err(Lemma1Error::NonPositiveOffset(1))
        );
    }

    #[test]
    fn oracle_rejects_points_outside_kernel() {
        let q = crate::geometry::example_quintuple();
        assert_eq!(face_count_oracle(&q, 0, &n(&[1, 0, 0, 0, 0])), Err(GeometryError::NotInKernel));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn lemma1_holds_on_random_inputs(seed in any::<u64>(), bound in 1i64..30) {
            if let Ok((v, mu)) = random_lemma1_input(seed, bound) {
                prop_assert_eq!(lemma1_interior_check(&v, &mu), Ok(true));
            }
        }
    }
}
