use itertools::Itertools;
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::rational::{det3, null_space, parse_rational, Rational, RationalVec};
use super::GeometryError;

/// Attempts made by [`random_quintuple`] before giving up.
pub const REJECTION_BUDGET: usize = 10_000;

/// Five oriented planes through the origin, given by normals pointing to
/// their preferred sides, plus the degree of the quintuple point.
///
/// Normals need not be unit length: every side and sign decision below is
/// invariant under positive rescaling of a normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneQuintuple {
    normals: [RationalVec; 5],
    central_degree: i64,
}

impl PlaneQuintuple {
    /// Checks general position: every three normals are independent. The
    /// projection of each coordinate vector onto the left kernel is then
    /// automatically nonzero, but it is checked too.
    pub fn new(normals: [RationalVec; 5], central_degree: i64) -> Result<Self, GeometryError> {
        if let Some(bad) = normals.iter().position(|n| n.dim() != 3) {
            return Err(GeometryError::WrongDimension { index: bad, expected: 3, got: normals[bad].dim() });
        }
        for t in (0..5).combinations(3) {
            if det3(&normals[t[0]], &normals[t[1]], &normals[t[2]]).is_zero() {
                return Err(GeometryError::DependentNormals([t[0], t[1], t[2]]));
            }
        }
        let q = PlaneQuintuple { normals, central_degree };
        let basis = q.kernel_unchecked();
        for k in 0..5 {
            if basis.b1[k].is_zero() && basis.b2[k].is_zero() {
                return Err(GeometryError::ProjectionVanishes(k));
            }
        }
        Ok(q)
    }

    pub fn normals(&self) -> &[RationalVec; 5] {
        &self.normals
    }

    pub fn central_degree(&self) -> i64 {
        self.central_degree
    }

    pub fn with_degree(&self, m: i64) -> Self {
        PlaneQuintuple { central_degree: m, ..self.clone() }
    }

    fn kernel_unchecked(&self) -> KernelBasis {
        let rows: Vec<RationalVec> =
            (0..3).map(|i| RationalVec(self.normals.iter().map(|u| u[i].clone()).collect())).collect();
        let mut basis = null_space(&rows, 5).into_iter();
        let b1 = basis.next().expect("rank 3 leaves a 2-dimensional kernel");
        let b2 = basis.next().expect("rank 3 leaves a 2-dimensional kernel");
        KernelBasis { b1, b2 }
    }

    pub fn to_json(&self) -> QuintupleJson {
        QuintupleJson {
            normals: self.normals.iter().map(|n| n.0.iter().map(|x| RationalText(x.to_string())).collect()).collect(),
            m: self.central_degree,
        }
    }

    pub fn from_json(j: &QuintupleJson) -> Result<Self, GeometryError> {
        if j.normals.len() != 5 {
            return Err(GeometryError::Input(format!("expected 5 normals, got {}", j.normals.len())));
        }
        let mut normals = Vec::with_capacity(5);
        for n in &j.normals {
            let v = n
                .iter()
                .map(|t| parse_rational(&t.0).ok_or_else(|| GeometryError::Input(format!("bad rational {:?}", t.0))))
                .collect::<Result<Vec<_>, _>>()?;
            normals.push(RationalVec(v));
        }
        let normals: [RationalVec; 5] = normals.try_into().expect("length checked");
        PlaneQuintuple::new(normals, j.m)
    }
}

/// Rationals as `"p/q"` strings; plain JSON integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RationalText(pub String);

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Text(s) => RationalText(s),
            Repr::Int(i) => RationalText(i.to_string()),
        })
    }
}

/// `{"normals": [["1","0","0"], ...], "m": 0}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuintupleJson {
    pub normals: Vec<Vec<RationalText>>,
    #[serde(default)]
    pub m: i64,
}

/// Basis of `U = {λ : Σ λ_k u_k = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelBasis {
    pub b1: RationalVec,
    pub b2: RationalVec,
}

impl KernelBasis {
    /// `λ = x b1 + y b2` for kernel coordinates `(x, y)`.
    pub fn point(&self, coords: &[Rational; 2]) -> RationalVec {
        self.b1.scale(&coords[0]).add(&self.b2.scale(&coords[1]))
    }

    /// Gram matrix of the basis under the standard inner product of 5-space.
    pub fn gram(&self) -> [[Rational; 2]; 2] {
        let g01 = self.b1.dot(&self.b2);
        [[self.b1.dot(&self.b1), g01.clone()], [g01, self.b2.dot(&self.b2)]]
    }
}

/// Exact basis of the left kernel of the 5x3 matrix whose rows are the normals.
pub fn left_kernel_u(q: &PlaneQuintuple) -> KernelBasis {
    q.kernel_unchecked()
}

/// Whether `lambda` lies in `U`.
pub fn in_kernel(q: &PlaneQuintuple, lambda: &RationalVec) -> bool {
    lambda.dim() == 5
        && (0..3).all(|i| (0..5).map(|k| &lambda[k] * &q.normals[k][i]).sum::<Rational>().is_zero())
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn random_vec3(rng: &mut ChaCha8Rng, bound: i64) -> RationalVec {
    RationalVec((0..3).map(|_| random_rational(rng, bound)).collect())
}

/// Deterministic pseudo-random quintuple with numerators in `[-bound, bound]`
/// and denominators in `[1, bound]`, rejection-sampled into general position.
pub fn random_quintuple(seed: u64, bound: i64) -> Result<PlaneQuintuple, GeometryError> {
    random_quintuple_with_budget(seed, bound, REJECTION_BUDGET)
}

pub fn random_quintuple_with_budget(seed: u64, bound: i64, budget: usize) -> Result<PlaneQuintuple, GeometryError> {
    if bound < 1 {
        return Err(GeometryError::BadBound(bound));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let normals: [RationalVec; 5] = std::array::from_fn(|_| random_vec3(&mut rng, bound));
        if let Ok(q) = PlaneQuintuple::new(normals, 0) {
            return Ok(q);
        }
    }
    Err(GeometryError::RejectionBudgetExhausted { attempts: budget })
}
