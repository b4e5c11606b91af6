use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::matrix::IntMatrix;
use super::normal_form::smith_normal_form;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("torsion factor {0} is smaller than 2")]
    TorsionTooSmall(BigInt),
    #[error("torsion factors {0} and {1} violate the divisibility chain")]
    BrokenChain(BigInt, BigInt),
    #[error("group is infinite; enumeration needs a finite group")]
    Infinite,
    #[error("element has {got} coordinates, group expects {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("cannot parse group spec {0:?}: expected comma-separated nonnegative orders, 0 for Z")]
    Parse(String),
}

/// A finitely generated abelian group `Z^free_rank + Z/d_1 + ... + Z/d_k`
/// with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, GroupError> {
        for d in &torsion {
            if d < &BigInt::from(2) {
                return Err(GroupError::TorsionTooSmall(d.clone()));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(GroupError::BrokenChain(w[0].clone(), w[1].clone()));
            }
        }
        Ok(GroupSpec { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        GroupSpec { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        GroupSpec { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_cyclic_orders(&[BigInt::from(order)])
    }

    /// Normalizes a direct sum of cyclic groups into invariant-factor form.
    /// An order of 0 stands for `Z`; orders 1 contribute nothing.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let free_rank = orders.iter().filter(|o| o.is_zero()).count();
        let finite: Vec<BigInt> = orders.iter().filter(|o| !o.is_zero()).map(|o| o.abs()).collect();
        let smith = smith_normal_form(&IntMatrix::diagonal(&finite));
        let torsion = smith.diagonal().into_iter().filter(|d| d > &BigInt::one()).collect();
        GroupSpec { free_rank, torsion }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of coordinates of an element: free coordinates first, then one
    /// per invariant factor.
    pub fn num_coords(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Order of coordinate `i`'s cyclic factor, `None` for a free coordinate.
    pub fn coord_order(&self, i: usize) -> Option<&BigInt> {
        if i < self.free_rank {
            None
        } else {
            self.torsion.get(i - self.free_rank)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![BigInt::zero(); self.num_coords()])
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        e.0[i] = BigInt::one();
        self.reduce(e)
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<GroupElement, GroupError> {
        if coords.len() != self.num_coords() {
            return Err(GroupError::WrongLength { expected: self.num_coords(), got: coords.len() });
        }
        Ok(self.reduce(GroupElement(coords)))
    }

    pub fn reduce(&self, mut x: GroupElement) -> GroupElement {
        for (i, c) in x.0.iter_mut().enumerate().skip(self.free_rank) {
            *c = c.mod_floor(&self.torsion[i - self.free_rank]);
        }
        x
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.reduce(GroupElement(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect()))
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        self.reduce(GroupElement(x.0.iter().map(|a| -a).collect()))
    }

    pub fn scale(&self, k: &BigInt, x: &GroupElement) -> GroupElement {
        self.reduce(GroupElement(x.0.iter().map(|a| a * k).collect()))
    }

    /// `Σ k_i x_i`
    pub fn combine<'a, I>(&self, terms: I) -> GroupElement
    where
        I: IntoIterator<Item = (BigInt, &'a GroupElement)>,
    {
        let mut acc = vec![BigInt::zero(); self.num_coords()];
        for (k, x) in terms {
            for (a, b) in acc.iter_mut().zip(&x.0) {
                *a += &k * b;
            }
        }
        self.reduce(GroupElement(acc))
    }

    /// All elements in mixed-radix order. Fails on infinite groups.
    pub fn elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::Infinite);
        }
        let mut out = vec![GroupElement(Vec::new())];
        for d in &self.torsion {
            let n = d.to_u64().expect("group too large to enumerate");
            out = out
                .into_iter()
                .flat_map(|x| {
                    (0..n).map(move |v| {
                        let mut y = x.clone();
                        y.0.push(BigInt::from(v));
                        y
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Elements `x` with `k x = 0`.
    pub fn killed_by(&self, k: &BigInt) -> Result<Vec<GroupElement>, GroupError> {
        Ok(self.elements()?.into_iter().filter(|x| self.scale(k, x).is_zero()).collect())
    }
}

impl GroupSpec {
    /// The comma-separated form accepted by `FromStr`.
    pub fn spec_string(&self) -> String {
        let mut parts: Vec<String> = vec!["0".to_string(); self.free_rank];
        parts.extend(self.torsion.iter().map(|d| d.to_string()));
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(",")
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Parses a comma-separated list of cyclic orders, `0` denoting `Z`,
/// e.g. `"0,2"` is `Z + Z/2`. `"1"` is the trivial group.
impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let orders = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<BigInt>()
                    .ok()
                    .filter(|v| !v.is_negative())
                    .ok_or_else(|| GroupError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupSpec::from_cyclic_orders(&orders))
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            free_rank: usize,
            torsion: BigIntList<'a>,
        }
        Repr { free_rank: self.free_rank, torsion: BigIntList(&self.torsion) }.serialize(serializer)
    }
}

/// Element coordinates: free coordinates are arbitrary integers, torsion
/// coordinate `i` lies in `[0, d_i)` once reduced by its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<BigInt>);

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BigIntList(&self.0).serialize(serializer)
    }
}

/// Serializes integers as JSON numbers when they fit in an `i64`, otherwise
/// as decimal strings.
pub(crate) struct BigIntList<'a>(pub &'a [BigInt]);

impl Serialize for BigIntList<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            match x.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }
}

/// `Z^n / rowspan(relations)` in invariant-factor form together with the
/// change of coordinates that sends integer vectors to group elements.
#[derive(Clone, Debug)]
pub struct Quotient {
    group: GroupSpec,
    /// Column transform `Q` of the Smith decomposition.
    transform: IntMatrix,
    /// Column of `v Q` feeding each group coordinate.
    coord_columns: Vec<usize>,
}

impl Quotient {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn generator_count(&self) -> usize {
        self.transform.rows()
    }

    /// Image of an integer combination of generators.
    pub fn project(&self, v: &[BigInt]) -> GroupElement {
        let w = self.transform.left_mul_vec(v);
        let coords = self.coord_columns.iter().map(|&j| w[j].clone()).collect();
        self.group.reduce(GroupElement(coords))
    }

    /// Image of generator `i`.
    pub fn generator_image(&self, i: usize) -> GroupElement {
        let coords = self.coord_columns.iter().map(|&j| self.transform[(i, j)].clone()).collect();
        self.group.reduce(GroupElement(coords))
    }

    pub fn projection(&self) -> Vec<GroupElement> {
        (0..self.generator_count()).map(|i| self.generator_image(i)).collect()
    }
}

/// Quotient of the free abelian group on `generator_count` generators by the
/// row span of `relations`.
pub fn presentation_quotient(generator_count: usize, relations: &IntMatrix) -> Quotient {
    assert_eq!(relations.cols(), generator_count, "relation matrix must have one column per generator");
    let smith = smith_normal_form(relations);
    let diag = smith.diagonal();
    let factor = |j: usize| diag.get(j).cloned().unwrap_or_else(BigInt::zero);

    let mut free_cols = Vec::new();
    let mut torsion_cols = Vec::new();
    let mut torsion = Vec::new();
    for j in 0..generator_count {
        let d = factor(j);
        if d.is_zero() {
            free_cols.push(j);
        } else if !d.is_one() {
            torsion_cols.push(j);
            torsion.push(d);
        }
    }
    let group = GroupSpec::new(free_cols.len(), torsion).expect("Smith diagonal is a divisibility chain");
    free_cols.extend(torsion_cols);
    Quotient { group, transform: smith.q, coord_columns: free_cols }
}

/// `{x in G : 2x = 0}`: one `Z/2` per even invariant factor.
pub fn torsion_two_subgroup(g: &GroupSpec) -> GroupSpec {
    let two = BigInt::from(2);
    let count = g.torsion.iter().filter(|d| d.is_multiple_of(&two)).count();
    GroupSpec { free_rank: 0, torsion: vec![two; count] }
}

/// `Hom(S, T)` by the factor-wise rules `Hom(Z, T) = T`,
/// `Hom(Z/d, Z) = 0`, `Hom(Z/d, Z/e) = Z/gcd(d, e)`.
pub fn hom_group(source: &GroupSpec, target: &GroupSpec) -> GroupSpec {
    let mut orders = Vec::new();
    for _ in 0..source.free_rank {
        orders.extend(std::iter::repeat_n(BigInt::zero(), target.free_rank));
        orders.extend(target.torsion.iter().cloned());
    }
    for d in &source.torsion {
        for e in &target.torsion {
            orders.push(d.gcd(e));
        }
    }
    GroupSpec::from_cyclic_orders(&orders)
}

/// A homomorphism given by the images of the source's standard generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub images: Vec<GroupElement>,
}

impl Homomorphism {
    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        self.target.combine(x.0.iter().cloned().zip(self.images.iter()))
    }

    /// Every source relation `d_i e_i = 0` maps to the identity.
    pub fn is_well_defined(&self) -> bool {
        self.images.len() == self.source.num_coords()
            && self.images.iter().enumerate().all(|(i, img)| match self.source.coord_order(i) {
                Some(d) => self.target.scale(d, img).is_zero(),
                None => true,
            })
    }
}

/// Lists every homomorphism `S -> T` exactly once; `T` must be finite.
pub fn enumerate_homs(source: &GroupSpec, target: &GroupSpec) -> Result<Vec<Homomorphism>, GroupError> {
    if !target.is_finite() {
        return Err(GroupError::Infinite);
    }
    let all = target.elements()?;
    let choices: Vec<Vec<GroupElement>> = (0..source.num_coords())
        .map(|i| match source.coord_order(i) {
            None => Ok(all.clone()),
            Some(d) => target.killed_by(d),
        })
        .collect::<Result<_, _>>()?;

    let mut homs = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    if choices.iter().any(Vec::is_empty) {
        return Ok(homs);
    }
    loop {
        homs.push(Homomorphism {
            source: source.clone(),
            target: target.clone(),
            images: idx.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect(),
        });
        // odometer, last generator fastest
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(homs);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
