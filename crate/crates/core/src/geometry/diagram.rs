//! The circle around the origin of `U` and the ten quadruple-point crossings on it.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::quintuple::{left_kernel_u, KernelBasis, PlaneQuintuple};
use super::rational::{sign, Rational, RationalVec};
use super::simplex::face_count_oracle;
use super::GeometryError;
use crate::symbols::{Family, FormalSum, Symbol};

type Vec2 = [Rational; 2];

fn cross(a: &Vec2, b: &Vec2) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn neg2(a: &Vec2) -> Vec2 {
    [-&a[0], -&a[1]]
}

fn upper_half(a: &Vec2) -> bool {
    a[1].is_positive() || (a[1].is_zero() && a[0].is_positive())
}

/// Counter-clockwise angular order of nonzero vectors, starting at the
/// positive x-axis. Exact: half-plane split, then a cross product.
pub fn ccw_cmp(a: &Vec2, b: &Vec2) -> Ordering {
    match (upper_half(a), upper_half(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => match sign(&cross(a, b)) {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        },
    }
}

fn lambda(basis: &KernelBasis, x: &Vec2, j: usize) -> Rational {
    &x[0] * &basis.b1[j] + &x[1] * &basis.b2[j]
}

fn positives_except(basis: &KernelBasis, x: &Vec2, k: usize) -> Result<u8, GeometryError> {
    let mut p = 0;
    for j in (0..5).filter(|&j| j != k) {
        match sign(&lambda(basis, x, j)) {
            1 => p += 1,
            0 => return Err(GeometryError::VanishingLambda { k, j }),
            _ => {}
        }
    }
    Ok(p)
}

/// One half of `l_k^⊥`, in kernel coordinates, with its count of positive `λ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfLine {
    pub direction: Vec2,
    pub p: u8,
}

/// The line `l_k^⊥ = {λ_k = 0}` split at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineProfile {
    pub line: usize,
    pub plus: HalfLine,
    pub minus: HalfLine,
}

/// For each `k`, the counts `p = #{j != k : λ_j > 0}` on both halves of `l_k^⊥`.
pub fn halfline_profiles(q: &PlaneQuintuple) -> Result<Vec<LineProfile>, GeometryError> {
    profiles_in(&left_kernel_u(q))
}

fn profiles_in(basis: &KernelBasis) -> Result<Vec<LineProfile>, GeometryError> {
    (0..5)
        .map(|k| {
            let w = [basis.b2[k].clone(), -&basis.b1[k]];
            let mw = neg2(&w);
            Ok(LineProfile {
                line: k,
                plus: HalfLine { p: positives_except(basis, &w, k)?, direction: w },
                minus: HalfLine { p: positives_except(basis, &mw, k)?, direction: mw },
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowSense {
    Ccw,
    Cw,
}

impl ArrowSense {
    fn flipped(self) -> Self {
        match self {
            ArrowSense::Ccw => ArrowSense::Cw,
            ArrowSense::Cw => ArrowSense::Ccw,
        }
    }
}

/// Tip of a half of `l_k^⊥` on the circle; the arrow points along the
/// circle toward the side of `l_k^⊥` where `λ_k > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tip {
    pub line: usize,
    pub direction: Vec2,
    pub p: u8,
    pub sense: ArrowSense,
}

/// Which side of the crossing, in walking order, carries the co-orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PositiveSide {
    Before,
    After,
    None,
}

/// A half of `l_k`, where the circle passes a quadruple point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub line: usize,
    pub direction: Vec2,
    pub degree: i64,
    /// Count on the side of `l_k` the counter-clockwise walk leaves.
    pub p_before: u8,
    /// Count on the side of `l_k` the counter-clockwise walk enters.
    pub p_after: u8,
}

impl Crossing {
    pub fn positive_side(&self) -> PositiveSide {
        match self.p_after.cmp(&self.p_before) {
            Ordering::Greater => PositiveSide::After,
            Ordering::Less => PositiveSide::Before,
            Ordering::Equal => PositiveSide::None,
        }
    }

    /// `ε Q^p_deg` for a walk entering the side with count `entered`; the
    /// extended superscripts `Q^0 = -Q^4`, `Q^1 = -Q^3` absorb the sign.
    fn term(&self, entered: u8, flip_22: bool) -> (i64, Symbol) {
        let coeff = if entered == 2 && flip_22 { -1 } else { 1 };
        (coeff, Symbol::new(Family::Q, entered, self.degree).expect("superscripts 0..=4 are valid for Q"))
    }
}

impl Serialize for Crossing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Crossing", 6)?;
        st.serialize_field("line", &(self.line + 1))?;
        st.serialize_field("direction", &[self.direction[0].to_string(), self.direction[1].to_string()])?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("p_pair", &[self.p_before, self.p_after])?;
        st.serialize_field("positive_side", &self.positive_side())?;
        let (c, sym) = self.term(self.p_after, false);
        st.serialize_field("term", &FormalSum::normalize([(c, sym)]).map(|f| f.to_string()).unwrap_or_default())?;
        st.end()
    }
}

impl Serialize for Tip {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Tip", 4)?;
        st.serialize_field("line", &(self.line + 1))?;
        st.serialize_field("direction", &[self.direction[0].to_string(), self.direction[1].to_string()])?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("sense", &self.sense)?;
        st.end()
    }
}

/// Ten crossings and ten `l_k^⊥` tips, each sorted counter-clockwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BifurcationDiagram {
    pub central_degree: i64,
    pub crossings: Vec<Crossing>,
    pub tips: Vec<Tip>,
}

pub fn bifurcation_diagram(q: &PlaneQuintuple) -> Result<BifurcationDiagram, GeometryError> {
    let basis = left_kernel_u(q);
    let profiles = profiles_in(&basis)?;
    let m = q.central_degree();
    let g = basis.gram();
    let mut crossings = Vec::with_capacity(10);
    let mut tips = Vec::with_capacity(10);
    for prof in &profiles {
        let k = prof.line;
        let c = [basis.b1[k].clone(), basis.b2[k].clone()];
        if c[0].is_zero() && c[1].is_zero() {
            return Err(GeometryError::ProjectionVanishes(k));
        }
        // Projection of ε_k solves G x = c; adj(G) c is a positive multiple.
        let d = [&g[1][1] * &c[0] - &g[0][1] * &c[1], &g[0][0] * &c[1] - &g[1][0] * &c[0]];
        debug_assert!(lambda(&basis, &d, k).is_positive());
        // side of l_k holding each half of l_k^⊥
        let plus_side = sign(&cross(&d, &prof.plus.direction));
        let count_on = |side: i8| if side == plus_side { prof.plus.p } else { prof.minus.p };
        // counter-clockwise at +d goes from side -1 to side +1, at -d the reverse
        crossings.push(Crossing { line: k, direction: d.clone(), degree: m, p_before: count_on(-1), p_after: count_on(1) });
        crossings.push(Crossing { line: k, direction: neg2(&d), degree: m - 1, p_before: count_on(1), p_after: count_on(-1) });
        for half in [&prof.plus, &prof.minus] {
            let t = &half.direction;
            let tangent = [-&t[1], t[0].clone()];
            let sense = if lambda(&basis, &tangent, k).is_positive() { ArrowSense::Ccw } else { ArrowSense::Cw };
            tips.push(Tip { line: k, direction: t.clone(), p: half.p, sense });
        }
    }
    crossings.sort_by(|a, b| ccw_cmp(&a.direction, &b.direction));
    tips.sort_by(|a, b| ccw_cmp(&a.direction, &b.direction));
    Ok(BifurcationDiagram { central_degree: m, crossings, tips })
}

impl BifurcationDiagram {
    /// Descriptions of every violated structural invariant; empty when sound.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = self.central_degree;
        if self.crossings.len() != 10 {
            out.push(format!("{} crossings", self.crossings.len()));
        }
        for k in 0..5 {
            let on_k: Vec<&Crossing> = self.crossings.iter().filter(|c| c.line == k).collect();
            if on_k.len() != 2 {
                out.push(format!("line {} has {} crossings", k + 1, on_k.len()));
                continue;
            }
            let mut degrees = [on_k[0].degree, on_k[1].degree];
            degrees.sort();
            if degrees != [m - 1, m] {
                out.push(format!("line {} has degrees {:?}", k + 1, degrees));
            }
            if !cross(&on_k[0].direction, &on_k[1].direction).is_zero()
                || ccw_cmp(&on_k[0].direction, &on_k[1].direction) == Ordering::Equal
            {
                out.push(format!("line {} halves are not antipodal", k + 1));
            }
            let tips: Vec<&Tip> = self.tips.iter().filter(|t| t.line == k).collect();
            if tips.len() != 2 || tips[0].p + tips[1].p != 4 {
                out.push(format!("line {} perpendicular counts are not complementary", k + 1));
            }
        }
        for c in &self.crossings {
            if c.p_before + c.p_after != 4 {
                out.push(format!("crossing on line {} has pair ({}, {})", c.line + 1, c.p_before, c.p_after));
            }
        }
        let ccw = self.tips.iter().filter(|t| t.sense == ArrowSense::Ccw).count();
        if self.tips.len() != 10 || ccw != 5 {
            out.push(format!("{ccw} of {} arrows counter-clockwise", self.tips.len()));
        }
        out
    }
}

/// Options for the crossing walk.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WalkOptions {
    /// Walk clockwise instead.
    pub reverse: bool,
    /// Use `ε = -1` instead of `+1` at `(2, 2)` crossings.
    pub flip_22: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QqCheck {
    pub sum: FormalSum,
    /// `sum` with `Q^2` coefficients taken mod 2.
    pub reduced: FormalSum,
    pub verdict: bool,
}

pub fn qq_relation_check(d: &BifurcationDiagram) -> QqCheck {
    qq_relation_check_with(d, WalkOptions::default())
}

pub fn qq_relation_check_with(d: &BifurcationDiagram, opts: WalkOptions) -> QqCheck {
    let mut sum = FormalSum::zero();
    let order: Box<dyn Iterator<Item = &Crossing>> =
        if opts.reverse { Box::new(d.crossings.iter().rev()) } else { Box::new(d.crossings.iter()) };
    for c in order {
        let entered = if opts.reverse { c.p_before } else { c.p_after };
        let (coeff, sym) = c.term(entered, opts.flip_22);
        sum.add_term(coeff, sym);
    }
    let reduced = reduce_q2_mod_2(&sum);
    let m = d.central_degree;
    let expected = FormalSum::normalize([(1, Symbol::q(2, m)), (1, Symbol::q(2, m - 1))]).expect("canonical");
    QqCheck { verdict: reduced == expected, sum, reduced }
}

fn reduce_q2_mod_2(s: &FormalSum) -> FormalSum {
    let pairs: Vec<(i64, Symbol)> = s
        .terms()
        .map(|(sym, c)| if sym.sup() == 2 && sym.family() == Family::Q { (c.rem_euclid(2), *sym) } else { (c, *sym) })
        .collect();
    FormalSum::normalize(pairs).expect("canonical symbols")
}

/// Canonical form of the cyclic tip sequence under relabeling of the lines
/// and the dihedral symmetries of the circle (a reflection also reverses
/// every arrow). Tokens are `<label><sense><p>` with `+` for counter-clockwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DiagramClass(pub String);

pub fn classify_diagram(d: &BifurcationDiagram) -> DiagramClass {
    let seq: Vec<(usize, ArrowSense, u8)> = d.tips.iter().map(|t| (t.line, t.sense, t.p)).collect();
    let mirrored: Vec<(usize, ArrowSense, u8)> = seq.iter().rev().map(|&(l, s, p)| (l, s.flipped(), p)).collect();
    let n = seq.len();
    let best = [seq, mirrored]
        .iter()
        .flat_map(|s| (0..n).map(move |r| relabel(s.iter().cycle().skip(r).take(n))))
        .min()
        .unwrap_or_default();
    let text: Vec<String> = best
        .iter()
        .map(|&(l, s, p)| format!("{}{}{}", (b'A' + l) as char, if s == ArrowSense::Ccw { '+' } else { '-' }, p))
        .collect();
    DiagramClass(text.join(" "))
}

/// Labels by order of first appearance: the least relabeling for a fixed start.
fn relabel<'a>(seq: impl Iterator<Item = &'a (usize, ArrowSense, u8)>) -> Vec<(u8, ArrowSense, u8)> {
    let mut names: BTreeMap<usize, u8> = BTreeMap::new();
    seq.map(|&(l, s, p)| {
        let next = names.len() as u8;
        (*names.entry(l).or_insert(next), s, p)
    })
    .collect()
}

/// Half-lines where the explicit simplex count differs from the sign count,
/// as `(line, half, profile p, oracle p)`. Each half of each `l_k^⊥` is
/// checked at its sample and at the antipodal sample, 20 checks in all.
pub fn oracle_disagreements(q: &PlaneQuintuple) -> Result<Vec<(usize, char, u8, usize)>, GeometryError> {
    let basis = left_kernel_u(q);
    let mut out = Vec::new();
    for prof in profiles_in(&basis)? {
        for (half, hl, other) in [('+', &prof.plus, &prof.minus), ('-', &prof.minus, &prof.plus)] {
            let sample: RationalVec = basis.point(&hl.direction);
            let got = face_count_oracle(q, prof.line, &sample)?;
            if got != hl.p as usize {
                out.push((prof.line + 1, half, hl.p, got));
            }
            let anti = face_count_oracle(q, prof.line, &sample.neg())?;
            if anti != other.p as usize {
                out.push((prof.line + 1, if half == '+' { '-' } else { '+' }, other.p, anti));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::quintuple::random_quintuple;
    use crate::geometry::rational::rat;
    use crate::geometry::example_quintuple;
    use proptest::prelude::*;

    #[test]
    fn angular_order() {
        let v = |x: i64, y: i64| [rat(x, 1), rat(y, 1)];
        let mut pts = vec![v(0, -1), v(-1, 0), v(1, 1), v(1, 0), v(0, 1), v(1, -1), v(-1, -1)];
        pts.sort_by(ccw_cmp);
        assert_eq!(pts, vec![v(1, 0), v(1, 1), v(0, 1), v(-1, 0), v(-1, -1), v(0, -1), v(1, -1)]);
        assert_eq!(ccw_cmp(&v(2, 2), &v(1, 1)), Ordering::Equal);
    }

    #[test]
    fn example_profiles_complementary() {
        let q = example_quintuple();
        for prof in halfline_profiles(&q).unwrap() {
            assert_eq!(prof.plus.p + prof.minus.p, 4);
            let scaled = prof.plus.direction.iter().map(|x| x * rat(7, 3)).collect::<Vec<_>>();
            let basis = left_kernel_u(&q);
            assert_eq!(positives_except(&basis, &[scaled[0].clone(), scaled[1].clone()], prof.line).unwrap(), prof.plus.p);
        }
        assert!(oracle_disagreements(&q).unwrap().is_empty());
    }

    #[test]
    fn example_diagram_and_relation() {
        let d = bifurcation_diagram(&example_quintuple()).unwrap();
        assert!(d.structural_violations().is_empty(), "{:?}", d.structural_violations());
        let r = qq_relation_check(&d);
        assert!(r.verdict, "{}", r.sum);
        assert_eq!(r.reduced.to_string(), "Q^2_-1 + Q^2_0");
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["crossings"].as_array().unwrap().len(), 10);
    }

    #[test]
    fn degree_shifts_with_central_degree() {
        let q = example_quintuple().with_degree(3);
        let r = qq_relation_check(&bifurcation_diagram(&q).unwrap());
        assert!(r.verdict);
        assert_eq!(r.reduced.to_string(), "Q^2_2 + Q^2_3");
    }

    fn relabeled(q: &PlaneQuintuple, perm: &[usize; 5]) -> PlaneQuintuple {
        let n = q.normals();
        PlaneQuintuple::new(std::array::from_fn(|i| n[perm[i]].clone()), q.central_degree()).unwrap()
    }

    #[test]
    fn class_is_invariant_under_rotation_of_space() {
        // rotation by the 3-4-5 angle about the z axis, then about x
        let rz = |v: &RationalVec| {
            RationalVec(vec![rat(3, 5) * &v[0] - rat(4, 5) * &v[1], rat(4, 5) * &v[0] + rat(3, 5) * &v[1], v[2].clone()])
        };
        let rx = |v: &RationalVec| {
            RationalVec(vec![v[0].clone(), rat(5, 13) * &v[1] - rat(12, 13) * &v[2], rat(12, 13) * &v[1] + rat(5, 13) * &v[2]])
        };
        for seed in 0..20 {
            let q = random_quintuple(seed, 9).unwrap();
            let r = PlaneQuintuple::new(std::array::from_fn(|i| rx(&rz(&q.normals()[i]))), 0).unwrap();
            let (a, b) = (bifurcation_diagram(&q).unwrap(), bifurcation_diagram(&r).unwrap());
            assert_eq!(classify_diagram(&a), classify_diagram(&b));
            assert_eq!(qq_relation_check(&a), qq_relation_check(&b));
        }
    }

    #[test]
    fn mirrored_copy_has_same_class() {
        let d = bifurcation_diagram(&random_quintuple(5, 12).unwrap()).unwrap();
        let mut m = d.clone();
        m.tips.reverse();
        for t in &mut m.tips {
            t.sense = t.sense.flipped();
            t.line = (t.line + 2) % 5;
        }
        m.tips.rotate_left(3);
        assert_eq!(classify_diagram(&d), classify_diagram(&m));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_quintuples_satisfy_everything(seed in any::<u64>(), bound in 2i64..25) {
            let q = random_quintuple(seed, bound).unwrap();
            let d = bifurcation_diagram(&q).unwrap();
            prop_assert!(d.structural_violations().is_empty());
            let base = qq_relation_check(&d);
            prop_assert!(base.verdict, "{}", base.sum);
            let rev = qq_relation_check_with(&d, WalkOptions { reverse: true, flip_22: false });
            // negated, up to the sign convention at (2, 2) crossings
            let mut both = rev.sum.clone();
            both.add_scaled(1, &base.sum);
            prop_assert!(both.terms().all(|(s, c)| s.sup() == 2 && c % 2 == 0));
            prop_assert_eq!(&rev.reduced, &reduce_q2_mod_2(&base.reduced.negated()));
            prop_assert!(rev.verdict);
            let flipped = qq_relation_check_with(&d, WalkOptions { reverse: false, flip_22: true });
            prop_assert_eq!(&flipped.reduced, &base.reduced);
            prop_assert!(oracle_disagreements(&q).unwrap().is_empty());
        }

        #[test]
        fn relabeling_and_rescaling_preserve_outcome(seed in any::<u64>(), k in 0usize..5, num in 1i64..9, den in 1i64..9, rot in 0usize..5) {
            let q = random_quintuple(seed, 15).unwrap();
            let base = bifurcation_diagram(&q).unwrap();
            let perm: [usize; 5] = std::array::from_fn(|i| (i + rot) % 5);
            let p = bifurcation_diagram(&relabeled(&q, &perm)).unwrap();
            prop_assert_eq!(classify_diagram(&base), classify_diagram(&p));
            prop_assert_eq!(qq_relation_check(&base).reduced, qq_relation_check(&p).reduced);
            let mut normals = q.normals().clone();
            normals[k] = normals[k].scale(&rat(num, den));
            let s = bifurcation_diagram(&PlaneQuintuple::new(normals, 0).unwrap()).unwrap();
            let rs = qq_relation_check(&s);
            prop_assert!(rs.verdict);
            prop_assert_eq!(rs.reduced, qq_relation_check(&base).reduced);
        }
    }
}
